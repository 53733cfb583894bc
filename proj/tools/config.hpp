// Parameter tables for the subcommands: defaults < JSON config < flags.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace quasitop::cli {

using nlohmann::json;

// exit 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exit 1, raised after all outputs are written
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { Int, Real, Text, Flag };

struct Param {
  std::string key;  // config key, flag is --key with '_' -> '-'
  Kind kind;
  json fallback;    // null: unset unless given
  std::string help;
};

class ParamSet {
 public:
  explicit ParamSet(std::vector<Param> params) : params_(std::move(params)) {}
  void attach(CLI::App& app);
  // Effective values. Config keys are taken from the top level (known keys only)
  // and from the section named after the command (unknown keys rejected).
  json resolve(const json& config, const std::string& command) const;

 private:
  std::vector<Param> params_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, bool> flags_;
  std::map<std::string, CLI::Option*> opts_;
};

struct Globals {
  std::optional<int> threads;
  std::string config_path;
  std::string out_dir = ".";
  std::string formats = "csv,json,svg";
  bool no_timestamp = false;
};

json load_config(const std::string& path);

// --threads, then config "threads", then QUASITOP_THREADS; 0 means library default.
int resolve_threads(const Globals& g, const json& config);

// Typed access to a resolved value.
long long get_int(const json& v, const std::string& key);
double get_real(const json& v, const std::string& key);
std::string get_text(const json& v, const std::string& key);
bool get_flag(const json& v, const std::string& key);
bool has(const json& v, const std::string& key);

// "lo:hi:steps"
struct Range {
  double lo = 0, hi = 0;
  int steps = 0;
};
Range parse_range(const std::string& s, const std::string& key);
std::vector<double> parse_list(const std::string& s, const std::string& key);

}  // namespace quasitop::cli
