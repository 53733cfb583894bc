#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "quasitop/io/format.hpp"
#include "quasitop/io/svg.hpp"

namespace quasitop::cli {

// Writes the files of one run into the output directory.
class Output {
 public:
  Output(std::string command, json params, const Globals& g);
  bool csv() const { return csv_; }
  bool json_enabled() const { return json_; }
  bool svg() const { return svg_; }
  const io::Metadata& meta() const { return meta_; }

  void write_csv(const std::string& name, const std::vector<std::string>& columns,
                 const std::function<void(io::CsvWriter&)>& rows);
  void write_json(const std::string& name, json body);
  void write_svg(const std::string& name, const io::Plot& plot);

 private:
  std::filesystem::path path(const std::string& name);
  io::Metadata meta_;
  json config_;
  std::filesystem::path dir_;
  bool csv_ = false, json_ = false, svg_ = false;
  std::optional<std::string> timestamp_;
};

json num(double x);
json nums(const std::vector<double>& xs);

struct Command {
  std::string name;
  std::string description;
  std::vector<Param> params;
  std::function<void(const json&, Output&)> run;
};

std::vector<Command> commands();

}  // namespace quasitop::cli
