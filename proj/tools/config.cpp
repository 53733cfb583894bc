#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace quasitop::cli {

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

long long to_int(const std::string& s, const std::string& key) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(key + ": expected an integer, got '" + s + "'");
  return v;
}

double to_real(const std::string& s, const std::string& key) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(key + ": expected a number, got '" + s + "'");
  return v;
}

json typed(const Param& p, const json& v) {
  switch (p.kind) {
    case Kind::Int:
      if (v.is_number_integer()) return v;
      if (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())))
        return static_cast<long long>(v.get<double>());
      break;
    case Kind::Real:
      if (v.is_number()) return v.get<double>();
      break;
    case Kind::Text:
      if (v.is_string()) return v;
      if (v.is_number()) return v.dump();
      break;
    case Kind::Flag:
      if (v.is_boolean()) return v;
      break;
  }
  throw UsageError("config key '" + p.key + "' has the wrong type");
}

}  // namespace

void ParamSet::attach(CLI::App& app) {
  for (const Param& p : params_) {
    std::string help = p.help;
    if (!p.fallback.is_null()) help += " [" + (p.fallback.is_string() ? p.fallback.get<std::string>() : p.fallback.dump()) + "]";
    if (p.kind == Kind::Flag) {
      flags_[p.key] = false;
      opts_[p.key] = app.add_flag(flag_name(p.key), flags_[p.key], help);
    } else {
      raw_[p.key];
      opts_[p.key] = app.add_option(flag_name(p.key), raw_[p.key], help);
    }
  }
}

json ParamSet::resolve(const json& config, const std::string& command) const {
  json out = json::object();
  for (const Param& p : params_)
    if (!p.fallback.is_null()) out[p.key] = p.fallback;
  auto find = [&](const std::string& key) -> const Param* {
    for (const Param& p : params_)
      if (p.key == key) return &p;
    return nullptr;
  };
  if (!config.is_null()) {
    for (auto& [k, v] : config.items())
      if (const Param* p = find(k); p && !v.is_object()) out[k] = typed(*p, v);
    if (config.contains(command)) {
      const json& sec = config[command];
      if (!sec.is_object()) throw UsageError("config section '" + command + "' must be an object");
      for (auto& [k, v] : sec.items()) {
        const Param* p = find(k);
        if (!p) throw UsageError("unknown config key '" + command + "." + k + "'");
        out[k] = typed(*p, v);
      }
    }
  }
  for (const Param& p : params_) {
    const CLI::Option* o = opts_.at(p.key);
    if (o->count() == 0) continue;
    switch (p.kind) {
      case Kind::Int: out[p.key] = to_int(raw_.at(p.key), p.key); break;
      case Kind::Real: out[p.key] = to_real(raw_.at(p.key), p.key); break;
      case Kind::Text: out[p.key] = raw_.at(p.key); break;
      case Kind::Flag: out[p.key] = flags_.at(p.key); break;
    }
  }
  return out;
}

json load_config(const std::string& path) {
  if (path.empty()) return nullptr;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  return j;
}

int resolve_threads(const Globals& g, const json& config) {
  int n = 0;
  if (g.threads) {
    n = *g.threads;
  } else if (!config.is_null() && config.contains("threads")) {
    if (!config["threads"].is_number_integer()) throw UsageError("config key 'threads' must be an integer");
    n = config["threads"].get<int>();
  } else if (const char* env = std::getenv("QUASITOP_THREADS"); env && *env) {
    n = static_cast<int>(to_int(env, "QUASITOP_THREADS"));
  }
  if (n < 0) throw UsageError("threads must be >= 0");
  return n;
}

bool has(const json& v, const std::string& key) { return v.contains(key) && !v[key].is_null(); }

long long get_int(const json& v, const std::string& key) {
  if (!has(v, key)) throw UsageError("missing --" + key);
  return v[key].get<long long>();
}

double get_real(const json& v, const std::string& key) {
  if (!has(v, key)) throw UsageError("missing --" + key);
  return v[key].get<double>();
}

std::string get_text(const json& v, const std::string& key) {
  if (!has(v, key)) throw UsageError("missing --" + key);
  return v[key].get<std::string>();
}

bool get_flag(const json& v, const std::string& key) { return has(v, key) && v[key].get<bool>(); }

Range parse_range(const std::string& s, const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
  if (parts.size() != 3) throw UsageError(key + ": expected lo:hi:steps");
  Range r{to_real(parts[0], key), to_real(parts[1], key), static_cast<int>(to_int(parts[2], key))};
  if (r.steps < 1 || (r.steps > 1 && !(r.hi > r.lo))) throw UsageError(key + ": need hi > lo and steps >= 1");
  return r;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) out.push_back(to_real(t, key));
  return out;
}

}  // namespace quasitop::cli
