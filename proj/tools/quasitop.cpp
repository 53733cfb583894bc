#include <cstdio>
#include <exception>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "config.hpp"
#include "quasitop/errors.hpp"
#include "quasitop/kernels/sweep.hpp"

using namespace quasitop;
using namespace quasitop::cli;

int main(int argc, char** argv) {
  CLI::App app{"quasitop: quasiperiodic Harper chains, Chern numbers, band-edge states and Majorana modes"};
  Globals g;
  int threads = -1;
  app.add_option("--threads", threads, "worker threads (fallback: QUASITOP_THREADS, then all cores)");
  app.add_option("--config", g.config_path, "JSON config; flags override it");
  app.add_option("--out", g.out_dir, "output directory [.]");
  app.add_option("--formats", g.formats, "comma list of csv,json,svg [csv,json,svg]");
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp comment from SVG files");
  app.require_subcommand(1);

  auto cmds = commands();
  std::vector<std::unique_ptr<ParamSet>> sets;
  std::vector<CLI::App*> subs;
  for (auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.description);
    sub->fallthrough();
    sets.push_back(std::make_unique<ParamSet>(c.params));
    sets.back()->attach(*sub);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::size_t which = 0;
  while (which < subs.size() && !subs[which]->parsed()) ++which;
  const Command& cmd = cmds.at(which);
  try {
    if (threads >= 0) g.threads = threads;
    json config = load_config(g.config_path);
    if (!config.is_null()) {
      if (config.contains("out") && app.get_option("--out")->count() == 0)
        g.out_dir = config["out"].get<std::string>();
      if (config.contains("formats") && app.get_option("--formats")->count() == 0)
        g.formats = config["formats"].get<std::string>();
    }
    int n = resolve_threads(g, config);
    if (n > 0) set_threads(n);
    json params = sets[which]->resolve(config, cmd.name);
    Output out(cmd.name, params, g);
    cmd.run(params, out);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "quasitop " << cmd.name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "quasitop " << cmd.name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "quasitop " << cmd.name << ": " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "quasitop " << cmd.name << ": config: " << e.what() << "\n";
    return 2;
  } catch (const ValidationFailure& e) {
    std::cerr << "quasitop " << cmd.name << ": validation failed: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "quasitop " << cmd.name << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "quasitop " << cmd.name << ": " << e.what() << "\n";
    return 1;
  }
}
