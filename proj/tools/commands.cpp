#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "quasitop/errors.hpp"
#include "quasitop/majorana.hpp"
#include "quasitop/momentum.hpp"
#include "quasitop/states.hpp"
#include "quasitop/topology.hpp"

namespace quasitop::cli {

namespace fs = std::filesystem;
using io::CsvWriter;
using io::Plot;
using io::Series;

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return io::round12(x);
}

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Output::Output(std::string command, json params, const Globals& g) : dir_(g.out_dir) {
  std::stringstream ss(g.formats);
  for (std::string t; std::getline(ss, t, ',');) {
    if (t == "csv") csv_ = true;
    else if (t == "json") json_ = true;
    else if (t == "svg") svg_ = true;
    else if (!t.empty()) throw UsageError("unknown format '" + t + "'");
  }
  // threads, output directory and timestamps do not change results and stay out of the hash
  config_ = {{"command", command}, {"params", std::move(params)}};
  meta_ = io::make_metadata(command, config_.dump());
  if (!g.no_timestamp) timestamp_ = utc_now();
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir_.string() + "'");
}

fs::path Output::path(const std::string& name) { return dir_ / name; }

void Output::write_csv(const std::string& name, const std::vector<std::string>& columns,
                       const std::function<void(CsvWriter&)>& rows) {
  if (!csv_) return;
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path(name).string());
  CsvWriter w(os, meta_, columns);
  rows(w);
  std::cout << "wrote " << path(name).string() << "\n";
}

void Output::write_json(const std::string& name, json body) {
  if (!json_) return;
  json doc;
  doc["meta"] = {{"tool", "quasitop"},
                 {"version", io::module_version},
                 {"command", meta_.command},
                 {"config", config_},
                 {"config_hash", meta_.config_hash}};
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path(name).string());
  os << doc.dump(2) << "\n";
  std::cout << "wrote " << path(name).string() << "\n";
}

void Output::write_svg(const std::string& name, const Plot& plot) {
  if (!svg_) return;
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path(name).string());
  os << io::render_svg(plot, meta_, timestamp_);
  std::cout << "wrote " << path(name).string() << "\n";
}

namespace {

constexpr double kPi = std::numbers::pi;

RationalFlux flux_from(const json& v) {
  long long q = get_int(v, "q");
  if (q < 2) throw UsageError("--q must be >= 2");
  if (has(v, "p")) return make_flux(get_int(v, "p"), q);
  int m = fibonacci_index(q);
  if (m < 3) throw UsageError("--p is required when q is not a Fibonacci number");
  return make_flux(fibonacci(m - 1), q);
}

json flux_json(const RationalFlux& f) { return {{"p", f.p}, {"q", f.q}, {"sigma", num(f.sigma())}}; }

std::optional<int> label(const RationalFlux& f, int r) {
  try {
    return chern_diophantine(f, r);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

// "auto" resolves to fallback
double phase_arg(const json& v, const std::string& key, const RationalFlux& f, double fallback) {
  std::string s = get_text(v, key);
  if (s == "auto") return fallback;
  if (s == "half") return 0.5 / static_cast<double>(f.q);
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected auto, half or a number");
  }
}

Side side_arg(const json& v) {
  std::string s = get_text(v, "side");
  if (s == "lower") return Side::Lower;
  if (s == "upper") return Side::Upper;
  throw UsageError("--side must be lower or upper");
}

const char* side_name(Side s) { return s == Side::Lower ? "lower" : "upper"; }

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> abs_vec(const Eigen::VectorXcd& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = std::abs(v[i]);
  return out;
}

std::vector<double> iota_d(std::size_t n) {
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  return x;
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(const json& v, Output& out) {
  auto f = flux_from(v);
  double lam = get_real(v, "lambda");
  int grid = static_cast<int>(get_int(v, "grid"));
  if (grid < 4) throw UsageError("--grid must be >= 4");
  GridSpec g{grid, grid, 0.0};
  auto bs = band_structure(f, lam, g);
  auto gaps = gap_records(bs);
  const int q = static_cast<int>(f.q);

  std::vector<std::string> cols{"theta", "phi"};
  for (int l = 0; l < q; ++l) cols.push_back("E" + std::to_string(l));
  out.write_csv("bands.csv", cols, [&](CsvWriter& w) {
    for (int j = 0; j < g.n_phi; ++j)
      for (int i = 0; i < g.n_theta; ++i) {
        w.cell(grid_theta(g, i)).cell(grid_phi(g, j));
        for (int l = 0; l < q; ++l) w.cell(bs.levels(j * g.n_theta + i, l));
        w.end_row();
      }
  });
  out.write_csv("gaps.csv", {"r", "lower_edge", "upper_edge", "width", "open", "chern"}, [&](CsvWriter& w) {
    for (auto& gr : gaps) {
      w.cell(gr.r).cell(gr.lower_edge).cell(gr.upper_edge).cell(gr.width).cell(gr.open ? 1 : 0);
      auto c = label(f, gr.r);
      if (gr.open && c) w.cell(*c);
      else w.empty();
      w.end_row();
    }
  });
  auto [lo, hi] = spectrum_edges(bs);
  json jg = json::array();
  int open = 0;
  for (auto& gr : gaps) {
    open += gr.open;
    auto c = label(f, gr.r);
    jg.push_back({{"r", gr.r}, {"width", num(gr.width)}, {"open", gr.open},
                  {"chern", gr.open && c ? json(*c) : json(nullptr)}});
  }
  json bands = json::array();
  for (int l = 0; l < q; ++l)
    bands.push_back({{"band", l + 1}, {"min", num(bs.band_min[l].energy)}, {"max", num(bs.band_max[l].energy)}});
  out.write_json("spectrum.json", {{"flux", flux_json(f)},
                                   {"lambda", num(lam)},
                                   {"grid", {{"n_theta", g.n_theta}, {"n_phi", g.n_phi}}},
                                   {"summary", {{"min", num(lo)}, {"max", num(hi)}, {"bandwidth", num(hi - lo)},
                                                {"bands", q}, {"open_gaps", open}}},
                                   {"bands", bands},
                                   {"gaps", jg}});
  Plot p;
  p.title = "Harper spectrum q=" + std::to_string(q) + ", lambda=" + io::fmt(lam);
  p.xlabel = "phi";
  p.ylabel = "E";
  Series s{"levels over theta", {}, {}, io::Mark::Scatter, ""};
  for (int j = 0; j < g.n_phi; ++j)
    for (int i = 0; i < g.n_theta; ++i)
      for (int l = 0; l < q; ++l) {
        s.x.push_back(grid_phi(g, j));
        s.y.push_back(bs.levels(j * g.n_theta + i, l));
      }
  p.series.push_back(std::move(s));
  out.write_svg("spectrum.svg", p);
}

// ---------------------------------------------------------------- chern

void run_chern(const json& v, Output& out) {
  auto f = flux_from(v);
  double lam = get_real(v, "lambda");
  GridSpec g = default_chern_grid(f);
  if (has(v, "grid")) {
    int n = static_cast<int>(get_int(v, "grid"));
    if (n < 4) throw UsageError("--grid must be >= 4");
    g = {n, n, 0.0};
  }
  auto t = chern_table(f, lam, g);
  const int q = static_cast<int>(f.q);
  struct Row {
    int r;
    double width;
    std::optional<int> berry, dioph, pairing;
    std::optional<bool> agree;
  };
  std::vector<Row> rows;
  int disagree = 0;
  for (int r = 1; r < q; ++r) {
    Row row{r, t.gap_width[r - 1], t.gap_chern[r - 1], label(f, r), std::nullopt, std::nullopt};
    try {
      row.pairing = chern_pairing(f, doublet_phase(f, r), r);
    } catch (const std::exception&) {
    }
    if (row.berry) {
      row.agree = row.dioph && *row.berry == *row.dioph && row.pairing && *row.pairing == std::abs(*row.dioph);
      disagree += !*row.agree;
    }
    rows.push_back(row);
  }
  auto opt = [](CsvWriter& w, const std::optional<int>& x) {
    if (x) w.cell(*x);
    else w.empty();
  };
  out.write_csv("chern.csv", {"r", "gap_width", "open", "chern_berry", "chern_diophantine", "chern_pairing_abs", "agree"},
                [&](CsvWriter& w) {
                  for (auto& r : rows) {
                    w.cell(r.r).cell(r.width).cell(r.berry ? 1 : 0);
                    opt(w, r.berry);
                    opt(w, r.dioph);
                    opt(w, r.pairing);
                    if (r.agree) w.cell(*r.agree ? 1 : 0);
                    else w.empty();
                    w.end_row();
                  }
                });
  auto oj = [](const std::optional<int>& x) { return x ? json(*x) : json(nullptr); };
  json jr = json::array();
  for (auto& r : rows)
    jr.push_back({{"r", r.r}, {"gap_width", num(r.width)}, {"open", r.berry.has_value()}, {"chern_berry", oj(r.berry)},
                  {"chern_diophantine", oj(r.dioph)}, {"chern_pairing_abs", oj(r.pairing)},
                  {"agree", r.agree ? json(*r.agree) : json(nullptr)}});
  json jb = json::array();
  int bsum = 0;
  bool bdef = true;
  for (auto& c : t.band_chern) {
    jb.push_back(oj(c));
    if (c) bsum += *c;
    else bdef = false;
  }
  out.write_json("chern.json", {{"flux", flux_json(f)},
                                {"lambda", num(lam)},
                                {"grid", {{"n_theta", t.grid.n_theta}, {"n_phi", t.grid.n_phi}, {"doubling_check", true}}},
                                {"gaps", jr},
                                {"band_chern", jb},
                                {"band_chern_sum", bdef ? json(bsum) : json(nullptr)},
                                {"all_agree", disagree == 0}});
  if (disagree) throw ValidationFailure(std::to_string(disagree) + " open gap(s) disagree");
}

// ---------------------------------------------------------------- bandedge

json analysis(const StateProfile& s, const RationalFlux& f, double lam, int chern) {
  json a;
  auto d = doublet_separation(s.amplitudes);
  a["doublet_separation"] = d.found ? d.separation : 0;
  a["doublet"] = {{"found", d.found}, {"n1", d.n1}, {"n2", d.n2}};
  auto p = parity_check(s);
  a["parity"] = {{"center", to_string(p.center)}, {"parity", p.parity}, {"residual", num(p.residual)},
                 {"n1", p.n1}, {"n2", p.n2}, {"pair_mismatch", num(p.pair_mismatch)}};
  auto h = detect_peaks(s.amplitudes, {0.2, 0.5, chern});
  json groups = json::array();
  for (auto& g : h.groups) {
    json members = json::array();
    for (auto& m : g.members) members.push_back({{"site", m.site}, {"amplitude", num(m.amplitude)}});
    groups.push_back({{"members", members}, {"midpoint", num(g.midpoint)}, {"offset", num(g.offset)},
                      {"separation", g.separation}, {"ratio", num(g.ratio)}, {"dimer", g.dimer},
                      {"class", to_string(g.cls)}});
  }
  a["peaks"] = groups;
  auto windows = [](const std::vector<Window>& ws) {
    json j = json::array();
    for (auto& w : ws) j.push_back({{"start", w.start}, {"length", w.length}, {"fib_minus_c", w.fib_minus_c}});
    return j;
  };
  a["smooth_windows"] = windows(smooth_windows(s.amplitudes, chern));
  a["smooth_windows_curvature"] = windows(smooth_windows_curvature(s.amplitudes, chern));
  json z = json::array();
  for (auto& e : subpeak_ratio_zeta(s.amplitudes, f)) z.push_back({{"offset", e.offset}, {"ratio", num(e.ratio)}});
  a["zeta"] = z;
  auto g = band_edge_state(f, lam, 0.5 / static_cast<double>(f.q), 0, Side::Upper);
  json beat = json::array();
  for (int m = 0; m <= 6; ++m) {
    json lit = nullptr;
    try {
      lit = num(chern_beat_overlap_literal(s.amplitudes, g.amplitudes, f, m));
    } catch (const std::domain_error&) {
    }
    beat.push_back({{"m", m}, {"overlap", num(chern_beat_overlap(s.amplitudes, g.amplitudes, f, m))}, {"literal", lit}});
  }
  a["chern_beat"] = beat;
  return a;
}

void run_bandedge(const json& v, Output& out) {
  auto f = flux_from(v);
  double lam = get_real(v, "lambda");
  int given = has(v, "gap") + has(v, "gap_chern") + get_flag(v, "ground");
  if (given != 1) throw UsageError("give exactly one of --gap, --gap-chern, --ground");
  int r = 0;
  Side side = side_arg(v);
  if (get_flag(v, "ground")) {
    side = Side::Upper;
  } else if (has(v, "gap")) {
    r = static_cast<int>(get_int(v, "gap"));
    if (r < 1 || r >= f.q) throw UsageError("--gap must be in 1..q-1");
  } else {
    r = gap_for_chern(f, static_cast<int>(get_int(v, "gap_chern")));
  }
  int chern = r ? label(f, r).value_or(0) : 0;
  double phi = phase_arg(v, "phi", f, r ? doublet_phase(f, r) : 0.5 / static_cast<double>(f.q));
  auto s = band_edge_state(f, lam, phi, r, side);
  const int q = s.size();
  auto pot = potential_profile(f, lam, s.params.phi, q);
  out.write_csv("profile.csv", {"n", "re", "im", "abs", "potential"}, [&](CsvWriter& w) {
    for (int n = 0; n < q; ++n) {
      w.cell(n).cell(s.amplitudes[n].real()).cell(s.amplitudes[n].imag()).cell(std::abs(s.amplitudes[n])).cell(pot[n]);
      w.end_row();
    }
  });
  json body = {{"flux", flux_json(f)},
               {"lambda", num(lam)},
               {"state", {{"gap", r}, {"side", side_name(side)}, {"chern", chern}, {"level", s.level},
                          {"energy", num(s.energy)}, {"theta", num(s.params.theta)}, {"phi", num(s.params.phi)},
                          {"ipr", num(ipr(s.amplitudes))}}}};
  if (get_flag(v, "analyze")) body["analysis"] = analysis(s, f, lam, chern);
  out.write_json("bandedge.json", body);
  Plot p;
  p.title = r ? "band edge r=" + std::to_string(r) + " (" + side_name(side) + "), C=" + std::to_string(chern)
              : std::string("ground state");
  p.xlabel = "site n";
  p.ylabel = "|psi_n|";
  p.log_y = true;
  p.series.push_back({"|psi|", iota_d(static_cast<std::size_t>(q)), abs_vec(s.amplitudes), io::Mark::Line, ""});
  out.write_svg("profile.svg", p);
}

// ---------------------------------------------------------------- momentum

void run_momentum(const json& v, Output& out) {
  auto f = flux_from(v);
  double lam = get_real(v, "lambda");
  SeaOptions opt{static_cast<int>(get_int(v, "phi_samples")), static_cast<int>(get_int(v, "theta_samples"))};
  if (opt.phi_samples < 1 || opt.theta_samples < 1) throw UsageError("sample counts must be >= 1");
  std::vector<std::pair<std::string, int>> fills;
  int given = has(v, "fill_gap") + has(v, "fill_gap_chern") + get_flag(v, "half");
  if (given > 1) throw UsageError("give at most one of --fill-gap, --fill-gap-chern, --half");
  if (has(v, "fill_gap")) {
    int r = static_cast<int>(get_int(v, "fill_gap"));
    if (r < 1 || r >= f.q) throw UsageError("--fill-gap must be in 1..q-1");
    fills.push_back({"r=" + std::to_string(r), r});
  } else if (has(v, "fill_gap_chern")) {
    int c = static_cast<int>(get_int(v, "fill_gap_chern"));
    fills.push_back({"C=" + std::to_string(c), gap_for_chern(f, c)});
  } else if (get_flag(v, "half")) {
    fills.push_back({"half", half_filling_gap(f)});
  } else {
    for (int c : {1, 2, 4}) fills.push_back({"C=" + std::to_string(c), gap_for_chern(f, c)});
    fills.push_back({"half", half_filling_gap(f)});
  }
  std::vector<MomentumDistribution> dists;
  for (auto& [name, r] : fills) dists.push_back(sea_momentum(f, lam, r, opt));
  const int q = static_cast<int>(f.q);
  std::vector<std::string> cols{"j", "k"}, dcols{"n"};
  for (auto& [name, r] : fills) cols.push_back("n_k " + name), dcols.push_back("density " + name);
  out.write_csv("momentum.csv", cols, [&](CsvWriter& w) {
    for (int j = 0; j < q; ++j) {
      w.cell(j).cell(dists[0].k[j]);
      for (auto& d : dists) w.cell(d.n[j]);
      w.end_row();
    }
  });
  out.write_csv("density.csv", dcols, [&](CsvWriter& w) {
    for (int n = 0; n < q; ++n) {
      w.cell(n);
      for (auto& d : dists) w.cell(d.density[n]);
      w.end_row();
    }
  });
  json jf = json::array();
  for (std::size_t i = 0; i < fills.size(); ++i) {
    auto& d = dists[i];
    auto wg = wiggle_metric(d);
    double sn = std::accumulate(d.n.begin(), d.n.end(), 0.0);
    double sd = std::accumulate(d.density.begin(), d.density.end(), 0.0);
    jf.push_back({{"label", fills[i].first}, {"gap", fills[i].second}, {"chern", label(f, fills[i].second).value_or(0)},
                  {"particles", num(d.particles)}, {"sum_n_k", num(sn)}, {"sum_density", num(sd)},
                  {"wiggles", {{"count", wg.count}, {"total_variation", num(wg.total_variation)}}}});
  }
  out.write_json("momentum.json",
                 {{"flux", flux_json(f)},
                  {"lambda", num(lam)},
                  {"conventions",
                   {{"dft", "n(k_j) = |sum_n psi_n exp(-2 pi i j n / q) / sqrt(q)|^2, k_j = 2 pi j / q"},
                    {"occupation", "lowest r levels at every (theta, phi) sample, averaged"},
                    {"theta_samples", opt.theta_samples},
                    {"theta_grid", "2 pi (i + 1/2) / theta_samples"},
                    {"phi_samples", opt.phi_samples},
                    {"phi_grid", "j / phi_samples"}}},
                  {"fillings", jf}});
  Plot p;
  p.title = "momentum distribution q=" + std::to_string(q) + ", lambda=" + io::fmt(lam);
  p.xlabel = "k";
  p.ylabel = "n(k)";
  for (std::size_t i = 0; i < fills.size(); ++i)
    p.series.push_back({fills[i].first, dists[i].k, dists[i].n, io::Mark::Line, ""});
  out.write_svg("momentum.svg", p);
}

// ---------------------------------------------------------------- majorana

json solution_json(const BdgSolution& s, double threshold) {
  Eigen::Index peak = 0;
  site_weights(s.zero_mode).maxCoeff(&peak);
  return {{"lambda", num(s.params.lambda)}, {"min_abs_e", num(s.zero_energy)}, {"edge_weight", num(s.edge_weight)},
          {"ipr", num(s.ipr)}, {"gap_at_zero", num(s.gap_at_zero)}, {"peak_site", static_cast<int>(peak)},
          {"near_zero", s.zero_energy < threshold}};
}

void run_majorana(const json& v, Output& out) {
  double delta = get_real(v, "delta");
  int L = static_cast<int>(get_int(v, "L"));
  if (L < 4) throw UsageError("--L must be >= 4");
  json fv = v;
  if (!has(fv, "q")) fv["q"] = L;
  auto f = flux_from(fv);
  double phi = get_real(v, "phi");
  std::string bs = get_text(v, "boundary");
  if (bs != "open" && bs != "periodic") throw UsageError("--boundary must be open or periodic");
  BdgBoundary boundary = bs == "open" ? BdgBoundary::Open : BdgBoundary::Periodic;
  std::string ms = get_text(v, "method");
  BdgMethod method = ms == "auto" ? BdgMethod::Auto : ms == "dense" ? BdgMethod::Dense : ms == "banded" ? BdgMethod::Banded
                                                                                                        : throw UsageError("--method must be auto, dense or banded");
  auto c = bdg_couplings(delta);
  json body = {{"flux", flux_json(f)},
               {"length", L},
               {"phi", num(phi)},
               {"boundary", bs},
               {"couplings", {{"delta", num(delta)}, {"xi", num(c.xi)}, {"jx", num(c.jx)}, {"jy", num(c.jy)}}},
               {"lambda_c_analytic", num(c.jy)}};

  std::string scan_s = get_text(v, "scan");
  std::optional<PhaseScan> scan;
  if (scan_s != "none") {
    auto rg = parse_range(scan_s, "scan");
    scan = phase_scan(delta, f, phi, L, linspace(rg.lo, rg.hi, rg.steps), Exec::Parallel, method);
    out.write_csv("scan.csv", {"lambda", "min_abs_e", "edge_weight", "ipr", "peak_site"}, [&](CsvWriter& w) {
      for (auto& r : scan->rows) {
        w.cell(r.lambda).cell(r.min_abs_e).cell(r.edge_weight).cell(r.ipr).cell(r.peak_site);
        w.end_row();
      }
    });
    body["scan"] = {{"range", scan_s},
                    {"lambda_c_estimate", num(scan->lambda_c_estimate)},
                    {"estimator", "argmax of 1/ipr of the zero mode"},
                    {"difference_from_jy", num(scan->lambda_c_estimate - c.jy)}};
  }

  // "near-zero": 1e-6 from L = 89 on, else 1e-3 times the bulk gap
  std::vector<double> panels = parse_list(get_text(v, "panels"), "panels");
  panels.push_back(c.jy);
  std::sort(panels.begin(), panels.end());
  std::vector<BdgSolution> sols;
  for (double lam : panels) sols.push_back(solve_bdg({delta, lam, f, phi, L, boundary}, method));
  json jp = json::array();
  for (auto& s : sols) jp.push_back(solution_json(s, L >= 89 ? 1e-6 : 1e-3 * s.gap_at_zero));
  body["panels"] = jp;
  std::vector<std::string> cols{"n"};
  for (double lam : panels) {
    std::string tag = "@" + io::fmt(lam);
    cols.push_back("f" + tag);
    cols.push_back("g" + tag);
    cols.push_back("weight" + tag);
  }
  out.write_csv("profiles.csv", cols, [&](CsvWriter& w) {
    for (int n = 0; n < L; ++n) {
      w.cell(n);
      for (auto& s : sols) w.cell(s.zero_mode[2 * n]).cell(s.zero_mode[2 * n + 1]).cell(site_weights(s.zero_mode)[n]);
      w.end_row();
    }
  });

  if (get_flag(v, "ghost")) {
    SeaOptions sea{static_cast<int>(get_int(v, "ghost_phi_samples")), static_cast<int>(get_int(v, "ghost_theta_samples"))};
    auto g = ghost_shadow_report(f, delta, phi, L, sea);
    const int n = std::max(static_cast<int>(g.ghost_profile.size()), static_cast<int>(g.chern_profile.size()));
    out.write_csv("ghost.csv", {"n", "ghost", "chern4"}, [&](CsvWriter& w) {
      for (int i = 0; i < n; ++i) {
        w.cell(i);
        if (i < g.ghost_profile.size()) w.cell(g.ghost_profile[i]);
        else w.empty();
        if (i < g.chern_profile.size()) w.cell(g.chern_profile[i]);
        else w.empty();
        w.end_row();
      }
    });
    const int m = std::max(static_cast<int>(g.ghost_momentum.n.size()), static_cast<int>(g.chern_sea_momentum.n.size()));
    out.write_csv("ghost_momentum.csv", {"j", "n_k ghost", "n_k chern4 sea"}, [&](CsvWriter& w) {
      for (int j = 0; j < m; ++j) {
        w.cell(j);
        if (j < static_cast<int>(g.ghost_momentum.n.size())) w.cell(g.ghost_momentum.n[j]);
        else w.empty();
        if (j < static_cast<int>(g.chern_sea_momentum.n.size())) w.cell(g.chern_sea_momentum.n[j]);
        else w.empty();
        w.end_row();
      }
    });
    body["ghost"] = {{"lambda_c", num(g.lambda_c)},
                     {"chern_gap", g.chern_gap},
                     {"chern", g.chern},
                     {"ghost_doublet_separations", g.ghost_doublets},
                     {"chern_doublet_separations", g.chern_doublets},
                     {"ghost_has_separation_4", g.ghost_has_separation_4},
                     {"overlap", num(g.overlap)},
                     {"shared_offsets", g.shared_offsets},
                     {"ghost_offsets", g.ghost_offsets},
                     {"chern_offsets", g.chern_offsets},
                     {"ghost_wiggles", {{"count", g.ghost_wiggles.count}, {"total_variation", num(g.ghost_wiggles.total_variation)}}},
                     {"chern_wiggles", {{"count", g.chern_wiggles.count}, {"total_variation", num(g.chern_wiggles.total_variation)}}},
                     {"wiggle_counts_within_one", std::abs(g.ghost_wiggles.count - g.chern_wiggles.count) <= 1}};
  }

  if (has(v, "fluctuation")) {
    double lam = get_real(v, "fluctuation");
    if (!(lam > 1)) throw UsageError("--fluctuation needs lambda > 1");
    auto r = fluctuation_correspondence(lam, f, phi, L);
    out.write_csv("fluctuation.csv", {"n", "envelope", "harper_state"}, [&](CsvWriter& w) {
      for (int n = 0; n < r.envelope.size(); ++n) {
        w.cell(n).cell(r.envelope[n]).cell(r.harper_state[n]);
        w.end_row();
      }
    });
    body["fluctuation"] = {{"lambda", num(r.lambda)},           {"xi", num(r.xi)},
                           {"delta", num(r.delta)},             {"spectral_mismatch", num(r.spectral_mismatch)},
                           {"bdg_energy", num(r.bdg_energy)},   {"residual_f", num(r.residual_f)},
                           {"residual_g", num(r.residual_g)},   {"harper_energy", num(r.harper_energy)},
                           {"envelope_overlap", num(r.envelope_overlap)}};
  }
  out.write_json("majorana.json", body);

  if (scan) {
    Plot p;
    p.title = "zero mode across lambda, L=" + std::to_string(L) + ", delta=" + io::fmt(delta);
    p.xlabel = "lambda";
    p.ylabel = "fraction";
    Series ew{"edge weight", {}, {}, io::Mark::Line, ""}, pr{"1/(L ipr)", {}, {}, io::Mark::Line, ""};
    for (auto& r : scan->rows) {
      ew.x.push_back(r.lambda);
      ew.y.push_back(r.edge_weight);
      pr.x.push_back(r.lambda);
      pr.y.push_back(1.0 / (L * r.ipr));
    }
    p.series = {ew, pr, {"J_y", {c.jy, c.jy}, {0.0, 1.0}, io::Mark::Line, "#777777"}};
    out.write_svg("majorana_scan.svg", p);
  }
  Plot p;
  p.title = "zero-mode weight |f|^2+|g|^2, L=" + std::to_string(L);
  p.xlabel = "site n";
  p.ylabel = "weight";
  p.log_y = true;
  for (auto& s : sols)
    p.series.push_back({"lambda=" + io::fmt(s.params.lambda), iota_d(static_cast<std::size_t>(L)),
                        vec(site_weights(s.zero_mode)), io::Mark::Line, ""});
  out.write_svg("majorana_profiles.svg", p);
}

// ---------------------------------------------------------------- pairing

// into (-1, 1]
double fold(double x) { return x - 2.0 * std::ceil((x - 1.0) / 2.0); }

// Effective coupling H_eff[n2][n1] along the shorter path, intermediate sites at energy e0.
std::complex<double> effective_hop(const StateProfile& s, int n1, int n2) {
  const int q = s.size();
  auto h = build_harper(s.params, q);
  int fwd = static_cast<int>(wrap_mod(n2 - n1, q));
  int dir = fwd <= q - fwd ? 1 : -1;
  std::complex<double> t = 1.0;
  for (int m = n1; m != n2;) {
    int next = static_cast<int>(wrap_mod(m + dir, q));
    t *= h(next, m);
    if (next != n2) t /= s.energy - potential(s.params.flux, s.params.lambda, s.params.phi, next);
    m = next;
  }
  return t;
}

void run_pairing(const json& v, Output& out) {
  auto f = flux_from(v);
  const int q = static_cast<int>(f.q);
  std::string ps = get_text(v, "phi");
  std::vector<double> phases;
  if (ps == "auto") phases = {0.0, 0.5 / q};
  else phases = {phase_arg(v, "phi", f, 0.0)};
  std::vector<PairTable> tables;
  for (double phi : phases) tables.push_back(pairing_table(f, phi));
  out.write_csv("pairs.csv", {"phi", "rank_lo", "rank_hi", "n1", "n2", "separation"}, [&](CsvWriter& w) {
    for (auto& t : tables)
      for (auto& e : t.pairs) {
        w.cell(t.phi).cell(e.rank_lo).cell(e.rank_hi).cell(e.n1).cell(e.n2).cell(e.separation);
        w.end_row();
      }
  });

  std::optional<double> lam;
  if (has(v, "lambda")) lam = get_real(v, "lambda");
  int disagree = 0;
  json rows = json::array();
  std::vector<std::string> cols{"r", "chern", "phi", "pair_n1", "pair_n2", "chern_pairing_abs", "agree"};
  if (lam)
    for (const char* c : {"side", "center_n1", "center_n2", "center_separation", "weight", "relative_phase_over_pi",
                          "t_eff_prediction_over_pi", "fixed_rule_over_pi"})
      cols.push_back(c);
  std::vector<std::vector<json>> table;
  for (int r = 1; r < q; ++r) {
    auto c = label(f, r);
    double phi = ps == "auto" ? doublet_phase(f, r) : phases[0];
    auto tab = pairing_table(f, phi);
    auto pc = chern_pairing(tab, r);
    int pi = tab.rank_pair[r - 1];
    bool ok = c && pc && *pc == std::abs(*c);
    if (c && !ok && ps == "auto") ++disagree;
    json row = {{"r", r},
                {"chern", c ? json(*c) : json(nullptr)},
                {"phi", num(phi)},
                {"pair", pi >= 0 && pc ? json{tab.pairs[pi].n1, tab.pairs[pi].n2} : json(nullptr)},
                {"chern_pairing_abs", pc ? json(*pc) : json(nullptr)},
                {"agree", ok}};
    std::vector<json> base{r, row["chern"], row["phi"], pi >= 0 && pc ? json(tab.pairs[pi].n1) : json(nullptr),
                           pi >= 0 && pc ? json(tab.pairs[pi].n2) : json(nullptr), row["chern_pairing_abs"], ok ? 1 : 0};
    if (lam && c) {
      json centers = json::array();
      for (Side side : {Side::Lower, Side::Upper}) {
        auto lc = localization_centers(f, *lam, r, side);
        auto ratio = lc.state.amplitudes[lc.n2] / lc.state.amplitudes[lc.n1];
        auto t = effective_hop(lc.state, lc.n1, lc.n2);
        double pred = fold(std::arg((side == Side::Lower ? -1.0 : 1.0) * t) / kPi);
        int cc = std::abs(*c);
        double fixed = fold(side == Side::Lower ? -cc : -(cc - 1));
        double rel = fold(std::arg(ratio) / kPi);
        centers.push_back({{"side", side_name(side)}, {"n1", lc.n1}, {"n2", lc.n2}, {"separation", lc.separation},
                           {"weight", num(lc.weight)}, {"relative_phase_over_pi", num(rel)},
                           {"t_eff_prediction_over_pi", num(pred)}, {"fixed_rule_over_pi", num(fixed)}});
        auto line = base;
        for (json x : {json(side_name(side)), json(lc.n1), json(lc.n2), json(lc.separation), num(lc.weight), num(rel),
                       num(pred), num(fixed)})
          line.push_back(x);
        table.push_back(line);
      }
      row["centers"] = centers;
    } else {
      if (lam)
        for (int k = 0; k < 8; ++k) base.push_back(nullptr);
      table.push_back(base);
    }
    rows.push_back(row);
  }
  out.write_csv("pairing.csv", cols, [&](CsvWriter& w) {
    for (auto& line : table) {
      for (auto& x : line) {
        if (x.is_null()) w.empty();
        else if (x.is_string()) w.cell(x.get<std::string>());
        else if (x.is_number_integer()) w.cell(x.get<long long>());
        else w.cell(x.get<double>());
      }
      w.end_row();
    }
  });
  out.write_json("pairing.json", {{"flux", flux_json(f)},
                                  {"phi", ps},
                                  {"lambda", lam ? num(*lam) : json(nullptr)},
                                  {"gaps", rows},
                                  {"all_agree", disagree == 0}});
  if (disagree) throw ValidationFailure(std::to_string(disagree) + " gap(s): pairing differs from the Diophantine label");
}

// ---------------------------------------------------------------- butterfly

struct Edges {
  std::vector<double> lo, hi;
};

Edges theta_edges(const RationalFlux& f, double lam, double phi, int nt) {
  const int q = static_cast<int>(f.q);
  Edges e{std::vector<double>(q, 1e300), std::vector<double>(q, -1e300)};
  for (int i = 0; i < nt; ++i) {
    HarperParams hp{lam, f, phi, Boundary::Bloch, 2 * kPi * i / nt};
    Eigen::VectorXd ev = (i == 0 || 2 * i == nt) ? eigenvalues(build_harper_real(hp, q)) : eigenvalues(build_harper(hp, q));
    for (int l = 0; l < q; ++l) {
      e.lo[l] = std::min(e.lo[l], ev[l]);
      e.hi[l] = std::max(e.hi[l], ev[l]);
    }
  }
  return e;
}

void run_butterfly(const json& v, Output& out) {
  std::string sweep = get_text(v, "sweep");
  double phi = get_real(v, "phi");
  int nt = static_cast<int>(get_int(v, "theta_samples"));
  if (nt < 2 || nt % 2) throw UsageError("--theta-samples must be even and >= 2");
  struct Point {
    double x;
    RationalFlux f;
    double lam;
  };
  std::vector<Point> pts;
  if (sweep == "sigma") {
    int qmax = static_cast<int>(get_int(v, "qmax"));
    if (qmax < 2 || qmax > 200) throw UsageError("--qmax must be in 2..200");
    double lam = get_real(v, "lambda");
    for (int q = 2; q <= qmax; ++q)
      for (int p = 1; p < q; ++p)
        if (std::gcd(p, q) == 1) pts.push_back({static_cast<double>(p) / q, make_flux(p, q), lam});
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  } else if (sweep == "lambda") {
    auto f = flux_from(v);
    auto rg = parse_range(get_text(v, "range"), "range");
    for (double lam : linspace(rg.lo, rg.hi, rg.steps)) pts.push_back({lam, f, lam});
  } else {
    throw UsageError("--sweep must be sigma or lambda");
  }
  auto edges = map_indexed(Exec::Parallel, pts.size(), [&](std::size_t i) { return theta_edges(pts[i].f, pts[i].lam, phi, nt); });
  const std::string xname = sweep == "sigma" ? "sigma" : "lambda";
  out.write_csv("butterfly_bands.csv", {xname, "p", "q", "band", "e_min", "e_max"}, [&](CsvWriter& w) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t l = 0; l < edges[i].lo.size(); ++l) {
        w.cell(pts[i].x).cell(static_cast<long long>(pts[i].f.p)).cell(static_cast<long long>(pts[i].f.q));
        w.cell(static_cast<long long>(l + 1)).cell(edges[i].lo[l]).cell(edges[i].hi[l]);
        w.end_row();
      }
  });
  out.write_csv("butterfly_gaps.csv", {xname, "p", "q", "r", "lower_edge", "upper_edge", "width", "chern"}, [&](CsvWriter& w) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t r = 1; r < edges[i].lo.size(); ++r) {
        double width = edges[i].lo[r] - edges[i].hi[r - 1];
        if (!(width > 1e-9)) continue;
        w.cell(pts[i].x).cell(static_cast<long long>(pts[i].f.p)).cell(static_cast<long long>(pts[i].f.q));
        w.cell(static_cast<long long>(r)).cell(edges[i].hi[r - 1]).cell(edges[i].lo[r]).cell(width);
        auto c = label(pts[i].f, static_cast<int>(r));
        if (c) w.cell(*c);
        else w.empty();
        w.end_row();
      }
  });
  out.write_json("butterfly.json", {{"sweep", sweep},
                                    {"points", pts.size()},
                                    {"phi", num(phi)},
                                    {"theta_samples", nt},
                                    {"band_edges", "extremes over theta_i = 2 pi i / theta_samples at fixed phi"}});
  Plot p;
  p.title = sweep == "sigma" ? "Hofstadter butterfly" : "gap diagram q=" + std::to_string(pts.front().f.q);
  p.xlabel = xname;
  p.ylabel = "E";
  p.height = 600;
  Series s{"bands", {}, {}, io::Mark::Line, "#1f3a93"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t l = 0; l < edges[i].lo.size(); ++l) {
      s.x.insert(s.x.end(), {pts[i].x, pts[i].x, nan});
      s.y.insert(s.y.end(), {edges[i].lo[l], edges[i].hi[l], nan});
    }
  p.series.push_back(std::move(s));
  out.write_svg("butterfly.svg", p);
}

}  // namespace

std::vector<Command> commands() {
  const json none = nullptr;
  Param q{"q", Kind::Int, none, "period q of the approximant p/q"};
  Param p{"p", Kind::Int, none, "numerator p (default: F_{m-1} when q = F_m)"};
  Param lam{"lambda", Kind::Real, 1.0, "potential strength lambda"};
  return {
      {"spectrum", "bands over the (theta, phi) torus and gap table", {q, p, lam, {"grid", Kind::Int, 24, "theta and phi samples"}}, run_spectrum},
      {"chern", "per-gap Chern numbers: plaquette Berry flux, Diophantine label, pairing",
       {q, p, lam, {"grid", Kind::Int, none, "theta and phi samples (default 8 x max(32, 2q))"}}, run_chern},
      {"bandedge", "band-edge state and its structure",
       {q, p, lam, {"gap", Kind::Int, none, "gap index r"}, {"gap_chern", Kind::Int, none, "pick the lowest gap with this label"},
        {"ground", Kind::Flag, none, "ground state (bottom of band 1)"}, {"side", Kind::Text, "lower", "lower or upper gap edge"},
        {"phi", Kind::Text, "auto", "auto (doublet phase), half or a number"}, {"analyze", Kind::Flag, none, "peaks, doublets, windows, zeta, parity"}},
       run_bandedge},
      {"momentum", "momentum distributions of filled seas (no filling flag: C = 1, 2, 4 and half filling)",
       {q, p, lam, {"fill_gap", Kind::Int, none, "fill the lowest r bands"}, {"fill_gap_chern", Kind::Int, none, "fill up to the gap with this label"},
        {"half", Kind::Flag, none, "half filling"}, {"phi_samples", Kind::Int, 8, "phi samples"}, {"theta_samples", Kind::Int, 16, "theta samples"}},
       run_momentum},
      {"majorana", "superconducting chain: lambda scan, zero-mode profiles, ghost report, fluctuation check",
       {{"delta", Kind::Real, 0.02, "pairing delta = J_y - J_x"},
        {"L", Kind::Int, 1597, "chain length"},
        {"q", Kind::Int, none, "approximant period (default L)"},
        p,
        {"phi", Kind::Real, 0.0, "phase"},
        {"boundary", Kind::Text, "open", "open or periodic"},
        {"method", Kind::Text, "auto", "auto, dense or banded"},
        {"scan", Kind::Text, "0.8:1.3:51", "lo:hi:steps or none"},
        {"panels", Kind::Text, "0.9,1.2", "lambdas for profile dumps (J_y is always added)"},
        {"ghost", Kind::Flag, none, "ghost versus Chern-4 report at lambda = J_y"},
        {"ghost_phi_samples", Kind::Int, 8, "phi samples of the Chern-4 sea"},
        {"ghost_theta_samples", Kind::Int, 16, "theta samples of the Chern-4 sea"},
        {"fluctuation", Kind::Real, none, "lambda > 1 for the fluctuation-matrix check"}},
       run_majorana},
      {"pairing", "large-lambda pairing table and localization centers",
       {q, p, {"phi", Kind::Text, "auto", "auto (per-gap doublet phase), 0, half or s/(2q)"},
        {"lambda", Kind::Real, none, "if set (>= 8), find localization centers"}},
       run_pairing},
      {"butterfly", "band edges over a sigma or lambda sweep",
       {{"sweep", Kind::Text, "sigma", "sigma or lambda"},
        {"qmax", Kind::Int, 24, "largest q in the sigma sweep"},
        lam,
        q,
        p,
        {"range", Kind::Text, "0:3:61", "lambda sweep lo:hi:steps"},
        {"phi", Kind::Real, 0.0, "phase"},
        {"theta_samples", Kind::Int, 8, "Bloch phases per point"}},
       run_butterfly},
  };
}

}  // namespace quasitop::cli
