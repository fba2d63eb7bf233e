#include "levywalk/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levywalk/io.hpp"
#include "levywalk/jump_first.hpp"
#include "levywalk/meijer.hpp"
#include "levywalk/montecarlo.hpp"
#include "levywalk/stable.hpp"
#include "levywalk/wait_first.hpp"

namespace levywalk {

namespace {

// Thrown when a user-supplied acceptance threshold is exceeded; maps to exit
// code 1, distinct from usage (2) and numerical (3) failures.
struct threshold_exceeded {
  std::string message;
};

struct AlphaArg {
  double value = 0.5;
  bool rational = false;
  int l = 1, k = 2;
};

long parse_long_strict(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') throw domain_error("not an integer: '" + text + "'");
  return v;
}

AlphaArg parse_alpha(const std::string& text) {
  AlphaArg out;
  const std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    const long l = parse_long_strict(text.substr(0, slash));
    const long k = parse_long_strict(text.substr(slash + 1));
    if (l < 1 || k < 2 || l > 1000 || k > 1000)
      throw domain_error("rational index out of range: '" + text + "'");
    const RationalIndex idx(static_cast<int>(l), static_cast<int>(k));
    out.rational = true;
    out.l = idx.l;
    out.k = idx.k;
    out.value = idx.alpha();
    return out;
  }
  out.value = parse_double(text);
  StableIndex check(out.value);
  return out;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(text);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

// lo:hi:count, expanded to the count cell midpoints of a uniform partition.
// The grid deliberately never touches lo or hi, so window edges, support
// boundaries, and the origin stay off-grid unless requested explicitly.
std::vector<double> parse_grid(const std::string& text) {
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 3) throw domain_error("grid must be lo:hi:count, got '" + text + "'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const long count = parse_long_strict(parts[2]);
  if (!(lo < hi)) throw domain_error("grid needs lo < hi");
  if (count < 1 || count > 10000000) throw domain_error("grid count out of range");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double h = (hi - lo) / static_cast<double>(count);
  for (long j = 0; j < count; ++j)
    grid[static_cast<std::size_t>(j)] = lo + (static_cast<double>(j) + 0.5) * h;
  return grid;
}

std::pair<double, double> parse_window(const std::string& text) {
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 2) throw domain_error("window must be lo:hi, got '" + text + "'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  if (!(lo < hi)) throw domain_error("window needs lo < hi");
  return {lo, hi};
}

std::string join_command(int argc, const char* const* argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

void write_text_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) {
    writer(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw domain_error("cannot open output file '" + path + "'");
  writer(f);
  if (!f.good()) throw domain_error("write failed for '" + path + "'");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  // wall time goes to stderr only: output files stay byte-reproducible
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "elapsed_seconds=%.3f\n", s);
  }
};

void manifest_quad(Manifest& m, const QuadConfig& cfg) {
  m.add("abs_tol", cfg.abs_tol);
  m.add("rel_tol", cfg.rel_tol);
  m.add("max_depth", static_cast<double>(cfg.max_depth));
  m.add("max_evals", static_cast<double>(cfg.max_evals));
}

// ---- stable-pdf ----

struct StablePdfOpts {
  std::string alpha_text = "0.5";
  double x = 1.0;
  std::string method = "automatic";
  double tol = 1e-12;
  QuadConfig cfg;
};

void run_stable_pdf(const StablePdfOpts& o) {
  const AlphaArg alpha = parse_alpha(o.alpha_text);
  double value = 0.0;
  if (o.method == "automatic") {
    value = r_alpha(StableIndex(alpha.value), o.x, o.cfg);
  } else if (o.method == "series") {
    value = r_alpha_series(StableIndex(alpha.value), o.x, o.tol);
  } else if (o.method == "integral") {
    value = r_alpha_integral(StableIndex(alpha.value), o.x, o.cfg);
  } else if (o.method == "closed-half") {
    if (alpha.value != 0.5) throw domain_error("closed-half needs alpha = 1/2");
    value = r_half_closed(o.x);
  } else if (o.method == "meijer") {
    if (!alpha.rational)
      throw domain_error("the meijer method needs a rational index written as l/k");
    value = r_rational(RationalIndex(alpha.l, alpha.k), o.x, o.cfg);
  } else {
    throw domain_error("unknown method '" + o.method +
                       "' (automatic, series, integral, closed-half, meijer)");
  }
  std::cout << format_double(value) << "\n";
}

// ---- density ----

struct DensityOpts {
  std::string process = "wait-first";
  std::string alpha_text = "0.5";
  double p = 0.5;
  double t = 1.0;
  std::string grid_text;
  std::string method = "automatic";
  std::string output;
  QuadConfig cfg;
  bool cfg_touched = false;
  std::string command;
};

void run_density(const DensityOpts& o) {
  Timer timer;
  const ProcessKind process = parse_process(o.process);
  const AlphaArg alpha = parse_alpha(o.alpha_text);
  const Method method = parse_method(o.method);
  const std::vector<double> grid = parse_grid(o.grid_text);

  QuadConfig cfg = o.cfg;
  if (!o.cfg_touched && process == ProcessKind::jump_first) cfg = jump_first_default_config();

  DensityCurve curve;
  if (process == ProcessKind::wait_first) {
    if (method == Method::meijer) {
      if (!alpha.rational)
        throw domain_error("the meijer method needs a rational index written as l/k");
      curve = curve_wait_first_meijer(RationalIndex(alpha.l, alpha.k), o.p, o.t, grid, cfg);
    } else {
      curve = curve_wait_first(ModelParams(alpha.value, o.p), o.t, grid, cfg, method);
    }
  } else {
    curve = curve_jump_first(ModelParams(alpha.value, o.p), o.t, grid, cfg, method);
  }

  Manifest manifest;
  manifest.add("command", o.command);
  manifest.add("version", version_string);
  manifest.add("grid", o.grid_text);
  manifest_quad(manifest, cfg);
  write_text_file(o.output, [&](std::ostream& os) { write_density_csv(os, curve, manifest); });
}

// ---- simulate ----

struct SimulateOpts {
  std::string process = "wait-first";
  std::string alpha_text = "0.5";
  double p = 0.5;
  double t = 1.0;
  long n = 10000;
  long samples = 100000;
  std::uint64_t seed = 12345;
  long bins = 201;
  std::string window_text;
  std::string output;
  std::string endpoints_path;
  std::string command;
};

void run_simulate(const SimulateOpts& o) {
  Timer timer;
  const ProcessKind process = parse_process(o.process);
  const AlphaArg alpha = parse_alpha(o.alpha_text);
  if (o.bins < 1 || o.bins > 10000000) throw domain_error("bin count out of range");

  const WalkConfig cfg(alpha.value, o.p, o.t, o.n, o.samples, o.seed);
  const std::vector<double> endpoints =
      process == ProcessKind::wait_first ? simulate_wait_first(cfg) : simulate_jump_first(cfg);

  std::pair<double, double> window;
  if (!o.window_text.empty()) {
    window = parse_window(o.window_text);
  } else {
    window = process == ProcessKind::wait_first ? std::pair<double, double>{-o.t, o.t}
                                                : std::pair<double, double>{-3.0 * o.t, 3.0 * o.t};
  }
  std::vector<double> edges(static_cast<std::size_t>(o.bins) + 1);
  for (long j = 0; j <= o.bins; ++j)
    edges[static_cast<std::size_t>(j)] =
        window.first + (window.second - window.first) * static_cast<double>(j) /
                           static_cast<double>(o.bins);
  const EmpiricalDensity hist = empirical_density(endpoints, edges);

  Manifest manifest;
  manifest.add("command", o.command);
  manifest.add("version", version_string);
  manifest.add("process", o.process);
  manifest.add("alpha", alpha.value);
  manifest.add("p", o.p);
  manifest.add("t", o.t);
  manifest.add("n", static_cast<double>(o.n));
  manifest.add("samples", static_cast<double>(o.samples));
  manifest.add("seed", std::to_string(o.seed));
  write_text_file(o.output, [&](std::ostream& os) { write_histogram_csv(os, hist, manifest); });

  if (!o.endpoints_path.empty()) {
    Manifest em;
    em.add("command", o.command);
    em.add("version", version_string);
    em.add("seed", std::to_string(o.seed));
    write_text_file(o.endpoints_path,
                    [&](std::ostream& os) { write_endpoints_csv(os, endpoints, em); });
  }
}

// ---- compare ----

struct CompareOpts {
  std::string hist_path;
  std::string analytic_path;
  std::string process = "wait-first";
  std::string alpha_text = "0.5";
  double p = 0.5;
  double t = 1.0;
  bool inline_law = false;
  double max_l1 = -1.0;
  bool json = false;
  QuadConfig cfg;
};

void run_compare(const CompareOpts& o) {
  Timer timer;
  std::ifstream hf(o.hist_path, std::ios::binary);
  if (!hf) throw domain_error("cannot open histogram '" + o.hist_path + "'");
  const EmpiricalDensity hist = read_histogram_csv(hf);

  ComparisonStats stats;
  if (!o.analytic_path.empty()) {
    std::ifstream cf(o.analytic_path, std::ios::binary);
    if (!cf) throw domain_error("cannot open curve '" + o.analytic_path + "'");
    const DensityCurve curve = read_density_csv(cf);
    stats = compare(hist, curve, o.cfg);
  } else if (o.inline_law) {
    const AlphaArg alpha = parse_alpha(o.alpha_text);
    stats = compare_to_law(hist, parse_process(o.process), ModelParams(alpha.value, o.p), o.t,
                           o.cfg);
  } else {
    throw domain_error("compare needs --analytic or the --process/--alpha/--p/--t quartet");
  }

  if (o.json) {
    nlohmann::json j;
    j["l1_distance"] = stats.l1_distance;
    j["ks_distance"] = stats.ks_distance;
    j["max_bin_abs_err"] = stats.max_bin_abs_err;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "l1_distance=" << format_double(stats.l1_distance) << "\n";
    std::cout << "ks_distance=" << format_double(stats.ks_distance) << "\n";
    std::cout << "max_bin_abs_err=" << format_double(stats.max_bin_abs_err) << "\n";
  }
  if (o.max_l1 >= 0.0 && stats.l1_distance > o.max_l1)
    throw threshold_exceeded{"l1_distance " + format_double(stats.l1_distance) + " exceeds " +
                             format_double(o.max_l1)};
}

// ---- repro ----

struct ReproOpts {
  std::string out_dir = "repro";
  long n = 10000;
  long samples = 20000;
  std::uint64_t seed = 7;
  std::string command;
};

void repro_density(const ReproOpts& o, const std::string& name, const DensityCurve& curve) {
  Manifest m;
  m.add("command", o.command);
  m.add("version", version_string);
  write_text_file((std::filesystem::path(o.out_dir) / name).string(),
                  [&](std::ostream& os) { write_density_csv(os, curve, m); });
  std::fprintf(stderr, "wrote %s\n", name.c_str());
}

void run_repro(const ReproOpts& o) {
  Timer timer;
  std::filesystem::create_directories(o.out_dir);
  const std::vector<double> ps = {0.05, 0.25, 0.5};

  const auto grid_of = [](double lo, double hi, long count) {
    std::vector<double> g(static_cast<std::size_t>(count));
    const double h = (hi - lo) / static_cast<double>(count);
    for (long j = 0; j < count; ++j)
      g[static_cast<std::size_t>(j)] = lo + (static_cast<double>(j) + 0.5) * h;
    return g;
  };

  // closed-form curve families at alpha = 1/2
  for (double p : ps) {
    char name[64];
    std::snprintf(name, sizeof(name), "wait_half_p%.2f.csv", p);
    repro_density(o, name, curve_wait_first(ModelParams(0.5, p), 1.0, grid_of(-1, 1, 201)));
    std::snprintf(name, sizeof(name), "jump_half_p%.2f.csv", p);
    repro_density(o, name, curve_jump_first(ModelParams(0.5, p), 1.0, grid_of(-3, 3, 241)));
  }
  // self-similarity companion at t = 2
  repro_density(o, "wait_half_p0.25_t2.csv",
                curve_wait_first(ModelParams(0.5, 0.25), 2.0, grid_of(-2, 2, 201)));

  // quadrature and G-function cross-check at alpha = 3/4
  QuadConfig qcfg;
  qcfg.rel_tol = 1e-6;
  qcfg.abs_tol = 1e-9;
  repro_density(o, "wait_alpha3-4_p0.25_quad.csv",
                curve_wait_first(ModelParams(0.75, 0.25), 1.0, grid_of(-1, 1, 41), qcfg));
  repro_density(o, "wait_alpha3-4_p0.25_meijer.csv",
                curve_wait_first_meijer(RationalIndex(3, 4), 0.25, 1.0, grid_of(-1, 1, 41), qcfg));

  // Monte Carlo endpoints against the closed forms
  std::ostringstream summary;
  for (int which = 0; which < 2; ++which) {
    const ProcessKind process = which == 0 ? ProcessKind::wait_first : ProcessKind::jump_first;
    const double span = which == 0 ? 1.0 : 3.0;
    const long bins = which == 0 ? 201 : 241;
    const WalkConfig wc(0.5, 0.25, 1.0, o.n, o.samples, o.seed);
    const std::vector<double> endpoints =
        which == 0 ? simulate_wait_first(wc) : simulate_jump_first(wc);
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (long j = 0; j <= bins; ++j)
      edges[static_cast<std::size_t>(j)] =
          -span + 2.0 * span * static_cast<double>(j) / static_cast<double>(bins);
    const EmpiricalDensity hist = empirical_density(endpoints, edges);

    Manifest m;
    m.add("command", o.command);
    m.add("version", version_string);
    m.add("process", process_name(process));
    m.add("alpha", 0.5);
    m.add("p", 0.25);
    m.add("t", 1.0);
    m.add("n", static_cast<double>(o.n));
    m.add("samples", static_cast<double>(o.samples));
    m.add("seed", std::to_string(o.seed));
    const std::string hist_name =
        which == 0 ? "mc_wait_half_p0.25.csv" : "mc_jump_half_p0.25.csv";
    write_text_file((std::filesystem::path(o.out_dir) / hist_name).string(),
                    [&](std::ostream& os) { write_histogram_csv(os, hist, m); });

    const ComparisonStats stats =
        compare_to_law(hist, process, ModelParams(0.5, 0.25), 1.0, QuadConfig{});
    summary << process_name(process) << " l1_distance=" << format_double(stats.l1_distance)
            << " ks_distance=" << format_double(stats.ks_distance)
            << " max_bin_abs_err=" << format_double(stats.max_bin_abs_err) << "\n";
  }
  write_text_file((std::filesystem::path(o.out_dir) / "compare_summary.txt").string(),
                  [&](std::ostream& os) { os << summary.str(); });
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"densities and Monte Carlo simulation of coupled wait-jump walk scaling limits"};
  app.require_subcommand(1);
  const std::string command = join_command(argc, argv);

  StablePdfOpts stable_opts;
  CLI::App* sp = app.add_subcommand("stable-pdf", "one-sided stable density r(x)");
  sp->add_option("--alpha", stable_opts.alpha_text, "stability index in (0,1), real or l/k")
      ->required();
  sp->add_option("--x", stable_opts.x, "evaluation point")->required();
  sp->add_option("--method", stable_opts.method,
                 "automatic, series, integral, closed-half, meijer");
  sp->add_option("--tol", stable_opts.tol, "series stopping tolerance");
  sp->add_option("--abs-tol", stable_opts.cfg.abs_tol, "quadrature absolute tolerance");
  sp->add_option("--rel-tol", stable_opts.cfg.rel_tol, "quadrature relative tolerance");
  sp->callback([&] { run_stable_pdf(stable_opts); });

  DensityOpts density_opts;
  density_opts.command = command;
  CLI::App* de = app.add_subcommand("density", "walk limit density on a grid, written as CSV");
  de->add_option("process", density_opts.process, "wait-first or jump-first")->required();
  de->add_option("--alpha", density_opts.alpha_text, "stability index in (0,1), real or l/k")
      ->required();
  de->add_option("--p", density_opts.p, "up-jump probability in (0,1)")->required();
  de->add_option("--t", density_opts.t, "time horizon")->required();
  de->add_option("--grid", density_opts.grid_text, "evaluation grid lo:hi:count (cell midpoints)")
      ->required();
  de->add_option("--method", density_opts.method, "automatic, quadrature, closed-half, meijer");
  de->add_option("-o,--output", density_opts.output, "output file (default stdout)");
  auto* dat = de->add_option("--abs-tol", density_opts.cfg.abs_tol, "quadrature absolute tolerance");
  auto* drt = de->add_option("--rel-tol", density_opts.cfg.rel_tol, "quadrature relative tolerance");
  de->callback([&, dat, drt] {
    density_opts.cfg_touched = dat->count() > 0 || drt->count() > 0;
    run_density(density_opts);
  });

  SimulateOpts sim_opts;
  sim_opts.command = command;
  CLI::App* si = app.add_subcommand("simulate", "discrete-walk endpoint histogram, written as CSV");
  si->add_option("process", sim_opts.process, "wait-first or jump-first")->required();
  si->add_option("--alpha", sim_opts.alpha_text, "stability index in (0,1)")->required();
  si->add_option("--p", sim_opts.p, "up-jump probability in [0,1]")->required();
  si->add_option("--t", sim_opts.t, "time horizon")->required();
  si->add_option("--n", sim_opts.n, "walk scale: steps fit a budget of n*t");
  si->add_option("--samples", sim_opts.samples, "number of independent walks");
  si->add_option("--seed", sim_opts.seed, "master seed of the per-sample substreams");
  si->add_option("--bins", sim_opts.bins, "histogram bin count");
  si->add_option("--window", sim_opts.window_text,
                 "histogram window lo:hi (default [-t,t] wait-first, [-3t,3t] jump-first)");
  si->add_option("-o,--output", sim_opts.output, "output file (default stdout)");
  si->add_option("--endpoints", sim_opts.endpoints_path, "also write raw endpoints to this file");
  si->callback([&] { run_simulate(sim_opts); });

  CompareOpts cmp_opts;
  CLI::App* co = app.add_subcommand("compare", "histogram vs analytic law distances");
  co->add_option("--hist", cmp_opts.hist_path, "histogram CSV from simulate")->required();
  co->add_option("--analytic", cmp_opts.analytic_path, "density CSV from density");
  auto* cop = co->add_option("--process", cmp_opts.process, "wait-first or jump-first");
  co->add_option("--alpha", cmp_opts.alpha_text, "stability index");
  co->add_option("--p", cmp_opts.p, "up-jump probability");
  co->add_option("--t", cmp_opts.t, "time horizon");
  co->add_option("--max-l1", cmp_opts.max_l1, "fail (exit 1) if l1_distance exceeds this");
  co->add_flag("--json", cmp_opts.json, "emit a single JSON object instead of key=value lines");
  co->add_option("--abs-tol", cmp_opts.cfg.abs_tol, "bin-mass quadrature absolute tolerance");
  co->add_option("--rel-tol", cmp_opts.cfg.rel_tol, "bin-mass quadrature relative tolerance");
  co->callback([&, cop] {
    cmp_opts.inline_law = cop->count() > 0;
    run_compare(cmp_opts);
  });

  ReproOpts repro_opts;
  repro_opts.command = command;
  CLI::App* re = app.add_subcommand("repro", "regenerate the reference CSV bundle");
  re->add_option("--out", repro_opts.out_dir, "output directory");
  re->add_option("--n", repro_opts.n, "walk scale for the Monte Carlo runs");
  re->add_option("--samples", repro_opts.samples, "samples for the Monte Carlo runs");
  re->add_option("--seed", repro_opts.seed, "master seed");
  re->callback([&] { run_repro(repro_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const threshold_exceeded& e) {
    std::cerr << "threshold exceeded: " << e.message << "\n";
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace levywalk
