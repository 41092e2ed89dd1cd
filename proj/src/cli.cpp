#include "gns/cli.hpp"

#include "gns/io.hpp"
#include "gns/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace gns {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// logging, GNS_LOG in {error, info, debug}
// ---------------------------------------------------------------------------

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("GNS_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[gns] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[gns] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// run manifest
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + path.string());
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Hashes every artifact under out_dir and writes manifest.json last, marking
/// the run complete.
void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const std::string& config_path, std::uint64_t seed) {
  json artifacts = json::object();
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    artifacts[fs::relative(f, out_dir).generic_string()] = hex64(fnv1a64_file(f));
  }
  json m;
  m["subcommand"] = subcommand;
  m["config"] = config_path;
  m["output_dir"] = out_dir.generic_string();
  m["seed"] = seed;
  const auto now = std::chrono::system_clock::now();
  m["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  m["artifacts"] = artifacts;
  write_text_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// configuration file
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace

SimConfig parse_sim_config_text(const std::string& text, const std::string& origin) {
  SimConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError(origin + ": duplicate key '" + key + "'");
    }
    seen.push_back(key);

    try {
      if (key == "M") c.M = std::stoi(value);
      else if (key == "nu") c.nu = std::stod(value);
      else if (key == "a") c.a = std::stod(value);
      else if (key == "sigma") c.sigma = std::stod(value);
      else if (key == "dt") c.dt = std::stod(value);
      else if (key == "t_end") c.t_end = std::stod(value);
      else if (key == "initial") {
        if (value == "taylor-green") c.initial = InitialData::taylor_green;
        else if (value == "random-divfree") c.initial = InitialData::random_divfree;
        else if (value == "single-mode") c.initial = InitialData::single_mode;
        else if (value == "snapshot") c.initial = InitialData::snapshot;
        else throw ConfigError("unknown initial-data selector '" + value + "'");
      } else if (key == "amplitude") c.amplitude = std::stod(value);
      else if (key == "decay_rate") c.decay_rate = std::stod(value);
      else if (key == "snapshot_path") c.snapshot_path = value;
      else if (key == "seed") c.seed = std::stoull(value);
      else if (key == "n_max") c.n_max = std::stoi(value);
      else if (key == "linearized") c.linearized = parse_bool(value, key);
      else if (key == "monitor_thm6") c.monitor_thm6 = parse_bool(value, key);
      else if (key == "monitor_gronwall") c.monitor_gronwall = parse_bool(value, key);
      else if (key == "monitor_decay") c.monitor_decay = parse_bool(value, key);
      else if (key == "gronwall_c") c.gronwall_c = std::stod(value);
      else if (key == "picard_max_iters") c.picard_max_iters = std::stoi(value);
      else if (key == "picard_tol") c.picard_tol = std::stod(value);
      else throw ConfigError(origin + ": unknown config key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": cannot parse value for '" +
                        key + "'");
    }
  }
  c.validate();
  return c;
}

SimConfig parse_sim_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config_text(buf.str(), path);
}

namespace {

const char* initial_name(InitialData i) {
  switch (i) {
    case InitialData::taylor_green: return "taylor-green";
    case InitialData::random_divfree: return "random-divfree";
    case InitialData::single_mode: return "single-mode";
    default: return "snapshot";
  }
}

json config_echo(const SimConfig& c) {
  json j;
  j["M"] = c.M;
  j["nu"] = c.nu;
  j["a"] = c.a;
  j["sigma"] = c.sigma;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["initial"] = initial_name(c.initial);
  j["amplitude"] = c.amplitude;
  j["decay_rate"] = c.decay_rate;
  j["snapshot_path"] = c.snapshot_path;
  j["seed"] = c.seed;
  j["n_max"] = c.n_max;
  j["linearized"] = c.linearized;
  j["monitor_thm6"] = c.monitor_thm6;
  j["monitor_gronwall"] = c.monitor_gronwall;
  j["monitor_decay"] = c.monitor_decay;
  j["gronwall_c"] = c.gronwall_c;
  j["picard_max_iters"] = c.picard_max_iters;
  j["picard_tol"] = c.picard_tol;
  return j;
}

struct SimOutcome {
  json summary;
  bool monitors_ok = true;
  TimeSeries series;
};

SimOutcome run_simulation(const SimConfig& config) {
  SimOutcome out;
  out.series = simulate(config);
  const TimeSeries& series = out.series;
  const double z0 = series.rows.empty() ? 0.0 : series.rows.front().z_m1;

  json summary;
  summary["config"] = config_echo(config);
  summary["nodes"] = series.rows.size();
  summary["z0"] = z0;
  summary["blew_up"] = series.blew_up;
  summary["blowup_time"] = series.blowup_time;
  summary["x0_sq_time_integral"] = series.x0_sq_integral;
  summary["max_divergence_residual"] = series.max_div_residual;
  if (series.blew_up) out.monitors_ok = false;

  if (config.monitor_thm6) {
    const Thm6Report rep = theorem6_monitor(series, config.nu);
    json j;
    j["precondition_ok"] = rep.precondition_ok;
    j["all_ok"] = rep.all_ok;
    j["tol"] = rep.tol;
    j["worst_margin"] = rep.worst_margin;
    j["worst_time"] = rep.worst_time;
    summary["thm6"] = j;
    if (rep.precondition_ok && !rep.all_ok) out.monitors_ok = false;
  }
  if (config.monitor_gronwall) {
    const GronwallReport rep = gronwall_monitor(series, config.gronwall_c);
    json j;
    j["c_supplied"] = rep.c_supplied;
    j["holds_with_supplied"] = rep.holds_with_supplied;
    j["c_star"] = rep.c_star;
    summary["gronwall"] = j;
    if (!rep.holds_with_supplied) out.monitors_ok = false;
  }
  if (config.monitor_decay) {
    const DecayReport rep = decay_metric(series);
    json j;
    j["t_half"] = rep.t_half;
    j["terminal_ratio"] = rep.terminal_ratio;
    j["fitted_rate"] = rep.fitted_rate;
    j["bound_ok"] = rep.bound_ok;
    j["worst_margin"] = rep.worst_margin;
    summary["decay"] = j;
    if (z0 < config.nu && !rep.bound_ok) out.monitors_ok = false;
  }
  summary["monitors_ok"] = out.monitors_ok;
  out.summary = std::move(summary);
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const SimConfig config = parse_sim_config(config_path);
  fs::create_directories(out_dir);
  log_info("simulate: M=" + std::to_string(config.M) + ", marching to t_end");
  SimOutcome outcome = run_simulation(config);
  write_timeseries_csv_file(outcome.series, (fs::path(out_dir) / "series.csv").string());
  write_text_file(fs::path(out_dir) / "summary.json", outcome.summary.dump(2) + "\n");
  if (outcome.series.final_state.lattice()) {
    write_gnsf_file(outcome.series.final_state, (fs::path(out_dir) / "final.gnsf").string());
  }
  write_manifest(out_dir, "simulate", config_path, config.seed);
  return outcome.monitors_ok ? 0 : 2;
}

json feasibility_json(const Feasibility& f) {
  json j;
  j["feasible"] = f.feasible;
  j["reason"] = f.reason;
  j["z0"] = f.z0;
  j["w0_norm"] = f.w0_norm;
  j["two_eps_z0"] = f.eps_pair;
  j["z0_plus_eps"] = f.z0_plus_eps;
  j["contraction_strong"] = f.contraction_strong;
  j["contraction_weak"] = f.contraction_weak;
  j["v_l1_z1"] = f.v_l1_z1;
  return j;
}

json params_json(const PicardParams& q) {
  json j;
  j["N"] = q.N;
  j["r"] = q.r;
  j["epsilon"] = q.epsilon;
  j["T"] = q.T;
  j["dt"] = q.dt;
  j["max_iters"] = q.max_iters;
  j["tol"] = q.tol;
  return j;
}

int cmd_picard(const std::string& config_path, const std::string& out_dir) {
  const SimConfig config = parse_sim_config(config_path);
  fs::create_directories(out_dir);
  const GevreyParams p(-1, config.a, config.sigma);
  const SpectralVectorField u0 = initial_field(config);

  ParamSelection sel = choose_parameters(u0, config.nu, p, config.dt * config.nu);
  json diag;
  diag["config"] = config_echo(config);
  diag["params"] = params_json(sel.params);
  diag["feasibility"] = feasibility_json(sel.feasibility);

  bool ok = sel.feasibility.feasible;
  if (ok) {
    sel.params.max_iters = config.picard_max_iters;
    sel.params.tol = config.picard_tol;
    log_info("picard: T=" + std::to_string(sel.params.T) + " N=" + std::to_string(sel.params.N));
    const PicardResult res =
        picard_solve(u0, config.nu, p, sel.params, ConvMethod::fast, config.linearized);
    diag["params"] = params_json(res.params);
    diag["iterations"] = res.iterations;
    diag["converged"] = res.converged;
    diag["diverged"] = res.diverged;
    diag["gaps"] = res.gaps;
    diag["contraction_ratios"] = res.ratios;
    diag["ball_sup_zm1"] = res.ball_sup;
    diag["ball_l1_zp1"] = res.ball_l1;
    diag["I_norms"] = res.I_norms;
    diag["J_norms"] = res.J_norms;
    diag["piece_bound_r_over_5"] = res.piece_bound;
    diag["residual"] = res.residual;
    diag["residual_frame"] = "nu=1";

    const double ball_slack = res.params.r * (1.0 + 1e-9);
    bool in_ball = true;
    for (double v : res.ball_sup) in_ball = in_ball && v <= ball_slack;
    for (double v : res.ball_l1) in_ball = in_ball && v <= ball_slack;
    diag["ball_ok"] = in_ball;
    ok = res.converged && !res.diverged && in_ball;
  }
  diag["ok"] = ok;
  write_text_file(fs::path(out_dir) / "diagnostics.json", diag.dump(2) + "\n");
  write_manifest(out_dir, "picard", config_path, config.seed);
  return ok ? 0 : 2;
}

/// Aggregates the worst ratio over several solver trajectories for the two
/// Duhamel inequalities; each trajectory is one sample.
std::pair<MarginReport, MarginReport> lemma23_over_trajectories(int trajectories, int M,
                                                                std::uint64_t seed,
                                                                const GevreyParams& p) {
  MarginReport l2, l3;
  const LatticePtr lattice = build_lattice(M);
  for (int i = 0; i < trajectories; ++i) {
    SpectralVectorField u0 =
        random_divfree_field(lattice, 0.7, 1.0, seed + static_cast<std::uint64_t>(i));
    const double zn = z_norm(u0, p);
    if (zn > 0) u0 *= 0.05 / zn;
    const ParamSelection sel = choose_parameters(u0, 1.0, p, 0.01);
    if (!sel.feasibility.feasible) {
      throw std::runtime_error("lemma 2/3 sample infeasible: " + sel.feasibility.reason);
    }
    const PicardResult res = picard_solve(u0, 1.0, p, sel.params);
    auto [a, b] = check_lemma23(res.u, 1.0, p);
    if (i == 0) {
      l2 = a;
      l3 = b;
      l2.seed = l3.seed = seed;
    }
    l2.samples = l3.samples = i + 1;
    l2.skipped += i == 0 ? 0 : a.skipped;
    l3.skipped += i == 0 ? 0 : b.skipped;
    if (a.worst_ratio > l2.worst_ratio) {
      l2.worst_ratio = a.worst_ratio;
      l2.worst_sample = i;
    }
    if (b.worst_ratio > l3.worst_ratio) {
      l3.worst_ratio = b.worst_ratio;
      l3.worst_sample = i;
    }
  }
  l2.pass = l2.worst_ratio <= 1.0 + l2.slack;
  l3.pass = l3.worst_ratio <= 1.0 + l3.slack;
  return {l2, l3};
}

int cmd_verify(const std::string& lemma, int M, int samples, std::uint64_t seed, double a,
               double sigma, const std::string& out_dir) {
  if (lemma != "1" && lemma != "2" && lemma != "3" && lemma != "4" && lemma != "all") {
    throw ConfigError("--lemma must be one of 1|2|3|4|all");
  }
  fs::create_directories(out_dir);
  const LatticePtr lattice = build_lattice(M);
  const GevreyParams p(-1, a, sigma);
  bool all_pass = true;

  auto emit = [&](const MarginReport& rep, const std::string& name) {
    write_text_file(fs::path(out_dir) / (name + ".json"), rep.to_json().dump(2) + "\n");
    log_info(name + ": worst ratio " + format_double(rep.worst_ratio) +
             (rep.pass ? " (pass)" : " (FAIL)"));
    all_pass = all_pass && rep.pass;
  };

  if (lemma == "1" || lemma == "all") {
    emit(check_lemma1(samples, lattice, seed, p), "lemma1");
  }
  if (lemma == "2" || lemma == "3" || lemma == "all") {
    // one trajectory per 100 requested samples: each costs a full solve
    const int trajectories = std::max(1, samples / 100);
    auto [l2, l3] = lemma23_over_trajectories(trajectories, M, seed, p);
    if (lemma == "2" || lemma == "all") emit(l2, "lemma2");
    if (lemma == "3" || lemma == "all") emit(l3, "lemma3");
  }
  if (lemma == "4" || lemma == "all") {
    emit(check_lemma4(samples, lattice, a, sigma, seed), "lemma4");
  }
  write_manifest(out_dir, "verify", "", seed);
  return all_pass ? 0 : 2;
}

struct SweepSpec {
  double lo = 0, hi = 0;
  int steps = 1;
};

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec s;
  std::istringstream in(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("--sweep-amplitude expects lo:hi:steps");
  try {
    s.lo = std::stod(parts[0]);
    s.hi = std::stod(parts[1]);
    s.steps = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("--sweep-amplitude expects lo:hi:steps");
  }
  if (s.steps < 1 || s.lo < 0 || s.hi < s.lo) {
    throw ConfigError("--sweep-amplitude requires 0 <= lo <= hi and steps >= 1");
  }
  return s;
}

int cmd_decay(const std::string& config_path, const std::string& sweep_text, int jobs,
              const std::string& out_dir) {
  const SimConfig base = parse_sim_config(config_path);
  const SweepSpec sweep = parse_sweep(sweep_text);
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  fs::create_directories(out_dir);

  struct RunRecord {
    double amplitude = 0;
    double terminal_ratio = 0;
    double fitted_rate = 0;
    bool ok = false;
  };
  std::vector<RunRecord> records(static_cast<std::size_t>(sweep.steps));
  std::atomic<std::size_t> cursor{0};
  std::mutex fail_mutex;
  std::string failure;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= records.size()) return;
      try {
        SimConfig cfg = base;
        cfg.amplitude = sweep.steps == 1
                            ? sweep.lo
                            : sweep.lo + (sweep.hi - sweep.lo) * static_cast<double>(i) /
                                  (sweep.steps - 1);
        char name[32];
        std::snprintf(name, sizeof(name), "run_%03zu", i);
        const fs::path run_dir = fs::path(out_dir) / name;
        fs::create_directories(run_dir);
        SimOutcome outcome = run_simulation(cfg);
        write_timeseries_csv_file(outcome.series, (run_dir / "series.csv").string());
        write_text_file(run_dir / "summary.json", outcome.summary.dump(2) + "\n");
        const DecayReport rep = decay_metric(outcome.series);
        records[i] = {cfg.amplitude, rep.terminal_ratio, rep.fitted_rate, outcome.monitors_ok};
        log_debug(std::string(name) + " done");
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        if (failure.empty()) failure = e.what();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const int thread_count = std::min<int>(jobs, sweep.steps);
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!failure.empty()) throw std::runtime_error(failure);

  std::ostringstream agg;
  agg << "amplitude,terminal_ratio,fitted_rate\n";
  bool all_ok = true;
  for (const auto& rec : records) {
    agg << format_double(rec.amplitude) << ',' << format_double(rec.terminal_ratio) << ','
        << format_double(rec.fitted_rate) << "\n";
    all_ok = all_ok && rec.ok;
  }
  write_text_file(fs::path(out_dir) / "aggregate.csv", agg.str());
  write_manifest(out_dir, "decay", config_path, base.seed);
  return all_ok ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"spectral solver and inequality harness for the weighted-ell1 "
               "Navier-Stokes family"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "march the mild solution and record monitors");
  sim->add_option("--config", config_path, "run configuration file")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* pic = app.add_subcommand("picard", "run the fixed-point construction diagnostics");
  pic->add_option("--config", config_path, "run configuration file")->required();
  pic->add_option("--out", out_dir, "output directory")->required();

  std::string lemma = "all";
  int grid = 6, samples = 1000;
  std::uint64_t seed = 1;
  double a = 1.0, sigma = 2.0;
  auto* ver = app.add_subcommand("verify", "randomized inequality margin reports");
  ver->add_option("--lemma", lemma, "1|2|3|4|all")->required();
  ver->add_option("--grid", grid, "modes per axis");
  ver->add_option("--samples", samples, "sample count (lemmas 2/3 use samples/100 trajectories)");
  ver->add_option("--seed", seed, "base RNG seed");
  ver->add_option("--a", a, "Gevrey weight strength");
  ver->add_option("--sigma", sigma, "Gevrey order");
  ver->add_option("--out", out_dir, "output directory")->required();

  double c_a = 1.0, c_sigma = 4.0;
  auto* l4 = app.add_subcommand("lemma4-const", "print the interpolation constant");
  l4->add_option("--a", c_a, "weight strength")->required();
  l4->add_option("--sigma", c_sigma, "Gevrey order")->required();

  std::string sweep_text;
  int jobs = 1;
  auto* dec = app.add_subcommand("decay", "amplitude sweep of decay diagnostics");
  dec->add_option("--config", config_path, "base configuration file")->required();
  dec->add_option("--sweep-amplitude", sweep_text, "lo:hi:steps")->required();
  dec->add_option("--jobs", jobs, "concurrent runs");
  dec->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 uses its own exit-code family; anything but help is a usage error
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (pic->parsed()) return cmd_picard(config_path, out_dir);
    if (ver->parsed()) return cmd_verify(lemma, grid, samples, seed, a, sigma, out_dir);
    if (l4->parsed()) {
      std::cout << format_double(lemma4_constant(c_a, c_sigma)) << "\n";
      return 0;
    }
    if (dec->parsed()) return cmd_decay(config_path, sweep_text, jobs, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gns
