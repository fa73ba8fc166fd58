// radarcox command line runner: reproducible experiments over the C API.
//
// Subcommands: analytic, simulate, metadist, optimize, validate,
// dump-realization. Angles at this boundary are FULL beamwidths in degrees,
// thresholds in dB; every run writes its outputs plus a manifest.json into
// --out.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "radarcox.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

void check(rcx_status st) {
  if (st == RCX_OK) return;
  const int code =
      (st == RCX_ERR_INVALID || st == RCX_ERR_DOMAIN) ? kExitUsage : kExitNumeric;
  throw CliError{code, std::string(rcx_strerror(st)) + ": " + rcx_last_error()};
}

struct ConfigHandle {
  rcx_config* ptr = nullptr;
  ConfigHandle() : ptr(rcx_config_create()) {}
  explicit ConfigHandle(rcx_config* p) : ptr(p) {}
  ConfigHandle(const ConfigHandle& o) : ptr(rcx_config_clone(o.ptr)) {}
  ConfigHandle& operator=(const ConfigHandle& o) {
    if (this != &o) {
      rcx_config_destroy(ptr);
      ptr = rcx_config_clone(o.ptr);
    }
    return *this;
  }
  ~ConfigHandle() { rcx_config_destroy(ptr); }

  void set(const std::string& key, const std::string& value) const {
    check(rcx_config_set(ptr, key.c_str(), value.c_str()));
  }
  void set(const std::string& key, double value) const {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    set(key, std::string(buf));
  }
  std::string get(const std::string& key) const {
    char buf[256];
    check(rcx_config_get(ptr, key.c_str(), buf, sizeof(buf)));
    return buf;
  }
  double get_num(const std::string& key) const { return std::stod(get(key)); }
  std::string to_json() const {
    std::vector<char> buf(65536);
    check(rcx_config_json(ptr, buf.data(), buf.size()));
    return buf.data();
  }
};

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Common options shared by every subcommand.
struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--set", sets, "override a config field, section.key=value")
        ->take_all();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "RNG seed")->each([this](const std::string&) {
      seed_given = true;
    });
    cmd->add_option("--threads", threads, "worker threads for simulation");
  }

  ConfigHandle make_config() const {
    ConfigHandle cfg;
    if (!config_path.empty()) {
      rcx_config* loaded = rcx_config_load(config_path.c_str());
      if (!loaded) throw CliError{kExitUsage, std::string("config: ") + rcx_last_error()};
      rcx_config_destroy(cfg.ptr);
      cfg.ptr = loaded;
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw CliError{kExitUsage, "--set expects section.key=value, got \"" + kv + "\""};
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed_given) cfg.set("run.seed", static_cast<double>(seed));
    if (threads > 0) cfg.set("run.threads", static_cast<double>(threads));
    check(rcx_config_validate(cfg.ptr));
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

class Emitter {
 public:
  Emitter(const CommonOpts& opts, const ConfigHandle& cfg, const std::string& command)
      : dir_(opts.out_dir), config_json_(cfg.to_json()), command_(command) {
    fs::create_directories(dir_);
    start_ = std::chrono::steady_clock::now();
  }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    const fs::path p = dir_ / name;
    std::ofstream out(p);
    if (!out) throw CliError{kExitNumeric, "cannot write " + p.string()};
    out << header << '\n';
    files_.push_back(name);
    return out;
  }

  void note(const std::string& name) { files_.push_back(name); }
  const fs::path& dir() const { return dir_; }

  // Sidecar manifest: config snapshot, seed, version, wall clock, digests.
  void finish() {
    json manifest;
    manifest["schema"] = "v1";
    manifest["artifact_version"] = rcx_version();
    manifest["command"] = command_;
    manifest["config"] = json::parse(config_json_);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    manifest["wall_clock_ms"] = ms;
    json digests = json::object();
    for (const std::string& f : files_) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                    static_cast<unsigned long long>(fnv1a_file(dir_ / f)));
      digests[f] = buf;
    }
    manifest["outputs"] = digests;
    std::ofstream out(dir_ / "manifest.json");
    out << manifest.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::string config_json_;
  std::string command_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_grid(const std::string& spec) {
  // lo:hi:count
  double lo, hi;
  int count;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
    throw CliError{kExitUsage, "grid must be lo:hi:count, got \"" + spec + "\""};
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = count == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(count - 1);
  return g;
}

std::vector<double> t_grid_of(const ConfigHandle& cfg) {
  const int n = static_cast<int>(cfg.get_num("run.t_grid_size"));
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
  return g;
}

void write_curve(std::ofstream& out, const std::vector<double>& t, const std::vector<double>& F,
                 const std::string& method, double beta_sf, int n_moments) {
  for (std::size_t i = 0; i < t.size(); ++i)
    out << format_num(t[i]) << ',' << format_num(F[i]) << ',' << method << ','
        << format_num(beta_sf) << ',' << n_moments << '\n';
}

const std::map<std::string, rcx_parameter> kParams = {
    {"omega", RCX_PAR_BEAMWIDTH_DEG}, {"p", RCX_PAR_TX_PROB},
    {"lambda", RCX_PAR_LAMBDA},       {"lambda_l", RCX_PAR_LAMBDA_L},
    {"r", RCX_PAR_TARGET_RANGE},      {"r0", RCX_PAR_R0},
    {"beta_db", RCX_PAR_BETA_DB},     {"beta_sf", RCX_PAR_BETA_SF},
    {"n_b", RCX_PAR_NB}};

const std::map<std::string, rcx_objective> kObjectives = {
    {"n_d", RCX_OBJ_EXPECTED_DETECTIONS}, {"p_d", RCX_OBJ_DETECTION_PROB},
    {"delay", RCX_OBJ_MEAN_LOCAL_DELAY},  {"l_k", RCX_OBJ_AVG_LINE_LENGTH},
    {"n_k", RCX_OBJ_EXPECTED_TARGETS},    {"percentile", RCX_OBJ_PERCENTILE_RELIABILITY}};

void emit_sweep_csv(std::ofstream& out, const std::string& param,
                    const std::vector<double>& grid, const std::vector<double>& vals,
                    bool maximize) {
  std::size_t best = 0;
  bool found = false;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!std::isfinite(vals[i])) continue;
    if (!found || (maximize ? vals[i] > vals[best] : vals[i] < vals[best])) {
      best = i;
      found = true;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << param << ',' << format_num(grid[i]) << ',' << format_num(vals[i]) << ','
        << ((found && i == best) ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_analytic(const CommonOpts& opts, const std::string& sweep_spec,
                 const std::string& objective_name) {
  const ConfigHandle cfg = opts.make_config();
  Emitter em(opts, cfg, "analytic");

  if (sweep_spec.empty()) {
    rcx_analytic_result res;
    check(rcx_analytic_eval(cfg.ptr, &res));
    auto out = em.open_csv("analytic.csv", "l_k,n_k,p_d,n_d,delay,beta_db,beta_sf");
    out << format_num(res.avg_line_length) << ',' << format_num(res.expected_targets) << ','
        << format_num(res.detection_prob) << ',' << format_num(res.expected_detections) << ','
        << format_num(res.mean_local_delay) << ',' << cfg.get("thresholds.beta_db") << ','
        << cfg.get("thresholds.beta_sf") << '\n';

    const int n = static_cast<int>(cfg.get_num("run.n_moments"));
    std::vector<double> m(n);
    check(rcx_moments(cfg.ptr, n, m.data()));
    auto mout = em.open_csv("moments.csv", "b,m_b");
    for (int b = 1; b <= n; ++b) mout << b << ',' << format_num(m[b - 1]) << '\n';
  } else {
    const auto eq = sweep_spec.find('=');
    if (eq == std::string::npos)
      throw CliError{kExitUsage, "--sweep expects param=lo:hi:count"};
    const std::string pname = sweep_spec.substr(0, eq);
    if (!kParams.count(pname)) throw CliError{kExitUsage, "unknown sweep parameter " + pname};
    if (!kObjectives.count(objective_name))
      throw CliError{kExitUsage, "unknown objective " + objective_name};
    const std::vector<double> grid = parse_grid(sweep_spec.substr(eq + 1));
    std::vector<double> vals(grid.size());
    check(rcx_sweep(cfg.ptr, kObjectives.at(objective_name), kParams.at(pname), grid.data(),
                    static_cast<int>(grid.size()), vals.data()));
    auto out = em.open_csv("sweep.csv", "param,value,objective,is_opt");
    emit_sweep_csv(out, pname, grid, vals, objective_name != "delay");
  }
  em.finish();
  return kExitOk;
}

int run_simulate(const CommonOpts& opts, bool dump_realization) {
  const ConfigHandle cfg = opts.make_config();
  Emitter em(opts, cfg, "simulate");

  const std::vector<double> grid = t_grid_of(cfg);
  std::vector<double> F(grid.size());
  rcx_sim_stats stats;
  check(rcx_simulate_md(cfg.ptr, grid.data(), static_cast<int>(grid.size()), F.data(), &stats));
  {
    auto out = em.open_csv("empirical_md.csv", "t_sf,F,method,beta_sf,n_moments");
    write_curve(out, grid, F, "empirical", cfg.get_num("thresholds.beta_sf"), 0);
  }

  const int n = static_cast<int>(cfg.get_num("run.n_moments"));
  std::vector<double> mean(n), se(n);
  check(rcx_simulate_moments(cfg.ptr, n, mean.data(), se.data()));
  {
    auto out = em.open_csv("sim_stats.csv", "quantity,estimate,se");
    out << "p_d," << format_num(stats.p_d) << ',' << format_num(stats.p_d_se) << '\n';
    for (int b = 1; b <= n; ++b)
      out << "m_" << b << ',' << format_num(mean[b - 1]) << ',' << format_num(se[b - 1]) << '\n';
  }

  if (dump_realization) {
    rcx_realization* real =
        rcx_realization_sample(cfg.ptr, static_cast<std::uint64_t>(cfg.get_num("run.seed")));
    if (!real) throw CliError{kExitNumeric, rcx_last_error()};
    auto lout = em.open_csv("realization_lines.csv", "line,theta,r");
    for (int i = 0; i < rcx_realization_line_count(real); ++i) {
      double theta, r;
      check(rcx_realization_line(real, i, &theta, &r));
      lout << i << ',' << format_num(theta) << ',' << format_num(r) << '\n';
    }
    auto pout = em.open_csv("realization_points.csv", "line,x,y,v,w,active");
    for (int i = 0; i < rcx_realization_point_count(real); ++i) {
      int line, active;
      double x, y, v, w;
      check(rcx_realization_point(real, i, &line, &x, &y, &v, &w, &active));
      pout << line << ',' << format_num(x) << ',' << format_num(y) << ',' << format_num(v) << ','
           << format_num(w) << ',' << active << '\n';
    }
    rcx_realization_destroy(real);
  }
  em.finish();
  return kExitOk;
}

std::vector<double> load_moments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot open moments file: " + path};
  std::vector<double> m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-')) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    m.push_back(std::stod(line.substr(comma + 1)));
  }
  if (m.size() < 2) throw CliError{kExitUsage, "moments file needs at least 2 rows: " + path};
  return m;
}

int run_metadist(const CommonOpts& opts, bool with_gp, const std::string& moments_file,
                 const std::string& beta_sweep, const std::string& levels_csv) {
  const ConfigHandle cfg = opts.make_config();
  Emitter em(opts, cfg, "metadist");
  const std::vector<double> grid = t_grid_of(cfg);
  const double beta_sf = cfg.get_num("thresholds.beta_sf");
  const int n = static_cast<int>(cfg.get_num("run.n_moments"));

  if (!beta_sweep.empty()) {
    // Percentile report: reliability at the requested levels across beta.
    std::vector<double> levels;
    std::stringstream ss(levels_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) levels.push_back(std::stod(tok));
    if (levels.empty()) levels = {0.1, 0.5};
    const std::vector<double> betas = parse_grid(beta_sweep);
    auto out = em.open_csv("percentiles.csv", "beta_db,beta_sf,level,t_sf");
    for (double beta_db : betas) {
      ConfigHandle c = cfg;
      const double bl = std::pow(10.0, beta_db / 10.0);
      c.set("thresholds.beta_db", beta_db);
      c.set("thresholds.beta_sf", bl / (1.0 + bl));
      std::vector<double> m(n);
      check(rcx_moments(c.ptr, n, m.data()));
      std::vector<double> F(grid.size());
      check(rcx_cm_reconstruct(m.data(), n, grid.data(), static_cast<int>(grid.size()),
                               F.data()));
      for (double level : levels) {
        double t;
        check(rcx_percentile_reliability(grid.data(), F.data(), static_cast<int>(grid.size()),
                                         level, &t));
        out << format_num(beta_db) << ',' << format_num(bl / (1.0 + bl)) << ','
            << format_num(level) << ',' << format_num(t) << '\n';
      }
    }
    em.finish();
    return kExitOk;
  }

  std::vector<double> moments;
  if (!moments_file.empty()) {
    moments = load_moments_file(moments_file);
  } else {
    moments.resize(n);
    check(rcx_moments(cfg.ptr, n, moments.data()));
  }

  auto curves = em.open_csv("curves.csv", "t_sf,F,method,beta_sf,n_moments");
  std::vector<double> cmF(grid.size());
  check(rcx_cm_reconstruct(moments.data(), static_cast<int>(moments.size()), grid.data(),
                           static_cast<int>(grid.size()), cmF.data()));
  write_curve(curves, grid, cmF, "cm", beta_sf, static_cast<int>(moments.size()));

  std::vector<double> empF(grid.size());
  rcx_sim_stats stats;
  check(rcx_simulate_md(cfg.ptr, grid.data(), static_cast<int>(grid.size()), empF.data(),
                        &stats));
  write_curve(curves, grid, empF, "empirical", beta_sf, 0);

  std::vector<double> gpF;
  if (with_gp) {
    gpF.resize(grid.size());
    double tail = 0.0;
    check(rcx_gp_reconstruct(cfg.ptr, grid.data(), static_cast<int>(grid.size()), gpF.data(),
                             &tail));
    write_curve(curves, grid, gpF, "gp", beta_sf, 0);
    std::cerr << "gp truncation tail estimate: " << tail << "\n";
  }

  // K-S distance of the CM reconstruction against the references as the
  // moment count grows.
  auto ks = em.open_csv("ks.csv", "n_moments,ks_cm_empirical,ks_cm_gp");
  for (int k = 2; k <= static_cast<int>(moments.size()); ++k) {
    std::vector<double> F(grid.size());
    check(rcx_cm_reconstruct(moments.data(), k, grid.data(), static_cast<int>(grid.size()),
                             F.data()));
    const double d_emp =
        rcx_ks_distance(grid.data(), F.data(), static_cast<int>(grid.size()), grid.data(),
                        empF.data(), static_cast<int>(grid.size()));
    double d_gp = std::numeric_limits<double>::quiet_NaN();
    if (with_gp)
      d_gp = rcx_ks_distance(grid.data(), F.data(), static_cast<int>(grid.size()), grid.data(),
                             gpF.data(), static_cast<int>(grid.size()));
    ks << k << ',' << format_num(d_emp) << ',' << format_num(d_gp) << '\n';
  }
  em.finish();
  return kExitOk;
}

int run_optimize(const CommonOpts& opts, const std::string& mode, const std::string& sweep_spec,
                 const std::string& objective_name, const std::string& range_spec) {
  const ConfigHandle cfg = opts.make_config();
  Emitter em(opts, cfg, "optimize");

  if (mode == "beamwidth" || mode == "txprob") {
    double lo = mode == "beamwidth" ? 2.0 : 0.02;
    double hi = mode == "beamwidth" ? 90.0 : 1.0;
    if (!range_spec.empty()) {
      const std::vector<double> r = parse_grid(range_spec);
      lo = r.front();
      hi = r.back();
    }
    rcx_opt_result res;
    check(mode == "beamwidth" ? rcx_optimal_beamwidth(cfg.ptr, lo, hi, &res)
                              : rcx_optimal_tx_prob(cfg.ptr, lo, hi, &res));
    auto out = em.open_csv("optimum.csv", "parameter,argopt,value,multimodal");
    out << (mode == "beamwidth" ? "omega" : "p") << ',' << format_num(res.argopt) << ','
        << format_num(res.value) << ',' << res.multimodal << '\n';
  } else if (mode == "sweep") {
    const auto eq = sweep_spec.find('=');
    if (eq == std::string::npos)
      throw CliError{kExitUsage, "--sweep expects param=lo:hi:count"};
    const std::string pname = sweep_spec.substr(0, eq);
    if (!kParams.count(pname)) throw CliError{kExitUsage, "unknown sweep parameter " + pname};
    if (!kObjectives.count(objective_name))
      throw CliError{kExitUsage, "unknown objective " + objective_name};
    const std::vector<double> grid = parse_grid(sweep_spec.substr(eq + 1));
    std::vector<double> vals(grid.size());
    check(rcx_sweep(cfg.ptr, kObjectives.at(objective_name), kParams.at(pname), grid.data(),
                    static_cast<int>(grid.size()), vals.data()));
    auto out = em.open_csv("sweep.csv", "param,value,objective,is_opt");
    emit_sweep_csv(out, pname, grid, vals, objective_name != "delay");
  } else {
    throw CliError{kExitUsage, "optimize mode must be beamwidth, txprob or sweep"};
  }
  em.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double value, reference, tolerance;
  bool pass;
  std::string note;
};

int run_validate(const CommonOpts& opts, const std::string& moments_file, bool reduced) {
  ConfigHandle cfg = opts.make_config();
  if (reduced) cfg.set("run.realizations", 2000.0);
  Emitter em(opts, cfg, "validate");
  std::vector<Check> checks;
  auto add = [&](const std::string& name, double value, double reference, double tol,
                 const std::string& note = "") {
    checks.push_back({name, value, reference, tol, std::abs(value - reference) <= tol, note});
  };

  const double n_real = cfg.get_num("run.realizations");
  const double widen = std::max(1.0, std::sqrt(1e5 / std::max(1.0, n_real)));
  const std::string budget_note =
      widen > 1.0 ? "reduced realization budget; tolerances widened by sqrt(1e5/n)" : "";

  if (!moments_file.empty()) {
    // Externally supplied moment sequence: only the validity invariants run.
    const std::vector<double> m = load_moments_file(moments_file);
    std::vector<double> F(64);
    std::vector<double> grid(64);
    for (int i = 0; i < 64; ++i) grid[i] = i / 63.0;
    const rcx_status st = rcx_cm_reconstruct(m.data(), static_cast<int>(m.size()), grid.data(),
                                             64, F.data());
    Check c;
    c.name = "moment_sequence_validity";
    c.value = st == RCX_OK ? 1.0 : 0.0;
    c.reference = 1.0;
    c.tolerance = 0.0;
    c.pass = st == RCX_OK;
    c.note = st == RCX_OK ? "" : rcx_last_error();
    checks.push_back(c);
  } else {
    // Analytic vs Monte Carlo on the configured scenario.
    rcx_analytic_result ana;
    check(rcx_analytic_eval(cfg.ptr, &ana));

    rcx_sim_stats stats;
    const std::vector<double> grid = t_grid_of(cfg);
    std::vector<double> empF(grid.size());
    const double beta_db = cfg.get_num("thresholds.beta_db");
    const double bl = std::pow(10.0, beta_db / 10.0);
    ConfigHandle at_beta = cfg;
    at_beta.set("thresholds.beta_sf", bl / (1.0 + bl));
    check(rcx_simulate_md(at_beta.ptr, grid.data(), static_cast<int>(grid.size()), empF.data(),
                          &stats));
    add("detection_probability_vs_mc", ana.detection_prob, stats.p_d,
        0.01 * widen + 3.0 * stats.p_d_se, "M_1 at beta/(1+beta) vs empirical mean");

    // moment sequence validity of the analytic moments at the configured
    // beta_sf
    const int nm = std::min(12, static_cast<int>(cfg.get_num("run.n_moments")));
    std::vector<double> m(nm);
    check(rcx_moments(cfg.ptr, nm, m.data()));
    std::vector<double> cmF(grid.size());
    const rcx_status stv = rcx_cm_reconstruct(m.data(), nm, grid.data(),
                                              static_cast<int>(grid.size()), cmF.data());
    Check cv;
    cv.name = "moment_sequence_validity";
    cv.value = stv == RCX_OK ? 1.0 : 0.0;
    cv.reference = 1.0;
    cv.tolerance = 0.0;
    cv.pass = stv == RCX_OK;
    cv.note = stv == RCX_OK ? "" : rcx_last_error();
    checks.push_back(cv);

    // CM reconstruction vs the empirical meta-distribution at beta_sf
    if (stv == RCX_OK) {
      std::vector<double> empsfF(grid.size());
      rcx_sim_stats s2;
      check(rcx_simulate_md(cfg.ptr, grid.data(), static_cast<int>(grid.size()), empsfF.data(),
                            &s2));
      const double ks =
          rcx_ks_distance(grid.data(), cmF.data(), static_cast<int>(grid.size()), grid.data(),
                          empsfF.data(), static_cast<int>(grid.size()));
      add("cm_vs_empirical_ks", ks, 0.0, 0.015 * widen, "K-S distance");
    }

    // mean local delay vs Monte Carlo, at p = 0.5 where it is finite
    ConfigHandle dcfg = cfg;
    dcfg.set("radio.tx_prob", 0.5);
    dcfg.set("thresholds.beta_sf", bl / (1.0 + bl));
    rcx_analytic_result dana;
    check(rcx_analytic_eval(dcfg.ptr, &dana));
    if (std::isfinite(dana.mean_local_delay)) {
      double m_neg1, m_neg1_se;
      check(rcx_simulate_moment_order(dcfg.ptr, -1.0, &m_neg1, &m_neg1_se));
      const double mc_delay = m_neg1 / 0.5;
      add("mean_local_delay_vs_mc", dana.mean_local_delay, mc_delay,
          0.05 * widen * mc_delay + 3.0 * m_neg1_se / 0.5, "at p = 0.5");
    }

    // Limit identities
    ConfigHandle empty = cfg;
    empty.set("network.lambda", 0.0);
    empty.set("network.lambda_l", 0.0);
    rcx_analytic_result eres;
    check(rcx_analytic_eval(empty.ptr, &eres));
    add("empty_network_p_d", eres.detection_prob, 1.0, 1e-9);
    add("empty_network_delay", eres.mean_local_delay, 1.0 / cfg.get_num("radio.tx_prob"),
        1e-9);

    ConfigHandle scaled = cfg;
    scaled.set("radio.p_dbm", cfg.get_num("radio.p_dbm") + 13.0);
    scaled.set("radio.g_t_dbi", cfg.get_num("radio.g_t_dbi") + 7.0);
    scaled.set("radio.f_c_hz", cfg.get_num("radio.f_c_hz") * 2.0);
    rcx_analytic_result sres;
    check(rcx_analytic_eval(scaled.ptr, &sres));
    add("power_gain_invariance", sres.detection_prob, ana.detection_prob,
        1e-12 * std::abs(ana.detection_prob), "p_D independent of P, G, f_c");
  }

  bool all = true;
  for (const Check& c : checks) all = all && c.pass;

  json report;
  report["schema"] = "v1";
  report["pass"] = all;
  if (!budget_note.empty()) report["budget_note"] = budget_note;
  report["checks"] = json::array();
  for (const Check& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["value"] = c.value;
    jc["reference"] = c.reference;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    if (!c.note.empty()) jc["note"] = c.note;
    report["checks"].push_back(jc);
    std::cout << (c.pass ? "PASS" : "FAIL") << ": " << c.name << " value=" << c.value
              << " ref=" << c.reference << " tol=" << c.tolerance
              << (c.note.empty() ? "" : (" (" + c.note + ")")) << "\n";
  }
  {
    std::ofstream out(em.dir() / "validate_report.json");
    out << report.dump(2) << '\n';
    em.note("validate_report.json");
  }
  em.finish();
  if (!all) {
    for (const Check& c : checks)
      if (!c.pass) std::cerr << "validation failed: " << c.name << " " << c.note << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run_dump_realization(const CommonOpts& opts) {
  const ConfigHandle cfg = opts.make_config();
  Emitter em(opts, cfg, "dump-realization");
  rcx_realization* real =
      rcx_realization_sample(cfg.ptr, static_cast<std::uint64_t>(cfg.get_num("run.seed")));
  if (!real) throw CliError{kExitNumeric, rcx_last_error()};
  auto lout = em.open_csv("realization_lines.csv", "line,theta,r");
  for (int i = 0; i < rcx_realization_line_count(real); ++i) {
    double theta, r;
    check(rcx_realization_line(real, i, &theta, &r));
    lout << i << ',' << format_num(theta) << ',' << format_num(r) << '\n';
  }
  auto pout = em.open_csv("realization_points.csv", "line,x,y,v,w,active");
  for (int i = 0; i < rcx_realization_point_count(real); ++i) {
    int line, active;
    double x, y, v, w;
    check(rcx_realization_point(real, i, &line, &x, &y, &v, &w, &active));
    pout << line << ',' << format_num(x) << ',' << format_num(y) << ',' << format_num(v) << ','
         << format_num(w) << ',' << active << '\n';
  }
  rcx_realization_destroy(real);
  em.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// figure presets: named config deltas plus a recipe
// ---------------------------------------------------------------------------

struct Preset {
  std::string description;
  std::function<int(const CommonOpts&)> run;
};

int preset_sweep(const CommonOpts& opts, const std::vector<std::string>& sets,
                 const std::string& objective, const std::string& param,
                 const std::string& grid_spec, const std::string& file_tag) {
  CommonOpts o = opts;
  for (const auto& s : sets) o.sets.push_back(s);
  const ConfigHandle cfg = o.make_config();
  Emitter em(o, cfg, "optimize preset " + file_tag);
  const std::vector<double> grid = parse_grid(grid_spec);
  std::vector<double> vals(grid.size());
  check(rcx_sweep(cfg.ptr, kObjectives.at(objective), kParams.at(param), grid.data(),
                  static_cast<int>(grid.size()), vals.data()));
  auto out = em.open_csv(file_tag + ".csv", "param,value,objective,is_opt");
  emit_sweep_csv(out, param, grid, vals, objective != "delay");
  em.finish();
  return kExitOk;
}

// Optimal beamwidth as a function of another parameter.
int preset_omega_star(const CommonOpts& opts, const std::vector<std::string>& sets,
                      const std::string& param_key, const std::vector<double>& grid,
                      const std::string& file_tag, double lo_deg = 2.0, double hi_deg = 90.0) {
  CommonOpts o = opts;
  for (const auto& s : sets) o.sets.push_back(s);
  const ConfigHandle base = o.make_config();
  Emitter em(o, base, "optimize preset " + file_tag);
  auto out = em.open_csv(file_tag + ".csv", "param,value,objective,is_opt");
  for (double v : grid) {
    ConfigHandle cfg = base;
    cfg.set(param_key, v);
    rcx_opt_result res;
    check(rcx_optimal_beamwidth(cfg.ptr, lo_deg, hi_deg, &res));
    out << param_key << ',' << format_num(v) << ',' << format_num(res.argopt) << ",1\n";
  }
  em.finish();
  return kExitOk;
}

int preset_p_star(const CommonOpts& opts, const std::vector<std::string>& sets,
                  const std::string& param_key, const std::vector<double>& grid,
                  const std::string& file_tag) {
  CommonOpts o = opts;
  for (const auto& s : sets) o.sets.push_back(s);
  const ConfigHandle base = o.make_config();
  Emitter em(o, base, "optimize preset " + file_tag);
  auto out = em.open_csv(file_tag + ".csv", "param,value,objective,is_opt");
  for (double v : grid) {
    ConfigHandle cfg = base;
    cfg.set(param_key, v);
    rcx_opt_result res;
    check(rcx_optimal_tx_prob(cfg.ptr, 0.02, 0.999, &res));
    out << param_key << ',' << format_num(v) << ',' << format_num(res.argopt) << ",1\n";
  }
  em.finish();
  return kExitOk;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return g;
}

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"fig1a",
       {"PLCP realization scatter (lambda_L = lambda = 0.005)",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("network.lambda_l=0.005");
          c.sets.push_back("network.lambda=0.005");
          return run_dump_realization(c);
        }}},
      {"fig1b",
       {"BLCP realization scatter (n_B = 50, lambda = 0.005)",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("network.type=blcp");
          c.sets.push_back("network.n_b=50");
          c.sets.push_back("network.lambda=0.005");
          return run_dump_realization(c);
        }}},
      {"fig3a",
       {"PLCP successful detections vs beamwidth",
        [](const CommonOpts& o) {
          return preset_sweep(o, {}, "n_d", "omega", "2:60:30", "fig3a");
        }}},
      {"fig3d",
       {"BLCP successful detections vs beamwidth (r_0 = 0)",
        [](const CommonOpts& o) {
          return preset_sweep(o, {"network.type=blcp"}, "n_d", "omega", "2:60:30", "fig3d");
        }}},
      {"fig4b",
       {"optimal beamwidth vs lambda for three street densities",
        [](const CommonOpts& o) {
          int rc = 0;
          for (double ll : {0.01, 0.05, 0.1}) {
            CommonOpts c = o;
            c.out_dir = (fs::path(o.out_dir) / ("lambda_l_" + format_num(ll))).string();
            rc |= preset_omega_star(c, {"network.lambda_l=" + format_num(ll)}, "network.lambda",
                                    linspace(0.005, 0.05, 10), "fig4b");
          }
          return rc;
        }}},
      {"fig4c",
       {"optimal beamwidth vs target range",
        [](const CommonOpts& o) {
          int rc = 0;
          rc |= preset_omega_star(o, {"network.lambda_l=0.05", "network.lambda=0.01"},
                                  "geometry.target_range", linspace(5.0, 50.0, 10), "fig4c_a");
          CommonOpts c = o;
          rc |= preset_omega_star(c, {"network.lambda_l=0.1", "network.lambda=0.03"},
                                  "geometry.target_range", linspace(5.0, 50.0, 10), "fig4c_b");
          return rc;
        }}},
      {"fig5a",
       {"SF meta-distribution: CM vs GP vs empirical (beta_sf = 10/11)",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("thresholds.beta_sf=0.9090909090909091");
          c.sets.push_back("network.lambda_l=0.01");
          c.sets.push_back("network.lambda=0.01");
          c.sets.push_back("geometry.beamwidth_deg=15");
          c.sets.push_back("run.n_moments=10");
          return run_metadist(c, true, "", "", "");
        }}},
      {"fig5b",
       {"K-S distance vs moment count (beta_sf = 10/11)",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("thresholds.beta_sf=0.9090909090909091");
          c.sets.push_back("network.lambda_l=0.01");
          c.sets.push_back("network.lambda=0.01");
          c.sets.push_back("geometry.beamwidth_deg=15");
          c.sets.push_back("run.n_moments=21");
          return run_metadist(c, true, "", "", "");
        }}},
      {"fig6a",
       {"BLCP optimal beamwidth vs ego position",
        [](const CommonOpts& o) {
          return preset_omega_star(o, {"network.type=blcp"}, "network.r_0",
                                   linspace(0.0, 7500.0, 9), "fig6a");
        }}},
      {"fig7a",
       {"PLCP reliability percentiles vs beta",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("radio.tx_prob=1");
          c.sets.push_back("geometry.beamwidth_deg=15");
          return run_metadist(c, false, "", "-25:15:17", "0.1,0.5");
        }}},
      {"fig7b",
       {"BLCP reliability percentiles vs beta (r_0 = 0)",
        [](const CommonOpts& o) {
          CommonOpts c = o;
          c.sets.push_back("network.type=blcp");
          c.sets.push_back("radio.tx_prob=1");
          c.sets.push_back("geometry.beamwidth_deg=15");
          return run_metadist(c, false, "", "-25:15:17", "0.1,0.5");
        }}},
      {"fig8a",
       {"PLCP mean local delay vs transmit probability",
        [](const CommonOpts& o) {
          return preset_sweep(o, {}, "delay", "p", "0.05:0.95:19", "fig8a");
        }}},
      {"fig8b",
       {"PLCP optimal transmit probability vs beamwidth",
        [](const CommonOpts& o) {
          return preset_p_star(o, {}, "geometry.beamwidth_deg", linspace(5.0, 45.0, 9),
                               "fig8b");
        }}},
      {"fig8c",
       {"BLCP mean local delay vs transmit probability (r_0 = 0)",
        [](const CommonOpts& o) {
          return preset_sweep(o, {"network.type=blcp", "geometry.beamwidth_deg=15"}, "delay",
                              "p", "0.05:0.95:19", "fig8c");
        }}},
      {"fig8d",
       {"BLCP optimal transmit probability vs ego position",
        [](const CommonOpts& o) {
          return preset_p_star(o, {"network.type=blcp", "geometry.beamwidth_deg=15"},
                               "network.r_0", linspace(0.0, 7500.0, 9), "fig8d");
        }}},
  };
  return table;
}

int run_preset(const CommonOpts& opts, const std::string& name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::ostringstream msg;
    msg << "unknown preset \"" << name << "\"; available presets:\n";
    for (const auto& [k, v] : table) msg << "  " << k << " — " << v.description << "\n";
    throw CliError{kExitUsage, msg.str()};
  }
  return it->second.run(opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radarcox: PLCP/BLCP automotive radar network analysis"};
  app.require_subcommand(1);

  CommonOpts analytic_opts, simulate_opts, metadist_opts, optimize_opts, validate_opts,
      dump_opts;
  std::string sweep_spec, objective = "n_d", preset_name;
  bool dump_flag = false;

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form metrics and moments");
  analytic_opts.attach(analytic);
  analytic->add_option("--sweep", sweep_spec, "param=lo:hi:count sweep");
  analytic->add_option("--objective", objective, "n_d|p_d|delay|l_k|n_k|percentile");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo meta-distribution");
  simulate_opts.attach(simulate);
  simulate->add_flag("--dump-realization", dump_flag, "also write one realization as CSV");

  std::string md_moments_file, md_beta_sweep, md_levels = "0.1,0.5";
  bool md_gp = false;
  CLI::App* metadist = app.add_subcommand("metadist", "meta-distribution reconstruction");
  metadist_opts.attach(metadist);
  metadist->add_flag("--gp", md_gp, "also run the Gil-Pelaez inversion");
  metadist->add_option("--from-moments", md_moments_file, "read moments from CSV (b,m_b)");
  metadist->add_option("--beta-sweep", md_beta_sweep,
                       "lo:hi:count in dB; emit percentile reliability table");
  metadist->add_option("--levels", md_levels, "percentile levels for --beta-sweep");

  std::string opt_mode = "sweep", opt_range;
  CLI::App* optimize = app.add_subcommand("optimize", "parameter optimization and sweeps");
  optimize_opts.attach(optimize);
  optimize->add_option("--mode", opt_mode, "beamwidth|txprob|sweep");
  optimize->add_option("--sweep", sweep_spec, "param=lo:hi:count for mode=sweep");
  optimize->add_option("--objective", objective, "objective for mode=sweep");
  optimize->add_option("--range", opt_range, "lo:hi:2 search range for beamwidth/txprob");
  optimize->add_option("--preset", preset_name, "figure recipe; unknown name lists presets");

  std::string val_moments_file;
  bool val_reduced = false;
  CLI::App* validate = app.add_subcommand("validate", "analytic vs Monte Carlo harness");
  validate_opts.attach(validate);
  validate->add_option("--from-moments", val_moments_file,
                       "validate a moment sequence from CSV instead");
  validate->add_flag("--reduced-budget", val_reduced,
                     "fewer realizations, wider tolerances (noted in report)");

  CLI::App* dump = app.add_subcommand("dump-realization", "write one network draw as CSV");
  dump_opts.attach(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (analytic->parsed()) return run_analytic(analytic_opts, sweep_spec, objective);
    if (simulate->parsed()) return run_simulate(simulate_opts, dump_flag);
    if (metadist->parsed())
      return run_metadist(metadist_opts, md_gp, md_moments_file, md_beta_sweep, md_levels);
    if (optimize->parsed()) {
      if (!preset_name.empty()) return run_preset(optimize_opts, preset_name);
      return run_optimize(optimize_opts, opt_mode, sweep_spec, objective, opt_range);
    }
    if (validate->parsed()) return run_validate(validate_opts, val_moments_file, val_reduced);
    if (dump->parsed()) return run_dump_realization(dump_opts);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
