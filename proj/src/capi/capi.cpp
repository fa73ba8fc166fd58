#include "radarcox.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "analytic.hpp"
#include "config.hpp"
#include "cox.hpp"
#include "metadist.hpp"
#include "optimize.hpp"

using namespace radarcox;

namespace {

thread_local std::string g_last_error;

rcx_status fail(rcx_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
rcx_status guarded(Fn&& fn) {
  try {
    fn();
    return RCX_OK;
  } catch (const ConfigError& e) {
    return fail(RCX_ERR_INVALID, e.what());
  } catch (const QuadratureError& e) {
    return fail(RCX_ERR_NUMERIC, e.what());
  } catch (const std::domain_error& e) {
    return fail(RCX_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RCX_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(RCX_ERR_NUMERIC, e.what());
  }
}

const ExperimentConfig& cfg_of(const rcx_config* cfg) {
  return *reinterpret_cast<const ExperimentConfig*>(cfg);
}

struct RealizationBox {
  cox::Realization real;
  geom::SectorSpec sector;
};

}  // namespace

extern "C" {

const char* rcx_version(void) { return "0.1.0"; }

const char* rcx_strerror(rcx_status status) {
  switch (status) {
    case RCX_OK: return "ok";
    case RCX_ERR_INVALID: return "invalid argument or configuration";
    case RCX_ERR_NUMERIC: return "numerical failure";
    case RCX_ERR_IO: return "i/o failure";
    case RCX_ERR_DOMAIN: return "parameter outside domain";
  }
  return "unknown status";
}

const char* rcx_last_error(void) { return g_last_error.c_str(); }

rcx_config* rcx_config_create(void) { return reinterpret_cast<rcx_config*>(new ExperimentConfig); }

rcx_config* rcx_config_load(const char* json_path) {
  try {
    auto* c = new ExperimentConfig(ExperimentConfig::load(json_path));
    return reinterpret_cast<rcx_config*>(c);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

rcx_config* rcx_config_clone(const rcx_config* cfg) {
  if (!cfg) return nullptr;
  return reinterpret_cast<rcx_config*>(new ExperimentConfig(cfg_of(cfg)));
}

void rcx_config_destroy(rcx_config* cfg) { delete reinterpret_cast<ExperimentConfig*>(cfg); }

rcx_status rcx_config_set(rcx_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] { reinterpret_cast<ExperimentConfig*>(cfg)->set(key, value); });
}

rcx_status rcx_config_get(const rcx_config* cfg, const char* key, char* buf, size_t bufsize) {
  if (!cfg || !key || !buf || bufsize == 0) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const std::string v = cfg_of(cfg).get(key);
    std::strncpy(buf, v.c_str(), bufsize - 1);
    buf[bufsize - 1] = '\0';
  });
}

rcx_status rcx_config_validate(const rcx_config* cfg) {
  if (!cfg) return fail(RCX_ERR_INVALID, "null config");
  return guarded([&] { cfg_of(cfg).validate(); });
}

rcx_status rcx_config_save(const rcx_config* cfg, const char* json_path) {
  if (!cfg || !json_path) return fail(RCX_ERR_INVALID, "null argument");
  try {
    cfg_of(cfg).save(json_path);
    return RCX_OK;
  } catch (const std::exception& e) {
    return fail(RCX_ERR_IO, e.what());
  }
}

rcx_status rcx_config_json(const rcx_config* cfg, char* buf, size_t bufsize) {
  if (!cfg || !buf || bufsize == 0) return fail(RCX_ERR_INVALID, "null argument");
  const std::string j = cfg_of(cfg).to_json();
  std::strncpy(buf, j.c_str(), bufsize - 1);
  buf[bufsize - 1] = '\0';
  return j.size() + 1 <= bufsize ? RCX_OK : fail(RCX_ERR_INVALID, "buffer too small");
}

rcx_status rcx_analytic_eval(const rcx_config* cfg, rcx_analytic_result* out) {
  if (!cfg || !out) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    const auto opts = c.analytic_options();
    out->avg_line_length = analytic::avg_length(c.network, c.omega(), c.target_range, opts.quad);
    out->expected_targets = c.network.lambda * out->avg_line_length;
    out->detection_prob = analytic::detection_probability(c.network, c.radio, c.thresholds,
                                                          c.omega(), c.target_range, opts);
    out->expected_detections = out->expected_targets * out->detection_prob;
    out->mean_local_delay =
        analytic::mean_local_delay(c.network, c.radio, c.thresholds, c.omega(), c.target_range,
                                   opts);
  });
}

rcx_status rcx_moments(const rcx_config* cfg, int n, double* out) {
  if (!cfg || !out || n < 1) return fail(RCX_ERR_INVALID, "null argument or n < 1");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    analytic::MomentEvaluator ev(c.network, c.radio, c.omega(), c.target_range,
                                 c.analytic_options());
    const std::vector<double> m = ev.moments(c.thresholds.beta_sf, n);
    std::copy(m.begin(), m.end(), out);
  });
}

rcx_status rcx_moment_imag(const rcx_config* cfg, double u, double* out_re, double* out_im) {
  if (!cfg || !out_re || !out_im) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    analytic::MomentEvaluator ev(c.network, c.radio, c.omega(), c.target_range,
                                 c.analytic_options());
    const std::complex<double> m = ev.eval({0.0, u}, c.thresholds.beta_sf);
    *out_re = m.real();
    *out_im = m.imag();
  });
}

rcx_realization* rcx_realization_sample(const rcx_config* cfg, uint64_t seed) {
  if (!cfg) return nullptr;
  try {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    auto* box = new RealizationBox;
    box->sector = make_interference_sector(c.network, c.omega());
    box->real = cox::sample_realization(c.network, box->sector, c.radio, seed);
    return reinterpret_cast<rcx_realization*>(box);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

void rcx_realization_destroy(rcx_realization* real) {
  delete reinterpret_cast<RealizationBox*>(real);
}

int rcx_realization_line_count(const rcx_realization* real) {
  if (!real) return 0;
  return static_cast<int>(reinterpret_cast<const RealizationBox*>(real)->real.lines.size());
}

rcx_status rcx_realization_line(const rcx_realization* real, int index, double* theta,
                                double* r) {
  if (!real || !theta || !r) return fail(RCX_ERR_INVALID, "null argument");
  const auto& box = *reinterpret_cast<const RealizationBox*>(real);
  if (index < 0 || index >= static_cast<int>(box.real.lines.size()))
    return fail(RCX_ERR_INVALID, "line index out of range");
  *theta = box.real.lines[index].theta;
  *r = box.real.lines[index].r;
  return RCX_OK;
}

int rcx_realization_point_count(const rcx_realization* real) {
  if (!real) return 0;
  return static_cast<int>(reinterpret_cast<const RealizationBox*>(real)->real.interferers.size());
}

rcx_status rcx_realization_point(const rcx_realization* real, int index, int* line_index,
                                 double* x, double* y, double* v, double* w, int* active) {
  if (!real) return fail(RCX_ERR_INVALID, "null realization");
  const auto& box = *reinterpret_cast<const RealizationBox*>(real);
  if (index < 0 || index >= static_cast<int>(box.real.interferers.size()))
    return fail(RCX_ERR_INVALID, "point index out of range");
  const cox::Interferer& f = box.real.interferers[index];
  const geom::Vec2 pos = cox::interferer_position(
      box.real.lines[f.line_index], box.sector, box.real.intervals[f.line_index], f.v);
  if (line_index) *line_index = f.line_index;
  if (x) *x = pos.x;
  if (y) *y = pos.y;
  if (v) *v = f.v;
  if (w) *w = f.w;
  if (active) *active = f.active ? 1 : 0;
  return RCX_OK;
}

rcx_status rcx_simulate_md(const rcx_config* cfg, const double* t_grid, int grid_len,
                           double* out_F, rcx_sim_stats* stats) {
  if (!cfg || !t_grid || !out_F || grid_len < 1)
    return fail(RCX_ERR_INVALID, "null argument or empty grid");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    const geom::SectorSpec sector = make_interference_sector(c.network, c.omega());
    const std::vector<double> grid(t_grid, t_grid + grid_len);
    const cox::EmpiricalMd md =
        cox::empirical_md(c.network, sector, c.radio, c.thresholds.beta_sf, c.target_range,
                          c.run.realizations, c.run.seed, grid, c.run.threads);
    std::copy(md.curve.F.begin(), md.curve.F.end(), out_F);
    if (stats) {
      stats->p_d = md.p_d;
      stats->p_d_se = md.p_d_se;
      stats->realizations = c.run.realizations;
    }
  });
}

rcx_status rcx_simulate_moments(const rcx_config* cfg, int n, double* out_mean, double* out_se) {
  if (!cfg || !out_mean || !out_se || n < 1) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    const geom::SectorSpec sector = make_interference_sector(c.network, c.omega());
    const std::vector<double> grid{0.0, 1.0};
    const cox::EmpiricalMd md =
        cox::empirical_md(c.network, sector, c.radio, c.thresholds.beta_sf, c.target_range,
                          c.run.realizations, c.run.seed, grid, c.run.threads);
    for (int b = 1; b <= n; ++b)
      cox::sample_moment(md.samples, static_cast<double>(b), out_mean[b - 1], out_se[b - 1]);
  });
}

rcx_status rcx_simulate_moment_order(const rcx_config* cfg, double order, double* out_mean,
                                     double* out_se) {
  if (!cfg || !out_mean || !out_se) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    const geom::SectorSpec sector = make_interference_sector(c.network, c.omega());
    const std::vector<double> grid{0.0, 1.0};
    const cox::EmpiricalMd md =
        cox::empirical_md(c.network, sector, c.radio, c.thresholds.beta_sf, c.target_range,
                          c.run.realizations, c.run.seed, grid, c.run.threads);
    cox::sample_moment(md.samples, order, *out_mean, *out_se);
  });
}

rcx_status rcx_cm_reconstruct(const double* moments, int n, const double* t_grid, int grid_len,
                              double* out_F) {
  if (!moments || !t_grid || !out_F || n < 2 || grid_len < 1)
    return fail(RCX_ERR_INVALID, "need n >= 2 moments and a nonempty grid");
  return guarded([&] {
    metadist::MomentVector mv;
    mv.values.assign(moments, moments + n);
    const std::vector<double> grid(t_grid, t_grid + grid_len);
    const MetaDistCurve curve = metadist::cm_reconstruct(mv, grid);
    std::copy(curve.F.begin(), curve.F.end(), out_F);
  });
}

rcx_status rcx_gp_reconstruct(const rcx_config* cfg, const double* t_grid, int grid_len,
                              double* out_F, double* tail_estimate) {
  if (!cfg || !t_grid || !out_F || grid_len < 1) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    analytic::MomentEvaluator ev(c.network, c.radio, c.omega(), c.target_range,
                                 c.analytic_options());
    auto mju = [&](double u) { return ev.eval({0.0, u}, c.thresholds.beta_sf); };
    const std::vector<double> grid(t_grid, t_grid + grid_len);
    const MetaDistCurve curve =
        metadist::gp_invert(mju, grid, c.run.gp_u_max, c.quadrature(), tail_estimate);
    std::copy(curve.F.begin(), curve.F.end(), out_F);
  });
}

double rcx_ks_distance(const double* t_a, const double* f_a, int len_a, const double* t_b,
                       const double* f_b, int len_b) {
  if (!t_a || !f_a || !t_b || !f_b || len_a < 1 || len_b < 1)
    return std::numeric_limits<double>::quiet_NaN();
  MetaDistCurve a, b;
  a.t.assign(t_a, t_a + len_a);
  a.F.assign(f_a, f_a + len_a);
  b.t.assign(t_b, t_b + len_b);
  b.F.assign(f_b, f_b + len_b);
  return metadist::ks_distance(a, b);
}

rcx_status rcx_percentile_reliability(const double* t_grid, const double* f, int len,
                                      double level, double* out) {
  if (!t_grid || !f || !out || len < 2) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    MetaDistCurve c;
    c.t.assign(t_grid, t_grid + len);
    c.F.assign(f, f + len);
    *out = metadist::percentile_reliability(c, level);
  });
}

namespace {

double eval_objective(const ExperimentConfig& base, rcx_objective obj, rcx_parameter par,
                      double value) {
  ExperimentConfig c = base;
  switch (par) {
    case RCX_PAR_BEAMWIDTH_DEG: c.beamwidth_deg = value; break;
    case RCX_PAR_TX_PROB: c.radio.tx_prob = value; break;
    case RCX_PAR_LAMBDA: c.network.lambda = value; break;
    case RCX_PAR_LAMBDA_L: c.network.lambda_l = value; break;
    case RCX_PAR_TARGET_RANGE: c.target_range = value; break;
    case RCX_PAR_R0: c.network.r_0 = value; break;
    case RCX_PAR_BETA_DB: {
      c.thresholds.beta_db = value;
      const double bl = c.thresholds.beta_linear();
      c.thresholds.beta_sf = bl / (1.0 + bl);
      break;
    }
    case RCX_PAR_BETA_SF: c.thresholds.beta_sf = value; break;
    case RCX_PAR_NB: c.network.n_b = static_cast<int>(std::lround(value)); break;
  }
  c.validate();
  const auto opts = c.analytic_options();
  switch (obj) {
    case RCX_OBJ_EXPECTED_DETECTIONS:
      return analytic::expected_detections(c.network, c.radio, c.thresholds, c.omega(),
                                           c.target_range, opts);
    case RCX_OBJ_DETECTION_PROB:
      return analytic::detection_probability(c.network, c.radio, c.thresholds, c.omega(),
                                             c.target_range, opts);
    case RCX_OBJ_MEAN_LOCAL_DELAY:
      return analytic::mean_local_delay(c.network, c.radio, c.thresholds, c.omega(),
                                        c.target_range, opts);
    case RCX_OBJ_AVG_LINE_LENGTH:
      return analytic::avg_length(c.network, c.omega(), c.target_range, opts.quad);
    case RCX_OBJ_EXPECTED_TARGETS:
      return analytic::expected_targets(c.network, c.omega(), c.target_range, opts.quad);
    case RCX_OBJ_PERCENTILE_RELIABILITY: {
      analytic::MomentEvaluator ev(c.network, c.radio, c.omega(), c.target_range, opts);
      metadist::MomentVector mv;
      mv.beta_sf = c.thresholds.beta_sf;
      mv.values = ev.moments(c.thresholds.beta_sf, c.run.n_moments);
      const MetaDistCurve curve =
          metadist::cm_reconstruct(mv, default_t_grid(c.run.t_grid_size));
      return metadist::percentile_reliability(curve, c.percentile_level);
    }
  }
  throw std::invalid_argument("unknown objective");
}

}  // namespace

rcx_status rcx_sweep(const rcx_config* cfg, rcx_objective objective, rcx_parameter parameter,
                     const double* grid, int len, double* out) {
  if (!cfg || !grid || !out || len < 1) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    for (int i = 0; i < len; ++i) out[i] = eval_objective(c, objective, parameter, grid[i]);
  });
}

rcx_status rcx_optimal_beamwidth(const rcx_config* cfg, double lo_deg, double hi_deg,
                                 rcx_opt_result* out) {
  if (!cfg || !out) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    auto f = [&](double deg) {
      return eval_objective(c, RCX_OBJ_EXPECTED_DETECTIONS, RCX_PAR_BEAMWIDTH_DEG, deg);
    };
    const opt::SweepResult r = opt::optimize_scalar(f, "beamwidth_deg", lo_deg, hi_deg, true);
    out->argopt = r.opt_param;
    out->value = r.opt_value;
    out->multimodal = r.multimodal ? 1 : 0;
  });
}

rcx_status rcx_optimal_tx_prob(const rcx_config* cfg, double lo, double hi, rcx_opt_result* out) {
  if (!cfg || !out) return fail(RCX_ERR_INVALID, "null argument");
  return guarded([&] {
    const ExperimentConfig& c = cfg_of(cfg);
    c.validate();
    const opt::SweepResult r = opt::optimal_transmit_probability(
        c.network, c.radio, c.thresholds, c.omega(), c.target_range, lo, hi,
        c.analytic_options());
    out->argopt = r.opt_param;
    out->value = r.opt_value;
    out->multimodal = r.multimodal ? 1 : 0;
  });
}

}  // extern "C"
