#include "analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace radarcox::analytic {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

// ---------------------------------------------------------------------------
// Lemma-1 piecewise evaluation
// ---------------------------------------------------------------------------

// Case value at (theta, r); falls back to the exact clip for near-degenerate
// angles where u = r / sin(theta) is ill-conditioned.
double case_value_r(geom::ClipCase c, double theta, double r, double omega, double range) {
  const double st = std::sin(theta);
  if (std::abs(st) < 1e-6) {
    geom::SectorSpec s;
    s.boresight = {0.0, 1.0};
    s.half_beamwidth = omega;
    s.range = range;
    return geom::line_sector_length(geom::LineParams{theta, r}, s).total_length;
  }
  return geom::clip_case_value(c, theta, r / st, omega, range);
}

struct URange {
  geom::ClipCase c;
  double lo, hi;
  bool exact;  // evaluate by the exact clip instead of the case formula
};

// Per-theta u-ranges of the five stated cases, theta in (0, pi), plus the
// two remainder slivers the stated domains leave out: arc-arc chords whose
// boresight crossing lies beyond the arc (u > max(R, u2)) or behind the ego
// (u below the case-5 window). Those carry the exact-clip flag.
int case_ranges(double theta, double omega, double range, URange out[7]) {
  const double s = std::abs(std::sin(theta));
  const double k = std::abs(std::cos(theta)) / s;
  const double C = range * std::cos(omega);
  const double S = range * std::sin(omega);
  const double u1 = C - S * k;
  const double u2 = C + S * k;
  const double u_max = range / s;  // |r| < R support
  int n = 0;
  // case 1: one edge and the arc, boresight crossing inside [0, R]
  {
    const double lo = std::max(0.0, u1), hi = std::min(range, u2);
    if (hi > lo) out[n++] = {geom::ClipCase::P1, lo, hi, false};
  }
  // case 2: both edges
  if (u1 > 0.0) {
    const double hi = std::min(C, u1);
    if (hi > 0.0) out[n++] = {geom::ClipCase::P2, 0.0, hi, false};
  }
  // case 3: chord through the arc only
  {
    const double lo = std::max(C, u2);
    if (range > lo) out[n++] = {geom::ClipCase::P3, lo, range, false};
  }
  // case 4: crossing ahead of the sector
  if (u2 > range && u2 > 0.0) out[n++] = {geom::ClipCase::P4, range, std::min(u2, u_max), false};
  // case 5: crossing behind the ego
  if (u1 < 0.0) out[n++] = {geom::ClipCase::P5, std::max(u1, -u_max), 0.0, false};
  // remainder slivers outside the stated domains
  {
    const double lo = std::max(range, u2);
    if (u_max > lo) out[n++] = {geom::ClipCase::P3, lo, u_max, true};
  }
  {
    const double hi = std::min(0.0, u1);
    if (hi > -u_max) out[n++] = {geom::ClipCase::P3, -u_max, hi, true};
  }
  return n;
}

// ---------------------------------------------------------------------------
// Theorem-2 helpers
// ---------------------------------------------------------------------------

struct BlcpGeom {
  double omega, R, r_g, r_0;
  int n_b;
  double m() const { return 1.0 / std::tan(omega); }
  double y_b() const { return R * std::sin(omega); }
  double rho_in() const { return n_b / (2.0 * r_g); }
  double rho_out(double rr) const { return (n_b / (kPi * r_g)) * std::asin(clamp01(r_g / rr)); }
};

double out_strip(const BlcpGeom& g, double x, double ylo, double yhi, const QuadratureSpec& q) {
  if (yhi <= ylo) return 0.0;
  return integrate([&](double y) { return g.rho_out(std::hypot(x, y)); }, ylo, yhi, q).value;
}

// 2 * integral_0^y sqrt(rad^2 - x^2) dx
double seg(double rad, double y) {
  y = std::min(y, rad);
  return rad * rad * std::asin(clamp01(y / rad)) + y * std::sqrt(std::max(0.0, rad * rad - y * y));
}

}  // namespace

double blp_line_density(double r, int n_b, double r_g) {
  if (r < 0.0) throw std::invalid_argument("blp_line_density: r must be >= 0");
  if (r <= r_g) return n_b / (2.0 * r_g);
  return (n_b / (kPi * r_g)) * std::asin(r_g / r);
}

double avg_length_plcp(double omega, double target_range, double lambda_l,
                       const QuadratureSpec& quad) {
  const double R = target_range;
  const QuadratureSpec inner = quad.tightened(0.1);
  geom::SectorSpec sector;
  sector.boresight = {0.0, 1.0};
  sector.half_beamwidth = omega;
  sector.range = R;
  auto per_theta = [&](double theta) {
    URange ranges[7];
    const int n = case_ranges(theta, omega, R, ranges);
    const double s = std::sin(theta);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const URange& ur = ranges[i];
      if (ur.exact) {
        sum += integrate([&](double u) {
                 return geom::line_sector_length({theta, u * s}, sector).total_length;
               }, ur.lo, ur.hi, inner).value;
      } else {
        sum += integrate([&](double u) { return case_value_r(ur.c, theta, u * s, omega, R); },
                         ur.lo, ur.hi, inner).value;
      }
    }
    return sum * s;  // dr = sin(theta) du
  };
  const double I = integrate_checked(per_theta, 0.0, kPi, quad.presplitted(8));
  return lambda_l * I + R;  // l_0 = sector range
}

double avg_length_plcp_direct(double omega, double target_range, double lambda_l,
                              const QuadratureSpec& quad) {
  const double R = target_range;
  geom::SectorSpec s;
  s.boresight = {0.0, 1.0};
  s.half_beamwidth = omega;
  s.range = R;
  // the r-support narrows to ~2 R sin(omega) for steep lines; presplit so it
  // cannot hide between the nodes of one panel
  const QuadratureSpec inner = quad.tightened(0.1).presplitted(32);
  auto per_theta = [&](double theta) {
    return integrate([&](double r) {
             return geom::line_sector_length(geom::LineParams{theta, r}, s).total_length;
           }, -R, R, inner).value;
  };
  const double I = integrate_checked(per_theta, 0.0, kPi, quad.presplitted(8));
  return lambda_l * I + R;
}

double avg_length_blcp_direct(double omega, double target_range, int n_b, double r_g, double r_0,
                              const QuadratureSpec& quad) {
  BlcpGeom g{omega, target_range, r_g, r_0, n_b};
  const double m = g.m(), yb = g.y_b();
  const QuadratureSpec inner = quad.tightened(0.1);
  auto slice = [&](double x) {
    const double ylo = m * x + r_0;
    const double yhi = std::sqrt(std::max(0.0, g.R * g.R - x * x)) + r_0;
    if (yhi <= ylo) return 0.0;
    double val = 0.0;
    if (x <= r_g) {
      const double d = std::sqrt(std::max(0.0, r_g * r_g - x * x));
      val += g.rho_in() * std::max(0.0, std::min(yhi, d) - std::max(ylo, -d));
      val += out_strip(g, x, ylo, std::min(yhi, -d), inner);
      val += out_strip(g, x, std::max(ylo, d), yhi, inner);
    } else {
      val += out_strip(g, x, ylo, yhi, inner);
    }
    return val;
  };
  return 2.0 * integrate_checked(slice, 0.0, yb, quad);
}

namespace {

double blcp_branch(int branch, const BlcpGeom& g, const QuadratureSpec& quad) {
  const double R = g.R, r_g = g.r_g, r_0 = g.r_0;
  const double m = g.m(), yb = g.y_b();
  const double cin = g.n_b / (2.0 * r_g);
  const double cout = 2.0 * g.n_b / (kPi * r_g);
  const QuadratureSpec inner = quad.tightened(0.1);

  auto dbl = [&](double xlo, double xhi, auto ylo_f, auto yhi_f) {
    if (xhi <= xlo) return 0.0;
    return integrate_checked([&](double x) {
             const double ylo = ylo_f(x), yhi = yhi_f(x);
             if (yhi <= ylo) return 0.0;
             return integrate([&](double y) {
                      return std::asin(clamp01(r_g / std::hypot(x, y)));
                    }, ylo, yhi, inner).value;
           }, xlo, xhi, quad);
  };
  auto sector_arc = [&](double x) { return std::sqrt(std::max(0.0, R * R - x * x)) + r_0; };
  auto disk_arc = [&](double x) { return std::sqrt(std::max(0.0, r_g * r_g - x * x)); };
  auto edge = [&](double x) { return m * x + r_0; };

  switch (branch) {
    case 1:
      return cin * g.omega * R * R;
    case 2: {
      // the two arcs cross at x = y_a; the disk arc caps the sector beyond it
      const double rad =
          4.0 * r_g * r_g * r_0 * r_0 - std::pow(r_g * r_g + r_0 * r_0 - R * R, 2);
      const double ya = std::sqrt(std::max(0.0, rad)) / (2.0 * std::abs(r_0));
      const double closed =
          seg(r_g, ya) - 2.0 * r_0 * ya + seg(R, yb) - seg(R, ya) - m * yb * yb;
      return cin * closed + cout * dbl(0.0, ya, disk_arc, sector_arc);
    }
    case 3: {
      const double yc =
          (-m * r_0 + std::sqrt(std::max(0.0, r_g * r_g * (1.0 + m * m) - r_0 * r_0))) /
          (1.0 + m * m);
      const double closed = seg(r_g, yc) - m * yc * yc - 2.0 * r_0 * yc;
      return cin * closed +
             cout * (dbl(0.0, yc, disk_arc, sector_arc) + dbl(yc, yb, edge, sector_arc));
    }
    case 4:
      return cout * dbl(0.0, yb, edge, sector_arc);
    default:
      // Branches 5 and 6 (ego below the disk) via the direct density integral.
      return avg_length_blcp_direct(g.omega, R, g.n_b, r_g, r_0, quad);
  }
}

}  // namespace

double avg_length_blcp(double omega, double target_range, int n_b, double r_g, double r_0,
                       const QuadratureSpec& quad) {
  if (!(omega > 0.0) || !(omega < kPi / 2.0))
    throw std::invalid_argument("avg_length_blcp: omega must be in (0, pi/2)");
  if (!(target_range > 0.0) || !(r_g > 0.0) || n_b < 1)
    throw std::invalid_argument("avg_length_blcp: invalid parameters");
  if (target_range >= r_g)
    return avg_length_blcp_direct(omega, target_range, n_b, r_g, r_0, quad);

  BlcpGeom g{omega, target_range, r_g, r_0, n_b};
  const double yb = g.y_b();
  const double star = std::sqrt(std::max(0.0, r_g * r_g - yb * yb));
  struct Edge {
    double at;
    int below, above;
  };
  const Edge edges[] = {
      {-(r_g + target_range), 4, 6},
      {-star - target_range * std::cos(omega), 6, 5},
      {-r_g, 5, 1},
      {r_g - target_range, 1, 2},
      {star - target_range * std::cos(omega), 2, 3},
      {r_g, 3, 4},
  };
  int branch = 4;  // below the lowest boundary the sector is fully outside
  for (const Edge& e : edges) {
    const double tol = 1e-12 * std::max(1.0, std::abs(e.at));
    if (std::abs(r_0 - e.at) <= tol) {
      const double lo = blcp_branch(e.below, g, quad);
      const double hi = blcp_branch(e.above, g, quad);
      const double scale = std::max({std::abs(lo), std::abs(hi), 1e-30});
      if (std::abs(lo - hi) > 1e-4 * scale)
        throw std::runtime_error("avg_length_blcp: case branches disagree at a boundary");
      return 0.5 * (lo + hi);
    }
    if (r_0 > e.at) branch = e.above;
  }
  return blcp_branch(branch, g, quad);
}

double avg_length(const NetworkModel& model, double omega, double target_range,
                  const QuadratureSpec& quad) {
  model.validate();
  if (model.kind == NetworkModel::Kind::Plcp)
    return avg_length_plcp(omega, target_range, model.lambda_l, quad);
  return avg_length_blcp(omega, target_range, model.n_b, model.r_g, model.r_0, quad);
}

double expected_targets(const NetworkModel& model, double omega, double target_range,
                        const QuadratureSpec& quad) {
  if (model.lambda == 0.0) return 0.0;
  return model.lambda * avg_length(model, omega, target_range, quad);
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

namespace {

struct DivergedSignal {};

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }

// f(w)^b for real b, with fast paths for the orders the sweeps hammer.
struct RealPow {
  double b;
  bool one, minus_one;
  int ib;
  bool is_int;

  explicit RealPow(double order)
      : b(order),
        one(order == 1.0),
        minus_one(order == -1.0),
        ib(static_cast<int>(std::lround(order))),
        is_int(std::abs(order - std::lround(order)) < 1e-12 && std::abs(order) <= 64) {}

  double operator()(double base) const {
    if (one) return base;
    if (minus_one) return 1.0 / base;
    if (is_int) {
      int e = ib < 0 ? -ib : ib;
      double acc = 1.0, sq = base;
      while (e) {
        if (e & 1) acc *= sq;
        sq *= sq;
        e >>= 1;
      }
      return ib < 0 ? 1.0 / acc : acc;
    }
    return std::pow(base, b);
  }
};

struct CplxPow {
  std::complex<double> b;
  std::complex<double> operator()(double base) const { return std::exp(b * std::log(base)); }
};

template <typename T, typename Pow, typename IntervalAt>
T eval_core(const NetworkModel& model, const RadioParams& radio, const AnalyticOptions& opts,
            double target_range, const Pow& powb, double beta_sf, bool guard,
            const IntervalAt& interval_at) {
  const double bp = beta_sf_prime(beta_sf, radio.sigma_linear(), target_range, radio.alpha);
  const double p = radio.tx_prob;
  const double alpha = radio.alpha;
  const bool alpha2 = alpha == 2.0;
  const double lambda = model.lambda;
  const double rk = model.interference_range();
  const double cap = opts.divergence_cap;

  auto g = [&](double w) -> T {
    const double wa = alpha2 ? w * w : std::pow(w, alpha);
    const double base = p * wa / (wa + bp) + (1.0 - p);
    return T(1.0) - powb(base);
  };

  const QuadratureSpec mid = opts.quad.tightened(0.25).presplitted(8);
  const QuadratureSpec outer = opts.quad.presplitted(8);
  QuadratureSpec innermost = opts.quad.tightened(0.1);
  innermost.max_segments = 1024;

  const double own_lo = opts.own_street_from_target ? target_range : 0.0;
  const T I_own = integrate([&](double v) { return g(v); }, own_lo, rk, innermost).value;
  if (guard && -(lambda * real_part(I_own)) > cap) throw DivergedSignal{};

  auto inner_j = [&](double theta, double r) -> T {
    const geom::InterferingInterval& iv = interval_at(theta, r);
    if (iv.empty) return T{};
    T J = integrate([&](double v) { return g(iv.distance_at(v)); }, iv.a, iv.b, innermost).value;
    if (guard && -(lambda * real_part(J)) > cap) throw DivergedSignal{};
    return J;
  };

  if (model.kind == NetworkModel::Kind::Plcp) {
    auto theta_term = [&](double theta) -> T {
      return integrate([&](double r) -> T {
               const T J = inner_j(theta, r);
               return T(1.0) - std::exp(T(-lambda) * J);
             }, 0.0, rk, mid).value;
    };
    const T E2 = T(model.lambda_l) * integrate_checked(theta_term, 0.0, 2.0 * kPi, outer);
    return std::exp(T(-lambda) * I_own - E2);
  }

  // integrate the dip exp(-lambda J) - 1, which vanishes off the interfering
  // support; the n_B-th power amplifies any error of the line average A, so
  // the tolerance must act on the dip rather than on A ~ 1
  auto theta_term = [&](double theta) -> T {
    return integrate([&](double r) -> T {
             const T J = inner_j(theta, r);
             return std::exp(T(-lambda) * J) - T(1.0);
           }, 0.0, model.r_g, mid).value;
  };
  const T dip = integrate_checked(theta_term, 0.0, 2.0 * kPi, outer);
  const T A = T(1.0) + dip / (2.0 * kPi * model.r_g);
  const int e = opts.blcp_palm_exponent ? model.n_b - 1 : model.n_b;
  return std::pow(A, T(static_cast<double>(e))) * std::exp(T(-lambda) * I_own);
}

}  // namespace

MomentEvaluator::MomentEvaluator(const NetworkModel& model, const RadioParams& radio, double omega,
                                 double target_range, const AnalyticOptions& opts)
    : model_(model), radio_(radio), omega_(omega), target_range_(target_range), opts_(opts) {
  model_.validate();
  radio_.validate();
  if (!(target_range > 0.0)) throw std::invalid_argument("MomentEvaluator: R must be > 0");
  sector_ = make_interference_sector(model_, omega_);
}

const geom::InterferingInterval& MomentEvaluator::interval_at(double theta, double r) const {
  std::uint64_t tb, rb;
  std::memcpy(&tb, &theta, sizeof(tb));
  std::memcpy(&rb, &r, sizeof(rb));
  const std::uint64_t key = tb * 0x9E3779B97F4A7C15ULL ^ (rb + 0xD1B54A32D192ED03ULL);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_
             .emplace(key, geom::interfering_interval(sector_, geom::LineParams{theta, r},
                                                      model_.interference_range()))
             .first;
  }
  return it->second;
}

std::complex<double> MomentEvaluator::eval(std::complex<double> b, double beta_sf) const {
  if (b == std::complex<double>(0.0, 0.0) || radio_.tx_prob == 0.0) return {1.0, 0.0};
  CplxPow powb{b};
  auto ivat = [this](double t, double r) -> const geom::InterferingInterval& {
    return interval_at(t, r);
  };
  return eval_core<std::complex<double>>(model_, radio_, opts_, target_range_, powb, beta_sf,
                                         false, ivat);
}

double MomentEvaluator::eval_real(double b, double beta_sf) const {
  if (b == 0.0 || radio_.tx_prob == 0.0) return 1.0;
  RealPow powb(b);
  auto ivat = [this](double t, double r) -> const geom::InterferingInterval& {
    return interval_at(t, r);
  };
  // With p = 1 and the own-street integral starting at 0, negative moments
  // diverge outright: the integrand grows like v^{-alpha |b|} near the ego.
  if (b < 0.0 && radio_.tx_prob >= 1.0 && !opts_.own_street_from_target && model_.lambda > 0.0)
    return kInf;
  try {
    return eval_core<double>(model_, radio_, opts_, target_range_, powb, beta_sf, b < 0.0, ivat);
  } catch (const DivergedSignal&) {
    return kInf;
  }
}

std::vector<double> MomentEvaluator::moments(double beta_sf, int n) const {
  std::vector<double> out;
  out.reserve(n);
  for (int b = 1; b <= n; ++b) out.push_back(eval_real(static_cast<double>(b), beta_sf));
  return out;
}

double detection_probability(const NetworkModel& model, const RadioParams& radio,
                             const Thresholds& thr, double omega, double target_range,
                             const AnalyticOptions& opts) {
  MomentEvaluator ev(model, radio, omega, target_range, opts);
  return ev.eval_real(1.0, Thresholds::sf_from_sir(thr.beta_linear()));
}

double expected_detections(const NetworkModel& model, const RadioParams& radio,
                           const Thresholds& thr, double omega, double target_range,
                           const AnalyticOptions& opts) {
  if (model.lambda == 0.0) return 0.0;
  const double l = avg_length(model, omega, target_range, opts.quad);
  const double pd = detection_probability(model, radio, thr, omega, target_range, opts);
  return model.lambda * l * pd;
}

double mean_local_delay(const NetworkModel& model, const RadioParams& radio, const Thresholds& thr,
                        double omega, double target_range, const AnalyticOptions& opts) {
  MomentEvaluator ev(model, radio, omega, target_range, opts);
  const double m = ev.eval_real(-1.0, Thresholds::sf_from_sir(thr.beta_linear()));
  return m / radio.tx_prob;
}

}  // namespace radarcox::analytic
