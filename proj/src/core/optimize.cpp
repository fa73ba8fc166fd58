#include "optimize.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace radarcox::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Memoizes objective evaluations within one optimization run; the coarse scan
// and the golden bracket share endpoints.
struct CachedObjective {
  const std::function<double(double)>& f;
  std::map<double, double> cache;

  double operator()(double x) {
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
    const double v = f(x);
    cache.emplace(x, v);
    return v;
  }
};

// Count of strict sign changes of consecutive differences, ignoring
// near-zero wiggles below tol.
int direction_changes(const std::vector<double>& y, double tol) {
  int changes = 0;
  int prev = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(y[i - 1])) continue;
    const double d = y[i] - y[i - 1];
    if (std::abs(d) <= tol) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

double golden(CachedObjective& f, double a, double b, bool maximize, double x_tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  auto better = [&](double u, double v) { return maximize ? u > v : u < v; };
  while (b - a > x_tol) {
    if (better(fc, fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SweepResult sweep(const std::function<double(double)>& objective, const std::string& parameter,
                  const std::vector<double>& grid, bool maximize) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  SweepResult res;
  res.parameter = parameter;
  res.grid = grid;
  res.maximize = maximize;
  res.objective.reserve(grid.size());
  for (double x : grid) res.objective.push_back(objective(x));

  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(res.objective[i])) continue;
    if (!found || (maximize ? res.objective[i] > res.opt_value
                            : res.objective[i] < res.opt_value)) {
      res.argopt = i;
      res.opt_value = res.objective[i];
      res.opt_param = grid[i];
      found = true;
    }
  }
  if (!found) throw std::runtime_error("sweep: objective not finite anywhere on the grid");
  return res;
}

SweepResult optimize_scalar(const std::function<double(double)>& objective,
                            const std::string& parameter, double lo, double hi, bool maximize,
                            int coarse_points, double x_tol) {
  if (!(hi > lo)) throw std::invalid_argument("optimize_scalar: empty range");
  CachedObjective f{objective, {}};

  std::vector<double> grid(coarse_points);
  for (int i = 0; i < coarse_points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (coarse_points - 1);
  SweepResult res = sweep([&](double x) { return f(x); }, parameter, grid, maximize);

  double scale = 0.0;
  for (double v : res.objective)
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  const int changes = direction_changes(res.objective, 1e-9 * scale);
  if (changes > 1) {
    res.multimodal = true;
    return res;
  }

  const std::size_t i = res.argopt;
  double a = i > 0 ? grid[i - 1] : grid[i];
  double b = i + 1 < grid.size() ? grid[i + 1] : grid[i];
  if (i > 0 && !std::isfinite(res.objective[i - 1])) a = grid[i];
  if (i + 1 < grid.size() && !std::isfinite(res.objective[i + 1])) b = grid[i];
  if (b > a) {
    const double x = golden(f, a, b, maximize, x_tol);
    const double v = f(x);
    if (maximize ? v >= res.opt_value : v <= res.opt_value) {
      res.opt_param = x;
      res.opt_value = v;
    }
  }
  return res;
}

SweepResult optimal_beamwidth(const NetworkModel& model, const RadioParams& radio,
                              const Thresholds& thr, double target_range, double omega_lo,
                              double omega_hi, const analytic::AnalyticOptions& opts) {
  auto objective = [&](double omega) {
    return analytic::expected_detections(model, radio, thr, omega, target_range, opts);
  };
  return optimize_scalar(objective, "omega", omega_lo, omega_hi, true, 31,
                         (omega_hi - omega_lo) * 1e-3);
}

SweepResult optimal_transmit_probability(const NetworkModel& model, const RadioParams& radio,
                                         const Thresholds& thr, double omega, double target_range,
                                         double p_lo, double p_hi,
                                         const analytic::AnalyticOptions& opts) {
  auto objective = [&](double p) {
    RadioParams r = radio;
    r.tx_prob = p;
    return analytic::mean_local_delay(model, r, thr, omega, target_range, opts);
  };
  try {
    return optimize_scalar(objective, "p", p_lo, p_hi, false, 31, (p_hi - p_lo) * 1e-3);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("delay diverges; reduce lambda or beta");
  }
}

}  // namespace radarcox::opt
