#ifndef RADARCOX_OPTIMIZE_HPP
#define RADARCOX_OPTIMIZE_HPP

#include <functional>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "network.hpp"

namespace radarcox::opt {

struct SweepResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<double> objective;
  std::size_t argopt = 0;
  double opt_param = 0.0;
  double opt_value = 0.0;
  bool maximize = true;
  bool multimodal = false;
};

/// Evaluates the objective on the grid and records the extremum.
SweepResult sweep(const std::function<double(double)>& objective, const std::string& parameter,
                  const std::vector<double>& grid, bool maximize);

/// Coarse grid scan followed by golden-section refinement on the bracketing
/// interval. When the coarse scan is not unimodal (more than one sign change
/// of the discrete differences) the grid extremum is returned with the
/// multimodal flag set. Infinite objective values are excluded from
/// bracketing; an all-infinite objective raises std::runtime_error.
SweepResult optimize_scalar(const std::function<double(double)>& objective,
                            const std::string& parameter, double lo, double hi, bool maximize,
                            int coarse_points = 31, double x_tol = 1e-4);

/// Omega* maximizing the expected number of successful detections; the range
/// and result are half-beamwidths in radians.
SweepResult optimal_beamwidth(const NetworkModel& model, const RadioParams& radio,
                              const Thresholds& thr, double target_range, double omega_lo,
                              double omega_hi, const analytic::AnalyticOptions& opts = {});

/// p* minimizing the mean local delay.
SweepResult optimal_transmit_probability(const NetworkModel& model, const RadioParams& radio,
                                         const Thresholds& thr, double omega, double target_range,
                                         double p_lo, double p_hi,
                                         const analytic::AnalyticOptions& opts = {});

}  // namespace radarcox::opt

#endif
