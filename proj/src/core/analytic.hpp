#ifndef RADARCOX_ANALYTIC_HPP
#define RADARCOX_ANALYTIC_HPP

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"
#include "network.hpp"
#include "quadrature.hpp"

namespace radarcox::analytic {

struct AnalyticOptions {
  QuadratureSpec quad{};
  bool own_street_from_target = false;  // lower own-street limit R instead of 0
  bool blcp_palm_exponent = false;      // line-average exponent n_B - 1 instead of n_B
  double divergence_cap = 50.0;         // exponent cap before the delay is declared infinite
};

/// BLP line length density at distance r from the origin: n_B / (2 R_g) inside
/// the generating disk, (n_B / (pi R_g)) asin(R_g / r) outside.
double blp_line_density(double r, int n_b, double r_g);

/// Average PLP line length inside the target sector of half-beamwidth omega
/// and radius R, ego street included: lambda_L * (five-case integral) + l_0
/// with l_0 = R.
double avg_length_plcp(double omega, double target_range, double lambda_l,
                       const QuadratureSpec& quad = {});

/// Same quantity from the exact clipping length, integrated over the line
/// domain directly. Used to cross-check the piecewise evaluation.
double avg_length_plcp_direct(double omega, double target_range, double lambda_l,
                              const QuadratureSpec& quad = {});

/// Average BLP line length inside the target sector of an ego at (0, r_0),
/// evaluated by the case expression matching r_0.
double avg_length_blcp(double omega, double target_range, int n_b, double r_g, double r_0,
                       const QuadratureSpec& quad = {});

/// Same quantity by integrating the radial line density over the sector,
/// sliced in x. Valid for any r_0; doubles as the per-branch oracle.
double avg_length_blcp_direct(double omega, double target_range, int n_b, double r_g, double r_0,
                              const QuadratureSpec& quad = {});

double avg_length(const NetworkModel& model, double omega, double target_range,
                  const QuadratureSpec& quad = {});

/// n_k(R) = lambda * l_k(R).
double expected_targets(const NetworkModel& model, double omega, double target_range,
                        const QuadratureSpec& quad = {});

/// Evaluates moments M_b(beta_sf) of the conditional SF success probability.
/// Interval geometry is memoized per (theta, r) quadrature node, so one
/// evaluator should be reused across moment orders. Not thread-safe.
class MomentEvaluator {
 public:
  MomentEvaluator(const NetworkModel& model, const RadioParams& radio, double omega,
                  double target_range, const AnalyticOptions& opts = {});

  /// M_b for complex order b. Throws QuadratureError on nonconvergence and
  /// std::domain_error for beta_sf outside (0,1).
  std::complex<double> eval(std::complex<double> b, double beta_sf) const;

  /// M_b for real order b; returns +infinity when the defining integral
  /// diverges past the configured cap.
  double eval_real(double b, double beta_sf) const;

  /// M_1..M_n.
  std::vector<double> moments(double beta_sf, int n) const;

  const NetworkModel& model() const { return model_; }
  double omega() const { return omega_; }
  double target_range() const { return target_range_; }

 private:
  const geom::InterferingInterval& interval_at(double theta, double r) const;

  NetworkModel model_;
  RadioParams radio_;
  double omega_;
  double target_range_;
  AnalyticOptions opts_;
  geom::SectorSpec sector_;
  mutable std::unordered_map<std::uint64_t, geom::InterferingInterval> cache_;
};

double detection_probability(const NetworkModel& model, const RadioParams& radio,
                             const Thresholds& thr, double omega, double target_range,
                             const AnalyticOptions& opts = {});

/// n_D = lambda * l_k(R) * p_D.
double expected_detections(const NetworkModel& model, const RadioParams& radio,
                           const Thresholds& thr, double omega, double target_range,
                           const AnalyticOptions& opts = {});

/// Mean local delay (1/p) M_{-1}(beta/(1+beta)); +infinity when divergent.
double mean_local_delay(const NetworkModel& model, const RadioParams& radio, const Thresholds& thr,
                        double omega, double target_range, const AnalyticOptions& opts = {});

}  // namespace radarcox::analytic

#endif
