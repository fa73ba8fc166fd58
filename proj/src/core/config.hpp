#ifndef RADARCOX_CONFIG_HPP
#define RADARCOX_CONFIG_HPP

#include <cstdint>
#include <string>

#include "analytic.hpp"
#include "network.hpp"
#include "quadrature.hpp"

namespace radarcox {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t realizations = 10000;
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_depth = 24;
  int n_moments = 21;
  std::size_t t_grid_size = 512;
  int threads = 1;
  double gp_u_max = 80.0;
};

/// Full experiment description. Units at this boundary are the paper's
/// reporting units: degrees of FULL beamwidth, dB thresholds and powers; the
/// core works in radians of half-beamwidth and linear units.
struct ExperimentConfig {
  NetworkModel network;
  RadioParams radio;
  Thresholds thresholds;
  double beamwidth_deg = 30.0;  // full beamwidth
  double target_range = 15.0;
  bool own_street_from_target = false;
  bool blcp_palm_exponent = false;
  double percentile_level = 0.5;
  RunConfig run;

  /// Internal half-beamwidth in radians.
  double omega() const { return beamwidth_deg * 0.5 * 3.14159265358979323846 / 180.0; }

  QuadratureSpec quadrature() const {
    QuadratureSpec q;
    q.rel_tol = run.rel_tol;
    q.abs_tol = run.abs_tol;
    q.max_depth = run.max_depth;
    return q;
  }

  analytic::AnalyticOptions analytic_options() const {
    analytic::AnalyticOptions o;
    o.quad = quadrature();
    o.own_street_from_target = own_street_from_target;
    o.blcp_palm_exponent = blcp_palm_exponent;
    return o;
  }

  /// Throws ConfigError naming the offending field.
  void validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;

  /// Override one field: dotted key (e.g. "network.lambda") and a raw value.
  void set(const std::string& key, const std::string& value);
  /// Read one field back as text.
  std::string get(const std::string& key) const;
};

}  // namespace radarcox

#endif
