#ifndef RADARCOX_NETWORK_HPP
#define RADARCOX_NETWORK_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "geometry.hpp"

namespace radarcox {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// PLCP or BLCP scenario. The ego radar sits at the origin on the y-axis for
/// PLCP and at (0, r_0) for BLCP; L_0 is the y-axis in both cases.
struct NetworkModel {
  enum class Kind { Plcp, Blcp };

  Kind kind = Kind::Plcp;
  double lambda_l = 0.01;  // PLCP line intensity on the (theta, r) domain
  double lambda = 0.01;    // vehicles per meter of street
  double r_p = 500.0;      // PLCP radar range
  int n_b = 300;           // BLCP line count
  double r_g = 1500.0;     // BLCP generating disk radius
  double r_0 = 0.0;        // BLCP ego offset along the y-axis
  double r_b = 500.0;      // BLCP radar range

  double interference_range() const { return kind == Kind::Plcp ? r_p : r_b; }

  geom::Vec2 ego_position() const {
    return kind == Kind::Plcp ? geom::Vec2{0.0, 0.0} : geom::Vec2{0.0, r_0};
  }

  void validate() const {
    if (lambda < 0.0) throw std::invalid_argument("network: lambda must be >= 0");
    if (kind == Kind::Plcp) {
      if (lambda_l < 0.0) throw std::invalid_argument("network: lambda_l must be >= 0");
      if (!(r_p > 0.0)) throw std::invalid_argument("network: r_p must be positive");
    } else {
      if (n_b < 1) throw std::invalid_argument("network: n_b must be >= 1");
      if (!(r_g > 0.0)) throw std::invalid_argument("network: r_g must be positive");
      if (!(r_b > 0.0)) throw std::invalid_argument("network: r_b must be positive");
    }
  }
};

/// Radio-chain parameters. Transmit power, antenna gains and carrier cancel
/// out of every SIR/SF quantity; they are carried so configurations
/// round-trip and the cancellation can be asserted.
struct RadioParams {
  double p_dbm = 10.0;
  double sigma_dbsm = 30.0;  // mean RCS
  double alpha = 2.0;        // path-loss exponent
  double g_t_dbi = 10.0;
  double g_r_dbi = 10.0;
  double f_c_hz = 76.5e9;
  double tx_prob = 1.0;  // ALOHA transmit probability p

  double sigma_linear() const { return db_to_linear(sigma_dbsm); }

  void validate() const {
    if (!(alpha >= 1.0)) throw std::invalid_argument("radio: alpha must be >= 1");
    if (!(tx_prob > 0.0) || tx_prob > 1.0)
      throw std::invalid_argument("radio: tx_prob must be in (0, 1]");
  }
};

/// SIR threshold beta (dB at the boundary) and SF threshold beta_sf in (0,1),
/// linked by beta_sf = beta / (1 + beta).
struct Thresholds {
  double beta_db = 1.0;
  double beta_sf = 0.5;

  double beta_linear() const { return db_to_linear(beta_db); }

  static double sf_from_sir(double beta_lin) { return beta_lin / (1.0 + beta_lin); }

  void validate() const {
    if (!(beta_sf > 0.0) || !(beta_sf < 1.0))
      throw std::invalid_argument("thresholds: beta_sf must be in (0, 1)");
  }
};

/// beta_sf' = 4 pi beta_sf / (sigma_bar R^{-2 alpha} (1 - beta_sf)).
inline double beta_sf_prime(double beta_sf, double sigma_bar, double target_range, double alpha) {
  if (!(beta_sf > 0.0) || !(beta_sf < 1.0))
    throw std::domain_error("beta_sf_prime: beta_sf must be in (0, 1)");
  const double r2a = std::pow(target_range, -2.0 * alpha);
  return 4.0 * 3.14159265358979323846 * beta_sf / (sigma_bar * r2a * (1.0 - beta_sf));
}

/// Ego interference sector: apex at the ego position, boresight +y, the
/// model's radar range.
inline geom::SectorSpec make_interference_sector(const NetworkModel& model,
                                                 double half_beamwidth) {
  geom::SectorSpec s;
  s.apex = model.ego_position();
  s.boresight = {0.0, 1.0};
  s.half_beamwidth = half_beamwidth;
  s.range = model.interference_range();
  return s;
}

}  // namespace radarcox

#endif
