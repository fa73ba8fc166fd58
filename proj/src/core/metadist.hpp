#ifndef RADARCOX_METADIST_HPP
#define RADARCOX_METADIST_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "quadrature.hpp"

namespace radarcox::metadist {

/// Finite moment sequence M_1..M_n of a [0,1]-supported distribution.
struct MomentVector {
  double beta_sf = 0.0;
  std::vector<double> values;

  int order_count() const { return static_cast<int>(values.size()); }
};

/// Hausdorff validity: values in (0,1], nonincreasing, and the Hankel
/// matrices of the plain and shifted sequences positive semidefinite within
/// tol. On failure *why names the violated condition.
bool moment_sequence_valid(const std::vector<double>& values, std::string* why = nullptr,
                           double tol = 1e-8);

/// Chebyshev-Markov style CDF bounds at x0 from moments m_0..m_n (m_0 = 1):
/// the infimum and supremum of F(x0) over all matching [0,1] distributions,
/// from the principal representation anchored at x0. Falls back to the LP
/// oracle when the anchored construction degenerates.
struct CdfBounds {
  double inf = 0.0;
  double sup = 1.0;
  bool from_lp = false;
};
CdfBounds cm_bounds_at(const std::vector<double>& moments0, double x0);

/// Grid LP oracle for the same bounds: masses on a uniform support grid,
/// moment equalities, min/max of the mass at or below x0. Slow and
/// unconditionally correct.
CdfBounds lp_bounds_at(const std::vector<double>& moments0, double x0, int grid_points = 2001);

/// CM-bound reconstruction: averages the CDF infimum and supremum at each
/// grid point and returns the curve in the CCDF convention P(p_SF >= t).
MetaDistCurve cm_reconstruct(const MomentVector& moments, const std::vector<double>& t_grid);

/// Gil-Pelaez inversion from imaginary moments u -> M_{ju}. The oscillatory
/// integral is truncated where |M_{ju}| falls below 1e-4 (or at u_max) and a
/// tail bound estimate is reported.
MetaDistCurve gp_invert(const std::function<std::complex<double>(double)>& imaginary_moment,
                        const std::vector<double>& t_grid, double u_max,
                        const QuadratureSpec& spec, double* tail_estimate = nullptr);

/// Largest absolute difference between the two curves after resampling onto
/// the union grid with linear interpolation.
double ks_distance(const MetaDistCurve& a, const MetaDistCurve& b);

/// Reliability at a percentile level: the largest t with
/// P(p_SF >= t) >= 1 - level, i.e. a fraction `level` of radars falls below
/// the returned reliability.
double percentile_reliability(const MetaDistCurve& curve, double level);

}  // namespace radarcox::metadist

#endif
