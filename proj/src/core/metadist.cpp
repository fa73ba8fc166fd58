#include "metadist.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radarcox::metadist {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// moment transforms
// ---------------------------------------------------------------------------

// Centered moments nu_j = E[(2x - 1)^j] from m_0..m_n; the binomial transform
// cancels heavily, so it is carried out in extended precision.
std::vector<long double> centered_moments(const std::vector<double>& m0) {
  const int n = static_cast<int>(m0.size()) - 1;
  std::vector<std::vector<long double>> binom(n + 1);
  for (int j = 0; j <= n; ++j) {
    binom[j].resize(j + 1);
    binom[j][0] = binom[j][j] = 1.0L;
    for (int i = 1; i < j; ++i) binom[j][i] = binom[j - 1][i - 1] + binom[j - 1][i];
  }
  std::vector<long double> nu(n + 1);
  for (int j = 0; j <= n; ++j) {
    long double acc = 0.0L;
    long double p2 = 1.0L;  // 2^i
    for (int i = 0; i <= j; ++i) {
      const long double sign = ((j - i) % 2 == 0) ? 1.0L : -1.0L;
      acc += binom[j][i] * p2 * sign * static_cast<long double>(m0[i]);
      p2 *= 2.0L;
    }
    nu[j] = acc;
  }
  return nu;
}

struct DiscreteMeasure {
  std::vector<double> atoms;    // in y = 2x - 1 coordinates
  std::vector<double> weights;
};

// ---------------------------------------------------------------------------
// anchored principal representation via the Jacobi matrix
// ---------------------------------------------------------------------------
//
// The recurrence coefficients of the orthonormal polynomials of the moment
// functional come from a Cholesky factorization of the Hankel matrix in
// extended precision. Pinning one support point at x0 is the classical
// prescribed-node construction: replace the last diagonal entry of the
// Jacobi matrix so that x0 becomes an eigenvalue; the anchored measure's
// atoms are the eigenvalues of the modified symmetric tridiagonal matrix and
// the masses are the squared first eigenvector components. Everything stays
// real and nonnegative by symmetry.

struct Recurrence {
  std::vector<long double> alpha;  // alpha_0 .. alpha_{k-1}
  std::vector<long double> beta;   // beta_1 .. beta_k (off-diagonals)
  bool ok = false;
  // When the Hankel matrix is numerically rank deficient the functional is a
  // discrete measure with `rank` atoms; alpha/beta then hold the recurrence
  // up to that order.
  bool determinate = false;
  int rank = 0;
};

// Orthonormal-polynomial recurrence from nu_0..nu_{2k} by Cholesky of the
// Hankel matrix H[i][j] = nu[i+j].
Recurrence jacobi_from_moments(const std::vector<long double>& nu, int k) {
  Recurrence rec;
  const int m = k + 1;
  std::vector<std::vector<long double>> R(m, std::vector<long double>(m, 0.0L));
  int rank = m;
  for (int i = 0; i < m && rank == m; ++i) {
    for (int j = i; j < m; ++j) {
      long double sum = nu[i + j];
      for (int p = 0; p < i; ++p) sum -= R[p][i] * R[p][j];
      if (i == j) {
        // For a [-1,1]-supported measure the pivots decay monotonically
        // (beta_j <= 1); an increase or a drop below the extended-precision
        // floor marks the noise-limited order.
        const long double prev = i > 0 ? R[i - 1][i - 1] * R[i - 1][i - 1] : 2.0L;
        if (sum <= 1e-17L * std::max(1.0L, nu[0]) || sum > prev) {
          rank = i;
          break;
        }
        R[i][i] = std::sqrt(sum);
      } else {
        R[i][j] = sum / R[i][i];
      }
    }
  }
  const int kk = std::min(k, rank == m ? k : rank);
  rec.alpha.resize(kk);
  rec.beta.resize(kk);
  for (int j = 0; j < kk; ++j) {
    long double a = (j + 1 < m ? R[j][j + 1] : 0.0L) / R[j][j];
    if (j > 0) a -= R[j - 1][j] / R[j - 1][j - 1];
    rec.alpha[j] = a;
    if (j + 1 < rank) rec.beta[j] = R[j + 1][j + 1] / R[j][j];  // beta_{j+1}
  }
  rec.ok = true;
  rec.determinate = rank < m;
  rec.rank = rank;
  return rec;
}


// Eigenvalues and first eigenvector components of a symmetric tridiagonal
// matrix (implicit-shift QL). diag/off are overwritten; z returns the first
// row of the accumulated rotations.
bool tridiag_eigen(std::vector<long double>& diag, std::vector<long double>& off,
                   std::vector<long double>& z) {
  const int n = static_cast<int>(diag.size());
  z.assign(n, 0.0L);
  std::vector<std::vector<long double>> v(n, std::vector<long double>(n, 0.0L));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0L;
  off.push_back(0.0L);
  for (int l = 0; l < n; ++l) {
    for (int iter = 0;; ++iter) {
      if (iter > 80) return false;
      int m = l;
      for (; m < n - 1; ++m) {
        const long double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= 1e-19L * dd) break;
      }
      if (m == l) break;
      long double g = (diag[l + 1] - diag[l]) / (2.0L * off[l]);
      long double r = std::hypot(g, 1.0L);
      g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
      long double s = 1.0L, c = 1.0L, p = 0.0L;
      for (int i = m - 1; i >= l; --i) {
        long double f = s * off[i], b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0L) {
          diag[i + 1] -= p;
          off[m] = 0.0L;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0L * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        for (int row = 0; row < n; ++row) {
          const long double tmp = v[row][i + 1];
          v[row][i + 1] = s * v[row][i] + c * tmp;
          v[row][i] = c * v[row][i] - s * tmp;
        }
      }
      if (r == 0.0L && m - 1 >= l) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0L;
    }
  }
  for (int i = 0; i < n; ++i) z[i] = v[0][i];
  return true;
}

// Gauss rule of J_p: the unique p-atom measure of a rank-deficient problem.
DiscreteMeasure gauss_measure(const Recurrence& rec, const std::vector<long double>& nu,
                              int p) {
  if (p < 1) return {};
  std::vector<long double> diag(rec.alpha.begin(), rec.alpha.begin() + p);
  std::vector<long double> off(rec.beta.begin(), rec.beta.begin() + (p - 1));
  std::vector<long double> z;
  if (!tridiag_eigen(diag, off, z)) return {};
  DiscreteMeasure out;
  for (int i = 0; i < p; ++i) {
    out.atoms.push_back(static_cast<double>(diag[i]));
    out.weights.push_back(static_cast<double>(nu[0] * z[i] * z[i]));
  }
  return out;
}

// Anchored measure matching nu_0..nu_n (n even) with one atom pinned at y0.
DiscreteMeasure radau_measure(const Recurrence& rec, const std::vector<long double>& nu, int n,
                              double y0) {
  const int k = n / 2;
  if (!rec.ok || rec.determinate) return {};

  // solve (J_k - y0 I) d = beta_k^2 e_{k-1}; the modified last diagonal is
  // y0 + d_{k-1}
  long double alpha_hat;
  if (k == 0) {
    alpha_hat = y0;
  } else {
    std::vector<long double> d(k, 0.0L);
    // tridiagonal solve by LU without pivoting (fails only when y0 is an
    // eigenvalue of J_k, handled by the caller via the LP fallback)
    std::vector<long double> du(k, 0.0L), dl(k, 0.0L), dm(k, 0.0L);
    for (int i = 0; i < k; ++i) dm[i] = rec.alpha[i] - static_cast<long double>(y0);
    for (int i = 0; i + 1 < k; ++i) du[i] = dl[i] = rec.beta[i];
    std::vector<long double> rhs(k, 0.0L);
    rhs[k - 1] = rec.beta[k - 1] * rec.beta[k - 1];
    for (int i = 1; i < k; ++i) {
      if (std::abs(dm[i - 1]) < 1e-300L) return {};
      const long double w = dl[i - 1] / dm[i - 1];
      dm[i] -= w * du[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    if (std::abs(dm[k - 1]) < 1e-300L) return {};
    d[k - 1] = rhs[k - 1] / dm[k - 1];
    for (int i = k - 2; i >= 0; --i) d[i] = (rhs[i] - du[i] * d[i + 1]) / dm[i];
    alpha_hat = static_cast<long double>(y0) + d[k - 1];
  }

  std::vector<long double> diag(rec.alpha.begin(), rec.alpha.end());
  diag.push_back(alpha_hat);
  std::vector<long double> off(rec.beta.begin(), rec.beta.end());
  std::vector<long double> z;
  if (!tridiag_eigen(diag, off, z)) return {};

  DiscreteMeasure out;
  for (int i = 0; i <= k; ++i) {
    // The prescribed-node rule solves the unconstrained-support problem; an
    // atom escaping [-1, 1] means the support constraint binds at this x0 and
    // the caller must use the LP instead.
    const double atom = static_cast<double>(diag[i]);
    if (atom < -1.0 - 1e-7 || atom > 1.0 + 1e-7) return {};
    out.atoms.push_back(std::min(1.0, std::max(-1.0, atom)));
    out.weights.push_back(static_cast<double>(nu[0] * z[i] * z[i]));
  }
  // sanity: the pinned atom must be present and the moments reproduced
  double nearest = 1e300;
  for (double a : out.atoms) nearest = std::min(nearest, std::abs(a - y0));
  if (nearest > 1e-7) return {};
  for (int t = 0; t <= n; ++t) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < out.atoms.size(); ++i)
      acc += static_cast<long double>(out.weights[i]) *
             std::pow(static_cast<long double>(out.atoms[i]), t);
    if (std::abs(static_cast<double>(acc - nu[t])) > 1e-5) return {};
  }
  return out;
}

void bounds_from_measure(const DiscreteMeasure& m, double y0, double& inf, double& sup) {
  inf = 0.0;
  sup = 0.0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const double w = std::max(0.0, m.weights[i]);
    if (m.atoms[i] < y0 - 1e-9) inf += w;
    if (m.atoms[i] <= y0 + 1e-9) sup += w;
  }
  inf = std::min(1.0, std::max(0.0, inf));
  sup = std::min(1.0, std::max(0.0, sup));
}

// ---------------------------------------------------------------------------
// dense two-phase simplex for the LP oracle
// ---------------------------------------------------------------------------

// minimize c.x subject to A x = b, x >= 0. Bland's rule; throws on
// infeasible problems.
double simplex_min(Eigen::MatrixXd A, Eigen::VectorXd b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }
  }

  const int total = n + m;
  Eigen::MatrixXd T(m, total + 1);
  T.leftCols(n) = A;
  T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  T.col(total) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  auto pivot = [&](int row, int col) {
    T.row(row) /= T(row, col);
    for (int i = 0; i < m; ++i)
      if (i != row && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(row);
    basis[row] = col;
  };

  auto run = [&](const Eigen::VectorXd& cost, int ncols) {
    const double eps = 1e-9;
    const int max_iter = 50000;
    for (int iter = 0; iter < max_iter; ++iter) {
      // reduced costs via the basis multipliers; Dantzig rule with a switch
      // to Bland's rule late in the run to break any cycling
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cost(basis[i]);
      const bool bland = iter > max_iter / 2;
      int enter = -1;
      double most = -eps;
      for (int jcol = 0; jcol < ncols; ++jcol) {
        const double red = cost(jcol) - cb.dot(T.col(jcol));
        if (red < most) {
          enter = jcol;
          if (bland) break;
          most = red;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > eps) {
          const double ratio = T(i, total) / T(i, enter);
          if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 &&
                                       (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("lp oracle: unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("lp oracle: iteration limit");
  };

  // phase 1
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < m; ++i) c1(n + i) = 1.0;
  run(c1, total);
  double phase1 = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) phase1 += T(i, total);
  if (phase1 > 2e-6 * (1.0 + b.cwiseAbs().sum()))
    throw std::runtime_error("lp oracle: infeasible moment system");
  // drive leftover artificials out where possible
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      int col = -1;
      for (int jcol = 0; jcol < n; ++jcol)
        if (std::abs(T(i, jcol)) > 1e-9) {
          col = jcol;
          break;
        }
      if (col >= 0) pivot(i, col);
    }
  }

  // phase 2 prices structural columns only; any leftover basic artificial
  // sits at value zero in a redundant row and stays there
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(total);
  c2.head(n) = c;
  run(c2, n);

  double val = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) val += c(basis[i]) * T(i, total);
  return val;
}

// Legendre polynomial values at y by recurrence.
void legendre_values(double y, int nmax, std::vector<double>& out) {
  out.resize(nmax + 1);
  out[0] = 1.0;
  if (nmax >= 1) out[1] = y;
  for (int t = 2; t <= nmax; ++t)
    out[t] = ((2.0 * t - 1.0) * y * out[t - 1] - (t - 1.0) * out[t - 2]) / t;
}

// L[P_t] for t = 0..n from centered power moments.
std::vector<double> legendre_moments(const std::vector<long double>& nu) {
  const int n = static_cast<int>(nu.size()) - 1;
  std::vector<std::vector<long double>> coef(n + 1);
  coef[0] = {1.0L};
  if (n >= 1) coef[1] = {0.0L, 1.0L};
  for (int t = 2; t <= n; ++t) {
    coef[t].assign(t + 1, 0.0L);
    for (int k = 0; k <= t - 1; ++k)
      coef[t][k + 1] += (2.0L * t - 1.0L) / t * coef[t - 1][k];
    for (int k = 0; k <= t - 2; ++k) coef[t][k] -= (t - 1.0L) / t * coef[t - 2][k];
  }
  std::vector<double> q(n + 1);
  for (int t = 0; t <= n; ++t) {
    long double acc = 0.0L;
    for (int k = 0; k <= t; ++k) acc += coef[t][k] * nu[k];
    q[t] = static_cast<double>(acc);
  }
  return q;
}

}  // namespace

bool moment_sequence_valid(const std::vector<double>& values, std::string* why, double tol) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (values.size() < 2) return fail("moment sequence needs n >= 2 orders");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || values[i] > 1.0 + 1e-12)
      return fail("moment M_" + std::to_string(i + 1) + " outside (0, 1]");
  }

  std::vector<double> m0{1.0};
  m0.insert(m0.end(), values.begin(), values.end());
  const int n = static_cast<int>(values.size());

  auto check_psd = [&](auto entry, int size, const std::string& name) {
    Eigen::MatrixXd H(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) H(i, j) = entry(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double emin = es.eigenvalues().minCoeff();
    if (emin < -tol)
      return fail("Hankel matrix " + name + " not positive semidefinite (min eigenvalue " +
                  std::to_string(emin) + ")");
    return true;
  };

  const int p = n / 2;
  if (!check_psd([&](int i, int j) { return m0[i + j]; }, p + 1, "[M_{i+j}]")) return false;
  const int p1 = (n - 1) / 2;
  if (!check_psd([&](int i, int j) { return m0[i + j + 1]; }, p1 + 1, "[M_{i+j+1}]"))
    return false;
  if (!check_psd([&](int i, int j) { return m0[i + j] - m0[i + j + 1]; }, p1 + 1,
                 "[M_{i+j} - M_{i+j+1}]"))
    return false;
  return true;
}

CdfBounds lp_bounds_at(const std::vector<double>& moments0, double x0, int grid_points) {
  const int n = static_cast<int>(moments0.size()) - 1;
  const std::vector<long double> nu = centered_moments(moments0);
  const std::vector<double> q = legendre_moments(nu);

  Eigen::MatrixXd A(n + 1, grid_points);
  Eigen::VectorXd b(n + 1);
  Eigen::VectorXd c(grid_points);
  std::vector<double> pv;
  for (int i = 0; i < grid_points; ++i) {
    const double x = static_cast<double>(i) / (grid_points - 1);
    legendre_values(2.0 * x - 1.0, n, pv);
    for (int t = 0; t <= n; ++t) A(t, i) = pv[t];
    c(i) = (x <= x0 + 1e-12) ? 1.0 : 0.0;
  }
  for (int t = 0; t <= n; ++t) b(t) = q[t];

  CdfBounds out;
  out.from_lp = true;
  out.inf = std::min(1.0, std::max(0.0, simplex_min(A, b, c)));
  out.sup = std::min(1.0, std::max(0.0, -simplex_min(A, b, -c)));
  if (out.sup < out.inf) std::swap(out.inf, out.sup);
  return out;
}

namespace {

bool reproduces(const DiscreteMeasure& m, const std::vector<long double>& nu, int n,
                double tol) {
  for (int t = 0; t <= n; ++t) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < m.atoms.size(); ++i)
      acc += static_cast<long double>(m.weights[i]) *
             std::pow(static_cast<long double>(m.atoms[i]), t);
    if (std::abs(static_cast<double>(acc - nu[t])) > tol) return false;
  }
  return true;
}

}  // namespace

CdfBounds cm_bounds_at(const std::vector<double>& moments0, double x0) {
  const int n_avail = static_cast<int>(moments0.size()) - 1;
  if (n_avail < 1) throw std::invalid_argument("cm_bounds_at: need at least one moment");
  // the anchored construction consumes an even moment count; an odd trailing
  // moment does not change the bounds it can certify
  int n = n_avail - (n_avail % 2);
  const std::vector<long double> nu = centered_moments(moments0);
  const double y0 = std::min(1.0 - 1e-12, std::max(-1.0 + 1e-12, 2.0 * x0 - 1.0));

  Recurrence rec = jacobi_from_moments(nu, n / 2);
  if (rec.ok && rec.determinate) {
    // a genuinely discrete source reproduces every moment essentially
    // exactly; otherwise the rank loss is a noise floor and the usable order
    // is reduced instead
    const DiscreteMeasure det = gauss_measure(rec, nu, rec.rank);
    if (!det.atoms.empty() && reproduces(det, nu, n, 1e-9)) {
      CdfBounds b;
      bounds_from_measure(det, y0, b.inf, b.sup);
      return b;
    }
    n = 2 * std::max(1, rec.rank - 1);
    rec = jacobi_from_moments(nu, n / 2);
  }
  const DiscreteMeasure m = radau_measure(rec, nu, n, y0);
  if (m.atoms.empty()) {
    // LP fallback at the certified order, degrading the order if moment noise
    // leaves the grid system infeasible
    for (int nn = n; nn >= 2; nn -= 2) {
      std::vector<double> trunc(moments0.begin(), moments0.begin() + nn + 1);
      try {
        return lp_bounds_at(trunc, x0);
      } catch (const std::runtime_error&) {
        continue;
      }
    }
    throw std::runtime_error("cm_bounds_at: no feasible reconstruction");
  }
  CdfBounds out;
  bounds_from_measure(m, y0, out.inf, out.sup);
  return out;
}

MetaDistCurve cm_reconstruct(const MomentVector& moments, const std::vector<double>& t_grid) {
  std::string why;
  // the gate tolerance allows for quadrature or Monte Carlo noise in the
  // supplied moments; genuinely inconsistent sequences still fail loudly
  if (!moment_sequence_valid(moments.values, &why, 1e-5))
    throw std::invalid_argument("cm_reconstruct: inconsistent moments: " + why);

  std::vector<double> m0{1.0};
  m0.insert(m0.end(), moments.values.begin(), moments.values.end());

  MetaDistCurve curve;
  curve.t = t_grid;
  curve.F.resize(t_grid.size());
  curve.provenance = MetaDistCurve::Provenance::Cm;
  curve.beta_sf = moments.beta_sf;
  curve.n_moments = moments.order_count();

  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t <= 0.0) {
      curve.F[i] = 1.0;
      continue;
    }
    const CdfBounds b = cm_bounds_at(m0, t);
    curve.F[i] = 1.0 - 0.5 * (b.inf + b.sup);
  }
  for (double& f : curve.F) f = std::min(1.0, std::max(0.0, f));
  for (std::size_t i = curve.F.size(); i-- > 1;)
    curve.F[i - 1] = std::max(curve.F[i - 1], curve.F[i]);
  return curve;
}

namespace {

// Gauss-Legendre nodes by Newton iteration; exact to machine precision.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

}  // namespace

MetaDistCurve gp_invert(const std::function<std::complex<double>(double)>& imaginary_moment,
                        const std::vector<double>& t_grid, double u_max,
                        const QuadratureSpec& /*spec*/, double* tail_estimate) {
  if (!(u_max > 0.0)) throw std::invalid_argument("gp_invert: u_max must be positive");

  std::vector<double> gx, gw;
  gauss_legendre(16, gx, gw);

  struct Node {
    double u, w;
    std::complex<double> m;
  };
  std::vector<Node> nodes;
  const double panel = 0.5;
  double tail_mag = 1.0;
  double u0 = 0.0;
  while (u0 < u_max) {
    const double u1 = std::min(u_max, u0 + panel);
    const double c = 0.5 * (u0 + u1), h = 0.5 * (u1 - u0);
    for (int i = 0; i < 16; ++i) {
      Node nd;
      nd.u = c + h * gx[i];
      nd.w = h * gw[i];
      nd.m = imaginary_moment(nd.u);
      nodes.push_back(nd);
    }
    tail_mag = std::abs(nodes.back().m);
    u0 = u1;
    if (tail_mag < 1e-4) break;
  }
  if (tail_estimate) *tail_estimate = tail_mag * std::log(10.0) / kPi;

  MetaDistCurve curve;
  curve.t = t_grid;
  curve.F.resize(t_grid.size());
  curve.provenance = MetaDistCurve::Provenance::Gp;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double z = t_grid[i];
    if (z <= 1e-12) {
      curve.F[i] = 1.0;
      continue;
    }
    const double lz = std::log(std::min(z, 1.0));
    double sum = 0.0;
    for (const Node& nd : nodes) {
      const std::complex<double> e(std::cos(-nd.u * lz), std::sin(-nd.u * lz));
      sum += nd.w * std::imag(e * nd.m) / nd.u;
    }
    const double cdf = 0.5 - sum / kPi;
    curve.F[i] = 1.0 - cdf;
  }
  for (double& f : curve.F) f = std::min(1.0, std::max(0.0, f));
  for (std::size_t i = curve.F.size(); i-- > 1;)
    curve.F[i - 1] = std::max(curve.F[i - 1], curve.F[i]);
  return curve;
}

namespace {

double interp_curve(const MetaDistCurve& c, double t) {
  if (t <= c.t.front()) return c.F.front();
  if (t >= c.t.back()) return c.F.back();
  const auto it = std::upper_bound(c.t.begin(), c.t.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - c.t.begin());
  const double t0 = c.t[i - 1], t1 = c.t[i];
  const double f0 = c.F[i - 1], f1 = c.F[i];
  if (t1 <= t0) return f0;
  return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
}

}  // namespace

double ks_distance(const MetaDistCurve& a, const MetaDistCurve& b) {
  std::vector<double> grid;
  grid.reserve(a.t.size() + b.t.size());
  grid.insert(grid.end(), a.t.begin(), a.t.end());
  grid.insert(grid.end(), b.t.begin(), b.t.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double d = 0.0;
  for (double t : grid) d = std::max(d, std::abs(interp_curve(a, t) - interp_curve(b, t)));
  return d;
}

double percentile_reliability(const MetaDistCurve& curve, double level) {
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("percentile_reliability: level must be in (0, 1)");
  const double thr = 1.0 - level;
  const std::size_t n = curve.t.size();
  if (curve.F.front() < thr) return curve.t.front();
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (curve.F[i] >= thr) last = i;
  if (last + 1 >= n) return curve.t.back();
  const double f0 = curve.F[last], f1 = curve.F[last + 1];
  if (f0 <= f1) return curve.t[last];
  const double frac = (f0 - thr) / (f0 - f1);
  return curve.t[last] + frac * (curve.t[last + 1] - curve.t[last]);
}

}  // namespace radarcox::metadist
