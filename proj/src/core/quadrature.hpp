#ifndef RADARCOX_QUADRATURE_HPP
#define RADARCOX_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace radarcox {

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_depth = 24;        // smallest interval is (b-a) / 2^max_depth
  std::size_t max_segments = 8192;
  // Initial uniform panels. More than one guards against integrands whose
  // support is narrow relative to the domain and could sit between the
  // nodes of a single Gauss-Kronrod panel.
  int presplit = 1;

  QuadratureSpec tightened(double factor) const {
    QuadratureSpec s = *this;
    s.rel_tol *= factor;
    s.abs_tol *= factor;
    return s;
  }

  QuadratureSpec presplitted(int panels) const {
    QuadratureSpec s = *this;
    s.presplit = panels;
    return s;
  }
};

struct QuadratureError : std::runtime_error {
  double achieved;
  explicit QuadratureError(const std::string& what, double err)
      : std::runtime_error(what), achieved(err) {}
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1]; nonnegative abscissae, Gauss weight
// zero on the Kronrod-only nodes.
inline constexpr double kGkNode[8] = {
    0.0,
    0.405845151377397166906606412076961,
    0.741531185599394439863864773280788,
    0.949107912342758524526189684047851,
    0.207784955007898467600689403773245,
    0.586087235467691130294144838258730,
    0.864864423359769072789712788640926,
    0.991455371120812639206854697526329};
inline constexpr double kGkWg[8] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double kGkWk[8] = {
    0.209482141084727828012999174891714,
    0.190350578064785409913256402421014,
    0.140653259715525918745189590510238,
    0.063092092629978553290700663189204,
    0.204432940075298892414161999234649,
    0.169004726639267902826583426598550,
    0.104790010322250183839876322541518,
    0.022935322010529224963732008058970};

inline double err_norm(double v) { return std::abs(v); }
inline double err_norm(const std::complex<double>& v) { return std::abs(v); }

template <typename F, typename T>
void gk15(F& f, double a, double b, T& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T y0 = f(c);
  T g = y0 * kGkWg[0];
  T k = y0 * kGkWk[0];
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kGkNode[i];
    T yi = f(c + dx);
    yi = yi + f(c - dx);
    g = g + yi * kGkWg[i];
    k = k + yi * kGkWk[i];
  }
  value = k * h;
  error = err_norm(T(k - g)) * std::abs(h);
}

}  // namespace detail

template <typename T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  bool converged = true;
};

/// Globally adaptive Gauss-Kronrod 7-15 on [a, b]: repeatedly bisects the
/// segment with the worst |K15 - G7| estimate until the summed estimate meets
/// the tolerance. Handles real and complex integrands.
template <typename F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec)
    -> QuadratureResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadratureResult<T> out;
  if (a == b) return out;

  struct Seg {
    double a, b, err;
    T val;
  };
  std::vector<Seg> segs;
  segs.reserve(64);
  T total{};
  double total_err = 0.0;
  const int panels = std::max(1, spec.presplit);
  for (int i = 0; i < panels; ++i) {
    Seg s{a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels, 0.0, T{}};
    detail::gk15(f, s.a, s.b, s.val, s.err);
    segs.push_back(s);
    total = total + s.val;
    total_err += s.err;
  }
  const double min_width = std::abs(b - a) * std::ldexp(1.0, -spec.max_depth);

  auto tol = [&](const T& t) {
    return std::max(spec.abs_tol, spec.rel_tol * detail::err_norm(t));
  };

  std::size_t since_resum = 0;
  while (total_err > tol(total) && segs.size() < spec.max_segments) {
    std::size_t worst = segs.size();
    double worst_err = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (segs[i].err >= worst_err && segs[i].b - segs[i].a > min_width) {
        worst = i;
        worst_err = segs[i].err;
      }
    }
    if (worst == segs.size()) break;  // nothing left that may be split
    const Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;
    Seg l{s.a, mid, 0.0, T{}}, r{mid, s.b, 0.0, T{}};
    detail::gk15(f, l.a, l.b, l.val, l.err);
    detail::gk15(f, r.a, r.b, r.val, r.err);
    segs[worst] = l;
    segs.push_back(r);
    total = total + l.val + r.val - s.val;
    total_err += l.err + r.err - s.err;
    // periodic exact resummation keeps the incremental drift in check
    if (++since_resum >= 256) {
      since_resum = 0;
      total = T{};
      total_err = 0.0;
      for (const Seg& sg : segs) {
        total = total + sg.val;
        total_err += sg.err;
      }
    }
  }
  {
    total = T{};
    total_err = 0.0;
    for (const Seg& sg : segs) {
      total = total + sg.val;
      total_err += sg.err;
    }
  }

  out.value = total;
  out.error = total_err;
  out.converged = total_err <= tol(total);
  return out;
}

/// As integrate(), but throws QuadratureError when the tolerance is not met.
template <typename F>
auto integrate_checked(F&& f, double a, double b, const QuadratureSpec& spec) -> decltype(f(a)) {
  auto res = integrate(std::forward<F>(f), a, b, spec);
  if (!res.converged) throw QuadratureError("quadrature did not converge", res.error);
  return res.value;
}

}  // namespace radarcox

#endif
