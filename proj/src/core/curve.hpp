#ifndef RADARCOX_CURVE_HPP
#define RADARCOX_CURVE_HPP

#include <string>
#include <vector>

namespace radarcox {

/// Reconstructed or empirical SF meta-distribution on a reliability grid:
/// F(t) = P(p_SF >= t), nonincreasing in t.
struct MetaDistCurve {
  enum class Provenance { Empirical, Cm, Gp };

  std::vector<double> t;
  std::vector<double> F;
  Provenance provenance = Provenance::Empirical;
  double beta_sf = 0.0;
  int n_moments = 0;

  static const char* provenance_name(Provenance p) {
    switch (p) {
      case Provenance::Empirical: return "empirical";
      case Provenance::Cm: return "cm";
      case Provenance::Gp: return "gp";
    }
    return "?";
  }
};

inline std::vector<double> default_t_grid(std::size_t n = 512) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace radarcox

#endif
