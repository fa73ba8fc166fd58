#ifndef RADARCOX_COX_HPP
#define RADARCOX_COX_HPP

#include <cstdint>
#include <vector>

#include "curve.hpp"
#include "geometry.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace radarcox::cox {

struct Interferer {
  int line_index = 0;
  double v = 0.0;  // coordinate within the line's interfering interval
  double w = 0.0;  // distance to the ego radar
  bool active = false;
};

/// One network draw. lines[0] is always L_0 (the ego street); intervals[i]
/// is the interfering stretch of lines[i]. Vehicles are placed only on those
/// stretches, which is distribution-equivalent to sampling the full line and
/// filtering by visibility.
struct Realization {
  std::vector<geom::LineParams> lines;
  std::vector<geom::InterferingInterval> intervals;
  std::vector<Interferer> interferers;
};

/// Ego interference sector for a model: apex at the ego position, boresight
/// +y, range equal to the model's radar range.
geom::SectorSpec interference_sector(const NetworkModel& model, double half_beamwidth);

Realization sample_realization(const NetworkModel& model, const geom::SectorSpec& sector,
                               const RadioParams& radio, std::uint64_t seed);
Realization sample_realization(const NetworkModel& model, const geom::SectorSpec& sector,
                               const RadioParams& radio, Rng& rng);

/// Position of an interferer in the plane.
geom::Vec2 interferer_position(const geom::LineParams& line, const geom::SectorSpec& sector,
                               const geom::InterferingInterval& interval, double v);

/// p_SF(beta_sf | realization): product over interferers of
/// p / (1 + beta_sf' w^-alpha) + (1 - p), the ALOHA- and fading-averaged
/// conditional probability that SF exceeds beta_sf for a target at range R.
double conditional_sf_success(const Realization& real, const RadioParams& radio, double beta_sf,
                              double target_range);

/// One SIR draw: sigma_c ~ Exp(sigma_bar), h ~ Exp(1) per interferer, only
/// ALOHA-active interferers contribute. Returns +infinity when none are
/// active.
double sample_sir(const Realization& real, const RadioParams& radio, double target_range,
                  Rng& rng);

struct EmpiricalMd {
  MetaDistCurve curve;
  std::vector<double> samples;  // p_SF per realization
  double p_d = 0.0;             // mean of the samples
  double p_d_se = 0.0;
};

/// Empirical meta-distribution over n realizations: the complementary CDF of
/// conditional_sf_success on the given reliability grid. Realization k uses
/// the (seed, k) stream, so results do not depend on the thread count.
EmpiricalMd empirical_md(const NetworkModel& model, const geom::SectorSpec& sector,
                         const RadioParams& radio, double beta_sf, double target_range,
                         std::size_t n_realizations, std::uint64_t seed,
                         const std::vector<double>& t_grid, int threads = 1);

/// Mean and standard error of sample^order over a sample set.
void sample_moment(const std::vector<double>& samples, double order, double& mean, double& se);

}  // namespace radarcox::cox

#endif
