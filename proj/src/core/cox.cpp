#include "cox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace radarcox::cox {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

geom::SectorSpec interference_sector(const NetworkModel& model, double half_beamwidth) {
  return make_interference_sector(model, half_beamwidth);
}

Realization sample_realization(const NetworkModel& model, const geom::SectorSpec& sector,
                               const RadioParams& radio, std::uint64_t seed) {
  Rng rng(seed, 0);
  return sample_realization(model, sector, radio, rng);
}

Realization sample_realization(const NetworkModel& model, const geom::SectorSpec& sector,
                               const RadioParams& radio, Rng& rng) {
  model.validate();
  radio.validate();
  sector.validate();

  const double range = model.interference_range();
  Realization real;
  // L_0, the ego street: through the apex along the boresight.
  const double theta0 = std::atan2(-sector.boresight.x, sector.boresight.y);
  real.lines.push_back(
      geom::LineParams{theta0, sector.apex.dot(geom::Vec2{std::cos(theta0), std::sin(theta0)})});

  if (model.kind == NetworkModel::Kind::Plcp) {
    // Exact truncation: a line hosting a mutually visible radar passes within
    // the radar range of the ego, so |r - e.n(theta)| <= range.
    const std::uint64_t n = rng.poisson(model.lambda_l * kPi * 2.0 * range);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double theta = rng.uniform(0.0, kPi);
      const geom::Vec2 nvec{std::cos(theta), std::sin(theta)};
      const double center = sector.apex.dot(nvec);
      real.lines.push_back(geom::LineParams{theta, rng.uniform(center - range, center + range)});
    }
  } else {
    for (int i = 0; i < model.n_b; ++i) {
      const double theta = rng.uniform(0.0, kPi);
      real.lines.push_back(geom::LineParams{theta, rng.uniform(-model.r_g, model.r_g)});
    }
  }

  real.intervals.reserve(real.lines.size());
  for (std::size_t i = 0; i < real.lines.size(); ++i) {
    const auto iv = geom::interfering_interval(sector, real.lines[i], range);
    real.intervals.push_back(iv);
    if (iv.empty) continue;
    const std::uint64_t k = rng.poisson(model.lambda * iv.length());
    for (std::uint64_t j = 0; j < k; ++j) {
      Interferer f;
      f.line_index = static_cast<int>(i);
      f.v = rng.uniform(iv.a, iv.b);
      f.w = iv.distance_at(f.v);
      f.active = rng.bernoulli(radio.tx_prob);
      real.interferers.push_back(f);
    }
  }
  return real;
}

geom::Vec2 interferer_position(const geom::LineParams& line, const geom::SectorSpec& sector,
                               const geom::InterferingInterval& interval, double v) {
  // s_ref = s_c + delta, with s_c the arc-length of the ego's projection.
  const geom::Vec2 rel = line.foot() - sector.apex;
  const double s_c = -rel.dot(line.direction());
  return line.point_at(v + s_c + interval.delta);
}

double conditional_sf_success(const Realization& real, const RadioParams& radio, double beta_sf,
                              double target_range) {
  if (!(target_range > 0.0)) throw std::invalid_argument("conditional_sf_success: R must be > 0");
  const double bp = beta_sf_prime(beta_sf, radio.sigma_linear(), target_range, radio.alpha);
  const double p = radio.tx_prob;
  double prod = 1.0;
  for (const Interferer& f : real.interferers)
    prod *= p / (1.0 + bp * std::pow(f.w, -radio.alpha)) + (1.0 - p);
  return prod;
}

double sample_sir(const Realization& real, const RadioParams& radio, double target_range,
                  Rng& rng) {
  const double sigma_c = rng.exponential(radio.sigma_linear());
  double interference = 0.0;
  for (const Interferer& f : real.interferers) {
    const double h = rng.exponential(1.0);
    if (f.active) interference += 4.0 * kPi * h * std::pow(f.w, -radio.alpha);
  }
  if (interference <= 0.0) return std::numeric_limits<double>::infinity();
  return sigma_c * std::pow(target_range, -2.0 * radio.alpha) / interference;
}

EmpiricalMd empirical_md(const NetworkModel& model, const geom::SectorSpec& sector,
                         const RadioParams& radio, double beta_sf, double target_range,
                         std::size_t n_realizations, std::uint64_t seed,
                         const std::vector<double>& t_grid, int threads) {
  if (n_realizations < 1) throw std::invalid_argument("empirical_md: need at least 1 realization");

  std::vector<double> samples(n_realizations);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      Rng rng(seed, k);
      const Realization real = sample_realization(model, sector, radio, rng);
      samples[k] = conditional_sf_success(real, radio, beta_sf, target_range);
    }
  };
  if (threads <= 1) {
    worker(0, n_realizations);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_realizations + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(n_realizations, chunk * t);
      const std::size_t hi = std::min(n_realizations, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EmpiricalMd out;
  out.samples = samples;
  sample_moment(samples, 1.0, out.p_d, out.p_d_se);

  // Counting via a sorted copy keeps the curve assembly O(n log n) and
  // independent of the thread count.
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  out.curve.t = t_grid;
  out.curve.F.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t_grid[i]);
    out.curve.F[i] =
        static_cast<double>(sorted.end() - it) / static_cast<double>(n_realizations);
  }
  out.curve.provenance = MetaDistCurve::Provenance::Empirical;
  out.curve.beta_sf = beta_sf;
  return out;
}

void sample_moment(const std::vector<double>& samples, double order, double& mean, double& se) {
  const std::size_t n = samples.size();
  double sum = 0.0, sum2 = 0.0;
  for (double s : samples) {
    const double x = std::pow(s, order);
    sum += x;
    sum2 += x * x;
  }
  mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
  se = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
}

}  // namespace radarcox::cox
