// Test-only oracles, deliberately independent of the closed-form
// implementation paths they check: they only consume the membership
// predicates.
#ifndef RADARCOX_TEST_ORACLES_HPP
#define RADARCOX_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "geometry.hpp"

namespace radarcox::test {

// Measure of {t in [lo, hi] : pred(t)} by a dense scan with bisection
// refinement of every transition; exact to ~1e-12 for sets with a handful of
// transitions.
inline double scan_measure(const std::function<bool(double)>& pred, double lo, double hi,
                           int samples = 4096) {
  if (hi <= lo) return 0.0;
  auto refine = [&](double a, double b) {
    // invariant: pred(a) != pred(b)
    const bool fa = pred(a);
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (a + b);
      if (pred(m) == fa)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  double measure = 0.0;
  double prev_x = lo;
  bool prev_in = pred(lo);
  double entry = prev_in ? lo : 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const bool in = pred(x);
    if (in != prev_in) {
      const double cross = refine(prev_x, x);
      if (in)
        entry = cross;
      else
        measure += cross - entry;
    }
    prev_x = x;
    prev_in = in;
  }
  if (prev_in) measure += hi - entry;
  return measure;
}

// Clipped line length from the membership predicate. Membership along the
// line can only flip where the line crosses the two edge lines or the range
// circle; those candidate parameters are solved directly (independently of
// the implementation) and the midpoint of every segment between consecutive
// candidates is classified, which makes the measure exact.
inline double clip_length_oracle(const geom::LineParams& line, const geom::SectorSpec& sector) {
  const geom::LineParams lf = geom::to_sector_frame(line, sector);
  const double T2 = sector.range * sector.range - lf.r * lf.r;
  if (T2 <= 0.0) return 0.0;
  const double T = std::sqrt(T2);

  std::vector<double> cuts{-T, T};
  const double co = std::cos(sector.half_beamwidth), so = std::sin(sector.half_beamwidth);
  const geom::Vec2 f0 = lf.foot();
  const geom::Vec2 d = lf.direction();
  const geom::Vec2 edge_dirs[2] = {{so, co}, {-so, co}};
  for (const geom::Vec2& e : edge_dirs) {
    const double denom = d.x * e.y - d.y * e.x;
    if (std::abs(denom) > 1e-14) {
      const double t = -(f0.x * e.y - f0.y * e.x) / denom;
      if (t > -T && t < T) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  geom::SectorSpec canon;
  canon.boresight = {0.0, 1.0};
  canon.half_beamwidth = sector.half_beamwidth;
  canon.range = sector.range;
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (canon.contains(lf.point_at(mid))) measure += cuts[i + 1] - cuts[i];
  }
  return measure;
}

// Riemann-sum variant used for the spec's 1e6-point oracle comparisons.
inline double clip_length_riemann(const geom::LineParams& line, const geom::SectorSpec& sector,
                                  int samples) {
  const geom::LineParams lf = geom::to_sector_frame(line, sector);
  const double T2 = sector.range * sector.range - lf.r * lf.r;
  if (T2 <= 0.0) return 0.0;
  const double T = std::sqrt(T2);
  const double dt = 2.0 * T / samples;
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = -T + (i + 0.5) * dt;
    if (sector.contains(lf.point_at(t))) ++count;
  }
  return count * dt;
}

// Interfering stretch from the visibility predicate alone: scan + bisection.
// Returns intervals in the same arc-length coordinate as
// LineParams::point_at.
struct SInterval {
  double lo, hi;
};

inline std::vector<SInterval> visibility_intervals_oracle(const geom::SectorSpec& ego,
                                                          const geom::LineParams& line,
                                                          double network_range,
                                                          int samples = 8192) {
  const geom::Vec2 rel = line.foot() - ego.apex;
  const double s_c = -rel.dot(line.direction());
  auto pred = [&](double s) {
    return geom::mutual_visibility(ego, line.point_at(s), line, -1);
  };
  const double lo = s_c - network_range - 1.0, hi = s_c + network_range + 1.0;
  std::vector<SInterval> out;
  auto refine = [&](double a, double b) {
    const bool fa = pred(a);
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (a + b);
      if (pred(m) == fa)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  double prev_x = lo;
  bool prev_in = pred(lo);
  double entry = prev_in ? lo : 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const bool in = pred(x);
    if (in != prev_in) {
      const double cross = refine(prev_x, x);
      if (in)
        entry = cross;
      else
        out.push_back({entry, cross});
    }
    prev_x = x;
    prev_in = in;
  }
  if (prev_in) out.push_back({entry, hi});
  return out;
}

// Chord of the upper half disk of radius R, the omega -> pi/2 limit of the
// sector clip.
inline double half_disk_chord(const geom::LineParams& line, double R) {
  const double T2 = R * R - line.r * line.r;
  if (T2 <= 0.0) return 0.0;
  const double T = std::sqrt(T2);
  // y(t) = r sin(theta) + t cos(theta) > 0 on [-T, T]
  const double c = std::cos(line.theta), s = std::sin(line.theta);
  double lo = -T, hi = T;
  if (std::abs(c) < 1e-300) {
    return line.r * s > 0.0 ? hi - lo : 0.0;
  }
  const double t0 = -line.r * s / c;
  if (c > 0.0)
    lo = std::max(lo, t0);
  else
    hi = std::min(hi, t0);
  return std::max(0.0, hi - lo);
}

}  // namespace radarcox::test

#endif
