#include "geometry.hpp"

#include <algorithm>
#include <limits>

namespace radarcox::geom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

enum class Bound : std::uint8_t { None, Edge, Disk };

struct ClipResult {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  Bound lo_bound = Bound::None;
  Bound hi_bound = Bound::None;
};

// Clips the line against the canonical sector (apex origin, boresight +y).
// The sector is the intersection of two half-planes and the range disk, all
// convex, so the result is a single t-interval measured from the line's foot.
ClipResult clip_canonical(double theta, double r, double omega, double range) {
  ClipResult res;
  const double T2 = range * range - r * r;
  if (T2 < 0.0) return res;
  const double T = std::sqrt(T2);
  double lo = -T, hi = T;
  Bound lo_b = Bound::Disk, hi_b = Bound::Disk;

  const double co = std::cos(omega), so = std::sin(omega);
  const Vec2 n{std::cos(theta), std::sin(theta)};
  const Vec2 d{-std::sin(theta), std::cos(theta)};
  const Vec2 edges[2] = {{-co, so}, {co, so}};
  for (const Vec2& m : edges) {
    const double slope = d.dot(m);
    const double off = r * n.dot(m);
    if (std::abs(slope) < 1e-300) {
      if (off <= 0.0) return res;
      continue;
    }
    const double t0 = -off / slope;
    if (slope > 0.0) {
      if (t0 > lo) { lo = t0; lo_b = Bound::Edge; }
    } else {
      if (t0 < hi) { hi = t0; hi_b = Bound::Edge; }
    }
  }
  if (hi - lo <= 0.0) return res;
  res.empty = false;
  res.lo = lo;
  res.hi = hi;
  res.lo_bound = lo_b;
  res.hi_bound = hi_b;
  return res;
}

bool has_nan(const LineParams& l) { return std::isnan(l.theta) || std::isnan(l.r); }

}  // namespace

LineParams LineParams::canonical() const {
  LineParams out{normalize_angle(theta), r};
  if (out.r < 0.0) {
    out.r = -out.r;
    out.theta = normalize_angle(out.theta + kPi);
  }
  return out;
}

void SectorSpec::validate() const {
  if (std::abs(boresight.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("SectorSpec: boresight must be a unit vector");
  if (!(range > 0.0)) throw std::invalid_argument("SectorSpec: range must be positive");
  if (!(half_beamwidth > 0.0) || !(half_beamwidth < kPi / 2.0))
    throw std::invalid_argument("SectorSpec: half beamwidth must be in (0, pi/2)");
}

bool SectorSpec::contains(const Vec2& q) const {
  const Vec2 dq = q - apex;
  const double dist = dq.norm();
  if (dist > range) return false;
  return dq.dot(boresight) > std::cos(half_beamwidth) * dist;
}

LineParams to_sector_frame(const LineParams& line, const SectorSpec& sector) {
  const double delta = std::atan2(sector.boresight.x, sector.boresight.y);
  const double r_shift = line.r - sector.apex.dot(line.normal());
  return LineParams{normalize_angle(line.theta + delta), r_shift};
}

LineSectorIntersection line_sector_length(const LineParams& line, const SectorSpec& sector) {
  sector.validate();
  if (has_nan(line)) throw std::invalid_argument("line_sector_length: NaN line parameters");

  const LineParams lf = to_sector_frame(line, sector);
  const ClipResult clip = clip_canonical(lf.theta, lf.r, sector.half_beamwidth, sector.range);
  if (clip.empty) return {0.0, ClipCase::Empty};

  LineSectorIntersection out;
  out.total_length = clip.hi - clip.lo;

  const LineParams cn = lf.canonical();
  const double sin_t = std::sin(cn.theta);
  if (cn.r < kGeomTol && std::abs(sin_t) < 1e-12) {
    out.case_tag = ClipCase::P0;
    return out;
  }
  if (clip.lo_bound == Bound::Disk && clip.hi_bound == Bound::Disk) {
    out.case_tag = ClipCase::P3;
  } else if (clip.lo_bound == Bound::Edge && clip.hi_bound == Bound::Edge) {
    out.case_tag = ClipCase::P2;
  } else {
    // One edge crossing and one arc crossing; the sub-case depends on where
    // the line meets the boresight axis.
    if (std::abs(sin_t) < 1e-12) {
      out.case_tag = ClipCase::P4;
    } else {
      const double u = cn.r / sin_t;
      if (u < 0.0)
        out.case_tag = ClipCase::P5;
      else if (u > sector.range)
        out.case_tag = ClipCase::P4;
      else
        out.case_tag = ClipCase::P1;
    }
  }
  return out;
}

double clip_case_value(ClipCase c, double theta, double u, double omega, double rng) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double to = std::tan(omega);
  switch (c) {
    case ClipCase::P0:
      return rng;
    case ClipCase::P1: {
      const double edge = u * to / (std::abs(st) + std::abs(ct) * to);
      const double arc = std::sqrt(rng * rng - u * u * st * st) - u * std::abs(ct);
      return edge + arc;
    }
    case ClipCase::P2:
      return 2.0 * u * st * to / (st * st - ct * ct * to * to);
    case ClipCase::P3:
      return 2.0 * std::sqrt(rng * rng - u * u * st * st);
    case ClipCase::P4: {
      const double cam = (u / rng) * st * st +
                         std::sqrt((u * u / (rng * rng)) * (st * st * st * st - st * st) + ct * ct);
      const double at = std::abs(std::tan(theta));
      return (rng * cam - u * at / (at + to)) / std::abs(ct);
    }
    case ClipCase::P5: {
      const double cam = (u / rng) * st * st +
                         std::sqrt((u * u / (rng * rng)) * (st * st * st * st - st * st) + ct * ct);
      const double at = std::abs(std::tan(theta));
      return (rng * cam - u * at / (at - to)) / std::abs(ct);
    }
    case ClipCase::Empty:
      return 0.0;
  }
  return 0.0;
}

bool mutual_visibility(const SectorSpec& ego, const Vec2& other_pos,
                       const LineParams& other_line, int other_boresight_sign) {
  ego.validate();
  const double s = other_boresight_sign >= 0 ? 1.0 : -1.0;
  SectorSpec other;
  other.apex = other_pos;
  other.boresight = other_line.direction() * s;
  other.half_beamwidth = ego.half_beamwidth;
  other.range = ego.range;
  return ego.contains(other_pos) && other.contains(ego.apex);
}

InterferingInterval interfering_interval(const SectorSpec& ego, const LineParams& line,
                                         double network_range) {
  ego.validate();
  InterferingInterval out;
  if (!(network_range > 0.0)) return out;

  const Vec2 e = ego.apex;
  const Vec2 f0 = line.foot();
  const Vec2 d = line.direction();
  const Vec2 rel = f0 - e;  // q(s) - e = rel + s d

  // Range disk about the ego.
  const double s_c = -rel.dot(d);
  const double rho2 = rel.dot(rel) - s_c * s_c;
  const double h2 = network_range * network_range - rho2;
  if (h2 < 0.0) return out;
  const double h = std::sqrt(std::max(0.0, h2));
  double lo = s_c - h, hi = s_c + h;

  // Ego front cone and the cone of interferer faces that look back at the
  // ego; both are convex, each contributes two half-plane constraints.
  const double co = std::cos(ego.half_beamwidth), so = std::sin(ego.half_beamwidth);
  const Vec2 b = ego.boresight;
  const Vec2 axes[2] = {b, d};
  for (const Vec2& ax : axes) {
    const Vec2 p = ax.perp();
    const Vec2 normals[2] = {p * co + ax * so, p * (-co) + ax * so};
    for (const Vec2& m : normals) {
      const double slope = d.dot(m);
      const double off = rel.dot(m);
      if (std::abs(slope) < 1e-14) {
        if (off <= 0.0) return out;
        continue;
      }
      const double t0 = -off / slope;
      if (slope > 0.0)
        lo = std::max(lo, t0);
      else
        hi = std::min(hi, t0);
    }
  }
  if (hi - lo <= 0.0) return out;

  // Reference point: intersection with the ego street, or the ego's own
  // projection for (near-)parallel lines.
  const Vec2 street_perp = ego.boresight.perp();
  const double dp = d.dot(street_perp);
  double s_ref;
  if (std::abs(dp) > 1e-12)
    s_ref = -rel.dot(street_perp) / dp;
  else
    s_ref = s_c;

  out.empty = false;
  out.a = lo - s_ref;
  out.b = hi - s_ref;
  out.delta = s_ref - s_c;
  out.rho = std::sqrt(std::max(0.0, rho2));
  return out;
}

double interferer_distance(double d_i, double theta, double v) {
  const double dx = d_i + v * std::abs(std::cos(theta));
  const double dy = v * std::sin(theta);
  return std::hypot(dx, dy);
}

}  // namespace radarcox::geom
