#ifndef RADARCOX_GEOMETRY_HPP
#define RADARCOX_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace radarcox::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 perp() const { return {-y, x}; }
};

/// A street: x*cos(theta) + y*sin(theta) = r.
/// theta in [0, 2*pi) internally; r is the signed perpendicular offset from
/// the origin. Direction along the line is a = (-sin(theta), cos(theta)).
struct LineParams {
  double theta = 0.0;
  double r = 0.0;

  Vec2 normal() const { return {std::cos(theta), std::sin(theta)}; }
  Vec2 direction() const { return {-std::sin(theta), std::cos(theta)}; }
  /// Foot of the perpendicular from the origin.
  Vec2 foot() const { return normal() * r; }
  /// Point at signed arc-length s from the foot.
  Vec2 point_at(double s) const { return foot() + direction() * s; }
  /// Equivalent parameters with r >= 0 (theta shifted by pi when needed).
  LineParams canonical() const;
};

/// One radar beam: apex, unit boresight, half-beamwidth Omega in (0, pi/2),
/// and a hard range cutoff. Membership follows the strict-cosine / closed
/// range convention.
struct SectorSpec {
  Vec2 apex;
  Vec2 boresight{0.0, 1.0};
  double half_beamwidth = 0.0;
  double range = 0.0;

  void validate() const;
  bool contains(const Vec2& q) const;
};

enum class ClipCase : std::uint8_t { P0, P1, P2, P3, P4, P5, Empty };

struct LineSectorIntersection {
  double total_length = 0.0;
  ClipCase case_tag = ClipCase::Empty;
};

/// Length of line inside the sector. The sector may sit anywhere; the line is
/// transformed into the sector frame (apex at origin, boresight +y) first.
/// The cone-and-disk region is convex, so the clipped set is one segment and
/// the length is computed exactly from the two edge half-planes and the range
/// circle. NaN inputs are rejected.
LineSectorIntersection line_sector_length(const LineParams& line, const SectorSpec& sector);

/// Closed-form value of the case formula p1..p5 at (theta, u = r/sin(theta)),
/// for a sector of half-beamwidth omega and radius rng in the canonical frame.
/// Used to cross-check the piecewise forms against the exact clipping.
double clip_case_value(ClipCase c, double theta, double u, double omega, double rng);

/// Line expressed in the frame of a sector (apex at origin, boresight +y).
LineParams to_sector_frame(const LineParams& line, const SectorSpec& sector);

/// One radar face sees the other position and vice versa. The radar at
/// other_pos sits on other_line with boresight sign * a where
/// a = (-sin(theta), cos(theta)); it uses the ego's Omega and range.
bool mutual_visibility(const SectorSpec& ego, const Vec2& other_pos,
                       const LineParams& other_line, int other_boresight_sign);

/// Stretch of a line on which a radar with boresight -a interferes with the
/// ego radar. v is the signed coordinate along +a measured from the line's
/// intersection with the ego street (from the ego itself when the line is the
/// ego street or parallel to it). Distance to the ego from coordinate v is
/// w(v) = hypot(v + delta, rho).
struct InterferingInterval {
  bool empty = true;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // s_intersection - s_closest, along the line
  double rho = 0.0;    // perpendicular distance from ego to the line

  double length() const { return empty ? 0.0 : b - a; }
  double distance_at(double v) const { return std::hypot(v + delta, rho); }
};

InterferingInterval interfering_interval(const SectorSpec& ego, const LineParams& line,
                                         double network_range);

/// Distance from the ego radar to an interferer at distance v from the
/// intersection point of a line crossing the ego street at distance d_i,
/// measured on the side where distances grow. d_i = 0 covers the ego street.
double interferer_distance(double d_i, double theta, double v);

constexpr double kGeomTol = 1e-9;

}  // namespace radarcox::geom

#endif
