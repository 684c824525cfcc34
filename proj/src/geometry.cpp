#include "hidwa/geometry.hpp"

#include <algorithm>

namespace hidwa
{

double normalize_angle(double angle)
{
  // One wrap is exact here (Sterbenz) and matches the remainder below.
  if (angle > -kPi && angle <= kPi) {
    return angle;
  }
  if (angle > kPi && angle < 3.0 * kPi) {
    return angle - 2.0 * kPi;
  }
  if (angle > -3.0 * kPi && angle <= -kPi) {
    return angle + 2.0 * kPi;
  }
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) {
    wrapped = kPi;
  }
  return wrapped;
}

double angle_diff(double to, double from)
{
  return normalize_angle(to - from);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  if (len_sq <= 0.0) {
    return distance(p, a);
  }
  const double s = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq, 0.0, 1.0);
  return distance(p, Point2{a.x + s * dx, a.y + s * dy});
}

}  // namespace hidwa
