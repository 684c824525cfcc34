#pragma once

#include <cmath>
#include <numbers>

namespace hidwa
{

inline constexpr double kPi = std::numbers::pi;

// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

// Signed shortest rotation from `from` to `to`, in (-pi, pi].
double angle_diff(double to, double from);

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

// Robot configuration in the world frame: meters, meters, radians.
struct Pose
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Point2 position() const { return {x, y}; }
  friend bool operator==(const Pose &, const Pose &) = default;
};

inline Pose make_pose(double x, double y, double theta)
{
  return Pose{x, y, normalize_angle(theta)};
}

// Linear (m/s) and angular (rad/s) velocity in the robot frame.
struct ControlInput
{
  double v{0.0};
  double omega{0.0};

  friend bool operator==(const ControlInput &, const ControlInput &) = default;
};

inline double distance(Point2 a, Point2 b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Euclidean distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

// Sign with an exact-zero band: returns -1, 0 or +1.
inline int sign_of(double value, double zero_band = 0.0)
{
  if (value > zero_band) {
    return 1;
  }
  if (value < -zero_band) {
    return -1;
  }
  return 0;
}

}  // namespace hidwa
