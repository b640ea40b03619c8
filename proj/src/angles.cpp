#include "bridge/angles.hpp"

#include <cmath>
#include <numbers>

namespace bridge {

double wrap_deg(double deg) noexcept {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

double shortest_diff(double a, double b) noexcept { return wrap_deg(a - b); }

double heading_deg(double dx, double dy) noexcept {
  return wrap_deg(rad_to_deg(std::atan2(dy, dx)));
}

double lerp_angle(double from, double to, double t) noexcept {
  return wrap_deg(from + t * shortest_diff(to, from));
}

double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

}  // namespace bridge
