#pragma once

// Degree-valued angle helpers. Every angle in the library is kept in the
// half-open interval (-180, 180].

namespace bridge {

/// Maps any finite angle into (-180, 180]; -180 itself maps to +180.
double wrap_deg(double deg) noexcept;

/// Signed minimal rotation taking `b` onto `a`, in (-180, 180].
double shortest_diff(double a, double b) noexcept;

/// Angle of the vector (dx, dy) measured from +x toward +y, in (-180, 180].
double heading_deg(double dx, double dy) noexcept;

/// Linear blend from `from` toward `to` along the shorter arc.
double lerp_angle(double from, double to, double t) noexcept;

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

}  // namespace bridge
