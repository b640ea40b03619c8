#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bridge::geometry {

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
  bool operator==(const ImagePoint&) const = default;
};

/// Court-plane point in meters. Origin at center court, +x toward the right
/// basket, +y toward the top sideline in plan view.
struct CourtPoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const CourtPoint&) const = default;
};

double distance(const CourtPoint& a, const CourtPoint& b) noexcept;
double distance(const ImagePoint& a, const ImagePoint& b) noexcept;

struct CourtTemplate {
  std::string name;
  double length_m = 0.0;
  double width_m = 0.0;
  /// Distance from each baseline to the floor projection of its basket.
  double basket_setback_m = 1.575;
  std::map<std::string, CourtPoint> keypoints;

  /// Throws InvalidConfig when dimensions are non-positive or a keypoint lies
  /// outside the playing surface.
  void validate() const;
  const CourtPoint& landmark(const std::string& name) const;
  bool contains(const CourtPoint& p, double margin_m = 0.0) const noexcept;
  /// Center of the basket closest to `p`.
  CourtPoint nearest_basket(const CourtPoint& p) const noexcept;

  bool operator==(const CourtTemplate&) const = default;
};

/// 28.65 m x 15.24 m.
CourtTemplate nba_court();
/// 28 m x 15 m.
CourtTemplate fiba_court();
/// Looks up a shipped template ("NBA", "FIBA") or one of `extra`.
CourtTemplate find_template(const std::string& name,
                            std::span<const CourtTemplate> extra = {});

/// Planar projective map, stored normalized: m(2,2) == 1 when |m(2,2)| is
/// above 1e-12, otherwise unit Frobenius norm.
class Homography {
 public:
  Homography() : m_(Eigen::Matrix3d::Identity()) {}
  /// Throws SingularHomography when |det| <= 1e-12 after normalization.
  explicit Homography(const Eigen::Matrix3d& m);

  static Homography from_row_major(std::span<const double, 9> values);
  std::array<double, 9> row_major() const noexcept;

  const Eigen::Matrix3d& matrix() const noexcept { return m_; }
  Homography inverse() const;

  /// Maps (u, v, 1) through the matrix and dehomogenizes.
  /// Throws PointAtInfinity when |w| <= 1e-12.
  Eigen::Vector2d transfer(const Eigen::Vector2d& p) const;

  bool operator==(const Homography&) const = default;

 private:
  Eigen::Matrix3d m_;
};

struct Correspondence {
  ImagePoint image;
  CourtPoint court;
  std::optional<std::string> landmark;
  bool operator==(const Correspondence&) const = default;
};

/// Least-squares image->court homography via normalized DLT.
Homography estimate_homography(std::span<const Correspondence> correspondences);

struct RansacParams {
  int iterations = 1000;
  double inlier_threshold_px = 3.0;
  std::uint64_t seed = 0;
};

struct RobustFit {
  Homography homography;
  std::vector<bool> inliers;
  std::size_t inlier_count() const noexcept;
};

/// RANSAC over minimal 4-point samples, scored by symmetric transfer error
/// expressed in image pixels, followed by a DLT refit on the consensus set.
/// The returned inlier flags are the consensus set of the best sample.
RobustFit estimate_homography_robust(std::span<const Correspondence> correspondences,
                                     const RansacParams& ransac);

/// Symmetric transfer error of one correspondence in pixels. The court-side
/// residual is converted to pixels with the local scale of the inverse map.
double symmetric_transfer_error_px(const Homography& h, const Correspondence& c);

CourtPoint project_to_court(const Homography& h, const ImagePoint& p);
/// Inverse direction: court point mapped through h^-1.
ImagePoint project_to_image(const Homography& h, const CourtPoint& p);

struct ReprojectionError {
  double rms_px = 0.0;
  double max_px = 0.0;
};

/// Image-space distances between each image point and its court point mapped
/// through h^-1.
ReprojectionError reprojection_error(const Homography& h,
                                     std::span<const Correspondence> correspondences);

}  // namespace bridge::geometry
