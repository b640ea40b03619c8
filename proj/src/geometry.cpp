#include "bridge/geometry.hpp"

#include "bridge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bridge::geometry {

namespace {

constexpr double kTinyW = 1e-12;
constexpr double kMinDet = 1e-12;
// The two smallest singular values of the design matrix must differ by
// at least 1% relative.
constexpr double kSingularRatioLimit = 0.99;
constexpr double kRankTolerance = 1e-10;
constexpr double kCollinearTolerance = 1e-6;

struct Normalization {
  Eigen::Matrix3d transform = Eigen::Matrix3d::Identity();
  std::vector<Eigen::Vector2d> points;
};

// Isotropic (Hartley) normalization: centroid to origin, mean distance sqrt(2).
Normalization normalize(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());

  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 1e-12) || !std::isfinite(mean_dist)) {
    throw Error(ErrorCode::DegenerateConfiguration, "correspondence points coincide");
  }

  const double s = std::sqrt(2.0) / mean_dist;
  Normalization out;
  out.transform << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  out.points.reserve(pts.size());
  for (const auto& p : pts) out.points.emplace_back(s * (p - centroid));
  return out;
}

bool has_collinear_triple(const std::vector<Eigen::Vector2d>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Eigen::Vector2d a = pts[j] - pts[i];
        const Eigen::Vector2d b = pts[k] - pts[i];
        if (std::abs(a.x() * b.y() - a.y() * b.x()) < kCollinearTolerance) return true;
      }
  return false;
}

Eigen::Vector2d to_vec(const ImagePoint& p) { return {p.u, p.v}; }
Eigen::Vector2d to_vec(const CourtPoint& p) { return {p.x, p.y}; }

}  // namespace

double distance(const CourtPoint& a, const CourtPoint& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double distance(const ImagePoint& a, const ImagePoint& b) noexcept {
  return std::hypot(a.u - b.u, a.v - b.v);
}

Homography::Homography(const Eigen::Matrix3d& m) : m_(m) {
  if (!m_.allFinite()) throw Error(ErrorCode::SingularHomography, "non-finite homography");
  if (std::abs(m_(2, 2)) > 1e-12) {
    m_ /= m_(2, 2);
  } else {
    const double norm = m_.norm();
    if (norm == 0.0) throw Error(ErrorCode::SingularHomography, "zero homography");
    m_ /= norm;
  }
  if (!(std::abs(m_.determinant()) > kMinDet)) {
    throw Error(ErrorCode::SingularHomography, "homography determinant is zero");
  }
}

Homography Homography::from_row_major(std::span<const double, 9> values) {
  Eigen::Matrix3d m;
  m << values[0], values[1], values[2], values[3], values[4], values[5], values[6],
      values[7], values[8];
  return Homography(m);
}

std::array<double, 9> Homography::row_major() const noexcept {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(r * 3 + c)] = m_(r, c);
  return out;
}

Homography Homography::inverse() const { return Homography(m_.inverse()); }

Eigen::Vector2d Homography::transfer(const Eigen::Vector2d& p) const {
  const Eigen::Vector3d q = m_ * Eigen::Vector3d(p.x(), p.y(), 1.0);
  if (!(std::abs(q.z()) > kTinyW)) {
    throw Error(ErrorCode::PointAtInfinity, "point maps to infinity");
  }
  return {q.x() / q.z(), q.y() / q.z()};
}

Homography estimate_homography(std::span<const Correspondence> correspondences) {
  const std::size_t n = correspondences.size();
  if (n < 4) {
    throw Error(ErrorCode::TooFewCorrespondences,
                "need at least 4 correspondences, got " + std::to_string(n));
  }

  std::vector<Eigen::Vector2d> src, dst;
  src.reserve(n);
  dst.reserve(n);
  for (const auto& c : correspondences) {
    src.push_back(to_vec(c.image));
    dst.push_back(to_vec(c.court));
    if (!src.back().allFinite() || !dst.back().allFinite()) {
      throw Error(ErrorCode::DegenerateConfiguration, "non-finite correspondence");
    }
  }

  const Normalization ns = normalize(src);
  const Normalization nd = normalize(dst);
  if (n == 4 && (has_collinear_triple(ns.points) || has_collinear_triple(nd.points))) {
    throw Error(ErrorCode::DegenerateConfiguration, "three of four points are collinear");
  }

  // Zero rows pad the minimal case up to a square system so the null vector
  // shows up as the ninth singular value.
  const Eigen::Index rows = std::max<Eigen::Index>(static_cast<Eigen::Index>(2 * n), 9);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ns.points[i].x(), y = ns.points[i].y();
    const double xp = nd.points[i].x(), yp = nd.points[i].y();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << 0, 0, 0, -x, -y, -1, yp * x, yp * y, yp;
    a.row(r + 1) << x, y, 1, 0, 0, 0, -xp * x, -xp * y, -xp;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double largest = sv(0);
  const double second_smallest = sv(7);
  const double smallest = sv(8);
  if (!(second_smallest > kRankTolerance * largest) ||
      smallest / second_smallest > kSingularRatioLimit) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "design matrix is rank deficient (singular values " +
                    std::to_string(second_smallest) + ", " + std::to_string(smallest) + ")");
  }

  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d denorm = nd.transform.inverse() * hn * ns.transform;
  try {
    return Homography(denorm);
  } catch (const Error&) {
    throw Error(ErrorCode::DegenerateConfiguration, "estimated homography is singular");
  }
}

std::size_t RobustFit::inlier_count() const noexcept {
  return static_cast<std::size_t>(std::count(inliers.begin(), inliers.end(), true));
}

double symmetric_transfer_error_px(const Homography& h, const Correspondence& c) {
  try {
    const Homography inv = h.inverse();
    const Eigen::Vector2d img = to_vec(c.image);
    const Eigen::Vector2d court = to_vec(c.court);
    const double d_img = (inv.transfer(court) - img).norm();
    const double d_court = (h.transfer(img) - court).norm();

    // Pixels per meter of the inverse map at the court point: sqrt(|det J|).
    const Eigen::Matrix3d& g = inv.matrix();
    const Eigen::Vector3d q = g * Eigen::Vector3d(court.x(), court.y(), 1.0);
    const double u = q.x() / q.z(), v = q.y() / q.z();
    Eigen::Matrix2d jac;
    jac << g(0, 0) - u * g(2, 0), g(0, 1) - u * g(2, 1), g(1, 0) - v * g(2, 0),
        g(1, 1) - v * g(2, 1);
    jac /= q.z();
    const double scale = std::sqrt(std::abs(jac.determinant()));
    const double d_court_px = scale * d_court;
    return std::sqrt(0.5 * (d_img * d_img + d_court_px * d_court_px));
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

RobustFit estimate_homography_robust(std::span<const Correspondence> correspondences,
                                     const RansacParams& ransac) {
  const std::size_t n = correspondences.size();
  if (n < 4) {
    throw Error(ErrorCode::TooFewCorrespondences,
                "need at least 4 correspondences, got " + std::to_string(n));
  }
  if (!(ransac.inlier_threshold_px > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "inlier_threshold_px must be positive");
  }

  std::mt19937_64 rng(ransac.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<bool> best_flags;
  std::size_t best_count = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<bool> flags(n);

  for (int iter = 0; iter < ransac.iterations; ++iter) {
    std::array<std::size_t, 4> idx{};
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t candidate;
      do {
        candidate = pick(rng);
      } while (std::find(idx.begin(), idx.begin() + static_cast<long>(k), candidate) !=
               idx.begin() + static_cast<long>(k));
      idx[k] = candidate;
    }
    std::array<Correspondence, 4> sample{correspondences[idx[0]], correspondences[idx[1]],
                                         correspondences[idx[2]], correspondences[idx[3]]};
    Homography model;
    try {
      model = estimate_homography(sample);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateConfiguration) continue;
      throw;
    }

    std::size_t count = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err = symmetric_transfer_error_px(model, correspondences[i]);
      flags[i] = err <= ransac.inlier_threshold_px;
      if (flags[i]) {
        ++count;
        cost += err * err;
      }
    }
    if (count > best_count || (count == best_count && count > 0 && cost < best_cost)) {
      best_count = count;
      best_cost = cost;
      best_flags = flags;
    }
  }

  if (best_count < 4) {
    throw Error(ErrorCode::NoConsensus,
                "best consensus set has " + std::to_string(best_count) + " inliers");
  }

  std::vector<Correspondence> inliers;
  inliers.reserve(best_count);
  for (std::size_t i = 0; i < n; ++i)
    if (best_flags[i]) inliers.push_back(correspondences[i]);

  return RobustFit{estimate_homography(inliers), std::move(best_flags)};
}

CourtPoint project_to_court(const Homography& h, const ImagePoint& p) {
  const Eigen::Vector2d q = h.transfer(to_vec(p));
  return {q.x(), q.y()};
}

ImagePoint project_to_image(const Homography& h, const CourtPoint& p) {
  const Eigen::Vector2d q = h.inverse().transfer(to_vec(p));
  return {q.x(), q.y()};
}

ReprojectionError reprojection_error(const Homography& h,
                                     std::span<const Correspondence> correspondences) {
  if (correspondences.empty()) {
    throw Error(ErrorCode::TooFewCorrespondences, "reprojection error needs a correspondence");
  }
  Homography inv;
  try {
    inv = h.inverse();
  } catch (const Error&) {
    throw Error(ErrorCode::SingularHomography, "homography is not invertible");
  }
  double sum_sq = 0.0, max_px = 0.0;
  for (const auto& c : correspondences) {
    const double d = (inv.transfer(to_vec(c.court)) - to_vec(c.image)).norm();
    sum_sq += d * d;
    max_px = std::max(max_px, d);
  }
  return {std::sqrt(sum_sq / static_cast<double>(correspondences.size())), max_px};
}

}  // namespace bridge::geometry
