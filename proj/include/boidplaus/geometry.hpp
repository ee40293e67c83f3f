#ifndef BOIDPLAUS_GEOMETRY_HPP
#define BOIDPLAUS_GEOMETRY_HPP

// Planar vehicle-frame math. ISO 8855 convention: x points forward
// (longitudinal), y points left (lateral), headings counter-clockwise.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boidplaus {

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Mat2T = Eigen::Matrix<Scalar, 2, 2>;

using Vec2 = Vec2T<double>;
using Mat2 = Mat2T<double>;

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  angle = std::fmod(angle, two_pi);
  if (angle <= -pi) angle += two_pi;
  if (angle > pi) angle -= two_pi;
  return angle;
}

template <typename Scalar>
Mat2T<Scalar> rotation(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  Mat2T<Scalar> r;
  r << c, -s, s, c;
  return r;
}

template <typename Scalar>
struct PoseT {
  Vec2T<Scalar> position = Vec2T<Scalar>::Zero();
  Scalar heading = 0;

  PoseT() = default;
  PoseT(const Vec2T<Scalar>& p, Scalar h) : position(p), heading(normalize_angle(h)) {}
  PoseT(Scalar x, Scalar y, Scalar h) : position(x, y), heading(normalize_angle(h)) {}

  Vec2T<Scalar> direction() const { return {std::cos(heading), std::sin(heading)}; }
};

using Pose = PoseT<double>;

/// Elliptical field of view. The long axis is aligned with the observer heading.
template <typename Scalar>
struct FovEllipseT {
  Scalar semi_axis_long = 30;
  Scalar semi_axis_lat = 4;

  FovEllipseT() = default;
  FovEllipseT(Scalar a, Scalar b) : semi_axis_long(a), semi_axis_lat(b) { validate(); }

  void validate() const {
    if (!(semi_axis_long > 0) || !(semi_axis_lat > 0))
      throw std::invalid_argument("fov ellipse: semi axes must be positive");
    if (semi_axis_long < semi_axis_lat)
      throw std::invalid_argument("fov ellipse: semi_axis_long must be >= semi_axis_lat");
  }

  /// Shape matrix M = R diag(a^2, b^2) R^T for a given heading.
  Mat2T<Scalar> shape(Scalar heading) const {
    const Mat2T<Scalar> r = rotation(heading);
    const Vec2T<Scalar> axes(semi_axis_long * semi_axis_long, semi_axis_lat * semi_axis_lat);
    return r * axes.asDiagonal() * r.transpose();
  }
};

using FovEllipse = FovEllipseT<double>;

/// Four-quadrant heading of a velocity; the zero vector maps to 0.
template <typename Derived>
typename Derived::Scalar heading_of(const Eigen::MatrixBase<Derived>& velocity) {
  using Scalar = typename Derived::Scalar;
  if (velocity.x() == Scalar(0) && velocity.y() == Scalar(0)) return Scalar(0);
  return std::atan2(velocity.y(), velocity.x());
}

/// Value of (d/a)^2 + (d_lat/b)^2 for the offset d expressed in the observer frame.
template <typename Scalar>
Scalar ellipse_quadratic_form(const Vec2T<Scalar>& observer_pos, Scalar observer_heading,
                              const FovEllipseT<Scalar>& ellipse, const Vec2T<Scalar>& other_pos) {
  const Vec2T<Scalar> local = rotation(observer_heading).transpose() * (other_pos - observer_pos);
  const Scalar u = local.x() / ellipse.semi_axis_long;
  const Scalar w = local.y() / ellipse.semi_axis_lat;
  return u * u + w * w;
}

/// Closed-boundary membership test of `other_pos` in the observer's view ellipse.
template <typename Scalar>
bool ellipse_contains(const Vec2T<Scalar>& observer_pos, Scalar observer_heading,
                      const FovEllipseT<Scalar>& ellipse, const Vec2T<Scalar>& other_pos) {
  return ellipse_quadratic_form(observer_pos, observer_heading, ellipse, other_pos) <= Scalar(1);
}

template <typename Scalar>
Scalar sign(Scalar value) {
  return static_cast<Scalar>((Scalar(0) < value) - (value < Scalar(0)));
}

/// Rigid planar transform mapping points of one frame into another: q = R p + t.
template <typename Scalar>
struct RigidTransformT {
  Scalar angle = 0;
  Vec2T<Scalar> translation = Vec2T<Scalar>::Zero();

  /// Transform that expresses world quantities in the local frame of `frame_pose`.
  static RigidTransformT into_frame(const PoseT<Scalar>& frame_pose) {
    RigidTransformT t;
    t.angle = -frame_pose.heading;
    t.translation = -(rotation(t.angle) * frame_pose.position);
    return t;
  }

  RigidTransformT inverse() const {
    RigidTransformT t;
    t.angle = -angle;
    t.translation = -(rotation(t.angle) * translation);
    return t;
  }

  Vec2T<Scalar> apply_point(const Vec2T<Scalar>& p) const { return rotation(angle) * p + translation; }
  Vec2T<Scalar> apply_vector(const Vec2T<Scalar>& v) const { return rotation(angle) * v; }
  PoseT<Scalar> apply(const PoseT<Scalar>& pose) const {
    return {apply_point(pose.position), pose.heading + angle};
  }
};

using RigidTransform = RigidTransformT<double>;

}  // namespace boidplaus

#endif  // BOIDPLAUS_GEOMETRY_HPP
