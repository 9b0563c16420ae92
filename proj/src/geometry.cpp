#include "phedra/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "phedra/errors.hpp"

namespace phedra {

ProfilePlane ProfilePlane::axial(double theta) {
  return ProfilePlane{theta, 0.0, Point3::Zero()};
}

ProfilePlane ProfilePlane::through(const Point3& p, const Vec3& direction) {
  ProfilePlane plane;
  plane.theta = std::atan2(direction.y(), direction.x());
  plane.anchor = p;
  plane.offset = plane.normal().dot(p);
  return plane;
}

Vec3 ProfilePlane::horizontal() const { return {std::cos(theta), std::sin(theta), 0.0}; }

Vec3 ProfilePlane::normal() const { return {-std::sin(theta), std::cos(theta), 0.0}; }

double ProfilePlane::signed_distance(const Point3& p) const { return normal().dot(p) - offset; }

bool ProfilePlane::is_axial(double tol) const { return std::abs(offset) <= tol; }

PlanePoint to_plane_coords(const Point3& p, const ProfilePlane& plane) {
  const double dist = plane.signed_distance(p);
  if (std::abs(dist) > tolerance::kIncidence * (1.0 + p.norm())) {
    std::ostringstream msg;
    msg << "point is " << dist << " away from the profile plane";
    throw Error(ErrorCode::PointOffPlane, msg.str());
  }
  return {plane.horizontal().dot(p), p.z()};
}

Point3 from_plane_coords(const PlanePoint& q, const ProfilePlane& plane) {
  Point3 p = q.r * plane.horizontal() + plane.offset * plane.normal();
  p.z() = q.z;
  return p;
}

char sign_char(ApexSign sign) {
  switch (sign) {
    case ApexSign::plus: return '+';
    case ApexSign::minus: return '-';
    case ApexSign::none: break;
  }
  return ' ';
}

ApexTriple::ApexTriple(double z_prev, double z_center, double z_next, ApexSign sign)
    : z_prev_(z_prev), z_center_(z_center), z_next_(z_next), sign_(sign) {
  if (z_prev == z_center || z_center == z_next || z_prev == z_next) {
    throw Error(ErrorCode::InvalidApexTriple, "apex heights of a triple must be pairwise distinct");
  }
  if (sign == ApexSign::none) {
    throw Error(ErrorCode::InvalidApexTriple, "the center of an apex triple needs a sign");
  }
}

PlanePoint sigma_plus(const ApexTriple& t, const PlanePoint& p) {
  const double c = t.z_center();
  const double lambda = (t.z_next() - c) / (t.z_prev() - c);
  return {lambda * p.r, c + lambda * (p.z - c)};
}

PlanePoint sigma_minus(const ApexTriple& t, const PlanePoint& p) {
  const double c = t.z_center();
  const double mid = 0.5 * (t.z_prev() + t.z_next());
  if (c == mid) {
    throw Error(ErrorCode::InvalidApexTriple,
                "center lies on the bisector axis; the collineation is an elation");
  }
  // M = I + k c a^T with c = (0, z_c, 1), a = (0, 1, -mid).
  const double k = 2.0 / (t.z_next() - c);
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m += k * Eigen::Vector3d(0.0, c, 1.0) * Eigen::RowVector3d(0.0, 1.0, -mid);
  const Eigen::Vector3d image = m * Eigen::Vector3d(p.r, p.z, 1.0);
  if (std::abs(image.z()) < tolerance::kHomogeneousWeight) {
    throw Error(ErrorCode::PointAtInfinity,
                "sigma- sends the point to infinity (minus sign not admissible here)");
  }
  return {image.x() / image.z(), image.y() / image.z()};
}

PlanePoint apex_map(const ApexTriple& t, const PlanePoint& p) {
  return t.sign() == ApexSign::plus ? sigma_plus(t, p) : sigma_minus(t, p);
}

}  // namespace phedra
