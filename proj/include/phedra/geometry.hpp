#pragma once

#include <Eigen/Core>

namespace phedra {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;

namespace tolerance {
// Incidence checks are scaled by (1 + |p|).
inline constexpr double kIncidence = 1e-9;
// Homogeneous weight below which a collineation image is treated as ideal.
inline constexpr double kHomogeneousWeight = 1e-12;
}  // namespace tolerance

inline Point3 axis_point(double z) { return Point3(0.0, 0.0, z); }

/// Coordinates inside a vertical plane: signed horizontal coordinate r
/// along the plane's direction, and height z.
struct PlanePoint {
  double r = 0.0;
  double z = 0.0;
};

/// A plane parallel to the z-direction. Its horizontal direction is
/// (cos theta, sin theta, 0) and its normal (-sin theta, cos theta, 0);
/// offset is the signed distance of the plane from the z-axis along the
/// normal. Planes with offset 0 contain the axis.
struct ProfilePlane {
  double theta = 0.0;
  double offset = 0.0;
  Point3 anchor = Point3::Zero();

  static ProfilePlane axial(double theta);
  // Plane through p spanned by the horizontal vector `direction` and e_z.
  static ProfilePlane through(const Point3& p, const Vec3& direction);

  Vec3 horizontal() const;
  Vec3 normal() const;
  double signed_distance(const Point3& p) const;
  bool is_axial(double tol = tolerance::kIncidence) const;
};

PlanePoint to_plane_coords(const Point3& p, const ProfilePlane& plane);
Point3 from_plane_coords(const PlanePoint& q, const ProfilePlane& plane);

enum class ApexSign { none, plus, minus };

char sign_char(ApexSign sign);

/// Heights of three consecutive apexes S_j, S_{j+1}, S_{j+2} on the z-axis
/// together with the sign carried by the middle one.
class ApexTriple {
 public:
  // Throws InvalidApexTriple unless the heights are pairwise distinct and
  // the sign is plus or minus.
  ApexTriple(double z_prev, double z_center, double z_next, ApexSign sign);

  double z_prev() const { return z_prev_; }
  double z_center() const { return z_center_; }
  double z_next() const { return z_next_; }
  ApexSign sign() const { return sign_; }

 private:
  double z_prev_;
  double z_center_;
  double z_next_;
  ApexSign sign_;
};

// Central scaling with center (0, z_center) taking (0, z_prev) to (0, z_next).
PlanePoint sigma_plus(const ApexTriple& t, const PlanePoint& p);

// Planar homology with center (0, z_center) and axis z = (z_prev + z_next) / 2
// taking (0, z_prev) to (0, z_next). Throws PointAtInfinity when the image is
// an ideal point and InvalidApexTriple when the center lies on the axis.
PlanePoint sigma_minus(const ApexTriple& t, const PlanePoint& p);

PlanePoint apex_map(const ApexTriple& t, const PlanePoint& p);

}  // namespace phedra
