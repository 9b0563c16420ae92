#pragma once

#include <cstddef>
#include <vector>

#include "phedra/construction.hpp"
#include "phedra/geometry.hpp"
#include "phedra/grid.hpp"

namespace phedra {

// Which apex height drives the motion: z_0 in case a, z_1 in case b.
enum class DriveCase { a, b };

struct DeformationOptions {
  int samples = 512;               // bracketing samples over the hard domain
  double root_tolerance = 1e-12;   // bisection stops at this parameter width
  double complex_tolerance = 1e-12;
};

/// Time-invariant data of the isometric deformation.
struct DeformationPlan {
  DriveCase drive_case = DriveCase::a;
  double t_star = 0.0;
  double drive_bar = 0.0;   // |t| <= drive_bar is the hard domain
  double other_bar = 0.0;
  double other_apex_sign = 1.0;  // sgn of the non-driving apex height at t_star
  bool sign_of_zero = false;     // sgn(0) was needed and taken as +1
  bool tie_broken = false;       // bars of column 0 were equal

  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> apex_z_star;   // S_j at t_star
  std::vector<ApexSign> apex_signs;  // selects M+ or M- per apex
  std::vector<int> kappa;            // sgn(k_j) for column 0
  std::vector<double> rho;           // |V_{0,j+1}-S_{j+1}| / |V_{0,j}-S_{j+1}|

  // Per column i and row j.
  std::vector<std::vector<double>> bar_to_prev;  // |V_ij - S_j|
  std::vector<std::vector<double>> bar_to_next;  // |V_ij - S_{j+1}|
  std::vector<std::vector<double>> ratio;        // V_{i,j+1}-S_{j+1} = ratio*(V_ij - S_{j+1})

  std::vector<double> trajectory_edges;  // |V_i,0 - V_{i-1},0|, entry 0 unused
  std::vector<double> strip_offsets;     // d_i of the translation ledger
  std::vector<int> branch;               // epsilon_i in {+1,-1}, entry 0 unused
  std::vector<bool> branch_ambiguous;    // V_i,0 was on the mirror plane at t_star

  DeformationOptions options;

  std::size_t driving_apex() const { return drive_case == DriveCase::a ? 0 : 1; }
};

/// S_0(t)..S_n(t) and the column-0 chain V_{0,0}(t)..V_{0,n-1}(t).
struct LinkageState {
  std::vector<double> apex_z;
  std::vector<Point3> column;
};

/// The two mirror-symmetric solutions of the three-sphere system.
struct TrajectorySolve {
  Point3 positive;  // epsilon = +1 side of the plane through the axis and prev
  Point3 negative;
  double discriminant = 0.0;
  bool tangent = false;  // |discriminant| <= tolerance: at a limit

  const Point3& pick(int epsilon) const { return epsilon >= 0 ? positive : negative; }
};

struct FlexState {
  double t = 0.0;
  std::vector<double> apex_z;
  VertexGrid axial;    // (m+1) x n
  VertexGrid general;  // (m+1) x (n+2), same layout as PHedronMesh
  std::vector<int> branch;
  std::vector<double> discriminants;  // entry 0 unused
  std::vector<bool> tangent;
};

struct FlexionLimit {
  double t = 0.0;
  std::vector<std::size_t> owners;  // strip indices whose discriminant vanishes
  bool domain_endpoint = false;
  double residual = 0.0;  // |discriminant| of the first owner at t
};

struct FlexionInterval {
  double t_star = 0.0;
  double domain = 0.0;
  std::vector<FlexionLimit> limits;  // sorted, includes the domain endpoints
  FlexionLimit lower;
  FlexionLimit upper;
  bool zero_length = false;  // a discriminant vanishes at t_star (flat pattern)

  double length() const { return upper.t - lower.t; }
  bool contains(double t) const { return t >= lower.t && t <= upper.t; }
};

enum class LimitSide { lower, upper };

// Throws DegenerateK when a row's sign constant is undefined and
// ScissorRequiresAllPlus when the equal-bar rule is violated.
DeformationPlan build_plan(const AxialModel& model, const DeformationOptions& options = {});

// Throws OutOfDomain for |t| beyond the driving bar.
LinkageState linkage_L0_at(const DeformationPlan& plan, double t);

// Column i given the apexes and the previous column's trajectory point.
// Throws ComplexBranch past a flexion limit, OutOfDomain when undefined.
TrajectorySolve trajectory_point_at(const DeformationPlan& plan, std::size_t i, const LinkageState& linkage,
                                    const Point3& prev);

FlexState axial_state_at(const DeformationPlan& plan, double t, const std::vector<int>& branch);
FlexState general_state_at(const DeformationPlan& plan, double t, const std::vector<int>& branch);
inline FlexState state_at(const DeformationPlan& plan, double t) { return general_state_at(plan, t, plan.branch); }

// Discriminants of all strips at t without throwing; a strip whose
// predecessors are complex still gets a value (chain clamped), undefined
// strips get NaN.
std::vector<double> discriminant_profile(const DeformationPlan& plan, double t, const std::vector<int>& branch);

FlexionInterval flexion_limits(const DeformationPlan& plan, const std::vector<int>& branch);
inline FlexionInterval flexion_limits(const DeformationPlan& plan) { return flexion_limits(plan, plan.branch); }

// Toggles epsilon of the limit's owning strip (the smallest owner when
// several strips share the root). Throws NotALimit at a domain endpoint.
DeformationPlan switch_branch(const DeformationPlan& plan, const FlexionLimit& limit);
DeformationPlan switch_branch(const DeformationPlan& plan, const FlexionInterval& interval, LimitSide side);

// Toggles epsilon of an arbitrary strip.
DeformationPlan flip_strip(const DeformationPlan& plan, std::size_t strip);

// Uniform samples of [t_lambda + delta, t_mu - delta], delta = 1e-6 * length.
std::vector<FlexState> sweep(const DeformationPlan& plan, const FlexionInterval& interval, int frames);

// Plane angle of column i is atan2 of V_{i,0}; charts have r_{i,0} > 0.
std::vector<double> plane_angles(const FlexState& state);
std::vector<std::vector<PlanePoint>> linkage_chart(const FlexState& state);

}  // namespace phedra
