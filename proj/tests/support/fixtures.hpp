#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"

namespace phedra::testing {

// Apexes (-1, 2+, 4); V_00 = (2, 0, 0); column 1 in the 60 degree plane at
// r = 1.5, z = 1.
ControlPolylines fix1();

// fix1 plus a general column 2: the axial point at 120 degrees, r = 1.2,
// z = 1.8, translated by 0.5 along the trajectory edge.
ControlPolylines fix1_three_columns();
Point3 fix1_axial_v20();
Vec3 fix1_u2();

struct Column {
  double theta;
  double r;
  double z;
};

// Axial input: every plane contains the z-axis. Interior apexes get `sign`.
ControlPolylines axial_input(const std::vector<double>& apex_z, ApexSign sign, const std::vector<Column>& columns);

ControlPolylines parallelogram_tube();
ControlPolylines anti_parallelogram_tube();

// Developed patterns in the xz-plane (columns given as (x, z)).
ControlPolylines flat_input(const std::vector<double>& apex_z, const std::vector<std::array<double, 2>>& columns);
ControlPolylines flat_parallelogram(std::size_t columns);
ControlPolylines flat_blocked();
ConstructionOptions developable();

struct RandomModel {
  ControlPolylines input;
  Construction construction;
  DeformationPlan plan;
  FlexionInterval interval;
  bool general = false;
};

/// Rejection sampler of valid models with m, n <= 6, placed by a random
/// rigid motion. Only models whose interval strictly contains t_star are
/// returned.
class ModelGenerator {
 public:
  explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

  RandomModel next();
  std::size_t rejected() const { return rejected_; }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64 rng_;
  std::size_t rejected_ = 0;
};

}  // namespace phedra::testing
