#include "support/fixtures.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace phedra::testing {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 horizontal(double theta) { return Vec3(std::cos(theta), std::sin(theta), 0.0); }

std::vector<Apex> apexes_with(const std::vector<double>& z, const std::vector<ApexSign>& interior) {
  std::vector<Apex> out;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const bool end = j == 0 || j + 1 == z.size();
    out.push_back({z[j], end ? ApexSign::none : interior[j - 1]});
  }
  return out;
}

}  // namespace

ControlPolylines fix1() {
  const double s3 = std::sqrt(3.0);
  ControlPolylines cp;
  cp.trajectory = {Point3(2.0, 0.0, 0.0), Point3(0.75, 0.75 * s3, 1.0)};
  cp.directions = {Point3(3.0, 0.0, 0.0), cp.trajectory[1] + horizontal(kPi / 3.0)};
  cp.apexes = {{-1.0, ApexSign::none}, {2.0, ApexSign::plus}, {4.0, ApexSign::none}};
  return cp;
}

Point3 fix1_axial_v20() {
  const double theta = 2.0 * kPi / 3.0;
  return Point3(1.2 * std::cos(theta), 1.2 * std::sin(theta), 1.8);
}

Vec3 fix1_u2() { return (fix1_axial_v20() - fix1().trajectory[1]).normalized(); }

ControlPolylines fix1_three_columns() {
  ControlPolylines cp = fix1();
  const Point3 v20 = fix1_axial_v20() + 0.5 * fix1_u2();
  cp.trajectory.push_back(v20);
  cp.directions.push_back(v20 + horizontal(2.0 * kPi / 3.0));
  return cp;
}

ControlPolylines axial_input(const std::vector<double>& apex_z, ApexSign sign, const std::vector<Column>& columns) {
  ControlPolylines cp;
  for (const Column& c : columns) {
    const Point3 v = c.r * horizontal(c.theta) + Vec3(0.0, 0.0, c.z);
    cp.trajectory.push_back(v);
    cp.directions.push_back(v + horizontal(c.theta));
  }
  cp.apexes = apexes_with(apex_z, std::vector<ApexSign>(apex_z.size() - 2, sign));
  return cp;
}

ControlPolylines parallelogram_tube() {
  return axial_input({7.0, -3.5, 1.0, -0.5, 7.0, -3.5}, ApexSign::plus,
                     {{0.0, 3.5, 0.0}, {1.0, 2.0, 0.7}, {2.0, 2.5, -0.3}});
}

ControlPolylines anti_parallelogram_tube() {
  return axial_input({5.25, -2.25, -3.25, 4.25, 5.25, -2.25}, ApexSign::minus,
                     {{0.0, 3.0, 0.0}, {1.0, 2.0, 0.5}, {2.0, 2.5, -0.2}});
}

ControlPolylines flat_input(const std::vector<double>& apex_z, const std::vector<std::array<double, 2>>& columns) {
  ControlPolylines cp;
  for (const auto& c : columns) {
    const Point3 v(c[0], 0.0, c[1]);
    cp.trajectory.push_back(v);
    cp.directions.push_back(v + Vec3(1.0, 0.0, 0.0));
  }
  cp.apexes = apexes_with(apex_z, std::vector<ApexSign>(apex_z.size() - 2, ApexSign::plus));
  return cp;
}

ControlPolylines flat_parallelogram(std::size_t columns) {
  const std::vector<std::array<double, 2>> all = {{3.5, 0.0}, {2.0, 0.7}, {2.5, -0.3}};
  return flat_input({7.0, -3.5, 1.0, -0.5, 7.0, -3.5}, {all.begin(), all.begin() + static_cast<long>(columns)});
}

ControlPolylines flat_blocked() { return flat_input({-1.0, 2.0, 4.0}, {{2.0, 0.0}, {1.5, 1.0}, {3.0, 0.5}}); }

ConstructionOptions developable() {
  ConstructionOptions o;
  o.developable = true;
  return o;
}

RandomModel ModelGenerator::next() {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int m = integer(1, 6);
    const int n = integer(2, 6);

    std::vector<double> z;
    for (int j = 0; j <= n; ++j) {
      double candidate = 0.0;
      bool ok = false;
      for (int tries = 0; tries < 100 && !ok; ++tries) {
        candidate = uniform(-3.0, 3.0);
        ok = true;
        for (int back = 1; back <= 2 && back <= j; ++back) {
          if (std::abs(candidate - z[static_cast<std::size_t>(j - back)]) < 0.3) ok = false;
        }
      }
      z.push_back(candidate);
    }

    const bool general = m >= 2 && integer(0, 1) == 1;
    std::vector<ApexSign> signs;
    for (int j = 1; j < n; ++j) signs.push_back(!general && integer(0, 2) == 0 ? ApexSign::minus : ApexSign::plus);

    std::vector<Point3> axial;
    std::vector<double> theta;
    double angle = 0.0;
    for (int i = 0; i <= m; ++i) {
      if (i > 0) angle += uniform(0.3, 1.2);
      theta.push_back(angle);
      const double r = uniform(1.0, 3.0);
      const double height = i == 0 ? 0.0 : uniform(-1.5, 1.5);
      axial.push_back(r * horizontal(angle) + Vec3(0.0, 0.0, height));
    }
    std::vector<Point3> traj = axial;
    Vec3 offset = Vec3::Zero();
    for (int i = 2; i <= m && general; ++i) {
      const Vec3 u = (axial[static_cast<std::size_t>(i)] - axial[static_cast<std::size_t>(i - 1)]).normalized();
      offset += uniform(-0.8, 0.8) * u;
      traj[static_cast<std::size_t>(i)] += offset;
    }

    const double phi = uniform(-kPi, kPi);
    const Vec3 shift(uniform(-2.0, 2.0), uniform(-2.0, 2.0), uniform(-2.0, 2.0));
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(phi, Vec3::UnitZ()).toRotationMatrix();
    RandomModel out;
    out.general = general;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      out.input.trajectory.push_back(rot * traj[i] + shift);
      out.input.directions.push_back(rot * (traj[i] + horizontal(theta[i])) + shift);
    }
    for (double& h : z) h += shift.z();
    out.input.apexes = apexes_with(z, signs);

    try {
      out.construction = construct(out.input);
      out.plan = build_plan(out.construction.axial);
      out.interval = flexion_limits(out.plan);
    } catch (const Error&) {
      ++rejected_;
      continue;
    }
    const double margin = 1e-3 * std::max(1.0, out.plan.drive_bar);
    if (out.interval.zero_length || out.interval.lower.t > out.plan.t_star - margin ||
        out.interval.upper.t < out.plan.t_star + margin) {
      ++rejected_;
      continue;
    }
    return out;
  }
  throw std::runtime_error("model generator exhausted its attempts");
}

}  // namespace phedra::testing
