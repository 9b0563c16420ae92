#include "phedra/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phedra/errors.hpp"

namespace phedra {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sgn(double v, bool* was_zero = nullptr) {
  if (v == 0.0 && was_zero) *was_zero = true;
  return v < 0.0 ? -1 : 1;
}

double model_scale(const DeformationPlan& plan) {
  double s = 1.0;
  for (double z : plan.apex_z_star) s = std::max(s, std::abs(z));
  for (const auto& col : plan.bar_to_prev) {
    for (double c : col) s = std::max(s, c);
  }
  return s;
}

// Closed-form solve of the three-sphere system for column i. Candidates are
// built with the discriminant clamped at zero. Returns false when the system
// is undefined (coincident axis spheres or prev on the axis).
bool solve_strip(const DeformationPlan& plan, std::size_t i, double z_a, double z_b, const Point3& prev,
                 TrajectorySolve& out) {
  const double c_a = plan.bar_to_prev[i][0];
  const double c_b = plan.bar_to_next[i][0];
  const double edge = plan.trajectory_edges[i];
  const double scale = model_scale(plan);
  if (std::abs(z_b - z_a) <= 1e-14 * scale) return false;
  const double p2 = prev.x() * prev.x() + prev.y() * prev.y();
  if (p2 <= 1e-24 * scale * scale) return false;

  const double z = (c_a * c_a - c_b * c_b + z_b * z_b - z_a * z_a) / (2.0 * (z_b - z_a));
  const double rho2 = c_a * c_a - (z - z_a) * (z - z_a);
  const double dz = z - prev.z();
  const double h = 0.5 * (rho2 + p2 + dz * dz - edge * edge);
  out.discriminant = rho2 * p2 - h * h;

  const double norm = std::sqrt(p2);
  const double fx = h * prev.x() / p2;
  const double fy = h * prev.y() / p2;
  const double half = std::sqrt(std::max(out.discriminant, 0.0)) / norm;
  const double px = -prev.y() / norm;
  const double py = prev.x() / norm;
  out.positive = Point3(fx + half * px, fy + half * py, z);
  out.negative = Point3(fx - half * px, fy - half * py, z);
  out.tangent = std::abs(out.discriminant) <= plan.options.complex_tolerance;
  return true;
}

void fill_column(const DeformationPlan& plan, std::size_t i, const std::vector<double>& apex_z, VertexGrid& grid) {
  for (std::size_t j = 0; j + 1 < plan.n; ++j) {
    const Point3 s = axis_point(apex_z[j + 1]);
    grid.at(i, j + 1) = s + plan.ratio[i][j] * (grid.at(i, j) - s);
  }
}

}  // namespace

DeformationPlan build_plan(const AxialModel& model, const DeformationOptions& options) {
  if (model.grid.empty()) throw Error(ErrorCode::InvalidInput, "axial grid not propagated");
  DeformationPlan plan;
  plan.options = options;
  plan.m = model.m();
  plan.n = model.n();
  const std::size_t m = plan.m;
  const std::size_t n = plan.n;
  for (const Apex& a : model.apexes) {
    plan.apex_z_star.push_back(a.z);
    plan.apex_signs.push_back(a.sign);
  }

  // Equal bars in some layer: only plus signs are admissible.
  const bool any_minus = std::any_of(model.apexes.begin(), model.apexes.end(),
                                     [](const Apex& a) { return a.sign == ApexSign::minus; });
  std::vector<double> d0(m + 1), d1(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const Point3& v = model.grid.at(i, 0);
    d0[i] = (v - model.apex(0)).norm();
    d1[i] = (v - model.apex(1)).norm();
    if (any_minus && std::abs(d0[i] - d1[i]) <= 1e-9 * (1.0 + v.norm())) {
      throw Error(ErrorCode::ScissorRequiresAllPlus,
                  "a layer with |S_0 - V_i0| = |S_1 - V_i0| admits only plus-signed apexes");
    }
  }

  // Shorter-bar rule with the smallest-index tie break.
  plan.drive_case = DriveCase::a;
  for (std::size_t i = 0; i <= m; ++i) {
    if (std::abs(d0[i] - d1[i]) <= 1e-12 * (1.0 + d0[i])) {
      if (i == 0) plan.tie_broken = true;
      continue;
    }
    plan.drive_case = d0[i] < d1[i] ? DriveCase::a : DriveCase::b;
    break;
  }
  if (plan.drive_case == DriveCase::a) {
    plan.t_star = model.apexes[0].z;
    plan.drive_bar = d0[0];
    plan.other_bar = d1[0];
    plan.other_apex_sign = sgn(model.apexes[1].z, &plan.sign_of_zero);
  } else {
    plan.t_star = model.apexes[1].z;
    plan.drive_bar = d1[0];
    plan.other_bar = d0[0];
    plan.other_apex_sign = sgn(model.apexes[0].z, &plan.sign_of_zero);
  }

  plan.bar_to_prev.assign(m + 1, std::vector<double>(n));
  plan.bar_to_next.assign(m + 1, std::vector<double>(n));
  plan.ratio.assign(m + 1, std::vector<double>(n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Point3& v = model.grid.at(i, j);
      plan.bar_to_prev[i][j] = (v - model.apex(j)).norm();
      plan.bar_to_next[i][j] = (v - model.apex(j + 1)).norm();
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const Vec3 a = model.grid.at(i, j + 1) - model.apex(j + 1);
      const Vec3 b = model.grid.at(i, j) - model.apex(j + 1);
      const double k = a.dot(b);
      if (std::abs(k) < 1e-12) {
        std::ostringstream msg;
        msg << "sign constant undefined at column " << i << ", row " << j;
        throw Error(ErrorCode::DegenerateK, msg.str());
      }
      plan.ratio[i][j] = k / b.squaredNorm();
      if (i == 0) {
        plan.kappa.push_back(sgn(k));
        plan.rho.push_back(a.norm() / b.norm());
      }
    }
  }

  plan.trajectory_edges.assign(m + 1, 0.0);
  plan.strip_offsets.assign(m + 1, 0.0);
  plan.branch.assign(m + 1, 1);
  plan.branch_ambiguous.assign(m + 1, false);
  for (std::size_t i = 1; i <= m; ++i) {
    const Point3& prev = model.grid.at(i - 1, 0);
    const Point3& cur = model.grid.at(i, 0);
    plan.trajectory_edges[i] = (cur - prev).norm();
    plan.strip_offsets[i] = model.ledger.magnitudes.empty() ? 0.0 : model.ledger.magnitudes[i];
    const double radius = std::hypot(prev.x(), prev.y());
    const double side = (-prev.y() * cur.x() + prev.x() * cur.y()) / radius;
    if (std::abs(side) <= 1e-9 * (1.0 + cur.norm())) {
      plan.branch_ambiguous[i] = true;
    } else {
      plan.branch[i] = side > 0.0 ? 1 : -1;
    }
  }
  return plan;
}

LinkageState linkage_L0_at(const DeformationPlan& plan, double t) {
  const double c = plan.drive_bar;
  const double arg = c * c - t * t;
  if (arg < 0.0) {
    std::ostringstream msg;
    msg << "parameter " << t << " outside the hard domain [" << -c << ", " << c << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  const double x = std::sqrt(arg);
  const double other = plan.other_apex_sign * std::sqrt(std::max(plan.other_bar * plan.other_bar - x * x, 0.0));

  LinkageState out;
  out.apex_z.assign(plan.n + 1, 0.0);
  out.column.assign(plan.n, Point3::Zero());
  out.apex_z[0] = plan.drive_case == DriveCase::a ? t : other;
  out.apex_z[1] = plan.drive_case == DriveCase::a ? other : t;
  out.column[0] = Point3(x, 0.0, 0.0);

  for (std::size_t j = 0; j + 1 < plan.n; ++j) {
    const double lambda = plan.kappa[j] * plan.rho[j];
    const Point3 s_prev = axis_point(out.apex_z[j]);
    const Point3 s_center = axis_point(out.apex_z[j + 1]);
    const Point3& v = out.column[j];
    const Point3 next = s_center + lambda * (v - s_center);
    Vec3 bar = s_prev - v;
    if (plan.apex_signs[j + 1] == ApexSign::minus) bar.z() = -bar.z();
    out.column[j + 1] = next;
    out.apex_z[j + 2] = (next + lambda * bar).z();
  }
  return out;
}

TrajectorySolve trajectory_point_at(const DeformationPlan& plan, std::size_t i, const LinkageState& linkage,
                                    const Point3& prev) {
  if (i == 0 || i > plan.m) throw Error(ErrorCode::InvalidInput, "strip index out of range");
  TrajectorySolve out;
  if (!solve_strip(plan, i, linkage.apex_z[0], linkage.apex_z[1], prev, out)) {
    throw Error(ErrorCode::OutOfDomain, "three-sphere system is undefined (degenerate axis configuration)");
  }
  if (out.discriminant < -plan.options.complex_tolerance) {
    std::ostringstream msg;
    msg << "strip " << i << " has discriminant " << out.discriminant << ": solutions are complex";
    throw Error(ErrorCode::ComplexBranch, msg.str());
  }
  return out;
}

FlexState axial_state_at(const DeformationPlan& plan, double t, const std::vector<int>& branch) {
  const LinkageState linkage = linkage_L0_at(plan, t);
  FlexState state;
  state.t = t;
  state.apex_z = linkage.apex_z;
  state.branch = branch;
  state.axial = VertexGrid(plan.m + 1, plan.n);
  state.discriminants.assign(plan.m + 1, 0.0);
  state.tangent.assign(plan.m + 1, false);
  for (std::size_t j = 0; j < plan.n; ++j) state.axial.at(0, j) = linkage.column[j];
  for (std::size_t i = 1; i <= plan.m; ++i) {
    const TrajectorySolve solve = trajectory_point_at(plan, i, linkage, state.axial.at(i - 1, 0));
    state.discriminants[i] = solve.discriminant;
    state.tangent[i] = solve.tangent;
    state.axial.at(i, 0) = solve.pick(branch[i]);
    fill_column(plan, i, state.apex_z, state.axial);
  }
  return state;
}

FlexState general_state_at(const DeformationPlan& plan, double t, const std::vector<int>& branch) {
  FlexState state = axial_state_at(plan, t, branch);
  const std::size_t n = plan.n;
  state.general = VertexGrid(plan.m + 1, n + 2);
  Vec3 offset = Vec3::Zero();
  for (std::size_t i = 0; i <= plan.m; ++i) {
    if (i >= 1 && plan.strip_offsets[i] != 0.0) {
      const Vec3 u = (state.axial.at(i, 0) - state.axial.at(i - 1, 0)).normalized();
      offset += plan.strip_offsets[i] * u;
    }
    state.general.at(i, 0) = axis_point(state.apex_z[0]) + offset;
    for (std::size_t j = 0; j < n; ++j) state.general.at(i, j + 1) = state.axial.at(i, j) + offset;
    state.general.at(i, n + 1) = axis_point(state.apex_z[n]) + offset;
  }
  return state;
}

std::vector<double> discriminant_profile(const DeformationPlan& plan, double t, const std::vector<int>& branch) {
  std::vector<double> out(plan.m + 1, kNaN);
  out[0] = 0.0;
  if (plan.drive_bar * plan.drive_bar - t * t < 0.0) return out;
  const LinkageState linkage = linkage_L0_at(plan, t);
  Point3 prev = linkage.column[0];
  for (std::size_t i = 1; i <= plan.m; ++i) {
    TrajectorySolve solve;
    if (!solve_strip(plan, i, linkage.apex_z[0], linkage.apex_z[1], prev, solve)) break;
    out[i] = solve.discriminant;
    prev = solve.pick(branch[i]);
  }
  return out;
}

FlexionInterval flexion_limits(const DeformationPlan& plan, const std::vector<int>& branch) {
  const double c = plan.drive_bar;
  const int samples = std::max(plan.options.samples, 2);
  const double width_tol = plan.options.root_tolerance * std::max(1.0, c);
  const double merge_tol = 1e-9 * std::max(1.0, c);
  const double scale = model_scale(plan);
  const double zero_tol = 1e-9 * std::pow(scale, 4);

  std::vector<double> ts;
  for (int k = 0; k <= samples; ++k) ts.push_back(-c + 2.0 * c * k / samples);
  ts.push_back(plan.t_star);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<std::vector<double>> profile;
  profile.reserve(ts.size());
  for (double t : ts) profile.push_back(discriminant_profile(plan, t, branch));

  // The chain degenerates at |t| = c, yet a discriminant may cross zero
  // arbitrarily close to it; sample just inside instead.
  auto has_nan = [](const std::vector<double>& d) {
    return std::any_of(d.begin() + 1, d.end(), [](double x) { return std::isnan(x); });
  };
  for (std::size_t s : {std::size_t{0}, ts.size() - 1}) {
    const double inward = s == 0 ? 1.0 : -1.0;
    for (double h = 1e-14 * c; has_nan(profile[s]) && h < c / samples; h *= 10.0) {
      ts[s] = inward * (h - c);
      profile[s] = discriminant_profile(plan, ts[s], branch);
    }
  }

  auto chain_real = [&](const std::vector<double>& d, std::size_t upto) {
    for (std::size_t k = 1; k < upto; ++k) {
      if (!(d[k] >= -plan.options.complex_tolerance)) return false;
    }
    return true;
  };

  std::vector<FlexionLimit> roots;
  for (std::size_t i = 1; i <= plan.m; ++i) {
    for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
      const double da = profile[s][i];
      const double db = profile[s + 1][i];
      if (std::isnan(da) || std::isnan(db) || (da >= 0.0) == (db >= 0.0)) continue;
      double real = da >= 0.0 ? ts[s] : ts[s + 1];
      double imag = da >= 0.0 ? ts[s + 1] : ts[s];
      for (int it = 0; it < 200 && std::abs(real - imag) > width_tol; ++it) {
        const double mid = 0.5 * (real + imag);
        const double dm = discriminant_profile(plan, mid, branch)[i];
        if (dm >= 0.0) {
          real = mid;
        } else {
          imag = mid;
        }
      }
      const auto at_root = discriminant_profile(plan, real, branch);
      if (!chain_real(at_root, i)) continue;
      roots.push_back({real, {i}, false, std::abs(at_root[i])});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const FlexionLimit& a, const FlexionLimit& b) { return a.t < b.t; });

  FlexionInterval out;
  out.t_star = plan.t_star;
  out.domain = c;
  out.limits.push_back({-c, {}, true, 0.0});
  for (const auto& r : roots) {
    auto& last = out.limits.back();
    if (!last.domain_endpoint && std::abs(r.t - last.t) <= merge_tol) {
      for (auto o : r.owners) {
        if (std::find(last.owners.begin(), last.owners.end(), o) == last.owners.end()) last.owners.push_back(o);
      }
      continue;
    }
    out.limits.push_back(r);
  }
  out.limits.push_back({c, {}, true, 0.0});

  const auto at_star = discriminant_profile(plan, plan.t_star, branch);
  for (std::size_t i = 1; i <= plan.m; ++i) {
    if (!std::isnan(at_star[i]) && std::abs(at_star[i]) <= zero_tol) out.zero_length = true;
  }

  out.lower = out.limits.front();
  out.upper = out.limits.back();
  for (const auto& lim : out.limits) {
    if (lim.t < plan.t_star - merge_tol) out.lower = lim;
  }
  for (auto it = out.limits.rbegin(); it != out.limits.rend(); ++it) {
    if (it->t > plan.t_star + merge_tol) out.upper = *it;
  }
  return out;
}

DeformationPlan flip_strip(const DeformationPlan& plan, std::size_t strip) {
  if (strip == 0 || strip > plan.m) throw Error(ErrorCode::InvalidInput, "strip index out of range");
  DeformationPlan out = plan;
  out.branch[strip] = -out.branch[strip];
  return out;
}

DeformationPlan switch_branch(const DeformationPlan& plan, const FlexionLimit& limit) {
  if (limit.domain_endpoint || limit.owners.empty()) {
    throw Error(ErrorCode::NotALimit, "domain endpoints have no second branch");
  }
  return flip_strip(plan, *std::min_element(limit.owners.begin(), limit.owners.end()));
}

DeformationPlan switch_branch(const DeformationPlan& plan, const FlexionInterval& interval, LimitSide side) {
  return switch_branch(plan, side == LimitSide::lower ? interval.lower : interval.upper);
}

std::vector<FlexState> sweep(const DeformationPlan& plan, const FlexionInterval& interval, int frames) {
  if (frames < 2) throw Error(ErrorCode::InvalidInput, "a sweep needs at least 2 frames");
  const double delta = 1e-6 * interval.length();
  const double lo = interval.lower.t + delta;
  const double hi = interval.upper.t - delta;
  std::vector<FlexState> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int k = 0; k < frames; ++k) {
    const double t = lo + (hi - lo) * k / (frames - 1);
    out.push_back(general_state_at(plan, t, plan.branch));
  }
  return out;
}

std::vector<double> plane_angles(const FlexState& state) {
  std::vector<double> out;
  for (std::size_t i = 0; i < state.axial.cols(); ++i) {
    const Point3& v = state.axial.at(i, 0);
    out.push_back(std::atan2(v.y(), v.x()));
  }
  return out;
}

std::vector<std::vector<PlanePoint>> linkage_chart(const FlexState& state) {
  const auto angles = plane_angles(state);
  std::vector<std::vector<PlanePoint>> out;
  for (std::size_t i = 0; i < state.axial.cols(); ++i) {
    const ProfilePlane plane = ProfilePlane::axial(angles[i]);
    std::vector<PlanePoint> col;
    for (std::size_t j = 0; j < state.axial.rows(); ++j) {
      const Point3& v = state.axial.at(i, j);
      col.push_back({plane.horizontal().dot(v), v.z()});
    }
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace phedra
