#include "phedra/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "phedra/errors.hpp"

namespace phedra {

namespace {

using Vec2 = Eigen::Vector2d;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return d1 * d2 < -tol && d3 * d4 < -tol;
}

// Sparse-free assembly of the velocity constraints of the flat linkage.
struct FlexSystem {
  Eigen::MatrixXd rows;
  std::size_t n = 0;
  std::size_t cols = 0;

  std::size_t vr(std::size_t i, std::size_t j) const { return n + 1 + 2 * (i * n + j); }
  std::size_t vz(std::size_t i, std::size_t j) const { return vr(i, j) + 1; }
};

FlexSystem assemble(const FlatChart& chart) {
  FlexSystem sys;
  const std::size_t cols = chart.points.size();
  const std::size_t n = chart.apex_z.size() - 1;
  sys.n = n;
  sys.cols = cols;
  const std::size_t unknowns = n + 1 + 2 * cols * n;
  std::vector<Eigen::VectorXd> rows;

  auto bar = [&](std::size_t i, std::size_t j, std::size_t apex) {
    const Vec2& p = chart.points[i][j];
    const double dr = p.x();
    const double dz = p.y() - chart.apex_z[apex];
    Eigen::VectorXd row = Eigen::VectorXd::Zero(unknowns);
    row[sys.vr(i, j)] = dr;
    row[sys.vz(i, j)] = dz;
    row[apex] = -dz;
    rows.push_back(row);
  };

  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bar(i, j, j);
      bar(i, j, j + 1);
    }
    // S_{j+1} stays at a fixed ratio on the edge V_ij V_{i,j+1}.
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const Vec2& a = chart.points[i][j];
      const Vec2& b = chart.points[i][j + 1];
      const Vec2 s(0.0, chart.apex_z[j + 1]);
      const double u = (s - a).dot(b - a) / (b - a).squaredNorm();
      for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(unknowns);
        row[sys.vr(i, j) + k] = 1.0 - u;
        row[sys.vr(i, j + 1) + k] = u;
        if (k == 1) row[j + 1] = -1.0;
        rows.push_back(row);
      }
    }
  }
  Eigen::VectorXd ground = Eigen::VectorXd::Zero(unknowns);
  ground[sys.vz(0, 0)] = 1.0;
  rows.push_back(ground);

  sys.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(unknowns));
  for (std::size_t r = 0; r < rows.size(); ++r) sys.rows.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return sys;
}

Eigen::VectorXd pack(const LinkageVelocityField& field, const FlexSystem& sys) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.rows.cols());
  for (std::size_t j = 0; j <= sys.n; ++j) x[static_cast<Eigen::Index>(j)] = field.apex_rates[j];
  for (std::size_t i = 0; i < sys.cols; ++i) {
    for (std::size_t j = 0; j < sys.n; ++j) {
      x[static_cast<Eigen::Index>(sys.vr(i, j))] = field.velocity[i][j].x();
      x[static_cast<Eigen::Index>(sys.vz(i, j))] = field.velocity[i][j].y();
    }
  }
  return x;
}

}  // namespace

double check_isometry(const VertexGrid& grid, const std::vector<double>& reference) {
  const std::vector<double> lengths = edge_lengths(grid);
  if (lengths.size() != reference.size()) {
    std::ostringstream msg;
    msg << "grid has " << lengths.size() << " edges, reference has " << reference.size();
    throw Error(ErrorCode::GridMismatch, msg.str());
  }
  double longest = 0.0;
  for (double l : reference) longest = std::max(longest, l);
  double worst = 0.0;
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    const double denom = reference[e] > 1e-12 * longest ? reference[e] : longest;
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(lengths[e] - reference[e]) / denom);
  }
  return worst;
}

double check_isometry(const FlexState& state, const PHedronMesh& mesh) {
  return check_isometry(state.general, mesh.reference_lengths);
}

double check_planarity(const VertexGrid& grid) {
  double worst = 0.0;
  for (const GridQuad& q : grid_quads(grid.cols(), grid.rows())) {
    const auto c = q.corners();
    worst = std::max(worst, quad_planarity_defect(grid.at(c[0].first, c[0].second), grid.at(c[1].first, c[1].second),
                                                  grid.at(c[2].first, c[2].second), grid.at(c[3].first, c[3].second)));
  }
  return worst;
}

double check_cone_apexes(const FlexState& state) {
  const VertexGrid& g = state.axial;
  const double scale = std::max(g.scale(), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.cols(); ++i) {
    for (std::size_t j = 0; j + 1 < g.rows(); ++j) {
      const Point3& a = g.at(i, j);
      const Vec3 dir = g.at(i, j + 1) - a;
      const Vec3 w = axis_point(state.apex_z[j + 1]) - a;
      const double dist = dir.cross(w).norm() / dir.norm();
      worst = std::max(worst, dist / scale);
    }
  }
  return worst;
}

bool sigma_maps_agree(const FlexState& state, std::size_t j, double tol) {
  if (j == 0 || j + 1 >= state.apex_z.size()) throw Error(ErrorCode::InvalidInput, "apex index has no triple");
  const auto chart = linkage_chart(state);
  const double scale = std::max(state.axial.scale(), 1.0);
  try {
    const ApexTriple plus(state.apex_z[j - 1], state.apex_z[j], state.apex_z[j + 1], ApexSign::plus);
    const ApexTriple minus(state.apex_z[j - 1], state.apex_z[j], state.apex_z[j + 1], ApexSign::minus);
    for (const auto& column : chart) {
      const PlanePoint a = sigma_plus(plus, column[j - 1]);
      const PlanePoint b = sigma_minus(minus, column[j - 1]);
      if (std::hypot(a.r - b.r, a.z - b.z) > tol * scale) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

FlatChart flat_chart(const AxialModel& model) {
  if (model.grid.empty()) throw Error(ErrorCode::InvalidInput, "axial grid not propagated");
  FlatChart chart;
  for (const Apex& a : model.apexes) chart.apex_z.push_back(a.z);
  double scale = model.grid.scale();
  for (double z : chart.apex_z) scale = std::max(scale, std::abs(z));
  chart.scale = std::max(scale, 1e-300);

  const ProfilePlane plane = ProfilePlane::axial(model.planes.front().theta);
  const Vec3 h = plane.horizontal();
  const Vec3 nrm = plane.normal();
  chart.points.resize(model.grid.cols());
  for (std::size_t i = 0; i < model.grid.cols(); ++i) {
    for (std::size_t j = 0; j < model.grid.rows(); ++j) {
      const Point3& p = model.grid.at(i, j);
      if (std::abs(nrm.dot(p)) > 1e-9 * chart.scale) {
        std::ostringstream msg;
        msg << "vertex (" << i << ", " << j << ") is not in the common plane; the configuration is not flat";
        throw Error(ErrorCode::InvalidInput, msg.str());
      }
      chart.points[i].emplace_back(h.dot(p), p.z());
    }
  }
  return chart;
}

LinkageVelocityField first_order_flex(const AxialModel& model) {
  const FlatChart chart = flat_chart(model);
  const FlexSystem sys = assemble(chart);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.rows, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-9 * (sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > cutoff) ++rank;
  }
  const Eigen::Index nullity = sys.rows.cols() - rank;
  if (nullity == 0) throw Error(ErrorCode::Rigid, "the flat linkage admits only the standstill");
  if (nullity > 1) {
    std::ostringstream msg;
    msg << "the flat linkage has a " << nullity << "-dimensional space of infinitesimal motions";
    throw Error(ErrorCode::Indeterminate, msg.str());
  }

  Eigen::VectorXd x = svd.matrixV().col(sys.rows.cols() - 1);
  x.normalize();
  Eigen::Index pivot = 0;
  for (Eigen::Index k = 1; k < x.size(); ++k) {
    if (std::abs(x[k]) > std::abs(x[pivot]) * (1.0 + 1e-12)) pivot = k;
  }
  if (x[pivot] < 0.0) x = -x;

  LinkageVelocityField field;
  field.normalization_index = static_cast<std::size_t>(pivot);
  field.nullity = 1;
  for (std::size_t j = 0; j <= sys.n; ++j) field.apex_rates.push_back(x[static_cast<Eigen::Index>(j)]);
  field.velocity.resize(sys.cols);
  for (std::size_t i = 0; i < sys.cols; ++i) {
    for (std::size_t j = 0; j < sys.n; ++j) {
      field.velocity[i].emplace_back(x[static_cast<Eigen::Index>(sys.vr(i, j))],
                                     x[static_cast<Eigen::Index>(sys.vz(i, j))]);
    }
  }
  return field;
}

double bar_rate_residual(const LinkageVelocityField& field, const AxialModel& model) {
  const FlexSystem sys = assemble(flat_chart(model));
  return (sys.rows * pack(field, sys)).cwiseAbs().maxCoeff();
}

ExpansionReport non_expansion_check(const LinkageVelocityField& field, const AxialModel& model) {
  const FlatChart chart = flat_chart(model);
  ExpansionReport report;
  report.tolerance = 1e-10 * chart.scale * chart.scale;
  bool all_nonpositive = true;
  bool all_nonnegative = true;
  for (std::size_t i = 0; i + 1 < chart.points.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < chart.points[i].size(); ++j) {
      const Vec2 d = chart.points[i][j] - chart.points[i + 1][j];
      const Vec2 v = field.velocity[i][j] - field.velocity[i + 1][j];
      const double e = v.dot(d);
      if (e > report.tolerance) all_nonpositive = false;
      if (e < -report.tolerance) all_nonnegative = false;
      row.push_back(e);
    }
    report.rates.push_back(std::move(row));
  }
  report.verdict = all_nonpositive || all_nonnegative ? FlatVerdict::flexes : FlatVerdict::blocked;
  return report;
}

TubeReport tube_check(const AxialModel& model, const DeformationOptions& options) {
  TubeReport report;
  const std::size_t n = model.n();
  if (model.grid.empty() || n < 2) return report;
  double scale = model.grid.scale();
  for (const Apex& a : model.apexes) scale = std::max(scale, std::abs(a.z));

  const double gap0 = (model.grid.at(0, 0) - model.grid.at(0, n - 1)).norm() / scale;
  report.closure_gap = gap0;
  if (gap0 >= 1e-9) return report;

  try {
    const DeformationPlan plan = build_plan(model, options);
    const FlexionInterval interval = flexion_limits(plan);
    constexpr int kSamples = 16;
    bool persists = true;
    for (int k = 0; k < kSamples; ++k) {
      const double t = interval.lower.t + interval.length() * (k + 0.5) / kSamples;
      const LinkageState state = linkage_L0_at(plan, t);
      const double gap = (state.column[0] - state.column[n - 1]).norm() / scale;
      report.closure_gap = std::max(report.closure_gap, gap);
      ++report.samples_checked;
      if (gap >= 1e-8) persists = false;
    }
    report.closed = persists;
  } catch (const Error&) {
    report.closed = false;
  }
  if (!report.closed || n != 5) return report;

  const Vec3 h = model.planes.front().horizontal();
  std::array<Vec2, 4> p;
  for (std::size_t k = 0; k < 4; ++k) p[k] = Vec2(h.dot(model.grid.at(0, k)), model.grid.at(0, k).z());
  const double tol = 1e-8 * scale;
  if (((p[1] - p[0]) - (p[2] - p[3])).norm() < tol) {
    report.tube_class = TubeClass::parallelogram;
    return report;
  }
  const bool opposite_equal = std::abs((p[1] - p[0]).norm() - (p[3] - p[2]).norm()) < tol &&
                              std::abs((p[2] - p[1]).norm() - (p[0] - p[3]).norm()) < tol;
  const double area_tol = tol * scale;
  const bool crossed = segments_cross(p[0], p[1], p[2], p[3], area_tol) ||
                       segments_cross(p[1], p[2], p[3], p[0], area_tol);
  if (opposite_equal && crossed) {
    report.tube_class = TubeClass::anti_parallelogram;
    report.symmetry_orthogonal = std::abs(p[0].x() - p[2].x()) < tol && std::abs(p[1].x() - p[3].x()) < tol;
  }
  return report;
}

const char* to_string(FlatVerdict v) { return v == FlatVerdict::flexes ? "flexes" : "blocked"; }

const char* to_string(TubeClass c) {
  switch (c) {
    case TubeClass::parallelogram:
      return "parallelogram";
    case TubeClass::anti_parallelogram:
      return "anti_parallelogram";
    case TubeClass::other:
      break;
  }
  return "other";
}

}  // namespace phedra
