#include "phedra/service.hpp"

#include <cstdlib>
#include <mutex>
#include <sstream>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "phedra/analysis.hpp"
#include "phedra/errors.hpp"

namespace phedra {

using nlohmann::json;

namespace {

constexpr int kDefaultFrames = 24;
constexpr int kMaxFrames = 1000;

json point_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

json violations_json(const std::vector<Violation>& list) {
  json out = json::array();
  for (const Violation& v : list) {
    out.push_back({{"kind", std::string(to_string(v.kind))}, {"index", v.index}, {"message", v.message}});
  }
  return out;
}

json report_json(const ValidationReport& r) {
  return {{"ok", r.ok()},
          {"classification", std::string(to_string(r.classification))},
          {"violations", violations_json(r.violations)},
          {"warnings", violations_json(r.warnings)}};
}

json limit_json(const FlexionLimit& l) {
  return {{"t", l.t}, {"owners", l.owners}, {"domain_endpoint", l.domain_endpoint}, {"residual", l.residual}};
}

json interval_json(const FlexionInterval& iv) {
  return {{"t_star", iv.t_star},
          {"domain", iv.domain},
          {"lower", limit_json(iv.lower)},
          {"upper", limit_json(iv.upper)},
          {"zero_length", iv.zero_length}};
}

json faces_json(const VertexGrid& g) {
  json faces = json::array();
  for (const GridQuad& q : grid_quads(g.cols(), g.rows())) {
    json face = json::array();
    for (const auto& [c, r] : q.corners()) face.push_back(c * g.rows() + r);
    faces.push_back(face);
  }
  return faces;
}

json grid_json(const VertexGrid& g) {
  json pts = json::array();
  for (const Point3& p : g.points()) pts.push_back(point_json(p));
  return pts;
}

json state_json(const FlexState& state, const PHedronMesh& mesh) {
  json diag = {{"max_isometry_deviation", check_isometry(state, mesh)},
               {"max_planarity_defect", check_planarity(state.general)},
               {"max_cone_apex_distance", check_cone_apexes(state)},
               {"discriminants", state.discriminants},
               {"tangent", state.tangent}};
  return {{"t", state.t}, {"branch", state.branch}, {"apex_z", state.apex_z}, {"vertices", grid_json(state.general)},
          {"diagnostics", diag}};
}

HttpResponse reply(int status, const json& payload, bool ok) {
  json doc = {{"ok", ok}, {ok ? "data" : "error", payload}};
  return {status, doc.dump()};
}

HttpResponse success(const json& data) { return reply(200, data, true); }

HttpResponse failure(int status, const std::string& code, const std::string& message, json extra = json::object()) {
  extra["code"] = code;
  extra["message"] = message;
  return reply(status, extra, false);
}

int status_for(ErrorCode code) {
  if (code == ErrorCode::SchemaError) return 400;
  if (is_numeric_domain(code)) return 409;
  return 422;
}

HttpResponse from_error(const Error& e) {
  json extra = json::object();
  if (auto* s = dynamic_cast<const SchemaError*>(&e)) extra["path"] = s->path();
  if (auto* v = dynamic_cast<const ValidationError*>(&e)) extra["report"] = report_json(v->report());
  return failure(status_for(e.code()), std::string(to_string(e.code())), e.detail(), extra);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = path.find('/', start);
    const std::string_view piece = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!piece.empty()) parts.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

double query_double(const QueryParams& q, const std::string& key, double fallback) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || !std::isfinite(v)) throw SchemaError("query." + key, "expected a number");
  return v;
}

int query_int(const QueryParams& q, const std::string& key, int fallback, int lo, int hi) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return fallback;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || v < lo || v > hi) {
    throw SchemaError("query." + key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

DeformationPlan apply_flips(const DeformationPlan& plan, const QueryParams& q) {
  auto it = q.find("flip");
  if (it == q.end() || it->second.empty()) return plan;
  DeformationPlan out = plan;
  std::stringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long strip = 0;
    try {
      strip = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || strip == 0 || strip > plan.m) {
      throw SchemaError("query.flip", "expected strip indices in [1, " + std::to_string(plan.m) + "]");
    }
    out = flip_strip(out, strip);
  }
  return out;
}

json tube_json(const TubeReport& r) {
  return {{"closed", r.closed},
          {"closure_gap", r.closure_gap},
          {"samples_checked", r.samples_checked},
          {"class", to_string(r.tube_class)},
          {"symmetry_orthogonal", r.symmetry_orthogonal}};
}

json flat_json(const LinkageVelocityField& field, const ExpansionReport& report) {
  json velocities = json::array();
  for (const auto& column : field.velocity) {
    json col = json::array();
    for (const auto& v : column) col.push_back({v.x(), v.y()});
    velocities.push_back(col);
  }
  return {{"verdict", to_string(report.verdict)},
          {"rates", report.rates},
          {"tolerance", report.tolerance},
          {"apex_rates", field.apex_rates},
          {"velocities", velocities},
          {"normalization_index", field.normalization_index}};
}

}  // namespace

std::size_t DesignService::size() const {
  std::shared_lock lock(mutex_);
  return models_.size();
}

std::shared_ptr<const StoredModel> DesignService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = models_.find(id);
  return it == models_.end() ? nullptr : it->second;
}

HttpResponse DesignService::create(std::string_view body) {
  auto stored = std::make_shared<StoredModel>();
  stored->file = parse_model(body);
  const ControlPolylines cp = stored->file.polylines();
  const ConstructionOptions copts = stored->file.construction_options();
  const ValidationReport report = validate(cp, copts);
  if (!report.ok()) {
    return failure(422, "ValidationFailed", report.summary(), {{"report", report_json(report)}});
  }
  stored->construction = construct(cp, copts);
  stored->plan = build_plan(stored->construction.axial, stored->file.deformation_options());
  stored->interval = flexion_limits(stored->plan);

  std::string id;
  {
    std::unique_lock lock(mutex_);
    id = "m" + std::to_string(next_id_++);
    models_[id] = stored;
  }
  return success({{"id", id},
                  {"report", report_json(stored->construction.report)},
                  {"classification", std::string(to_string(stored->construction.report.classification))},
                  {"t_star", stored->plan.t_star},
                  {"interval", interval_json(stored->interval)}});
}

HttpResponse DesignService::handle(std::string_view method, std::string_view path, const QueryParams& query,
                                   std::string_view body) {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api" || parts[1] != "models" || parts.size() > 4) {
    return failure(404, "NotFound", "no such route");
  }
  try {
    if (parts.size() == 2) {
      if (method != "POST") return failure(405, "MethodNotAllowed", "use POST to create a model");
      return create(body);
    }
    const std::string& id = parts[2];
    if (parts.size() == 3) {
      if (method != "DELETE") return failure(405, "MethodNotAllowed", "use DELETE on a model id");
      std::unique_lock lock(mutex_);
      if (models_.erase(id) == 0) return failure(404, "NotFound", "unknown model id " + id);
      return success({{"deleted", id}});
    }
    if (method != "GET") return failure(405, "MethodNotAllowed", "use GET on model resources");
    const auto model = find(id);
    if (!model) return failure(404, "NotFound", "unknown model id " + id);
    const std::string& what = parts[3];

    if (what == "mesh") {
      const DeformationPlan plan = apply_flips(model->plan, query);
      const double t = query_double(query, "t", plan.t_star);
      const FlexState state = general_state_at(plan, t, plan.branch);
      json data = state_json(state, model->construction.mesh);
      data["columns"] = state.general.cols();
      data["rows"] = state.general.rows();
      data["faces"] = faces_json(state.general);
      return success(data);
    }
    if (what == "limits") {
      json limits = json::array();
      for (const FlexionLimit& l : model->interval.limits) limits.push_back(limit_json(l));
      json data = interval_json(model->interval);
      data["limits"] = limits;
      data["branch"] = model->plan.branch;
      return success(data);
    }
    if (what == "frames") {
      const int count = query_int(query, "count", kDefaultFrames, 2, kMaxFrames);
      const DeformationPlan plan = apply_flips(model->plan, query);
      const FlexionInterval interval = plan.branch == model->plan.branch ? model->interval : flexion_limits(plan);
      json frames = json::array();
      std::size_t cols = 0, rows = 0;
      for (const FlexState& state : sweep(plan, interval, count)) {
        frames.push_back(state_json(state, model->construction.mesh));
        cols = state.general.cols();
        rows = state.general.rows();
      }
      return success({{"interval", interval_json(interval)},
                      {"branch", plan.branch},
                      {"columns", cols},
                      {"rows", rows},
                      {"faces", faces_json(VertexGrid(cols, rows))},
                      {"frames", frames}});
    }
    if (what == "flatcheck") {
      const LinkageVelocityField field = first_order_flex(model->construction.axial);
      return success(flat_json(field, non_expansion_check(field, model->construction.axial)));
    }
    if (what == "tube") {
      return success(tube_json(tube_check(model->construction.axial, model->file.deformation_options())));
    }
    return failure(404, "NotFound", "no such resource " + what);
  } catch (const Error& e) {
    return from_error(e);
  }
}

int default_port() {
  if (const char* env = std::getenv("PHEDRA_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8787;
}

struct ServiceHost::Impl {
  DesignService& service;
  httplib::Server server;

  explicit Impl(DesignService& s) : service(s) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      QueryParams query;
      for (const auto& [k, v] : req.params) query[k] = v;
      const HttpResponse out = service.handle(req.method, req.path, query, req.body);
      res.status = out.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(out.body, "application/json");
    };
    server.Get(R"(/api/.*)", forward);
    server.Post(R"(/api/.*)", forward);
    server.Delete(R"(/api/.*)", forward);
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
};

ServiceHost::ServiceHost(DesignService& service) : impl_(std::make_unique<Impl>(service)) {}

ServiceHost::~ServiceHost() { stop(); }

int ServiceHost::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void ServiceHost::listen() { impl_->server.listen_after_bind(); }

void ServiceHost::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace phedra
