#include "phedra/model_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace phedra {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kDegree = 3.14159265358979323846 / 180.0;

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw SchemaError(path + "." + item.key(), "unknown key");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

Point3 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected an array [x, y, z]");
  return Point3(number(v[0], index_path(path, 0)), number(v[1], index_path(path, 1)),
                number(v[2], index_path(path, 2)));
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required key");
  return *it;
}

const json& array_member(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  return v;
}

ApexSign parse_sign(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected \"+\" or \"-\"");
  const std::string s = v.get<std::string>();
  if (s == "+") return ApexSign::plus;
  if (s == "-" || s == "−") return ApexSign::minus;
  throw SchemaError(path, "expected \"+\" or \"-\", got \"" + s + "\"");
}

ordered_json point_json(const Point3& p) { return ordered_json::array({p.x(), p.y(), p.z()}); }

}  // namespace

SchemaError::SchemaError(std::string path, const std::string& message)
    : Error(ErrorCode::SchemaError, path + ": " + message), path_(std::move(path)) {}

ControlPolylines ModelFile::polylines() const {
  ControlPolylines cp;
  cp.trajectory = trajectory;
  cp.apexes = apexes;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const DirectionSpec& d = directions[i];
    if (d.point) {
      cp.directions.push_back(*d.point);
    } else {
      const double a = *d.angle_deg * kDegree;
      const Point3 base = i < trajectory.size() ? trajectory[i] : Point3::Zero();
      cp.directions.push_back(base + Vec3(std::cos(a), std::sin(a), 0.0));
    }
  }
  return cp;
}

ConstructionOptions ModelFile::construction_options() const {
  ConstructionOptions o;
  if (options.normalize) o.normalize = *options.normalize;
  if (options.developable) o.developable = *options.developable;
  return o;
}

DeformationOptions ModelFile::deformation_options() const {
  DeformationOptions o;
  if (options.samples) o.samples = *options.samples;
  if (options.root_tolerance) o.root_tolerance = *options.root_tolerance;
  if (options.complex_tolerance) o.complex_tolerance = *options.complex_tolerance;
  return o;
}

ModelFile parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  require_keys(doc, "$", {"trajectory", "directions", "apexes", "options"});

  ModelFile file;
  const json& traj = array_member(doc, "trajectory", "$");
  if (traj.size() < 2) throw SchemaError("$.trajectory", "at least two trajectory points are required");
  for (std::size_t i = 0; i < traj.size(); ++i) file.trajectory.push_back(point(traj[i], index_path("$.trajectory", i)));

  const json& dirs = array_member(doc, "directions", "$");
  if (dirs.size() != traj.size()) {
    throw SchemaError("$.directions", "expected " + std::to_string(traj.size()) + " entries, one per trajectory point");
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string path = index_path("$.directions", i);
    DirectionSpec d;
    if (dirs[i].is_object()) {
      require_keys(dirs[i], path, {"angle"});
      d.angle_deg = number(member(dirs[i], "angle", path), path + ".angle");
    } else {
      d.point = point(dirs[i], path);
    }
    file.directions.push_back(d);
  }

  const json& apexes = array_member(doc, "apexes", "$");
  if (apexes.size() < 3) throw SchemaError("$.apexes", "at least three apexes are required (n >= 2)");
  for (std::size_t j = 0; j < apexes.size(); ++j) {
    const std::string path = index_path("$.apexes", j);
    require_keys(apexes[j], path, {"z", "sign"});
    Apex a;
    a.z = number(member(apexes[j], "z", path), path + ".z");
    const bool end = j == 0 || j + 1 == apexes.size();
    auto sign = apexes[j].find("sign");
    if (end && sign != apexes[j].end()) throw SchemaError(path + ".sign", "end apexes carry no sign");
    if (!end) {
      if (sign == apexes[j].end()) throw SchemaError(path + ".sign", "interior apexes need a sign");
      a.sign = parse_sign(*sign, path + ".sign");
    }
    file.apexes.push_back(a);
  }

  auto opts = doc.find("options");
  if (opts != doc.end()) {
    require_keys(*opts, "$.options", {"normalize", "developable", "samples", "tolerances"});
    auto flag = [&](const char* key, std::optional<bool>& out) {
      auto it = opts->find(key);
      if (it == opts->end()) return;
      if (!it->is_boolean()) throw SchemaError(std::string("$.options.") + key, "expected a boolean");
      out = it->get<bool>();
    };
    flag("normalize", file.options.normalize);
    flag("developable", file.options.developable);
    if (auto it = opts->find("samples"); it != opts->end()) {
      if (!it->is_number_integer() || it->get<long long>() < 2 || it->get<long long>() > 1000000) {
        throw SchemaError("$.options.samples", "expected an integer in [2, 1000000]");
      }
      file.options.samples = it->get<int>();
    }
    if (auto it = opts->find("tolerances"); it != opts->end()) {
      require_keys(*it, "$.options.tolerances", {"root", "complex"});
      auto tol = [&](const char* key, std::optional<double>& out) {
        auto t = it->find(key);
        if (t == it->end()) return;
        const std::string path = std::string("$.options.tolerances.") + key;
        const double v = number(*t, path);
        if (v <= 0.0) throw SchemaError(path, "expected a positive number");
        out = v;
      };
      tol("root", file.options.root_tolerance);
      tol("complex", file.options.complex_tolerance);
    }
  }
  return file;
}

std::string write_model(const ModelFile& file) {
  ordered_json doc;
  doc["trajectory"] = ordered_json::array();
  for (const Point3& p : file.trajectory) doc["trajectory"].push_back(point_json(p));
  doc["directions"] = ordered_json::array();
  for (const DirectionSpec& d : file.directions) {
    if (d.point) {
      doc["directions"].push_back(point_json(*d.point));
    } else {
      doc["directions"].push_back(ordered_json{{"angle", d.angle_deg.value_or(0.0)}});
    }
  }
  doc["apexes"] = ordered_json::array();
  for (const Apex& a : file.apexes) {
    ordered_json entry{{"z", a.z}};
    if (a.sign != ApexSign::none) entry["sign"] = a.sign == ApexSign::plus ? "+" : "-";
    doc["apexes"].push_back(entry);
  }
  const ModelOptions& o = file.options;
  if (o != ModelOptions{}) {
    ordered_json opts = ordered_json::object();
    if (o.normalize) opts["normalize"] = *o.normalize;
    if (o.developable) opts["developable"] = *o.developable;
    if (o.samples) opts["samples"] = *o.samples;
    if (o.root_tolerance || o.complex_tolerance) {
      ordered_json tol = ordered_json::object();
      if (o.root_tolerance) tol["root"] = *o.root_tolerance;
      if (o.complex_tolerance) tol["complex"] = *o.complex_tolerance;
      opts["tolerances"] = tol;
    }
    doc["options"] = opts;
  }
  return doc.dump(2) + "\n";
}

ModelFile model_from_polylines(const ControlPolylines& cp) {
  ModelFile file;
  file.trajectory = cp.trajectory;
  for (const Point3& d : cp.directions) file.directions.push_back({d, std::nullopt});
  file.apexes = cp.apexes;
  return file;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void write_model_file(const ModelFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << write_model(file);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace phedra
