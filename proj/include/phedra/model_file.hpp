#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"
#include "phedra/errors.hpp"

namespace phedra {

/// A direction given either as a point D_i or as an angle in degrees
/// measured from the x-axis (D_i = V_i + (cos a, sin a, 0)).
struct DirectionSpec {
  std::optional<Point3> point;
  std::optional<double> angle_deg;

  bool operator==(const DirectionSpec&) const = default;
};

struct ModelOptions {
  std::optional<bool> normalize;
  std::optional<bool> developable;
  std::optional<int> samples;
  std::optional<double> root_tolerance;
  std::optional<double> complex_tolerance;

  bool operator==(const ModelOptions&) const = default;
};

struct ModelFile {
  std::vector<Point3> trajectory;
  std::vector<DirectionSpec> directions;
  std::vector<Apex> apexes;
  ModelOptions options;

  bool operator==(const ModelFile&) const = default;

  ControlPolylines polylines() const;
  ConstructionOptions construction_options() const;
  DeformationOptions deformation_options() const;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Strict schema check; throws SchemaError naming the offending JSON path.
ModelFile parse_model(std::string_view text);

// Canonical formatting: parse_model(write_model(f)) == f.
std::string write_model(const ModelFile& file);

ModelFile model_from_polylines(const ControlPolylines& cp);

// Throw IoError when the file cannot be read or written.
ModelFile read_model_file(const std::string& path);
void write_model_file(const ModelFile& file, const std::string& path);

}  // namespace phedra
