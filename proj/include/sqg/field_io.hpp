#pragma once

// Flat binary field files: one JSON header line
//   {"L":…, "h":…, "nx":…, "ny":…, "gamma":…, "kind":…, "config":{…}}
// followed by little-endian float64 samples, row-major (x1 fastest).
// kind "scalar" holds one block; "vector" holds the x1 block then the x2
// block; "flowmap" holds the displacement Y = X − id the same way.

#include <string>

#include "json.hpp"
#include "sqg/grid.hpp"

namespace sqg::lagrangian {

struct FieldHeader {
  double L = 0.0;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  double gamma = 0.5;
  std::string kind;
  nlohmann::json config;
};

void write_scalar(const std::string& path, const ScalarField2D& f, const nlohmann::json& config);
void write_vector(const std::string& path, const VectorField2D& f, double gamma,
                  const nlohmann::json& config);
void write_flowmap(const std::string& path, const FlowMap& X, const nlohmann::json& config);

FieldHeader read_header(const std::string& path);
ScalarField2D read_scalar(const std::string& path);
FlowMap read_flowmap(const std::string& path);

}  // namespace sqg::lagrangian
