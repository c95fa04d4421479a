#include "sqg/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sqg/errors.hpp"

namespace sqg::lagrangian {

namespace {

void put_doubles(std::ofstream& os, const std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double d : v) {
      std::uint64_t u;
      std::memcpy(&u, &d, sizeof u);
      u = __builtin_bswap64(u);
      os.write(reinterpret_cast<const char*>(&u), sizeof u);
    }
  }
}

std::vector<double> get_doubles(std::ifstream& is, std::size_t n, const std::string& path) {
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != n * sizeof(double)) {
    throw ValidationError("field file '" + path + "' is truncated");
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (double& d : v) {
      std::uint64_t u;
      std::memcpy(&u, &d, sizeof u);
      u = __builtin_bswap64(u);
      std::memcpy(&d, &u, sizeof u);
    }
  }
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  return os;
}

void write_header(std::ofstream& os, const Grid2D& g, double gamma, const std::string& kind,
                  const nlohmann::json& config) {
  nlohmann::ordered_json hdr;
  hdr["L"] = g.L;
  hdr["h"] = g.h();
  hdr["nx"] = g.n();
  hdr["ny"] = g.n();
  hdr["gamma"] = gamma;
  hdr["kind"] = kind;
  hdr["config"] = config;
  os << hdr.dump() << '\n';
}

std::pair<FieldHeader, std::ifstream> open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  std::getline(is, line);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("field file '" + path + "' has a malformed header: " + e.what());
  }
  FieldHeader h;
  try {
    h.L = j.at("L").get<double>();
    h.h = j.at("h").get<double>();
    h.nx = j.at("nx").get<int>();
    h.ny = j.at("ny").get<int>();
    h.gamma = j.at("gamma").get<double>();
    h.kind = j.at("kind").get<std::string>();
    h.config = j.value("config", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("field file '" + path + "' header: " + e.what());
  }
  if (h.nx != h.ny || h.nx < 5 || h.nx % 2 == 0) {
    throw ValidationError("field file '" + path + "' has an unsupported grid shape");
  }
  return {h, std::move(is)};
}

Grid2D grid_of(const FieldHeader& h) { return Grid2D(h.L, (h.nx - 1) / 2); }

}  // namespace

void write_scalar(const std::string& path, const ScalarField2D& f, const nlohmann::json& config) {
  auto os = open_out(path);
  write_header(os, f.grid, f.gamma, "scalar", config);
  put_doubles(os, f.v);
}

void write_vector(const std::string& path, const VectorField2D& f, double gamma,
                  const nlohmann::json& config) {
  auto os = open_out(path);
  write_header(os, f.grid, gamma, "vector", config);
  put_doubles(os, f.x1);
  put_doubles(os, f.x2);
}

void write_flowmap(const std::string& path, const FlowMap& X, const nlohmann::json& config) {
  auto os = open_out(path);
  write_header(os, X.grid, X.gamma, "flowmap", config);
  put_doubles(os, X.y1);
  put_doubles(os, X.y2);
}

FieldHeader read_header(const std::string& path) { return open_in(path).first; }

ScalarField2D read_scalar(const std::string& path) {
  auto [h, is] = open_in(path);
  if (h.kind != "scalar") throw ValidationError("'" + path + "' is not a scalar field");
  ScalarField2D f(grid_of(h), h.gamma);
  f.v = get_doubles(is, f.grid.size(), path);
  return f;
}

FlowMap read_flowmap(const std::string& path) {
  auto [h, is] = open_in(path);
  if (h.kind != "flowmap") throw ValidationError("'" + path + "' is not a flow map");
  FlowMap X(grid_of(h), h.gamma);
  X.y1 = get_doubles(is, X.grid.size(), path);
  X.y2 = get_doubles(is, X.grid.size(), path);
  return X;
}

}  // namespace sqg::lagrangian
