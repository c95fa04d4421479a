#pragma once

// Cross-module invariant suites behind `sqg_geom verify`. Each check records
// the measured quantity next to the threshold it is held to; nothing here is
// timed, so a report is a pure function of the build and the suite name.

#include <string>
#include <vector>

#include "json.hpp"

namespace sqg::verify {

enum class Compare { kAtMost, kAtLeast };

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  Compare compare = Compare::kAtMost;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  void add(const std::string& suite_name, const std::string& name, double measured,
           double threshold, Compare compare = Compare::kAtMost);
  bool pass() const;
  void append(const Report& other);
  nlohmann::ordered_json to_json(const nlohmann::ordered_json& config) const;
};

Report spectral_suite();
Report curvature_suite();
Report jacobi_suite();
Report lagrangian_suite();

// "spectral", "curvature", "jacobi", "lagrangian" or "all".
Report run_suite(const std::string& suite);
const std::vector<std::string>& suite_names();

}  // namespace sqg::verify
