#pragma once

// The four shipped example specs and their facet problems.

#include <string>

#include "intersample/facet.hpp"
#include "intersample/report_io.hpp"

namespace testsupport {

inline std::string fixture_path(int example) {
  return std::string(INTERSAMPLE_FIXTURE_DIR) + "/example" + std::to_string(example) + ".json";
}

inline intersample::SpecDocument load_example(int example) { return intersample::load_spec(fixture_path(example)); }

/// Row of X.H singled out in the write-up of each example.
inline std::size_t featured_facet(int example) {
  switch (example) {
    case 1: return 0;  // x1 <= 25
    case 2: return 3;  // x2 >= -2
    case 3: return 4;  // x2 - x1 <= 0.5
    default: return 4;  // x3 <= 0.2
  }
}

inline intersample::FacetProblem example_problem(int example) {
  const intersample::SpecDocument doc = load_example(example);
  return intersample::facet_problems(doc.system, doc.queries.front()).at(featured_facet(example));
}

}  // namespace testsupport
