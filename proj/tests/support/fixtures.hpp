#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "irrigation/io.hpp"
#include "irrigation/lp.hpp"
#include "irrigation/scenario.hpp"

namespace irrigation::testing {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(IRRIGATION_DATA_DIR) / (name + ".json");
}

inline Scenario bundled(const std::string& name) { return load_scenario(data_file(name)); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("irrigation-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Small draft: n_crops crops, n_months months, every number positive and
/// every limit loose enough to validate.
ScenarioDraft small_draft(std::size_t n_crops, std::size_t n_months);

/// Random LP with integer data in [-10, 10] that is feasible (a random
/// integer point satisfies every row) and bounded (every variable boxed).
LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t max_vars = 5, std::size_t max_rows = 5);

/// O(n^2) nondominated filter over objective pairs; keeps the first of exact
/// duplicates, returns indices in input order.
std::vector<std::size_t> quadratic_nondominated(const std::vector<ObjectivePair>& points);

}  // namespace irrigation::testing
