#pragma once

#include <cdl/energies.hpp>
#include <cdl/model.hpp>
#include <cdl/report.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdl {

/// Overrides a named scenario accepts. Unset members fall back to the
/// scenario's own defaults.
struct ScenarioOptions {
  std::optional<std::size_t> n_cells;
  std::uint64_t seed = 42;
  std::vector<double> eps;
  std::optional<double> gamma;
  Tolerances tol;
  std::optional<MaterialParams> params;
  std::optional<LoadSpec> load;
  std::optional<std::size_t> n_random;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::string anchor;
};

/// The compiled-in scenarios, sorted by name.
const std::vector<ScenarioInfo>& scenario_registry();

struct UnknownScenario : std::invalid_argument {
  explicit UnknownScenario(const std::string& name);
};

ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options = {});

}  // namespace cdl
