#pragma once

#include <cdl/model.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cdl {

/// Bad config file or flag combination; maps to exit status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Contents of a JSON scenario config. Every key is optional:
///   {"mu": 1, "nu": 1, "alpha": 3, "n_cells": 1000, "seed": 42,
///    "load": {"kind": "poly", "coeffs": [c0, c1, ...], "sigma1": s}}
/// "kind" may also be "piecewise" (with "breaks" and a list of coefficient
/// lists) or "samples" (with "x" and "f").
struct ConfigFile {
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> alpha;
  std::optional<LoadSpec> load;
  std::optional<std::size_t> n_cells;
  std::optional<std::uint64_t> seed;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

}  // namespace cdl
