#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qfcs/charfunc.hpp"
#include "qfcs/model.hpp"

namespace qfcs {

enum class Preparation { exact, trotter };

enum class GridKind { full, even };

/// Experiment configuration. Defaults reproduce the reference setting
/// (L = 12, J = 1, h_x = 1, h_z = 1, t = 1, exact preparation and
/// estimation). Parsed from an INI-style grammar: `key = value` lines, `#`
/// comments, and the section headers [model], [estimation], [filter],
/// [cumulants], [output]. Unknown keys are hard errors.
struct ExperimentConfig {
  // [model]
  MfimParams model;
  Preparation preparation = Preparation::exact;
  int trotter_steps = 256;

  // [estimation]
  EstimationMode mode = EstimationMode::exact;
  std::int64_t shots = 10000;
  std::uint64_t seed = 1;
  GridKind grid = GridKind::full;
  std::vector<int> grid_sizes;  // empty: sweep 2..Nyquist count

  // [filter]
  std::vector<int> filter_targets;
  int filter_center = 0;

  // [cumulants]
  double h_min = 1e-3;
  double h_max = 1.0;
  int h_count = 25;
  std::vector<int> richardson_rounds = {0, 1, 2};

  // [output]
  std::string output_path = "-";

  /// grid_sizes, or the default sweep when unset.
  std::vector<int> effective_grid_sizes() const;

  /// h_count log-spaced steps across [h_min, h_max].
  std::vector<double> h_values() const;
};

/// Parses and validates; throws ConfigError with a line number on syntax
/// errors, unknown keys, type mismatches, or invalid values.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace qfcs
