#include "qfcs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qfcs/fcs.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <class T>
T parse_number(std::string_view value, int line, const std::string& key) {
  T out{};
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc{} || result.ptr != end || value.empty()) {
    throw ConfigError("value '" + std::string(value) + "' for key '" + key +
                          "' is not a valid number",
                      line);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view value, int line, const std::string& key) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string_view item =
        trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (item.empty()) {
      throw ConfigError("empty entry in list for key '" + key + "'", line);
    }
    out.push_back(parse_number<int>(item, line, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.model.L < 2 || config.model.L % 2 != 0) {
    throw ConfigError("L must be even and >= 2");
  }
  if (config.model.L > 14) {
    throw ConfigError("L must be <= 14 (dense oracle bound)");
  }
  if (!std::isfinite(config.model.J) || !std::isfinite(config.model.h_x) ||
      !std::isfinite(config.model.h_z) || !std::isfinite(config.model.t)) {
    throw ConfigError("couplings and time must be finite");
  }
  if (config.trotter_steps < 1) {
    throw ConfigError("trotter_steps must be >= 1");
  }
  if (config.shots < 1) {
    throw ConfigError("shots must be >= 1");
  }
  for (int k : config.grid_sizes) {
    if (k < 1) throw ConfigError("grid sizes must be >= 1");
  }
  for (int target : config.filter_targets) {
    if (target < 0 || target > config.model.L) {
      throw ConfigError("filter targets must lie in [0, L]");
    }
  }
  if (config.filter_center < 0 || config.filter_center > config.model.L) {
    throw ConfigError("filter center must lie in [0, L]");
  }
  if (!(config.h_min > 0.0) || !(config.h_max >= config.h_min)) {
    throw ConfigError("cumulant sweep needs 0 < h_min <= h_max");
  }
  if (config.h_count < 1) {
    throw ConfigError("h_count must be >= 1");
  }
  for (int rounds : config.richardson_rounds) {
    if (rounds < 0) throw ConfigError("richardson rounds must be >= 0");
  }
}

}  // namespace

std::vector<int> ExperimentConfig::effective_grid_sizes() const {
  if (!grid_sizes.empty()) return grid_sizes;
  const int nyquist = min_sampling_points(model.L, grid == GridKind::even);
  std::vector<int> out;
  for (int k = 2; k <= nyquist; ++k) out.push_back(k);
  return out;
}

std::vector<double> ExperimentConfig::h_values() const {
  std::vector<double> out;
  if (h_count == 1) {
    out.push_back(h_min);
    return out;
  }
  const double log_min = std::log(h_min);
  const double log_max = std::log(h_max);
  for (int i = 0; i < h_count; ++i) {
    out.push_back(std::exp(log_min + (log_max - log_min) * i / (h_count - 1)));
  }
  out.front() = h_min;
  out.back() = h_max;
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t newline = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, newline == std::string_view::npos ? newline : newline - pos);
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);

    if (!line.empty()) {
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ConfigError("malformed section header '" + std::string(line) + "'", line_no);
        }
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section != "model" && section != "estimation" && section != "filter" &&
            section != "cumulants" && section != "output") {
          throw ConfigError("unknown section [" + section + "]", line_no);
        }
      } else {
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
          throw ConfigError("missing key before '='", line_no);
        }
        if (section.empty()) {
          throw ConfigError("key '" + key + "' appears before any [section]", line_no);
        }

        if (section == "model") {
          if (key == "L") {
            config.model.L = parse_number<int>(value, line_no, key);
          } else if (key == "J") {
            config.model.J = parse_number<double>(value, line_no, key);
          } else if (key == "h_x") {
            config.model.h_x = parse_number<double>(value, line_no, key);
          } else if (key == "h_z") {
            config.model.h_z = parse_number<double>(value, line_no, key);
          } else if (key == "t") {
            config.model.t = parse_number<double>(value, line_no, key);
          } else if (key == "preparation") {
            if (value == "exact") {
              config.preparation = Preparation::exact;
            } else if (value == "trotter") {
              config.preparation = Preparation::trotter;
            } else {
              throw ConfigError("preparation must be 'exact' or 'trotter'", line_no);
            }
          } else if (key == "trotter_steps") {
            config.trotter_steps = parse_number<int>(value, line_no, key);
          } else {
            throw ConfigError("unknown key '" + key + "' in section [model]", line_no);
          }
        } else if (section == "estimation") {
          if (key == "mode") {
            if (value == "exact") {
              config.mode = EstimationMode::exact;
            } else if (value == "shots") {
              config.mode = EstimationMode::shots;
            } else {
              throw ConfigError("mode must be 'exact' or 'shots'", line_no);
            }
          } else if (key == "shots") {
            config.shots = parse_number<std::int64_t>(value, line_no, key);
          } else if (key == "seed") {
            config.seed = parse_number<std::uint64_t>(value, line_no, key);
          } else if (key == "grid") {
            if (value == "full") {
              config.grid = GridKind::full;
            } else if (value == "even") {
              config.grid = GridKind::even;
            } else {
              throw ConfigError("grid must be 'full' or 'even'", line_no);
            }
          } else if (key == "grid_sizes") {
            config.grid_sizes = parse_int_list(value, line_no, key);
          } else {
            throw ConfigError("unknown key '" + key + "' in section [estimation]", line_no);
          }
        } else if (section == "filter") {
          if (key == "targets") {
            config.filter_targets = parse_int_list(value, line_no, key);
          } else if (key == "center") {
            config.filter_center = parse_number<int>(value, line_no, key);
          } else {
            throw ConfigError("unknown key '" + key + "' in section [filter]", line_no);
          }
        } else if (section == "cumulants") {
          if (key == "h_min") {
            config.h_min = parse_number<double>(value, line_no, key);
          } else if (key == "h_max") {
            config.h_max = parse_number<double>(value, line_no, key);
          } else if (key == "h_count") {
            config.h_count = parse_number<int>(value, line_no, key);
          } else if (key == "rounds") {
            config.richardson_rounds = parse_int_list(value, line_no, key);
          } else {
            throw ConfigError("unknown key '" + key + "' in section [cumulants]", line_no);
          }
        } else {  // output
          if (key == "path") {
            config.output_path = std::string(value);
          } else {
            throw ConfigError("unknown key '" + key + "' in section [output]", line_no);
          }
        }
      }
    }

    if (newline == std::string_view::npos) break;
    pos = newline + 1;
  }

  validate(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace qfcs
