#include "qfcs/filter.hpp"

#include "qfcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace qfcs {

namespace {

constexpr double kAnnihilationTol = 1e-12;

double sector_weight(int value, const FilterSpec& spec) {
  double w = 1.0;
  for (const auto& [target, time] : spec.targets) {
    const double s = std::sin(static_cast<double>(value - target) * time / 2.0);
    w *= s * s;
  }
  return w;
}

void validate_spec(const FilterSpec& spec) {
  std::set<int> support(spec.support.begin(), spec.support.end());
  std::set<int> seen;
  for (const auto& [target, time] : spec.targets) {
    if (!support.contains(target)) {
      throw std::invalid_argument("filter target " + std::to_string(target) +
                                  " is not in the operator support");
    }
    if (!(time > 0.0)) {
      throw std::invalid_argument("filter times must be positive");
    }
    if (!seen.insert(target).second) {
      throw std::invalid_argument("duplicate filter target " + std::to_string(target));
    }
  }
}

/// One ancilla pass of the filter circuit, on a register whose top qubit is
/// the (fresh) ancilla in |1>.
void run_ancilla_stage(PureState& state, const NumberOperator& op, int ancilla, int target,
                       double time) {
  const auto h = gates::hadamard();
  apply_one_qubit_gate(state, ancilla, h);
  apply_diagonal_phase(state, DiagonalPhaseSpec{-time, &op, ancilla});
  apply_one_qubit_gate(state, ancilla, gates::rz(static_cast<double>(target) * time));
  apply_one_qubit_gate(state, ancilla, h);
}

}  // namespace

FilterSpec schedule_times(int center, std::span<const int> targets,
                          std::span<const int> support) {
  if (support.empty()) {
    throw std::invalid_argument("support must be nonempty");
  }
  std::vector<int> sorted_support(support.begin(), support.end());
  std::sort(sorted_support.begin(), sorted_support.end());
  sorted_support.erase(std::unique(sorted_support.begin(), sorted_support.end()),
                       sorted_support.end());
  const std::set<int> support_set(sorted_support.begin(), sorted_support.end());
  if (!support_set.contains(center)) {
    throw std::invalid_argument("center " + std::to_string(center) +
                                " is not in the operator support");
  }

  std::set<int> target_set;
  for (int target : targets) {
    if (!support_set.contains(target)) {
      throw std::invalid_argument("filter target " + std::to_string(target) +
                                  " is not in the operator support");
    }
    if (!target_set.insert(target).second) {
      throw std::invalid_argument("duplicate filter target " + std::to_string(target));
    }
  }
  if (target_set.size() == support_set.size()) {
    throw AnnihilationError("nothing survives: targets cover the whole support");
  }

  // The support point closest to the center, excluding the center itself;
  // ties break toward the smaller value (ascending scan, strict improvement).
  int nearest = center;
  int best_gap = -1;
  for (int value : sorted_support) {
    if (value == center) continue;
    const int gap = std::abs(value - center);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      nearest = value;
    }
  }

  FilterSpec spec;
  spec.center = center;
  spec.support = sorted_support;
  for (int target : targets) {
    const int reference = (target == center) ? nearest : center;
    if (reference == target) {
      throw std::invalid_argument("cannot schedule a time for target " + std::to_string(target));
    }
    spec.targets.emplace_back(target, std::numbers::pi / std::abs(reference - target));
  }
  return spec;
}

FilterOutcome apply_filter(const PureState& state, const NumberOperator& op,
                           const FilterSpec& spec, FilterLayout layout) {
  if (state.num_qubits != op.num_sites()) {
    throw std::invalid_argument("filter input must span exactly the system qubits");
  }
  validate_spec(spec);

  FilterOutcome outcome;
  outcome.attempts = 1;

  if (layout == FilterLayout::sequential) {
    PureState current = state;
    double total = 1.0;
    for (const auto& [target, time] : spec.targets) {
      const int ancilla = current.num_qubits;
      PureState staged = append_qubit(current, 1);
      run_ancilla_stage(staged, op, ancilla, target, time);
      double probability = 0.0;
      try {
        auto [p, collapsed] = project_qubit(staged, ancilla, 0);
        probability = p;
        current = remove_qubit(collapsed, ancilla, 0);
      } catch (const ProjectionError&) {
        throw AnnihilationError("filter annihilates state");
      }
      total *= probability;
      if (total < kAnnihilationTol) {
        throw AnnihilationError("filter annihilates state");
      }
    }
    outcome.success_probability = total;
    outcome.filtered_state = std::move(current);
  } else {
    PureState staged = state;
    for (std::size_t m = 0; m < spec.targets.size(); ++m) {
      staged = append_qubit(staged, 1);
    }
    for (std::size_t m = 0; m < spec.targets.size(); ++m) {
      run_ancilla_stage(staged, op, op.num_sites() + static_cast<int>(m),
                        spec.targets[m].first, spec.targets[m].second);
    }
    // All-zero ancillas occupy the low 2^L block of the register.
    const Eigen::Index system_dim = Eigen::Index{1} << op.num_sites();
    detail::KahanSum<double> acc;
    for (Eigen::Index z = 0; z < system_dim; ++z) {
      acc.add(std::norm(staged.amplitudes(z)));
    }
    const double total = acc.value();
    if (total < kAnnihilationTol) {
      throw AnnihilationError("filter annihilates state");
    }
    outcome.success_probability = total;
    outcome.filtered_state.num_qubits = op.num_sites();
    outcome.filtered_state.amplitudes =
        staged.amplitudes.segment(0, system_dim) / std::sqrt(total);
  }

  outcome.g_factors = g_factors(exact_distribution(state, op), spec);
  return outcome;
}

FilterOutcome apply_filter_sampled(const PureState& state, const NumberOperator& op,
                                   const FilterSpec& spec, std::uint64_t seed,
                                   std::int64_t max_attempts) {
  if (state.num_qubits != op.num_sites()) {
    throw std::invalid_argument("filter input must span exactly the system qubits");
  }
  validate_spec(spec);
  if (max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be >= 1");
  }

  Rng rng(seed);
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    PureState current = state;
    double total = 1.0;
    bool accepted = true;
    for (const auto& [target, time] : spec.targets) {
      const int ancilla = current.num_qubits;
      PureState staged = append_qubit(current, 1);
      run_ancilla_stage(staged, op, ancilla, target, time);
      const double p0 = qubit_probability(staged, ancilla, 0);
      if (!rng.bernoulli(p0)) {
        accepted = false;
        break;
      }
      if (p0 < kAnnihilationTol) {
        throw AnnihilationError("filter annihilates state");
      }
      auto [p, collapsed] = project_qubit(staged, ancilla, 0);
      current = remove_qubit(collapsed, ancilla, 0);
      total *= p;
    }
    if (accepted) {
      FilterOutcome outcome;
      outcome.success_probability = total;
      outcome.filtered_state = std::move(current);
      outcome.g_factors = g_factors(exact_distribution(state, op), spec);
      outcome.attempts = attempt;
      return outcome;
    }
  }
  throw AnnihilationError("no successful filter outcome in " + std::to_string(max_attempts) +
                          " attempts");
}

double success_probability(const Distribution& dist, const FilterSpec& spec) {
  validate_spec(spec);
  double total = 0.0;
  for (const auto& [value, probability] : dist.probabilities) {
    total += probability * sector_weight(value, spec);
  }
  return total;
}

std::map<int, double> g_factors(const Distribution& dist, const FilterSpec& spec) {
  validate_spec(spec);
  double denom = 0.0;
  std::map<int, double> weights;
  for (const auto& [value, probability] : dist.probabilities) {
    const double w = sector_weight(value, spec);
    weights[value] = w;
    denom += probability * w;
  }
  if (denom < 1e-14) {
    throw AnnihilationError("filter annihilates state: zero surviving weight");
  }
  std::map<int, double> out;
  for (const auto& [value, w] : weights) {
    out[value] = w / denom;
  }
  return out;
}

std::uint64_t choose_reference(const PureState& state, const NumberOperator& op, int sector) {
  if (state.num_qubits != op.num_sites()) {
    throw std::invalid_argument("reference lookup expects a system-only state");
  }
  const auto& support = op.support();
  if (std::find(support.begin(), support.end(), sector) == support.end()) {
    throw std::invalid_argument("sector " + std::to_string(sector) +
                                " is not in the operator support");
  }
  std::uint64_t best_index = 0;
  double best_weight = -1.0;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (op(z) != sector) continue;
    const double w = std::norm(state.amplitudes(static_cast<Eigen::Index>(z)));
    if (w > best_weight) {
      best_weight = w;
      best_index = z;
    }
  }
  if (best_weight <= 0.0) {
    throw std::invalid_argument("sector " + std::to_string(sector) + " carries no weight");
  }
  return best_index;
}

Distribution reconstruct_distribution(
    const Distribution& filtered_dist,
    const std::map<int, std::pair<double, double>>& reference_probs) {
  Distribution out;
  out.reconstructed = filtered_dist.reconstructed;
  out.imag_residue = filtered_dist.imag_residue;
  for (const auto& [value, filtered_probability] : filtered_dist.probabilities) {
    const auto it = reference_probs.find(value);
    if (it == reference_probs.end()) {
      throw std::invalid_argument("missing reference pair for sector " + std::to_string(value));
    }
    const auto& [p_unfiltered, p_filtered] = it->second;
    if (!(p_filtered > 0.0)) {
      throw ReconstructionError("zero filtered reference probability for sector " +
                                std::to_string(value));
    }
    out.probabilities[value] = (p_unfiltered / p_filtered) * filtered_probability;
  }
  return out;
}

}  // namespace qfcs
