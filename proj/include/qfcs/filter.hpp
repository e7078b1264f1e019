#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qfcs/distribution.hpp"
#include "qfcs/number_operator.hpp"
#include "qfcs/statevector.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

/// Sectors to remove and the per-ancilla evolution times, plus the
/// distribution-center hint the schedule was built from.
struct FilterSpec {
  std::vector<std::pair<int, double>> targets;  // (N_m, t_m)
  int center = 0;                               // N_c
  std::vector<int> support;                     // attainable values {N_k}
};

struct FilterOutcome {
  double success_probability = 0.0;
  PureState filtered_state;                 // system qubits only, unit norm
  std::map<int, double> g_factors;          // N_k -> g_k (0 for targets)
  std::int64_t attempts = 1;                // rejection count in shot mode
};

/// t_m = pi / |N_c - N_m|, or pi / |N_c' - N_m| with N_c' the support point
/// closest to N_c (ties toward the smaller value) when the target is the
/// center itself. Throws AnnihilationError when the targets cover the whole
/// support.
FilterSpec schedule_times(int center, std::span<const int> targets,
                          std::span<const int> support);

/// Ancilla handling: `sequential` allocates, uses and projects one ancilla at
/// a time; `joint` builds the full multi-ancilla circuit and projects all at
/// once. The two are equivalent (diagonal ancilla factors commute).
enum class FilterLayout { sequential, joint };

/// Runs the filter circuit per ancilla m: init |1>, H, controlled
/// exp(-i N t_m), R_z(N_m t_m) on the ancilla, H, project to |0>. The
/// surviving sector-k amplitudes end up scaled by
/// prod_m (1/2 - 1/2 e^{-i (N_k - N_m) t_m}) before renormalization, and
/// P_f = sum_k P(N_k) prod_m sin^2((N_k - N_m) t_m / 2).
FilterOutcome apply_filter(const PureState& state, const NumberOperator& op,
                           const FilterSpec& spec,
                           FilterLayout layout = FilterLayout::sequential);

/// Rejection-sampled variant: repeats the circuit, accepting only all-zero
/// ancilla outcomes, and records the number of attempts.
FilterOutcome apply_filter_sampled(const PureState& state, const NumberOperator& op,
                                   const FilterSpec& spec, std::uint64_t seed,
                                   std::int64_t max_attempts = 1000000);

/// Analytic success probability sum_k P(N_k) prod_m sin^2((N_k - N_m) t_m/2).
double success_probability(const Distribution& dist, const FilterSpec& spec);

/// g_k = w_k / sum_j P(N_j) w_j with w_k = prod_m sin^2((N_k - N_m) t_m/2);
/// exactly zero for targeted sectors. P'(N_k) = g_k P(N_k).
std::map<int, double> g_factors(const Distribution& dist, const FilterSpec& spec);

/// Basis state of largest weight within the sector (ties toward the smaller
/// index); the reference for the single-state probability-ratio trick.
std::uint64_t choose_reference(const PureState& state, const NumberOperator& op, int sector);

/// P(N_k) = (P(i)/P'(i)) P'(N_k) per surviving sector, given per-sector
/// reference pairs (P_unfiltered(i), P_filtered(i)). Targeted sectors are
/// simply absent from the input and stay absent.
Distribution reconstruct_distribution(
    const Distribution& filtered_dist,
    const std::map<int, std::pair<double, double>>& reference_probs);

}  // namespace qfcs
