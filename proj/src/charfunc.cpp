#include "qfcs/charfunc.hpp"

#include <numbers>
#include <stdexcept>

#include "qfcs/rng.hpp"

namespace qfcs {

namespace {
constexpr double kPi = std::numbers::pi;
}

SamplingGrid SamplingGrid::full(int k) {
  if (k < 1) throw std::invalid_argument("grid needs k >= 1");
  return SamplingGrid{k, 1};
}

SamplingGrid SamplingGrid::even_support(int k) {
  if (k < 1) throw std::invalid_argument("grid needs k >= 1");
  return SamplingGrid{k, 2};
}

double SamplingGrid::spacing() const { return 2.0 * kPi / (static_cast<double>(k) * stride); }

double SamplingGrid::angle(int i) const { return -kPi / stride + i * spacing(); }

std::vector<int> SamplingGrid::reconstruction_values() const {
  std::vector<int> values(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) values[static_cast<std::size_t>(i)] = i * stride;
  return values;
}

double hadamard_test_probability(const PureState& prepared, const NumberOperator& op,
                                 double theta, Part part) {
  if (prepared.num_qubits != op.num_sites()) {
    throw std::invalid_argument("prepared state must span exactly the system qubits");
  }
  const int ancilla = prepared.num_qubits;
  PureState state = append_qubit(prepared, 0);
  const auto h = gates::hadamard();
  apply_one_qubit_gate(state, ancilla, h);
  // Controlled evolution under N for time -theta, i.e. exp(+i theta N) on
  // the ancilla-1 branch.
  apply_diagonal_phase(state, DiagonalPhaseSpec{theta, &op, ancilla});
  if (part == Part::real) {
    apply_one_qubit_gate(state, ancilla, h);
  } else {
    apply_one_qubit_gate(state, ancilla, gates::rx(kPi / 2));
  }
  return qubit_probability(state, ancilla, 0);
}

CharFuncSample estimate_point(const PureState& prepared, const NumberOperator& op, double theta,
                              EstimationMode mode, std::int64_t shots, std::uint64_t seed) {
  const double p_re = hadamard_test_probability(prepared, op, theta, Part::real);
  const double p_im = hadamard_test_probability(prepared, op, theta, Part::imag);

  CharFuncSample sample;
  sample.theta = theta;
  sample.mode = mode;
  sample.seed = seed;
  if (mode == EstimationMode::exact) {
    sample.shots = 0;
    sample.value = {2.0 * p_re - 1.0, 2.0 * p_im - 1.0};
    return sample;
  }

  if (shots < 1) {
    throw std::invalid_argument("shot mode needs shots >= 1");
  }
  sample.shots = shots;
  Rng rng(seed);
  std::int64_t zeros_re = 0;
  for (std::int64_t s = 0; s < shots; ++s) {
    if (rng.uniform() < p_re) ++zeros_re;
  }
  std::int64_t zeros_im = 0;
  for (std::int64_t s = 0; s < shots; ++s) {
    if (rng.uniform() < p_im) ++zeros_im;
  }
  const double freq_re = static_cast<double>(zeros_re) / static_cast<double>(shots);
  const double freq_im = static_cast<double>(zeros_im) / static_cast<double>(shots);
  sample.value = {2.0 * freq_re - 1.0, 2.0 * freq_im - 1.0};
  return sample;
}

std::vector<CharFuncSample> estimate_grid(const PureState& prepared, const NumberOperator& op,
                                          const SamplingGrid& grid, EstimationMode mode,
                                          std::int64_t shots, std::uint64_t seed) {
  if (grid.k < 1) {
    throw std::invalid_argument("grid needs k >= 1");
  }
  std::vector<CharFuncSample> samples;
  samples.reserve(static_cast<std::size_t>(grid.k));
  for (int i = 0; i < grid.k; ++i) {
    samples.push_back(estimate_point(prepared, op, grid.angle(i), mode, shots,
                                     seed + static_cast<std::uint64_t>(i)));
  }
  return samples;
}

}  // namespace qfcs
