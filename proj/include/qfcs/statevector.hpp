#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfcs/number_operator.hpp"
#include "qfcs/rng.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

/// Dense register of `num_qubits` qubits. Little-endian layout: qubit q is
/// bit q of the basis index. System qubits come first (0..L-1); ancillas are
/// appended above them (L, L+1, ...).
template <class Scalar = double>
struct BasicPureState {
  using ComplexT = std::complex<Scalar>;
  using Vector = Eigen::Vector<ComplexT, Eigen::Dynamic>;

  int num_qubits = 0;
  Vector amplitudes;

  Eigen::Index dim() const { return amplitudes.size(); }
};

using PureState = BasicPureState<double>;

namespace detail {

/// Compensated (Neumaier) accumulator; keeps big reductions accurate to a
/// few ulp independent of length.
template <class Scalar>
struct KahanSum {
  Scalar sum{0};
  Scalar carry{0};

  void add(Scalar x) {
    const Scalar t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  Scalar value() const { return sum + carry; }
};

template <class Scalar>
void check_qubit(const BasicPureState<Scalar>& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.num_qubits) +
                                " qubits");
  }
}

}  // namespace detail

template <class Scalar = double>
BasicPureState<Scalar> init_basis_state(int num_qubits, std::uint64_t basis_index) {
  if (num_qubits < 1 || num_qubits > 28) {
    throw std::invalid_argument("num_qubits must be in [1, 28]");
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (basis_index >= dim) {
    throw std::invalid_argument("basis index out of range");
  }
  BasicPureState<Scalar> state;
  state.num_qubits = num_qubits;
  state.amplitudes = BasicPureState<Scalar>::Vector::Zero(static_cast<Eigen::Index>(dim));
  state.amplitudes(static_cast<Eigen::Index>(basis_index)) = typename BasicPureState<Scalar>::ComplexT{1};
  return state;
}

/// 2x2 unitary; validated once at construction (tolerance 1e-12) rather than
/// at every application.
template <class Scalar = double>
class BasicOneQubitGate {
 public:
  using Matrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

  explicit BasicOneQubitGate(const Matrix& m) : matrix_(m) {
    const Matrix defect = m.adjoint() * m - Matrix::Identity();
    if (defect.cwiseAbs().maxCoeff() > Scalar(1e-12)) {
      throw std::invalid_argument("gate matrix is not unitary");
    }
  }

  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

using OneQubitGate = BasicOneQubitGate<double>;

namespace gates {

template <class Scalar = double>
BasicOneQubitGate<Scalar> hadamard() {
  using C = std::complex<Scalar>;
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  typename BasicOneQubitGate<Scalar>::Matrix m;
  m << C(s), C(s), C(s), C(-s);
  return BasicOneQubitGate<Scalar>(m);
}

/// R_x(phi) = exp(-i phi X / 2).
template <class Scalar = double>
BasicOneQubitGate<Scalar> rx(Scalar phi) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(phi / 2);
  const Scalar s = std::sin(phi / 2);
  typename BasicOneQubitGate<Scalar>::Matrix m;
  m << C(c), C(0, -s), C(0, -s), C(c);
  return BasicOneQubitGate<Scalar>(m);
}

/// R_z(phi) = diag(e^{-i phi/2}, e^{+i phi/2}).
template <class Scalar = double>
BasicOneQubitGate<Scalar> rz(Scalar phi) {
  using C = std::complex<Scalar>;
  typename BasicOneQubitGate<Scalar>::Matrix m;
  m << std::polar(Scalar(1), -phi / 2), C(0), C(0), std::polar(Scalar(1), phi / 2);
  return BasicOneQubitGate<Scalar>(m);
}

/// exp(i alpha X): cos(alpha) I + i sin(alpha) X. Trotter layer for a single
/// transverse-field term.
template <class Scalar = double>
BasicOneQubitGate<Scalar> x_rotation_exp(Scalar alpha) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(alpha);
  const Scalar s = std::sin(alpha);
  typename BasicOneQubitGate<Scalar>::Matrix m;
  m << C(c), C(0, s), C(0, s), C(c);
  return BasicOneQubitGate<Scalar>(m);
}

/// exp(i alpha Z) = diag(e^{i alpha}, e^{-i alpha}).
template <class Scalar = double>
BasicOneQubitGate<Scalar> z_rotation_exp(Scalar alpha) {
  using C = std::complex<Scalar>;
  typename BasicOneQubitGate<Scalar>::Matrix m;
  m << std::polar(Scalar(1), alpha), C(0), C(0), std::polar(Scalar(1), -alpha);
  return BasicOneQubitGate<Scalar>(m);
}

}  // namespace gates

template <class Scalar>
void apply_one_qubit_gate(BasicPureState<Scalar>& state, int qubit,
                          const BasicOneQubitGate<Scalar>& gate) {
  detail::check_qubit(state, qubit);
  const auto& g = gate.matrix();
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  const std::uint64_t step = std::uint64_t{1} << qubit;
  for (std::uint64_t base = 0; base < dim; base += 2 * step) {
    for (std::uint64_t offset = 0; offset < step; ++offset) {
      const Eigen::Index i0 = static_cast<Eigen::Index>(base + offset);
      const Eigen::Index i1 = static_cast<Eigen::Index>(base + offset + step);
      const auto a0 = state.amplitudes(i0);
      const auto a1 = state.amplitudes(i1);
      state.amplitudes(i0) = g(0, 0) * a0 + g(0, 1) * a1;
      state.amplitudes(i1) = g(1, 0) * a0 + g(1, 1) * a1;
    }
  }
}

/// Multiplies each basis amplitude by exp(i angle s_a s_b) with s = 1 - 2*bit.
template <class Scalar>
void apply_zz_rotation(BasicPureState<Scalar>& state, int qubit_a, int qubit_b, Scalar angle) {
  detail::check_qubit(state, qubit_a);
  detail::check_qubit(state, qubit_b);
  if (qubit_a == qubit_b) {
    throw std::invalid_argument("zz rotation requires distinct qubits");
  }
  const auto aligned = std::polar(Scalar(1), angle);
  const auto opposed = std::polar(Scalar(1), -angle);
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    const bool same = (((z >> qubit_a) ^ (z >> qubit_b)) & 1u) == 0;
    state.amplitudes(static_cast<Eigen::Index>(z)) *= same ? aligned : opposed;
  }
}

/// Diagonal phase exp(i angle n(z)) over the system part of the register,
/// optionally conditioned on an ancilla control bit.
struct DiagonalPhaseSpec {
  double angle = 0.0;
  const NumberOperator* value_fn = nullptr;
  std::optional<int> control;
};

template <class Scalar>
void apply_diagonal_phase(BasicPureState<Scalar>& state, const DiagonalPhaseSpec& spec) {
  if (spec.value_fn == nullptr) {
    throw std::invalid_argument("diagonal phase spec has no value function");
  }
  const NumberOperator& op = *spec.value_fn;
  if (op.num_sites() > state.num_qubits) {
    throw std::invalid_argument("operator spans more qubits than the state");
  }
  if (spec.control) {
    detail::check_qubit(state, *spec.control);
    if (*spec.control < op.num_sites()) {
      throw std::invalid_argument("control qubit must lie outside the system range");
    }
  }
  std::vector<std::complex<Scalar>> phase(static_cast<std::size_t>(op.max_value()) + 1);
  for (std::size_t n = 0; n < phase.size(); ++n) {
    phase[n] = std::polar(Scalar(1), static_cast<Scalar>(spec.angle) * static_cast<Scalar>(n));
  }
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  const std::uint64_t control_mask = spec.control ? (std::uint64_t{1} << *spec.control) : 0;
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (control_mask != 0 && (z & control_mask) == 0) continue;
    state.amplitudes(static_cast<Eigen::Index>(z)) *= phase[static_cast<std::size_t>(op(z))];
  }
}

/// Marginal probability of reading `outcome` on `qubit`.
template <class Scalar>
Scalar qubit_probability(const BasicPureState<Scalar>& state, int qubit, int outcome) {
  detail::check_qubit(state, qubit);
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("outcome must be 0 or 1");
  }
  detail::KahanSum<Scalar> acc;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (static_cast<int>((z >> qubit) & 1u) == outcome) {
      acc.add(std::norm(state.amplitudes(static_cast<Eigen::Index>(z))));
    }
  }
  return acc.value();
}

/// Projects `qubit` onto `outcome`; returns the pre-collapse probability and
/// the renormalized collapsed state. Throws ProjectionError when the outcome
/// has (near-)zero weight; retry semantics are the caller's.
template <class Scalar>
std::pair<Scalar, BasicPureState<Scalar>> project_qubit(const BasicPureState<Scalar>& state,
                                                        int qubit, int outcome) {
  const Scalar probability = qubit_probability(state, qubit, outcome);
  if (probability < Scalar(1e-14)) {
    throw ProjectionError("projection failed: outcome probability " +
                          std::to_string(static_cast<double>(probability)));
  }
  BasicPureState<Scalar> collapsed = state;
  const Scalar scale = Scalar(1) / std::sqrt(probability);
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    const Eigen::Index i = static_cast<Eigen::Index>(z);
    if (static_cast<int>((z >> qubit) & 1u) == outcome) {
      collapsed.amplitudes(i) *= scale;
    } else {
      collapsed.amplitudes(i) = typename BasicPureState<Scalar>::ComplexT{0};
    }
  }
  return {probability, std::move(collapsed)};
}

/// Sum_z |amp(z)|^2 n(z)^power; the exact-diagonalization oracle for moments.
template <class Scalar>
Scalar expectation_diagonal(const BasicPureState<Scalar>& state, const NumberOperator& op,
                            int power) {
  if (power < 1) {
    throw std::invalid_argument("power must be >= 1");
  }
  if (op.num_sites() > state.num_qubits) {
    throw std::invalid_argument("operator spans more qubits than the state");
  }
  std::vector<Scalar> value_pow(static_cast<std::size_t>(op.max_value()) + 1);
  for (std::size_t n = 0; n < value_pow.size(); ++n) {
    Scalar v = 1;
    for (int j = 0; j < power; ++j) v *= static_cast<Scalar>(n);
    value_pow[n] = v;
  }
  detail::KahanSum<Scalar> acc;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    acc.add(std::norm(state.amplitudes(static_cast<Eigen::Index>(z))) *
            value_pow[static_cast<std::size_t>(op(z))]);
  }
  return acc.value();
}

/// Multinomial measurement record over the listed qubits. Keys are bit
/// strings with character j holding the outcome of qubits[j]. Identical
/// seeds give identical counts.
template <class Scalar>
std::map<std::string, std::int64_t> sample_counts(const BasicPureState<Scalar>& state,
                                                  std::span<const int> qubits,
                                                  std::int64_t shots, std::uint64_t seed) {
  if (qubits.empty()) {
    throw std::invalid_argument("qubit list must be nonempty");
  }
  if (qubits.size() > 20) {
    throw std::invalid_argument("at most 20 qubits can be sampled jointly");
  }
  if (shots < 1) {
    throw std::invalid_argument("shots must be >= 1");
  }
  for (std::size_t a = 0; a < qubits.size(); ++a) {
    detail::check_qubit(state, qubits[a]);
    for (std::size_t b = a + 1; b < qubits.size(); ++b) {
      if (qubits[a] == qubits[b]) throw std::invalid_argument("duplicate qubit in list");
    }
  }

  const std::size_t num_outcomes = std::size_t{1} << qubits.size();
  std::vector<double> prob(num_outcomes, 0.0);
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    std::size_t packed = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      packed |= ((z >> qubits[j]) & 1u) << j;
    }
    prob[packed] += static_cast<double>(std::norm(state.amplitudes(static_cast<Eigen::Index>(z))));
  }

  std::vector<double> cdf(num_outcomes);
  double running = 0.0;
  for (std::size_t i = 0; i < num_outcomes; ++i) {
    running += prob[i];
    cdf[i] = running;
  }
  cdf.back() = 1.0;

  std::vector<std::int64_t> counts(num_outcomes, 0);
  Rng rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++counts[idx < num_outcomes ? idx : num_outcomes - 1];
  }

  std::map<std::string, std::int64_t> result;
  for (std::size_t i = 0; i < num_outcomes; ++i) {
    if (counts[i] == 0) continue;
    std::string key(qubits.size(), '0');
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((i >> j) & 1u) key[j] = '1';
    }
    result.emplace(std::move(key), counts[i]);
  }
  return result;
}

/// Appends one qubit in |bit> above the existing register.
template <class Scalar>
BasicPureState<Scalar> append_qubit(const BasicPureState<Scalar>& state, int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("bit must be 0 or 1");
  }
  BasicPureState<Scalar> out;
  out.num_qubits = state.num_qubits + 1;
  out.amplitudes = BasicPureState<Scalar>::Vector::Zero(2 * state.dim());
  out.amplitudes.segment(bit == 0 ? 0 : state.dim(), state.dim()) = state.amplitudes;
  return out;
}

/// Removes a qubit known to be definitely `bit` (e.g. just projected).
template <class Scalar>
BasicPureState<Scalar> remove_qubit(const BasicPureState<Scalar>& state, int qubit, int bit) {
  detail::check_qubit(state, qubit);
  BasicPureState<Scalar> out;
  out.num_qubits = state.num_qubits - 1;
  out.amplitudes = BasicPureState<Scalar>::Vector::Zero(state.dim() / 2);
  const std::uint64_t low_mask = (std::uint64_t{1} << qubit) - 1;
  const std::uint64_t dim = static_cast<std::uint64_t>(out.amplitudes.size());
  for (std::uint64_t z = 0; z < dim; ++z) {
    const std::uint64_t src = (z & low_mask) | (static_cast<std::uint64_t>(bit) << qubit) |
                              ((z & ~low_mask) << 1);
    out.amplitudes(static_cast<Eigen::Index>(z)) = state.amplitudes(static_cast<Eigen::Index>(src));
  }
  return out;
}

}  // namespace qfcs
