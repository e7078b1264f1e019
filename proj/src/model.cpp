#include "qfcs/model.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfcs {

void validate_params(const MfimParams& params) {
  if (params.L < 2 || params.L % 2 != 0) {
    throw std::invalid_argument("L must be even and >= 2");
  }
  if (!std::isfinite(params.J) || !std::isfinite(params.h_x) ||
      !std::isfinite(params.h_z) || !std::isfinite(params.t)) {
    throw std::invalid_argument("couplings and time must be finite");
  }
}

int domain_wall_count(std::uint64_t z, int L) {
  if (L < 2 || L % 2 != 0) {
    throw std::invalid_argument("L must be even and >= 2");
  }
  const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
  if (z > mask) {
    throw std::invalid_argument("basis index out of range");
  }
  // Bit i of `rotated` is bit (i+1 mod L) of z, so z ^ rotated marks the
  // bonds whose endpoints differ.
  const std::uint64_t rotated = ((z >> 1) | (z << (L - 1))) & mask;
  return std::popcount(z ^ rotated);
}

NumberOperator domain_wall_operator(int L) {
  return NumberOperator(L, [L](std::uint64_t z) { return domain_wall_count(z, L); });
}

Eigen::MatrixXd build_mfim_matrix(const MfimParams& params) {
  validate_params(params);
  if (params.L > 14) {
    throw std::invalid_argument("dense MFIM matrix limited to L <= 14");
  }
  const int L = params.L;
  const Eigen::Index dim = Eigen::Index{1} << L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t z = 0; z < static_cast<std::uint64_t>(dim); ++z) {
    // sum_i s_i s_{i+1} = L - 2 * (number of domain walls),
    // sum_i s_i = L - 2 * popcount.
    const double zz = static_cast<double>(L - 2 * domain_wall_count(z, L));
    const double sz = static_cast<double>(L - 2 * std::popcount(z));
    H(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(z)) =
        -params.J * (zz + params.h_z * sz);
    for (int i = 0; i < L; ++i) {
      const std::uint64_t flipped = z ^ (std::uint64_t{1} << i);
      H(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(z)) +=
          -params.J * params.h_x;
    }
  }
  return H;
}

PureState exact_evolve(const PureState& state, const MfimParams& params) {
  validate_params(params);
  if (state.num_qubits != params.L) {
    throw std::invalid_argument("state spans " + std::to_string(state.num_qubits) +
                                " qubits, expected " + std::to_string(params.L));
  }
  const Eigen::MatrixXd H = build_mfim_matrix(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  const Eigen::MatrixXd& V = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();

  // e^{-iHt} psi = V diag(e^{-i lambda t}) V^T psi, split into real GEMVs to
  // avoid materializing a complex copy of V.
  const Eigen::VectorXd yr = V.transpose() * state.amplitudes.real().matrix();
  const Eigen::VectorXd yi = V.transpose() * state.amplitudes.imag().matrix();
  Eigen::VectorXd pr(yr.size());
  Eigen::VectorXd pi(yr.size());
  for (Eigen::Index k = 0; k < yr.size(); ++k) {
    const double c = std::cos(lambda(k) * params.t);
    const double s = std::sin(lambda(k) * params.t);
    pr(k) = c * yr(k) + s * yi(k);
    pi(k) = c * yi(k) - s * yr(k);
  }
  const Eigen::VectorXd out_re = V * pr;
  const Eigen::VectorXd out_im = V * pi;

  PureState out;
  out.num_qubits = state.num_qubits;
  out.amplitudes.resize(state.dim());
  out.amplitudes.real() = out_re;
  out.amplitudes.imag() = out_im;
  return out;
}

PureState trotter_evolve(const PureState& state, const MfimParams& params, int steps) {
  validate_params(params);
  if (steps < 1) {
    throw std::invalid_argument("steps must be >= 1");
  }
  if (state.num_qubits != params.L) {
    throw std::invalid_argument("state/parameter qubit count mismatch");
  }
  const int L = params.L;
  const double dt = params.t / steps;
  const auto x_half = gates::x_rotation_exp(params.J * params.h_x * dt / 2);
  const auto z_half = gates::z_rotation_exp(params.J * params.h_z * dt / 2);
  const double zz_angle = params.J * dt;

  PureState out = state;
  for (int step = 0; step < steps; ++step) {
    for (int q = 0; q < L; ++q) apply_one_qubit_gate(out, q, x_half);
    for (int q = 0; q < L; ++q) apply_one_qubit_gate(out, q, z_half);
    for (int i = 0; i < L; ++i) apply_zz_rotation(out, i, (i + 1) % L, zz_angle);
    for (int q = 0; q < L; ++q) apply_one_qubit_gate(out, q, z_half);
    for (int q = 0; q < L; ++q) apply_one_qubit_gate(out, q, x_half);
  }
  return out;
}

Distribution exact_distribution(const PureState& state, const NumberOperator& op) {
  if (op.num_sites() > state.num_qubits) {
    throw std::invalid_argument("operator spans more qubits than the state");
  }
  std::vector<detail::KahanSum<double>> weight(static_cast<std::size_t>(op.max_value()) + 1);
  const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
  for (std::uint64_t z = 0; z < dim; ++z) {
    weight[static_cast<std::size_t>(op(z))].add(
        std::norm(state.amplitudes(static_cast<Eigen::Index>(z))));
  }
  Distribution dist;
  for (int n : op.support()) {
    dist.probabilities[n] = weight[static_cast<std::size_t>(n)].value();
  }
  return dist;
}

Complex exact_char_func(const PureState& state, const NumberOperator& op, double theta) {
  if (op.num_sites() > state.num_qubits) {
    throw std::invalid_argument("operator spans more qubits than the state");
  }
  const Distribution dist = exact_distribution(state, op);
  detail::KahanSum<double> re;
  detail::KahanSum<double> im;
  for (const auto& [n, p] : dist.probabilities) {
    re.add(p * std::cos(theta * n));
    im.add(p * std::sin(theta * n));
  }
  return {re.value(), im.value()};
}

}  // namespace qfcs
