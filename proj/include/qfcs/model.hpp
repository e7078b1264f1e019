#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "qfcs/distribution.hpp"
#include "qfcs/number_operator.hpp"
#include "qfcs/statevector.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

/// Mixed-field Ising chain on a periodic ring of L sites,
///
///   H = -J sum_{i=1..L} [ sigma^z_i sigma^z_{i+1} + h_x sigma^x_i + h_z sigma^z_i ],
///
/// with sigma_{L+1} = sigma_1. Spin convention: bit 0 of a basis index is
/// sigma^z = +1, i.e. s = 1 - 2*bit.
struct MfimParams {
  int L = 12;
  double J = 1.0;
  double h_x = 1.0;
  double h_z = 1.0;
  double t = 1.0;
};

/// L must be even and >= 2; couplings and time finite.
void validate_params(const MfimParams& params);

/// Number of bonds (i, i+1 mod L) whose bits differ.
int domain_wall_count(std::uint64_t z, int L);

/// N = (1/2) sum_i (1 - sigma^z_i sigma^z_{i+1}); even-valued on a periodic
/// even-L ring.
NumberOperator domain_wall_operator(int L);

/// Dense real-symmetric MFIM Hamiltonian; L <= 14.
Eigen::MatrixXd build_mfim_matrix(const MfimParams& params);

/// e^{-iHt}|state> from a full eigendecomposition of build_mfim_matrix.
PureState exact_evolve(const PureState& state, const MfimParams& params);

/// Second-order symmetric Trotter evolution, layer order
/// [X/2, Z/2, ZZ, Z/2, X/2] per step.
PureState trotter_evolve(const PureState& state, const MfimParams& params, int steps);

/// Sector weights P(N = N_k) = sum_{i in G_k} |c_i|^2; the ground-truth
/// oracle for the reconstruction experiments.
Distribution exact_distribution(const PureState& state, const NumberOperator& op);

/// P~(theta) = sum_z |amp(z)|^2 e^{i theta n(z)}.
Complex exact_char_func(const PureState& state, const NumberOperator& op, double theta);

}  // namespace qfcs
