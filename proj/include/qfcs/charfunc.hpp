#pragma once

#include <cstdint>
#include <vector>

#include "qfcs/number_operator.hpp"
#include "qfcs/statevector.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

enum class Part { real, imag };

enum class EstimationMode { exact, shots };

/// Uniform angle grid for characteristic-function sampling. stride 1 spans
/// [-pi, pi) with spacing 2 pi / k. stride 2 spans [-pi/2, pi/2): P~ is
/// pi-periodic when the operator support is even-only, so half the period
/// (and half the Nyquist count) suffices there.
struct SamplingGrid {
  int k = 1;
  int stride = 1;

  static SamplingGrid full(int k);
  static SamplingGrid even_support(int k);

  double spacing() const;
  double angle(int i) const;

  /// Canonical reconstruction values {0, stride, ..., (k-1)*stride}.
  std::vector<int> reconstruction_values() const;
};

/// One estimate of P~(theta). shots == 0 in exact mode.
struct CharFuncSample {
  double theta = 0.0;
  Complex value{0.0, 0.0};
  EstimationMode mode = EstimationMode::exact;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Hadamard-test circuit: ancilla-H, controlled exp(i theta N), then H (real
/// part) or R_x(pi/2) (imaginary part). Returns the ancilla-0 probability;
/// the estimate is Re P~ = 2 p0 - 1, and with R_x(pi/2) = exp(-i pi X/4) the
/// same mapping Im P~ = 2 p0 - 1 holds (sign fixed against the exact oracle).
double hadamard_test_probability(const PureState& prepared, const NumberOperator& op,
                                 double theta, Part part);

/// Assembles Re/Im estimates into one complex sample. Shot mode draws two
/// independent Bernoulli batches of `shots` each (one per circuit) from a
/// stream seeded with `seed`.
CharFuncSample estimate_point(const PureState& prepared, const NumberOperator& op, double theta,
                              EstimationMode mode, std::int64_t shots, std::uint64_t seed);

/// One sample per grid angle; the point at index i uses seed + i.
std::vector<CharFuncSample> estimate_grid(const PureState& prepared, const NumberOperator& op,
                                          const SamplingGrid& grid, EstimationMode mode,
                                          std::int64_t shots, std::uint64_t seed);

}  // namespace qfcs
