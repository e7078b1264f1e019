#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qfcs/charfunc.hpp"
#include "qfcs/distribution.hpp"
#include "qfcs/types.hpp"

namespace qfcs {

/// Discrete Fourier reconstruction P_rec(n) = (1/k) sum_i P~(theta_i)
/// e^{-i theta_i n}, evaluated at the requested n values. With k below the
/// Nyquist count the output obeys the aliasing identity
///   P_rec(n) = sum_j (-1)^{jk} P(n + j k stride).
/// The imaginary residue is checked (< 1e-9 for exact-mode samples) and
/// discarded; the result is flagged `reconstructed`.
Distribution dft_reconstruct(std::span<const CharFuncSample> samples, const SamplingGrid& grid,
                             std::span<const int> n_values);

/// Reconstruction at the grid's canonical values.
Distribution dft_reconstruct(std::span<const CharFuncSample> samples, const SamplingGrid& grid);

/// Lossless sampling count: max_value/2 + 1 for even-only support
/// (pi-periodic P~), else max_value + 1.
int min_sampling_points(int max_value, bool parity_even);

/// Finite-difference stencil for the order-th derivative of P~ with respect
/// to (i theta) at theta = 0. Offsets are integer multiples of the step h;
/// every coefficient carries the 1/(ih)^order normalization, so the moment
/// estimate is Re sum_j c_j P~(offset_j h).
struct Stencil {
  int order = 1;
  int error_order = 2;
  double h = 0.0;
  std::vector<int> offsets;
  std::vector<Complex> coefficients;
};

/// Central second-order stencils for derivative orders 1-3; higher orders are
/// grown with build_stencil.
Stencil base_stencil(int order, double h);

/// Composes the order-1 central difference with `base` (offset convolution);
/// requires order == base.order + 1.
Stencil build_stencil(int order, const Stencil& base);

/// One extrapolation round: (f1 - r f2) / (1 - r) with r = ratio^p cancels
/// the p-th-order error term shared by f1 (step x1) and f2 (step x2 > x1),
/// ratio = x1/x2.
double richardson_combine(double f1, double f2, double ratio, int p);

/// Applies `rounds` extrapolation rounds to a stencil, pairing steps h and
/// step_factor*h each round (ratio 1/step_factor). Error order rises by 2
/// per round.
Stencil richardson_stencil(const Stencil& base, int rounds, int step_factor = 2);

/// Re sum_j c_j P~(offset_j h) over samples keyed by offset; the discarded
/// imaginary part is reported through `imag_residue` when non-null.
double estimate_moment(const std::map<int, CharFuncSample>& samples_at_offsets,
                       const Stencil& stencil, double* imag_residue = nullptr);

/// Collects the samples estimate_moment needs, one per stencil offset, with
/// per-offset seeds derived from `seed`.
std::map<int, CharFuncSample> sample_stencil_offsets(const PureState& prepared,
                                                     const NumberOperator& op,
                                                     const Stencil& stencil, EstimationMode mode,
                                                     std::int64_t shots, std::uint64_t seed);

/// First three cumulants and the raw moments they came from. `skewness` is
/// the third cumulant (unnormalized).
struct CumulantSet {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double h = 0.0;
  int rounds = 0;
};

/// kappa1 = m1, kappa2 = m2 - m1^2, kappa3 = m3 - 3 m2 m1 + 2 m1^3.
CumulantSet moments_to_cumulants(double m1, double m2, double m3);

}  // namespace qfcs
