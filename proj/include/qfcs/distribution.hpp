#pragma once

#include <map>

namespace qfcs {

/// Probability weights over integer particle-number values. DFT
/// reconstructions are flagged: they may carry aliasing artifacts, including
/// small negative entries, and are exempt from the physical-distribution
/// invariants until normalized.
struct Distribution {
  std::map<int, double> probabilities;
  bool reconstructed = false;
  /// Largest |imaginary part| discarded during DFT reconstruction.
  double imag_residue = 0.0;

  /// P(n); 0 when absent.
  double at(int n) const;

  double total() const;

  /// Largest value carrying weight above `tol`; -1 for an empty distribution.
  int max_value(double tol = 0.0) const;

  bool even_support(double tol = 1e-12) const;

  /// Clamps negative entries to zero and rescales to unit total. The clamp
  /// happens only here; raw reconstructions stay faithful for error plots.
  Distribution normalized() const;
};

/// (1/2) sum_n |p(n) - q(n)|; missing keys count as zero.
double trace_distance(const Distribution& p, const Distribution& q);

}  // namespace qfcs
