#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qfcs {

/// Integer-valued diagonal observable over the computational basis of
/// `num_sites` qubits. Values are tabulated at construction; lookups mask to
/// the low `num_sites` bits, so basis indices of registers with ancillas
/// appended above the system qubits can be passed directly.
class NumberOperator {
 public:
  NumberOperator(int num_sites, const std::function<int(std::uint64_t)>& value_fn);

  int num_sites() const { return num_sites_; }

  /// n(z) for the system part of `basis_index`.
  int operator()(std::uint64_t basis_index) const {
    return values_[basis_index & mask_];
  }

  /// Sorted distinct attainable values.
  const std::vector<int>& support() const { return support_; }

  int max_value() const { return support_.back(); }

  bool even_support() const { return even_support_; }

 private:
  int num_sites_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<std::int32_t> values_;
  std::vector<int> support_;
  bool even_support_ = false;
};

}  // namespace qfcs
