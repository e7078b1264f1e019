#include "qfcs/number_operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qfcs {

NumberOperator::NumberOperator(int num_sites,
                               const std::function<int(std::uint64_t)>& value_fn)
    : num_sites_(num_sites) {
  if (num_sites < 1 || num_sites > 24) {
    throw std::invalid_argument("number operator sites must be in [1, 24]");
  }
  if (!value_fn) {
    throw std::invalid_argument("number operator needs a value function");
  }
  const std::uint64_t dim = std::uint64_t{1} << num_sites;
  mask_ = dim - 1;
  values_.resize(dim);
  for (std::uint64_t z = 0; z < dim; ++z) {
    const int n = value_fn(z);
    if (n < 0 || n > num_sites) {
      throw std::invalid_argument("operator value " + std::to_string(n) +
                                  " outside [0, " + std::to_string(num_sites) + "]");
    }
    values_[z] = n;
  }
  support_.assign(values_.begin(), values_.end());
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  even_support_ = std::all_of(support_.begin(), support_.end(),
                              [](int n) { return n % 2 == 0; });
}

}  // namespace qfcs
