#include "qfcs/distribution.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace qfcs {

double Distribution::at(int n) const {
  const auto it = probabilities.find(n);
  return it == probabilities.end() ? 0.0 : it->second;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& [n, p] : probabilities) sum += p;
  return sum;
}

int Distribution::max_value(double tol) const {
  int best = -1;
  for (const auto& [n, p] : probabilities) {
    if (std::abs(p) > tol) best = std::max(best, n);
  }
  return best;
}

bool Distribution::even_support(double tol) const {
  for (const auto& [n, p] : probabilities) {
    if (std::abs(p) > tol && n % 2 != 0) return false;
  }
  return true;
}

Distribution Distribution::normalized() const {
  Distribution out;
  double sum = 0.0;
  for (const auto& [n, p] : probabilities) {
    const double clamped = p < 0.0 ? 0.0 : p;
    out.probabilities[n] = clamped;
    sum += clamped;
  }
  if (sum <= 0.0) {
    throw std::runtime_error("cannot normalize a distribution with no positive weight");
  }
  for (auto& [n, p] : out.probabilities) p /= sum;
  return out;
}

double trace_distance(const Distribution& p, const Distribution& q) {
  std::set<int> keys;
  for (const auto& [n, v] : p.probabilities) keys.insert(n);
  for (const auto& [n, v] : q.probabilities) keys.insert(n);
  double sum = 0.0;
  for (int n : keys) sum += std::abs(p.at(n) - q.at(n));
  return 0.5 * sum;
}

}  // namespace qfcs
