#include "qfcs/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfcs {

namespace {

/// Complex compensated accumulator built from two real ones.
struct ComplexSum {
  detail::KahanSum<double> re;
  detail::KahanSum<double> im;

  void add(Complex z) {
    re.add(z.real());
    im.add(z.imag());
  }

  Complex value() const { return {re.value(), im.value()}; }
};

Complex ipow(Complex base, int exponent) {
  Complex out{1.0, 0.0};
  for (int j = 0; j < exponent; ++j) out *= base;
  return out;
}

}  // namespace

Distribution dft_reconstruct(std::span<const CharFuncSample> samples, const SamplingGrid& grid,
                             std::span<const int> n_values) {
  if (static_cast<int>(samples.size()) != grid.k) {
    throw std::invalid_argument("sample count does not match the grid");
  }
  bool exact = true;
  for (int i = 0; i < grid.k; ++i) {
    if (std::abs(samples[static_cast<std::size_t>(i)].theta - grid.angle(i)) > 1e-9) {
      throw std::invalid_argument("sample angles do not match the grid");
    }
    exact = exact && samples[static_cast<std::size_t>(i)].mode == EstimationMode::exact;
  }

  Distribution out;
  out.reconstructed = true;
  double residue = 0.0;
  for (int n : n_values) {
    if (n < 0) {
      throw std::invalid_argument("reconstruction values must be non-negative");
    }
    if (n % grid.stride != 0) {
      throw std::invalid_argument("value " + std::to_string(n) +
                                  " is not resolvable on a stride-" +
                                  std::to_string(grid.stride) + " grid");
    }
    ComplexSum acc;
    for (int i = 0; i < grid.k; ++i) {
      const double theta = grid.angle(i);
      acc.add(samples[static_cast<std::size_t>(i)].value *
              std::polar(1.0, -theta * static_cast<double>(n)));
    }
    const Complex value = acc.value() / static_cast<double>(grid.k);
    out.probabilities[n] = value.real();
    residue = std::max(residue, std::abs(value.imag()));
  }
  if (exact && residue >= 1e-9) {
    throw std::runtime_error("imaginary residue " + std::to_string(residue) +
                             " in exact-mode reconstruction");
  }
  out.imag_residue = residue;
  return out;
}

Distribution dft_reconstruct(std::span<const CharFuncSample> samples, const SamplingGrid& grid) {
  const std::vector<int> values = grid.reconstruction_values();
  return dft_reconstruct(samples, grid, values);
}

int min_sampling_points(int max_value, bool parity_even) {
  if (max_value < 0) {
    throw std::invalid_argument("max_value must be >= 0");
  }
  return parity_even ? max_value / 2 + 1 : max_value + 1;
}

Stencil base_stencil(int order, double h) {
  if (order < 1) {
    throw std::invalid_argument("derivative order must be >= 1");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("step h must be positive");
  }
  const Complex ih{0.0, h};
  Stencil s;
  s.order = order;
  s.error_order = 2;
  s.h = h;
  switch (order) {
    case 1:
      s.offsets = {-1, 1};
      s.coefficients = {-1.0 / (2.0 * ih), 1.0 / (2.0 * ih)};
      break;
    case 2:
      s.offsets = {-1, 0, 1};
      s.coefficients = {1.0 / ipow(ih, 2), -2.0 / ipow(ih, 2), 1.0 / ipow(ih, 2)};
      break;
    case 3:
      s.offsets = {-2, -1, 1, 2};
      s.coefficients = {-1.0 / (2.0 * ipow(ih, 3)), 2.0 / (2.0 * ipow(ih, 3)),
                        -2.0 / (2.0 * ipow(ih, 3)), 1.0 / (2.0 * ipow(ih, 3))};
      break;
    default:
      return build_stencil(order, base_stencil(order - 1, h));
  }
  return s;
}

Stencil build_stencil(int order, const Stencil& base) {
  if (order != base.order + 1) {
    throw std::invalid_argument("build_stencil grows the order by exactly one");
  }
  // d/d(i theta) as the central difference [g(+h) - g(-h)] / (2ih), composed
  // with the base by shifting every base offset one step each way.
  const Complex unit = 1.0 / (2.0 * Complex{0.0, base.h});
  std::map<int, Complex> acc;
  for (std::size_t j = 0; j < base.offsets.size(); ++j) {
    acc[base.offsets[j] + 1] += base.coefficients[j] * unit;
    acc[base.offsets[j] - 1] -= base.coefficients[j] * unit;
  }
  Stencil out;
  out.order = order;
  out.error_order = 2;
  out.h = base.h;
  for (const auto& [offset, coeff] : acc) {
    if (coeff == Complex{0.0, 0.0}) continue;
    out.offsets.push_back(offset);
    out.coefficients.push_back(coeff);
  }
  return out;
}

double richardson_combine(double f1, double f2, double ratio, int p) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::invalid_argument("ratio must lie in (0, 1)");
  }
  if (p < 1) {
    throw std::invalid_argument("error order p must be >= 1");
  }
  const double r = std::pow(ratio, p);
  if (r == 1.0) {
    throw std::domain_error("degenerate ratio: r == 1");
  }
  return (f1 - r * f2) / (1.0 - r);
}

Stencil richardson_stencil(const Stencil& base, int rounds, int step_factor) {
  if (rounds < 0) {
    throw std::invalid_argument("rounds must be >= 0");
  }
  if (step_factor < 2) {
    throw std::invalid_argument("step factor must be >= 2");
  }
  Stencil s = base;
  for (int round = 0; round < rounds; ++round) {
    // The same scheme at step m*h has offsets scaled by m and coefficients by
    // m^-order (every coefficient carries 1/(ih)^order).
    const double coeff_scale = std::pow(static_cast<double>(step_factor), -s.order);
    const double r = std::pow(1.0 / step_factor, s.error_order);
    std::map<int, Complex> acc;
    for (std::size_t j = 0; j < s.offsets.size(); ++j) {
      acc[s.offsets[j]] += s.coefficients[j] / (1.0 - r);
      acc[s.offsets[j] * step_factor] -= r * coeff_scale * s.coefficients[j] / (1.0 - r);
    }
    Stencil next;
    next.order = s.order;
    next.error_order = s.error_order + 2;
    next.h = s.h;
    for (const auto& [offset, coeff] : acc) {
      if (coeff == Complex{0.0, 0.0}) continue;
      next.offsets.push_back(offset);
      next.coefficients.push_back(coeff);
    }
    s = std::move(next);
  }
  return s;
}

double estimate_moment(const std::map<int, CharFuncSample>& samples_at_offsets,
                       const Stencil& stencil, double* imag_residue) {
  ComplexSum acc;
  for (std::size_t j = 0; j < stencil.offsets.size(); ++j) {
    const int offset = stencil.offsets[j];
    const auto it = samples_at_offsets.find(offset);
    if (it == samples_at_offsets.end()) {
      throw std::invalid_argument("missing sample at stencil offset " + std::to_string(offset));
    }
    const double expected_theta = offset * stencil.h;
    if (std::abs(it->second.theta - expected_theta) >
        1e-9 * std::max(1.0, std::abs(expected_theta))) {
      throw std::invalid_argument("sample angle does not match stencil offset " +
                                  std::to_string(offset));
    }
    acc.add(stencil.coefficients[j] * it->second.value);
  }
  const Complex value = acc.value();
  if (imag_residue != nullptr) {
    *imag_residue = std::abs(value.imag());
  }
  return value.real();
}

std::map<int, CharFuncSample> sample_stencil_offsets(const PureState& prepared,
                                                     const NumberOperator& op,
                                                     const Stencil& stencil, EstimationMode mode,
                                                     std::int64_t shots, std::uint64_t seed) {
  std::map<int, CharFuncSample> samples;
  for (std::size_t j = 0; j < stencil.offsets.size(); ++j) {
    const int offset = stencil.offsets[j];
    samples.emplace(offset, estimate_point(prepared, op, offset * stencil.h, mode, shots,
                                           seed + static_cast<std::uint64_t>(j)));
  }
  return samples;
}

CumulantSet moments_to_cumulants(double m1, double m2, double m3) {
  CumulantSet c;
  c.m1 = m1;
  c.m2 = m2;
  c.m3 = m3;
  c.mean = m1;
  c.variance = m2 - m1 * m1;
  c.skewness = m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
  return c;
}

}  // namespace qfcs
