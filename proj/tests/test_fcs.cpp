#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "qfcs/fcs.hpp"
#include "qfcs/model.hpp"
#include "test_support.hpp"

using namespace qfcs;

namespace {

constexpr double kPi = std::numbers::pi;

/// Exact characteristic-function samples of a known distribution, bypassing
/// the circuit: the independent oracle for reconstruction and stencil tests.
std::vector<CharFuncSample> synthetic_grid_samples(const Distribution& dist,
                                                   const SamplingGrid& grid) {
  std::vector<CharFuncSample> samples;
  for (int i = 0; i < grid.k; ++i) {
    const double theta = grid.angle(i);
    Complex value{0.0, 0.0};
    for (const auto& [n, p] : dist.probabilities) value += p * std::polar(1.0, theta * n);
    samples.push_back(CharFuncSample{theta, value, EstimationMode::exact, 0, 0});
  }
  return samples;
}

std::map<int, CharFuncSample> synthetic_stencil_samples(const Distribution& dist,
                                                        const Stencil& stencil) {
  std::map<int, CharFuncSample> samples;
  for (int offset : stencil.offsets) {
    const double theta = offset * stencil.h;
    Complex value{0.0, 0.0};
    for (const auto& [n, p] : dist.probabilities) value += p * std::polar(1.0, theta * n);
    samples.emplace(offset, CharFuncSample{theta, value, EstimationMode::exact, 0, 0});
  }
  return samples;
}

/// Brute-force aliasing sum: sum_j (-1)^{jk} P(n + j k stride).
double aliased_value(const Distribution& truth, int n, int k, int stride) {
  double value = 0.0;
  const int period = k * stride;
  for (int j = -64; j <= 64; ++j) {
    const int m = n + j * period;
    const double sign = ((static_cast<long>(j) * k) % 2 == 0) ? 1.0 : -1.0;
    value += sign * truth.at(m);
  }
  return value;
}

Distribution make_dist(std::map<int, double> probabilities) {
  Distribution dist;
  dist.probabilities = std::move(probabilities);
  return dist;
}

}  // namespace

TEST_CASE("dft_reconstruct") {
  SUBCASE("delta distribution: P~ == 1") {
    const Distribution truth = make_dist({{0, 1.0}});
    const SamplingGrid grid = SamplingGrid::full(5);
    const Distribution rec = dft_reconstruct(synthetic_grid_samples(truth, grid), grid);
    CHECK(rec.at(0) == doctest::Approx(1.0));
    for (int n = 1; n < 5; ++n) CHECK(std::abs(rec.at(n)) < 1e-14);
    CHECK(rec.reconstructed);
  }

  SUBCASE("alias fold: {0: 1/2, 4: 1/2} at k = 4 puts everything at 0") {
    const Distribution truth = make_dist({{0, 0.5}, {4, 0.5}});
    const SamplingGrid grid = SamplingGrid::full(4);
    const Distribution rec = dft_reconstruct(synthetic_grid_samples(truth, grid), grid);
    CHECK(rec.at(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rec.at(1)) < 1e-14);
    CHECK(std::abs(rec.at(2)) < 1e-14);
    CHECK(std::abs(rec.at(3)) < 1e-14);
  }

  SUBCASE("odd values are not resolvable on the even-support grid") {
    const Distribution truth = make_dist({{0, 0.5}, {2, 0.5}});
    const SamplingGrid grid = SamplingGrid::even_support(3);
    const auto samples = synthetic_grid_samples(truth, grid);
    const std::vector<int> odd = {1};
    CHECK_THROWS_AS(dft_reconstruct(samples, grid, odd), std::invalid_argument);
  }

  SUBCASE("grid/sample mismatch is rejected") {
    const Distribution truth = make_dist({{0, 1.0}});
    const SamplingGrid grid = SamplingGrid::full(4);
    auto samples = synthetic_grid_samples(truth, grid);
    samples.pop_back();
    CHECK_THROWS_AS(dft_reconstruct(samples, grid), std::invalid_argument);

    auto skewed = synthetic_grid_samples(truth, grid);
    skewed[1].theta += 0.01;
    CHECK_THROWS_AS(dft_reconstruct(skewed, grid), std::invalid_argument);
  }
}

TEST_CASE("Nyquist-sufficient reconstruction matches the oracle") {
  for (int L : {4, 6, 8}) {
    const NumberOperator op = domain_wall_operator(L);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const PureState state = test::random_state(L, 40 * seed + L);
      const Distribution truth = exact_distribution(state, op);

      const SamplingGrid full = SamplingGrid::full(min_sampling_points(L, false));
      const Distribution rec_full =
          dft_reconstruct(synthetic_grid_samples(truth, full), full);
      CHECK(trace_distance(rec_full, truth) < 1e-10);

      const SamplingGrid even = SamplingGrid::even_support(min_sampling_points(L, true));
      const Distribution rec_even =
          dft_reconstruct(synthetic_grid_samples(truth, even), even);
      CHECK(trace_distance(rec_even, truth) < 1e-10);
    }
  }
}

TEST_CASE("aliasing identity against brute force") {
  for (int L : {6, 8}) {
    const NumberOperator op = domain_wall_operator(L);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const PureState state = test::random_state(L, 91 * seed + L);
      const Distribution truth = exact_distribution(state, op);

      for (int k = 2; k <= L; ++k) {
        const SamplingGrid grid = SamplingGrid::full(k);
        const Distribution rec = dft_reconstruct(synthetic_grid_samples(truth, grid), grid);
        for (int n = 0; n < k; ++n) {
          CHECK(std::abs(rec.at(n) - aliased_value(truth, n, k, 1)) < 1e-10);
        }
      }

      for (int k = 2; k <= L / 2; ++k) {
        const SamplingGrid grid = SamplingGrid::even_support(k);
        const Distribution rec = dft_reconstruct(synthetic_grid_samples(truth, grid), grid);
        for (int n : grid.reconstruction_values()) {
          CHECK(std::abs(rec.at(n) - aliased_value(truth, n, k, 2)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("using the even-support grid on odd-support data is caught") {
  // P~ of an odd-valued distribution is not pi-periodic; the reconstruction
  // sum then leaves a macroscopic imaginary part, which exact mode rejects.
  const Distribution truth = make_dist({{1, 1.0}});
  const SamplingGrid grid = SamplingGrid::even_support(3);
  const auto samples = synthetic_grid_samples(truth, grid);
  CHECK_THROWS_AS(dft_reconstruct(samples, grid), std::runtime_error);
}

TEST_CASE("distribution helpers") {
  SUBCASE("normalized clamps negatives and rescales") {
    Distribution raw;
    raw.probabilities = {{0, 0.7}, {2, -1e-12}, {4, 0.4}};
    raw.reconstructed = true;
    const Distribution cleaned = raw.normalized();
    CHECK(cleaned.at(2) == 0.0);
    CHECK(cleaned.total() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cleaned.at(0) == doctest::Approx(0.7 / 1.1));
    // The raw reconstruction keeps its negative entry untouched.
    CHECK(raw.at(2) == -1e-12);
  }

  SUBCASE("support metadata") {
    Distribution dist;
    dist.probabilities = {{0, 0.5}, {3, 1e-15}, {4, 0.5}};
    CHECK(dist.max_value(1e-12) == 4);
    CHECK(dist.even_support(1e-12));
    CHECK_FALSE(dist.even_support(1e-16));
  }

  SUBCASE("normalizing an empty distribution fails") {
    CHECK_THROWS_AS(Distribution{}.normalized(), std::runtime_error);
  }
}

TEST_CASE("min_sampling_points") {
  CHECK(min_sampling_points(12, true) == 7);
  CHECK(min_sampling_points(12, false) == 13);
  CHECK(min_sampling_points(0, true) == 1);
  CHECK(min_sampling_points(0, false) == 1);
  CHECK_THROWS_AS(min_sampling_points(-1, false), std::invalid_argument);
}

TEST_CASE("trace_distance") {
  const Distribution p = make_dist({{0, 0.5}, {2, 0.5}});
  CHECK(trace_distance(p, p) == 0.0);
  CHECK(trace_distance(p, make_dist({{0, 1.0}})) == doctest::Approx(0.5));
  CHECK(trace_distance(make_dist({{1, 1.0}}), make_dist({{3, 1.0}})) == doctest::Approx(1.0));
}

TEST_CASE("base stencils") {
  SUBCASE("order 1 on an eigenstate recovers sin(h n0)/h") {
    const Distribution truth = make_dist({{3, 1.0}});
    for (double h : {0.05, 0.01}) {
      const Stencil stencil = base_stencil(1, h);
      const double estimate = estimate_moment(synthetic_stencil_samples(truth, stencil), stencil);
      CHECK(estimate == doctest::Approx(std::sin(3.0 * h) / h).epsilon(1e-10));
      // Leading error is n0^3 h^2 / 6.
      CHECK(std::abs(estimate - 3.0) ==
            doctest::Approx(27.0 * h * h / 6.0).epsilon(0.01));
    }
  }

  SUBCASE("order 1 annihilates the constant signal exactly") {
    const Distribution truth = make_dist({{0, 1.0}});
    const Stencil stencil = base_stencil(1, 0.1);
    CHECK(estimate_moment(synthetic_stencil_samples(truth, stencil), stencil) == 0.0);
  }

  SUBCASE("order 2 converges to <N^2> = 8 at O(h^2)") {
    const Distribution truth = make_dist({{0, 0.5}, {4, 0.5}});
    const double err_h = std::abs(
        estimate_moment(synthetic_stencil_samples(truth, base_stencil(2, 0.02)),
                        base_stencil(2, 0.02)) -
        8.0);
    const double err_half = std::abs(
        estimate_moment(synthetic_stencil_samples(truth, base_stencil(2, 0.01)),
                        base_stencil(2, 0.01)) -
        8.0);
    CHECK(err_half < err_h);
    CHECK(err_h / err_half == doctest::Approx(4.0).epsilon(0.05));
  }

  SUBCASE("moment conditions: sum c o^m = 0 below the order, n!/(ih)^n at it") {
    for (int order = 1; order <= 4; ++order) {
      for (double h : {0.1, 0.02}) {
        const Stencil stencil = base_stencil(order, h);
        const Complex ih{0.0, h};
        for (int m = 0; m <= order; ++m) {
          Complex sum{0.0, 0.0};
          for (std::size_t j = 0; j < stencil.offsets.size(); ++j) {
            sum += stencil.coefficients[j] * std::pow(static_cast<double>(stencil.offsets[j]), m);
          }
          if (m < order) {
            CHECK(std::abs(sum) < 1e-9 / std::pow(h, order));
          } else {
            double factorial = 1.0;
            for (int f = 2; f <= order; ++f) factorial *= f;
            Complex expected = factorial;
            for (int f = 0; f < order; ++f) expected /= ih;
            CHECK(std::abs(sum - expected) < 1e-12 * std::abs(expected));
          }
        }
      }
    }
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(base_stencil(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(base_stencil(1, 0.0), std::invalid_argument);
  }
}

TEST_CASE("build_stencil composes central differences") {
  const double h = 0.1;

  SUBCASE("order-1 composed with itself") {
    const Stencil composed = build_stencil(2, base_stencil(1, h));
    REQUIRE(composed.offsets == std::vector<int>{-2, 0, 2});
    // (1, -2, 1) / (2ih)^2 = (-0.25, 0.5, -0.25) / h^2.
    CHECK(std::abs(composed.coefficients[0] - Complex{-0.25 / (h * h), 0.0}) < 1e-13);
    CHECK(std::abs(composed.coefficients[1] - Complex{0.5 / (h * h), 0.0}) < 1e-13);
    CHECK(std::abs(composed.coefficients[2] - Complex{-0.25 / (h * h), 0.0}) < 1e-13);
  }

  SUBCASE("every built stencil annihilates constants") {
    Stencil stencil = base_stencil(1, h);
    for (int order = 2; order <= 5; ++order) {
      stencil = build_stencil(order, stencil);
      Complex sum{0.0, 0.0};
      for (const Complex& c : stencil.coefficients) sum += c;
      CHECK(std::abs(sum) < 1e-10 / std::pow(h, order));
    }
  }

  SUBCASE("built order 3 agrees with the closed-form order 3 within O(h^2)") {
    const Distribution truth = make_dist({{1, 0.4}, {3, 0.6}});
    const double exact = 0.4 * 1.0 + 0.6 * 27.0;
    for (double step : {0.1, 0.05, 0.025}) {
      const Stencil closed_form = base_stencil(3, step);
      const Stencil built = build_stencil(3, base_stencil(2, step));
      const double closed_form_est = estimate_moment(
          synthetic_stencil_samples(truth, closed_form), closed_form);
      const double built_est = estimate_moment(synthetic_stencil_samples(truth, built), built);
      CHECK(std::abs(closed_form_est - exact) < 10.0 * step * step * exact);
      CHECK(std::abs(built_est - exact) < 10.0 * step * step * exact);
    }
  }

  SUBCASE("order must grow by one") {
    CHECK_THROWS_AS(build_stencil(3, base_stencil(1, h)), std::invalid_argument);
  }
}

TEST_CASE("richardson_combine") {
  CHECK(richardson_combine(5.0, 5.0, 0.5, 2) == doctest::Approx(5.0));
  // ratio 1/2, p = 2: (f1 - f2/4) / (3/4) = (4 f1 - f2) / 3.
  CHECK(richardson_combine(1.0, 2.0, 0.5, 2) == doctest::Approx((4.0 * 1.0 - 2.0) / 3.0));
  CHECK_THROWS_AS(richardson_combine(1.0, 2.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(richardson_combine(1.0, 2.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("richardson_stencil reproduces the classical fourth-order formulas") {
  const double h = 0.07;
  const Complex ih{0.0, h};

  SUBCASE("first moment: (-1/12, 2/3, -2/3, 1/12) over ih at (2h, h, -h, -2h)") {
    const Stencil s = richardson_stencil(base_stencil(1, h), 1);
    REQUIRE(s.offsets == std::vector<int>{-2, -1, 1, 2});
    CHECK(std::abs(s.coefficients[0] - Complex{1.0 / 12.0} / ih) < 1e-14 / h);
    CHECK(std::abs(s.coefficients[1] - Complex{-2.0 / 3.0} / ih) < 1e-14 / h);
    CHECK(std::abs(s.coefficients[2] - Complex{2.0 / 3.0} / ih) < 1e-14 / h);
    CHECK(std::abs(s.coefficients[3] - Complex{-1.0 / 12.0} / ih) < 1e-14 / h);
    CHECK(s.error_order == 4);
  }

  SUBCASE("second moment: (-1/12, 4/3, -15/6, 4/3, -1/12) over (ih)^2") {
    const Stencil s = richardson_stencil(base_stencil(2, h), 1);
    REQUIRE(s.offsets == std::vector<int>{-2, -1, 0, 1, 2});
    const Complex ih2 = ih * ih;
    CHECK(std::abs(s.coefficients[0] - Complex{-1.0 / 12.0} / ih2) < 1e-13 / (h * h));
    CHECK(std::abs(s.coefficients[1] - Complex{4.0 / 3.0} / ih2) < 1e-13 / (h * h));
    CHECK(std::abs(s.coefficients[2] - Complex{-15.0 / 6.0} / ih2) < 1e-13 / (h * h));
    CHECK(std::abs(s.coefficients[3] - Complex{4.0 / 3.0} / ih2) < 1e-13 / (h * h));
    CHECK(std::abs(s.coefficients[4] - Complex{-1.0 / 12.0} / ih2) < 1e-13 / (h * h));
  }

  SUBCASE("third moment: re-derived coefficients at offsets (4, 2, 1) and mirrors") {
    // Coefficients come from the extrapolation itself; validated against
    // the eigenstate oracle below.
    const Stencil s = richardson_stencil(base_stencil(3, h), 1);
    REQUIRE(s.offsets == std::vector<int>{-4, -2, -1, 1, 2, 4});
    const Complex ih3 = ih * ih * ih;
    CHECK(std::abs(s.coefficients[5] - Complex{-1.0 / 48.0} / ih3) < 1e-12 / (h * h * h));
    CHECK(std::abs(s.coefficients[4] - Complex{17.0 / 24.0} / ih3) < 1e-12 / (h * h * h));
    CHECK(std::abs(s.coefficients[3] - Complex{-4.0 / 3.0} / ih3) < 1e-12 / (h * h * h));
  }

  SUBCASE("fourth-order convergence on an eigenstate") {
    const Distribution truth = make_dist({{2, 1.0}});
    for (int order = 1; order <= 3; ++order) {
      const double exact = std::pow(2.0, order);
      const Stencil coarse = richardson_stencil(base_stencil(order, 0.08), 1);
      const Stencil fine = richardson_stencil(base_stencil(order, 0.04), 1);
      const double err_coarse =
          std::abs(estimate_moment(synthetic_stencil_samples(truth, coarse), coarse) - exact);
      const double err_fine =
          std::abs(estimate_moment(synthetic_stencil_samples(truth, fine), fine) - exact);
      CHECK(err_coarse / err_fine == doctest::Approx(16.0).epsilon(0.1));
    }
  }
}

TEST_CASE("estimate_moment") {
  SUBCASE("eigenstate example: order 1, h = 0.01 within 5e-4") {
    const Distribution truth = make_dist({{3, 1.0}});
    const Stencil stencil = base_stencil(1, 0.01);
    const double estimate = estimate_moment(synthetic_stencil_samples(truth, stencil), stencil);
    CHECK(std::abs(estimate - 3.0) < 5e-4);
  }

  SUBCASE("constant signal gives zero at every order") {
    const Distribution truth = make_dist({{0, 1.0}});
    for (int order = 1; order <= 3; ++order) {
      const Stencil stencil = base_stencil(order, 0.05);
      CHECK(std::abs(estimate_moment(synthetic_stencil_samples(truth, stencil), stencil)) <
            1e-11);
    }
  }

  SUBCASE("missing offsets are an argument error") {
    const Stencil stencil = base_stencil(2, 0.1);
    std::map<int, CharFuncSample> samples =
        synthetic_stencil_samples(make_dist({{1, 1.0}}), stencil);
    samples.erase(0);
    CHECK_THROWS_AS(estimate_moment(samples, stencil), std::invalid_argument);
  }

  SUBCASE("samples taken at the wrong angles are rejected") {
    const Stencil stencil = base_stencil(1, 0.1);
    std::map<int, CharFuncSample> samples =
        synthetic_stencil_samples(make_dist({{1, 1.0}}), stencil);
    samples.at(1).theta += 1e-3;
    CHECK_THROWS_AS(estimate_moment(samples, stencil), std::invalid_argument);
  }
}

TEST_CASE("richardson rounds lift the empirical order by two each") {
  const Distribution truth = make_dist({{0, 0.3}, {1, 0.2}, {2, 0.25}, {5, 0.25}});
  const double moments[3] = {
      0.2 + 0.5 + 1.25,                  // <N>
      0.2 + 1.0 + 6.25,                  // <N^2>
      0.2 + 2.0 + 31.25,                 // <N^3>
  };
  for (int order = 1; order <= 3; ++order) {
    double previous_slope = 0.0;
    for (int rounds = 0; rounds <= 2; ++rounds) {
      std::vector<double> log_h;
      std::vector<double> log_err;
      for (double h = 0.02; h < 0.21; h *= 1.5) {
        const Stencil stencil = richardson_stencil(base_stencil(order, h), rounds);
        const double estimate =
            estimate_moment(synthetic_stencil_samples(truth, stencil), stencil);
        log_h.push_back(std::log(h));
        log_err.push_back(std::log(std::abs(estimate - moments[order - 1])));
      }
      const double slope = test::fit_slope(log_h, log_err);
      CHECK(slope == doctest::Approx(2.0 * (rounds + 1)).epsilon(0.25));
      if (rounds > 0) {
        CHECK(slope - previous_slope == doctest::Approx(2.0).epsilon(0.25));
      }
      previous_slope = slope;
    }
  }
}

TEST_CASE("stencil moments from circuit samples match the diagonal oracle") {
  const NumberOperator op = domain_wall_operator(4);
  const PureState state = test::random_state(4, 404);
  for (int order = 1; order <= 3; ++order) {
    const double oracle = expectation_diagonal(state, op, order);
    const Stencil stencil = richardson_stencil(base_stencil(order, 1e-2), 1);
    const auto samples = sample_stencil_offsets(state, op, stencil, EstimationMode::exact, 0, 3);
    CHECK(estimate_moment(samples, stencil) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("moments_to_cumulants") {
  SUBCASE("centered unit-variance case") {
    const CumulantSet c = moments_to_cumulants(0.0, 1.0, 0.0);
    CHECK(c.mean == 0.0);
    CHECK(c.variance == 1.0);
    CHECK(c.skewness == 0.0);
  }

  SUBCASE("delta distribution has vanishing higher cumulants") {
    const double m = 4.0;
    const CumulantSet c = moments_to_cumulants(m, m * m, m * m * m);
    CHECK(c.mean == doctest::Approx(4.0));
    CHECK(std::abs(c.variance) < 1e-10);
    CHECK(std::abs(c.skewness) < 1e-10);
  }

  SUBCASE("symmetric two-point law has zero skewness") {
    const CumulantSet c = moments_to_cumulants(2.0, 8.0, 32.0);
    CHECK(c.mean == doctest::Approx(2.0));
    CHECK(c.variance == doctest::Approx(4.0));
    CHECK(std::abs(c.skewness) < 1e-12);
  }
}

TEST_CASE("cumulants from diagonal expectations match the distribution route") {
  for (int L : {2, 4, 6}) {
    const NumberOperator op = domain_wall_operator(L);
    const PureState state = test::random_state(L, 300 + L);
    const CumulantSet via_expectation = moments_to_cumulants(
        expectation_diagonal(state, op, 1), expectation_diagonal(state, op, 2),
        expectation_diagonal(state, op, 3));

    const Distribution dist = exact_distribution(state, op);
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    for (const auto& [n, p] : dist.probabilities) {
      m1 += p * n;
      m2 += p * n * n;
      m3 += p * n * n * n;
    }
    const CumulantSet via_distribution = moments_to_cumulants(m1, m2, m3);

    CHECK(std::abs(via_expectation.mean - via_distribution.mean) < 1e-10);
    CHECK(std::abs(via_expectation.variance - via_distribution.variance) < 1e-10);
    CHECK(std::abs(via_expectation.skewness - via_distribution.skewness) < 1e-10);
  }
}
