#include "qfcs/experiments.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <vector>

#include "qfcs/fcs.hpp"
#include "qfcs/filter.hpp"
#include "qfcs/rng.hpp"
#include "qfcs/version.hpp"

namespace qfcs {

namespace {

/// Stream tags for deriving independent sub-seeds from the configured seed.
enum SeedStream : std::uint64_t {
  kGridStream = 1000,
  kFilterAttemptStream = 1,
  kReferenceUnfilteredStream = 2,
  kReferenceFilteredStream = 3,
  kMomentStream = 2000000,
};

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

void write_header(std::ostream& out, const char* experiment, const ExperimentConfig& config) {
  out << "# qfcs " << kVersion << '\n';
  out << "# experiment = " << experiment << '\n';
  out << "# [model] L = " << config.model.L << '\n';
  out << "# [model] J = " << format_double(config.model.J) << '\n';
  out << "# [model] h_x = " << format_double(config.model.h_x) << '\n';
  out << "# [model] h_z = " << format_double(config.model.h_z) << '\n';
  out << "# [model] t = " << format_double(config.model.t) << '\n';
  out << "# [model] preparation = "
      << (config.preparation == Preparation::exact ? "exact" : "trotter") << '\n';
  out << "# [model] trotter_steps = " << config.trotter_steps << '\n';
  out << "# [estimation] mode = " << (config.mode == EstimationMode::exact ? "exact" : "shots")
      << '\n';
  out << "# [estimation] shots = " << config.shots << '\n';
  out << "# [estimation] seed = " << config.seed << '\n';
  out << "# [estimation] grid = " << (config.grid == GridKind::even ? "even" : "full") << '\n';
  out << "# [estimation] grid_sizes = " << join(config.effective_grid_sizes()) << '\n';
  out << "# [filter] targets = " << join(config.filter_targets) << '\n';
  out << "# [filter] center = " << config.filter_center << '\n';
  out << "# [cumulants] h_min = " << format_double(config.h_min) << '\n';
  out << "# [cumulants] h_max = " << format_double(config.h_max) << '\n';
  out << "# [cumulants] h_count = " << config.h_count << '\n';
  out << "# [cumulants] rounds = " << join(config.richardson_rounds) << '\n';
}

SamplingGrid make_grid(const ExperimentConfig& config, int k) {
  return config.grid == GridKind::even ? SamplingGrid::even_support(k) : SamplingGrid::full(k);
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

PureState prepare_state(const ExperimentConfig& config) {
  const PureState initial = init_basis_state(config.model.L, 0);
  if (config.preparation == Preparation::exact) {
    return exact_evolve(initial, config.model);
  }
  return trotter_evolve(initial, config.model, config.trotter_steps);
}

void run_distribution_experiment(const ExperimentConfig& config, std::ostream& out) {
  write_header(out, "distribution", config);
  const PureState state = prepare_state(config);
  const NumberOperator op = domain_wall_operator(config.model.L);
  const Distribution ed = exact_distribution(state, op);

  out << "k,n,p_fcs,p_ed,abs_error\n";
  for (int k : config.effective_grid_sizes()) {
    const SamplingGrid grid = make_grid(config, k);
    const auto samples = estimate_grid(state, op, grid, config.mode, config.shots,
                                       derive_seed(config.seed, kGridStream + k));
    // Every value the grid can resolve up to L. On the even-support grid the
    // odd rows are zero by prior knowledge, not by evaluation.
    std::vector<int> values;
    for (int n = 0; n <= config.model.L; n += grid.stride) values.push_back(n);
    const Distribution rec = dft_reconstruct(samples, grid, values);
    double l1 = 0.0;
    for (int n = 0; n <= config.model.L; ++n) {
      const double p_fcs = rec.at(n);
      const double p_ed = ed.at(n);
      const double error = std::abs(p_fcs - p_ed);
      l1 += error;
      out << k << ',' << n << ',' << format_double(p_fcs) << ',' << format_double(p_ed) << ','
          << format_double(error) << '\n';
    }
    out << k << ",total_variation,,," << format_double(0.5 * l1) << '\n';
  }
}

void run_filter_experiment(const ExperimentConfig& config, std::ostream& out) {
  if (config.filter_targets.empty()) {
    throw ConfigError("the filter experiment needs at least one target");
  }
  write_header(out, "filter", config);
  const PureState state = prepare_state(config);
  const NumberOperator op = domain_wall_operator(config.model.L);
  const Distribution ed = exact_distribution(state, op);

  const FilterSpec spec =
      schedule_times(config.filter_center, config.filter_targets, op.support());
  const FilterOutcome outcome =
      config.mode == EstimationMode::exact
          ? apply_filter(state, op, spec)
          : apply_filter_sampled(state, op, spec,
                                 derive_seed(config.seed, kFilterAttemptStream));

  const std::set<int> targeted(config.filter_targets.begin(), config.filter_targets.end());
  std::vector<int> surviving;
  for (int value : op.support()) {
    if (!targeted.contains(value)) surviving.push_back(value);
  }

  // Reference pairs (P(i), P'(i)) per surviving sector. Shot mode reuses one
  // computational-basis measurement record per state for every sector.
  std::map<int, std::pair<double, double>> references;
  std::map<std::string, std::int64_t> counts_unfiltered;
  std::map<std::string, std::int64_t> counts_filtered;
  std::vector<int> system_qubits;
  for (int q = 0; q < config.model.L; ++q) system_qubits.push_back(q);
  if (config.mode == EstimationMode::shots) {
    counts_unfiltered = sample_counts(state, std::span<const int>(system_qubits), config.shots,
                                      derive_seed(config.seed, kReferenceUnfilteredStream));
    counts_filtered =
        sample_counts(outcome.filtered_state, std::span<const int>(system_qubits), config.shots,
                      derive_seed(config.seed, kReferenceFilteredStream));
  }
  for (int sector : surviving) {
    const std::uint64_t reference = choose_reference(state, op, sector);
    if (config.mode == EstimationMode::exact) {
      references[sector] = {
          std::norm(state.amplitudes(static_cast<Eigen::Index>(reference))),
          std::norm(outcome.filtered_state.amplitudes(static_cast<Eigen::Index>(reference)))};
    } else {
      std::string key(system_qubits.size(), '0');
      for (std::size_t j = 0; j < system_qubits.size(); ++j) {
        if ((reference >> j) & 1u) key[j] = '1';
      }
      const auto count_of = [&](const std::map<std::string, std::int64_t>& counts) {
        const auto it = counts.find(key);
        return it == counts.end() ? 0.0
                                  : static_cast<double>(it->second) /
                                        static_cast<double>(config.shots);
      };
      references[sector] = {count_of(counts_unfiltered), count_of(counts_filtered)};
    }
  }

  out << "# p_f_analytic = " << format_double(success_probability(ed, spec)) << '\n';
  out << "k,n,p_fcs,p_ed,abs_error,p_f,attempts\n";
  const std::string p_f_str = format_double(outcome.success_probability);
  for (int k : config.effective_grid_sizes()) {
    const SamplingGrid grid = make_grid(config, k);
    const auto samples = estimate_grid(outcome.filtered_state, op, grid, config.mode,
                                       config.shots, derive_seed(config.seed, kGridStream + k));
    const Distribution rec_filtered = dft_reconstruct(samples, grid, op.support());

    Distribution filtered_surviving;
    filtered_surviving.reconstructed = true;
    std::map<int, std::pair<double, double>> usable_references;
    for (int sector : surviving) {
      if (references.at(sector).second > 0.0) {
        filtered_surviving.probabilities[sector] = rec_filtered.at(sector);
        usable_references[sector] = references.at(sector);
      }
    }
    const Distribution reconstructed =
        reconstruct_distribution(filtered_surviving, usable_references);

    for (int n : op.support()) {
      out << k << ',' << n << ',';
      if (targeted.contains(n)) {
        out << "filtered," << format_double(ed.at(n)) << ",filtered";
      } else if (!usable_references.contains(n)) {
        out << "no_reference," << format_double(ed.at(n)) << ",no_reference";
      } else {
        const double p_fcs = reconstructed.at(n);
        out << format_double(p_fcs) << ',' << format_double(ed.at(n)) << ','
            << format_double(std::abs(p_fcs - ed.at(n)));
      }
      out << ',' << p_f_str << ',' << outcome.attempts << '\n';
    }
  }
}

void run_cumulant_experiment(const ExperimentConfig& config, std::ostream& out) {
  write_header(out, "cumulants", config);
  const PureState state = prepare_state(config);
  const NumberOperator op = domain_wall_operator(config.model.L);

  const CumulantSet ed = moments_to_cumulants(expectation_diagonal(state, op, 1),
                                              expectation_diagonal(state, op, 2),
                                              expectation_diagonal(state, op, 3));
  const double ed_by_order[3] = {ed.mean, ed.variance, ed.skewness};

  const std::vector<double> steps = config.h_values();
  // value[(order-1)][round-index][h-index]
  std::vector<std::vector<std::vector<double>>> value(
      3, std::vector<std::vector<double>>(config.richardson_rounds.size(),
                                          std::vector<double>(steps.size(), 0.0)));
  for (std::size_t ri = 0; ri < config.richardson_rounds.size(); ++ri) {
    const int rounds = config.richardson_rounds[ri];
    for (std::size_t hi = 0; hi < steps.size(); ++hi) {
      const double h = steps[hi];
      double moments[3];
      for (int order = 1; order <= 3; ++order) {
        const Stencil stencil = richardson_stencil(base_stencil(order, h), rounds);
        const auto samples = sample_stencil_offsets(
            state, op, stencil, config.mode, config.shots,
            derive_seed(config.seed,
                        kMomentStream + (ri * steps.size() + hi) * 4 + order));
        moments[order - 1] = estimate_moment(samples, stencil);
      }
      CumulantSet cumulants = moments_to_cumulants(moments[0], moments[1], moments[2]);
      cumulants.h = h;
      cumulants.rounds = rounds;
      value[0][ri][hi] = cumulants.mean;
      value[1][ri][hi] = cumulants.variance;
      value[2][ri][hi] = cumulants.skewness;
    }
  }

  out << "order,h,R,value,ed_value,abs_error\n";
  for (int order = 1; order <= 3; ++order) {
    for (std::size_t ri = 0; ri < config.richardson_rounds.size(); ++ri) {
      for (std::size_t hi = 0; hi < steps.size(); ++hi) {
        const double estimate = value[order - 1][ri][hi];
        const double reference = ed_by_order[order - 1];
        out << order << ',' << format_double(steps[hi]) << ',' << config.richardson_rounds[ri]
            << ',' << format_double(estimate) << ',' << format_double(reference) << ','
            << format_double(std::abs(estimate - reference)) << '\n';
      }
    }
  }
}

void run_charfunc_experiment(const ExperimentConfig& config, std::ostream& out) {
  write_header(out, "charfunc", config);
  const PureState state = prepare_state(config);
  const NumberOperator op = domain_wall_operator(config.model.L);

  out << "k,theta,re,im,re_ed,im_ed\n";
  for (int k : config.effective_grid_sizes()) {
    const SamplingGrid grid = make_grid(config, k);
    const auto samples = estimate_grid(state, op, grid, config.mode, config.shots,
                                       derive_seed(config.seed, kGridStream + k));
    for (int i = 0; i < k; ++i) {
      const auto& sample = samples[static_cast<std::size_t>(i)];
      const Complex reference = exact_char_func(state, op, sample.theta);
      out << k << ',' << format_double(sample.theta) << ',' << format_double(sample.value.real())
          << ',' << format_double(sample.value.imag()) << ',' << format_double(reference.real())
          << ',' << format_double(reference.imag()) << '\n';
    }
  }
}

}  // namespace qfcs
