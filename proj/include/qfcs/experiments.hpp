#pragma once

#include <ostream>
#include <string>

#include "qfcs/config.hpp"

namespace qfcs {

/// CSV emitters for the experiment harness. All numeric fields are written
/// with 17 significant digits (round-trip exact for doubles) and every file
/// starts with a `#`-prefixed provenance header (tool version, experiment
/// name, full config echo). Identical config + seed gives byte-identical
/// output.

/// Columns: k,n,p_fcs,p_ed,abs_error for n = 0..L per grid size k, followed
/// per k by a summary row k,total_variation,,,<tv>.
void run_distribution_experiment(const ExperimentConfig& config, std::ostream& out);

/// Columns: k,n,p_fcs,p_ed,abs_error,p_f,attempts over the operator support;
/// targeted sectors carry the `filtered` sentinel in p_fcs and abs_error.
/// p_f is the circuit-level success probability (`# p_f_analytic` in the
/// header carries the closed form).
void run_filter_experiment(const ExperimentConfig& config, std::ostream& out);

/// Columns: order,h,R,value,ed_value,abs_error for cumulant orders 1-3 over
/// the h sweep and Richardson rounds.
void run_cumulant_experiment(const ExperimentConfig& config, std::ostream& out);

/// Raw P~ dump. Columns: k,theta,re,im,re_ed,im_ed.
void run_charfunc_experiment(const ExperimentConfig& config, std::ostream& out);

/// 17-significant-digit serialization used for all CSV numeric fields.
std::string format_double(double value);

/// State preparation shared by the experiments: |0...0> evolved under the
/// configured Hamiltonian, exactly or by Trotter steps.
PureState prepare_state(const ExperimentConfig& config);

}  // namespace qfcs
