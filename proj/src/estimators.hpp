#pragma once

#include "design.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsa {

struct EvaluatedSchedule {
    RunSchedule schedule;
    std::vector<double> y;  // one model output per run
    std::string model_id;
};

enum class EstimatorId { Saltenis, Correlation, CorrelationCorrected };

const char* estimator_name(EstimatorId id);
std::optional<EstimatorId> parse_estimator(const std::string& name);

struct FactorEstimate {
    double total_effect = 0.0;
    std::optional<double> first_order;
    std::size_t pairs_used = 0;
};

// Raw estimates; values outside [0,1] are reported as computed.
struct EstimateReport {
    EstimatorId estimator = EstimatorId::Saltenis;
    double variance_y = 0.0;
    std::vector<FactorEstimate> factors;
};

/// Unbiased sample variance of y over the base-matrix rows only.
double total_variance(const EvaluatedSchedule& ev);

/// Jansen/Saltenis squared-difference estimator of T_j over every pair in the
/// index: numerator_j = (1/(2 P_j)) sum (y_u - y_v)^2, T_j = numerator_j / V(Y).
EstimateReport saltenis_total(const EvaluatedSchedule& ev, const EffectPairIndex& pairs);

// Correlation estimator: T_j = 1 - <rho_j>, rho averaged over the factor's
// vector couples. The corrected form removes the mean spurious correlation
// rho0 observed between the design's unshared couples:
//   T_j = 1 - (<rho_j> - rho0) / (1 - rho0).
EstimateReport correlation_total(const EvaluatedSchedule& ev, const EffectPairIndex& pairs,
                                 bool corrected);

// First-order estimates; needs designs where donor base rows are evaluated
// (symmetric). Saltenis picks the sample-product form
//   S_j = (1/N) sum_i f(b_i) (f(a_b_i^(j)) - f(a_i)) / V(Y),
// the correlation variants use the Pearson coefficient between f(b_i) and
// f(a_b_i^(j)), optionally with the rho0 correction.
EstimateReport first_order(const EvaluatedSchedule& ev, EstimatorId estimator);

void write_report_json(const EstimateReport& report, const std::string& path);

} // namespace gsa
