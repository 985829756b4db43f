#pragma once

#include "estimators.hpp"
#include "models.hpp"

#include <cstdint>
#include <vector>

namespace gsa {

struct AdaptiveConfig {
    std::size_t warmup_rows = 32;       // N_TS
    double delta = 1e-4;                // oscillation threshold
    int window = 19;                    // trailing checkpoint window p
    std::size_t total_budget = 0;       // max model evaluations
    double probability_floor = 1e-6;    // applied before normalisation
    std::uint64_t seed = 0;             // roulette stream
    std::uint64_t sequence_seed = 0;    // column permutation of the 2k block (0 = none)
    std::uint64_t skip = 1;             // first sequence row
};

struct AdaptiveCheckpoint {
    std::size_t evaluations = 0;
    std::vector<double> total_effect;       // T_j over each factor's accumulated pairs
    std::vector<std::size_t> pair_counts;   // N_j
    std::vector<int> selected;              // roulette pick first, then top-ups; empty for warm-up
};

struct AdaptiveTrace {
    std::vector<AdaptiveCheckpoint> checkpoints;

    const AdaptiveCheckpoint& final() const { return checkpoints.back(); }
};

// Warm-up on a full asymmetric design with warmup_rows rows, then one base row
// per step with hybrid evaluations allocated by Russian roulette on the
// current T estimates; factors whose trailing estimates still move more than
// delta get topped up. Never spends more than total_budget evaluations.
AdaptiveTrace run_adaptive(const Model& model, int factors, const AdaptiveConfig& cfg);

void write_trace_csv(const AdaptiveTrace& trace, int factors, const std::string& path);

} // namespace gsa
