#pragma once

#include "adaptive.hpp"
#include "design.hpp"
#include "estimators.hpp"
#include "models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gsa {

// A method under comparison: a (scheme, n, estimator) triple or the adaptive
// sampler. Compact ids: "asym2-saltenis", "sym3-saltenis", "sym2-corr",
// "sym2-corr-corrected", "adaptive".
struct ContenderSpec {
    std::string id;
    bool adaptive = false;
    Scheme scheme = Scheme::Asymmetric;
    int matrices = 2;
    EstimatorId estimator = EstimatorId::Saltenis;

    static ContenderSpec parse(const std::string& id);
};

struct BenchmarkSpec {
    std::string model_id = "g";
    std::vector<double> a;  // G coefficients when model_id == "g"
    int factors = 0;
    std::vector<std::int64_t> grid;  // target N_T values, strictly increasing
    int repetitions = 50;
    std::uint64_t seed = 0;
    std::vector<ContenderSpec> contenders;
    double plan_tolerance = 1.25;
    // adaptive contender parameters
    std::size_t adaptive_warmup = 32;
    double adaptive_delta = 1e-4;
    int adaptive_window = 19;
    double adaptive_floor = 1e-6;
};

BenchmarkSpec parse_bench_config(const std::string& path);

struct BenchCell {
    std::string contender;
    std::int64_t target = 0;
    std::int64_t actual = 0;
    int rep = 0;
    double sum_abs_err_T = 0.0;            // sum over factors of |T_hat - T|
    std::optional<double> sum_abs_err_S;
    bool infeasible = false;
};

struct BenchAggregate {
    std::string contender;
    std::int64_t target = 0;
    std::int64_t actual = 0;
    double mae_T = 0.0;
    std::optional<double> mae_S;
    bool infeasible = false;
};

struct BenchmarkTable {
    int factors = 0;
    std::vector<BenchCell> cells;
    std::vector<BenchAggregate> aggregates;

    bool any_infeasible() const;
    const BenchAggregate* find(const std::string& contender, std::int64_t target) const;
};

BenchmarkTable run_benchmark(const BenchmarkSpec& spec);

struct DominancePoint {
    std::int64_t target = 0;
    double ratio = 0.0;  // MAE_a / MAE_b
    bool a_wins = false;
};

struct Dominance {
    std::vector<DominancePoint> points;
    double win_fraction = 0.0;  // share of shared grid points where a wins
};

Dominance compare(const BenchmarkTable& table, const std::string& contender_a,
                  const std::string& contender_b);

void write_bench_csv(const BenchmarkTable& table, const std::string& path);

} // namespace gsa
