#include "adaptive.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "sobol.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace gsa {

namespace {

struct VarianceAccumulator {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

// Per-factor accumulator. A factor's pairs always cover the sequence prefix
// rows 0..rows-1, and extensions double `rows`, so every estimate is taken on
// a completed power-of-two scan of the sequence. Stopping mid-scan measurably
// wastes the low-discrepancy structure.
struct FactorState {
    double sumsq = 0.0;
    std::size_t rows = 0;
    std::deque<double> history;  // trailing checkpoint estimates
};

} // namespace

AdaptiveTrace run_adaptive(const Model& model, int factors, const AdaptiveConfig& cfg) {
    if (factors < 1) fail(ErrorKind::Argument, "adaptive: factors must be >= 1");
    if (model.factors() != factors) fail(ErrorKind::Argument, "adaptive: model dimension mismatch");
    if (cfg.warmup_rows < 2) fail(ErrorKind::Argument, "adaptive: warm-up needs at least 2 rows");
    if (cfg.window < 1) fail(ErrorKind::Argument, "adaptive: window must be >= 1");
    if (!(cfg.delta > 0.0)) fail(ErrorKind::Argument, "adaptive: delta must be > 0");
    if (!(cfg.probability_floor > 0.0)) fail(ErrorKind::Argument, "adaptive: floor must be > 0");
    const std::size_t k = static_cast<std::size_t>(factors);
    const std::size_t warmup_cost = cfg.warmup_rows * (k + 1);
    if (cfg.total_budget < warmup_cost)
        fail(ErrorKind::Argument, "adaptive: budget " + std::to_string(cfg.total_budget) +
                                      " below warm-up cost " + std::to_string(warmup_cost));

    SobolSequence seq(2 * factors);
    seq.seek(cfg.skip);
    std::vector<int> perm(2 * k);
    if (cfg.sequence_seed != 0) {
        perm = seeded_permutation(cfg.sequence_seed, 2 * factors);
    } else {
        for (std::size_t c = 0; c < 2 * k; ++c) perm[c] = static_cast<int>(c);
    }

    // base rows f(a_i) and donor rows b_i, shared by every factor whose
    // prefix reaches row i
    std::vector<double> base_y;
    std::vector<std::vector<double>> rows_a, rows_b;
    VarianceAccumulator var;
    std::size_t evals = 0;

    std::vector<double> raw(2 * k), point(k);
    auto extend_base = [&] {
        seq.next(raw);
        std::vector<double> a(k), b(k);
        for (std::size_t j = 0; j < k; ++j) {
            a[j] = raw[static_cast<std::size_t>(perm[j])];
            b[j] = raw[static_cast<std::size_t>(perm[k + j])];
        }
        const double fa = model(a);
        ++evals;
        var.add(fa);
        base_y.push_back(fa);
        rows_a.push_back(std::move(a));
        rows_b.push_back(std::move(b));
    };

    std::vector<FactorState> state(k);
    auto pair_row = [&](std::size_t j, std::size_t i) {
        point = rows_a[i];
        point[j] = rows_b[i][j];
        const double fh = model(point);
        ++evals;
        const double d = base_y[i] - fh;
        state[j].sumsq += d * d;
        state[j].rows += 1;
    };
    // evaluations needed to double factor j's prefix
    auto extension_cost = [&](std::size_t j) {
        const std::size_t target = 2 * state[j].rows;
        return state[j].rows + (target > base_y.size() ? target - base_y.size() : 0);
    };
    auto extend_factor = [&](std::size_t j) {
        const std::size_t target = 2 * state[j].rows;
        while (base_y.size() < target) extend_base();
        for (std::size_t i = state[j].rows; i < target; ++i) pair_row(j, i);
    };

    AdaptiveTrace trace;
    std::vector<double> t_hat(k, 0.0);
    auto recompute = [&] {
        const double v = var.variance();
        if (!(v > 0.0)) fail(ErrorKind::DegenerateModel, "adaptive: zero output variance");
        for (std::size_t j = 0; j < k; ++j)
            t_hat[j] = state[j].sumsq / (2.0 * static_cast<double>(state[j].rows)) / v;
    };
    auto checkpoint = [&](std::vector<int> selected) {
        AdaptiveCheckpoint cp;
        cp.evaluations = evals;
        cp.total_effect = t_hat;
        cp.selected = std::move(selected);
        for (std::size_t j = 0; j < k; ++j) {
            cp.pair_counts.push_back(state[j].rows);
            state[j].history.push_back(t_hat[j]);
            if (state[j].history.size() > static_cast<std::size_t>(cfg.window))
                state[j].history.pop_front();
        }
        trace.checkpoints.push_back(std::move(cp));
    };

    // Phase 1: full asymmetric design over the first warmup_rows rows.
    for (std::size_t i = 0; i < cfg.warmup_rows; ++i) extend_base();
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < cfg.warmup_rows; ++i) pair_row(j, i);
    recompute();
    checkpoint({});

    SplitMix64 roulette(cfg.seed);

    // Phase 2: one roulette spin per step. The picked factor doubles its
    // prefix; when that no longer fits the remaining budget, the heaviest
    // factor that still fits is extended instead, so the budget is spent to
    // the last affordable block. Factors whose trailing estimates still move
    // more than delta are topped up alongside.
    while (true) {
        double weight_sum = 0.0;
        std::vector<double> weight(k);
        for (std::size_t j = 0; j < k; ++j) {
            weight[j] = std::max(t_hat[j], cfg.probability_floor);
            weight_sum += weight[j];
        }
        const double u = roulette.next_double() * weight_sum;
        std::size_t pick = k - 1;
        double cum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            cum += weight[j];
            if (u < cum) {
                pick = j;
                break;
            }
        }
        if (evals + extension_cost(pick) > cfg.total_budget) {
            bool found = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (evals + extension_cost(j) > cfg.total_budget) continue;
                if (!found || weight[j] > weight[pick]) pick = j;
                found = true;
            }
            if (!found) break;
        }
        extend_factor(pick);
        std::vector<int> selected{static_cast<int>(pick)};

        // top-ups: factors still oscillating over the trailing window
        for (std::size_t j = 0; j < k; ++j) {
            if (j == pick) continue;
            const auto& h = state[j].history;
            if (h.size() < static_cast<std::size_t>(cfg.window)) continue;
            const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
            if (*hi - *lo <= cfg.delta) continue;
            if (evals + extension_cost(j) > cfg.total_budget) continue;
            extend_factor(j);
            selected.push_back(static_cast<int>(j));
        }

        recompute();
        checkpoint(std::move(selected));
    }
    return trace;
}

void write_trace_csv(const AdaptiveTrace& trace, int factors, const std::string& path) {
    std::ostringstream out;
    out << "evals";
    for (int j = 1; j <= factors; ++j) out << ",T" << j;
    for (int j = 1; j <= factors; ++j) out << ",N" << j;
    out << ",selected\n";
    for (const auto& cp : trace.checkpoints) {
        out << cp.evaluations;
        for (double t : cp.total_effect) out << "," << format_double(t);
        for (std::size_t n : cp.pair_counts) out << "," << n;
        out << ",";
        for (std::size_t s = 0; s < cp.selected.size(); ++s)
            out << (s ? ";" : "") << (cp.selected[s] + 1);
        out << "\n";
    }
    write_lines(path, out.str());
}

} // namespace gsa
