#pragma once

#include "pointset.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gsa {

enum class Scheme { Asymmetric, Symmetric };

const char* scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);

struct DesignConfig {
    int factors = 0;        // k
    int matrices = 2;       // n
    std::size_t rows = 0;   // N, rows per base matrix
    Scheme scheme = Scheme::Asymmetric;
};

// Identifies a run as either a base-matrix row ("A", "B", ...) or a hybrid
// row ("A_B(3)": all columns from A except factor 3, donated by B).
struct RunTag {
    int source = 0;
    int donor = -1;   // -1 for base rows
    int factor = -1;  // 0-based, -1 for base rows

    bool is_base() const { return donor < 0; }
    bool operator==(const RunTag&) const = default;
    auto operator<=>(const RunTag&) const = default;

    std::string label() const;
    static RunTag parse(const std::string& label);
};

std::string matrix_label(int index);

struct RunDescriptor {
    RunTag tag;
    std::size_t row_index = 0;  // i within the base matrix
};

struct RunSchedule {
    DesignConfig config;
    std::vector<RunDescriptor> rows;
    std::vector<double> points;  // rows.size() x factors, row-major

    std::size_t run_count() const { return rows.size(); }
    std::span<const double> point(std::size_t run) const {
        const auto k = static_cast<std::size_t>(config.factors);
        return {points.data() + run * k, k};
    }
    /// run id of row i of the family identified by tag
    std::size_t run_id(const RunTag& tag, std::size_t i) const;

    std::map<RunTag, std::size_t> family_start;  // tag -> first run id
};

struct EffectPairIndex {
    int factors = 0;
    // per factor: (u, v) run ids one step in that factor apart
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs;

    std::size_t total_pairs() const;
};

struct DesignBudget {
    std::int64_t total_runs = 0;     // N_T
    std::int64_t total_effects = 0;  // E_T
    double economy = 0.0;            // e = E_T / N_T
    std::int64_t explored = 0;       // nN, rows carrying only original coordinates
};

struct ReuseTable {
    // usage count of a generic coordinate, per base matrix
    std::vector<std::int64_t> usage;
    std::int64_t runs_total = 0;
    std::vector<double> usage_ratio;
};

struct PlanRow {
    int matrices = 0;
    Scheme scheme = Scheme::Symmetric;
    std::size_t rows = 0;  // N, power of two (0 when infeasible)
    DesignBudget budget;
    bool feasible = false;
    std::string note;
};

void validate(const DesignConfig& cfg);

DesignBudget budget(const DesignConfig& cfg);

// bases: n matrices, each cfg.rows x cfg.factors.
std::pair<RunSchedule, EffectPairIndex> build_schedule(const DesignConfig& cfg,
                                                       const std::vector<PointSet>& bases);

// For each candidate n, the largest power-of-two N whose N_T stays within
// target_runs * tolerance. Infeasible candidates come back flagged.
std::vector<PlanRow> plan_for_budget(int factors, std::int64_t target_runs, Scheme scheme,
                                     const std::vector<int>& n_candidates, double tolerance = 1.25);

ReuseTable reuse_counts(const DesignConfig& cfg);

// Generation helper: an nk-dimension Sobol' block, columns permuted jointly by
// seed (0 = identity), then split into n consecutive k-column base matrices.
std::vector<PointSet> sobol_bases(const DesignConfig& cfg, std::uint64_t seed, std::uint64_t skip = 1);

void write_schedule_csv(const RunSchedule& schedule, const std::string& runs_path);
void write_pairs_csv(const EffectPairIndex& pairs, const std::string& pairs_path);
RunSchedule read_schedule_csv(const std::string& runs_path);
EffectPairIndex read_pairs_csv(const std::string& pairs_path, std::size_t run_count);

} // namespace gsa
