#include "design.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "sobol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsa {

const char* scheme_name(Scheme s) {
    return s == Scheme::Asymmetric ? "asym" : "sym";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    if (name == "asym" || name == "asymmetric") return Scheme::Asymmetric;
    if (name == "sym" || name == "symmetric") return Scheme::Symmetric;
    return std::nullopt;
}

std::string matrix_label(int index) {
    if (index >= 0 && index < 26) return std::string(1, static_cast<char>('A' + index));
    return "M" + std::to_string(index + 1);
}

static int parse_matrix_label(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z') return s[0] - 'A';
    if (s.size() > 1 && s[0] == 'M') {
        const long long v = parse_int(s.substr(1), "matrix label");
        if (v >= 1) return static_cast<int>(v - 1);
    }
    fail(ErrorKind::Parse, "bad matrix label '" + s + "'");
}

std::string RunTag::label() const {
    if (is_base()) return matrix_label(source);
    return matrix_label(source) + "_" + matrix_label(donor) + "(" + std::to_string(factor + 1) + ")";
}

RunTag RunTag::parse(const std::string& label) {
    const auto under = label.find('_');
    if (under == std::string::npos) return {parse_matrix_label(label), -1, -1};
    const auto open = label.find('(', under);
    const auto close = label.find(')', under);
    if (open == std::string::npos || close == std::string::npos || close < open)
        fail(ErrorKind::Parse, "bad run tag '" + label + "'");
    RunTag tag;
    tag.source = parse_matrix_label(label.substr(0, under));
    tag.donor = parse_matrix_label(label.substr(under + 1, open - under - 1));
    tag.factor = static_cast<int>(parse_int(label.substr(open + 1, close - open - 1), "run tag factor")) - 1;
    if (tag.factor < 0) fail(ErrorKind::Parse, "bad factor in run tag '" + label + "'");
    return tag;
}

std::size_t RunSchedule::run_id(const RunTag& tag, std::size_t i) const {
    const auto it = family_start.find(tag);
    if (it == family_start.end())
        fail(ErrorKind::Argument, "schedule has no family " + tag.label());
    return it->second + i;
}

std::size_t EffectPairIndex::total_pairs() const {
    std::size_t total = 0;
    for (const auto& p : pairs) total += p.size();
    return total;
}

void validate(const DesignConfig& cfg) {
    if (cfg.factors < 1) fail(ErrorKind::Argument, "design: k must be >= 1");
    if (cfg.rows < 1) fail(ErrorKind::Argument, "design: N must be >= 1");
    if (cfg.matrices < 2) fail(ErrorKind::Argument, "design: n must be >= 2");
}

DesignBudget budget(const DesignConfig& cfg) {
    validate(cfg);
    const std::int64_t k = cfg.factors;
    const std::int64_t n = cfg.matrices;
    const std::int64_t N = static_cast<std::int64_t>(cfg.rows);
    DesignBudget b;
    if (cfg.scheme == Scheme::Asymmetric) {
        b.total_runs = N * (1 + k * (n - 1));
        b.total_effects = N * k * (n * (n - 1) / 2);
    } else {
        b.total_runs = n * N * (1 + k * (n - 1));
        b.total_effects = N * k * n * n * (n - 1) / 2;
    }
    b.explored = n * N;
    b.economy = static_cast<double>(b.total_effects) / static_cast<double>(b.total_runs);
    return b;
}

std::pair<RunSchedule, EffectPairIndex> build_schedule(const DesignConfig& cfg,
                                                       const std::vector<PointSet>& bases) {
    validate(cfg);
    const int k = cfg.factors;
    const int n = cfg.matrices;
    const std::size_t N = cfg.rows;
    if (bases.size() != static_cast<std::size_t>(n))
        fail(ErrorKind::Argument, "build_schedule: expected " + std::to_string(n) + " base matrices, got " +
                                      std::to_string(bases.size()));
    for (const auto& b : bases)
        if (b.dims != k || b.count() != N)
            fail(ErrorKind::Argument, "build_schedule: base matrix is not N x k");
    for (std::size_t a = 0; a < bases.size(); ++a)
        for (std::size_t b = a + 1; b < bases.size(); ++b)
            if (bases[a].data == bases[b].data)
                fail(ErrorKind::Argument, "build_schedule: base matrices must be pairwise distinct");

    RunSchedule schedule;
    schedule.config = cfg;
    const auto bud = budget(cfg);
    schedule.rows.reserve(static_cast<std::size_t>(bud.total_runs));
    schedule.points.reserve(static_cast<std::size_t>(bud.total_runs) * static_cast<std::size_t>(k));

    const bool asym = cfg.scheme == Scheme::Asymmetric;

    auto append_family = [&](const RunTag& tag) {
        schedule.family_start.emplace(tag, schedule.rows.size());
        for (std::size_t i = 0; i < N; ++i) {
            schedule.rows.push_back({tag, i});
            const auto& src = bases[static_cast<std::size_t>(tag.source)];
            for (int j = 0; j < k; ++j) {
                double v = src.at(i, j);
                if (!tag.is_base() && j == tag.factor)
                    v = bases[static_cast<std::size_t>(tag.donor)].at(i, j);
                schedule.points.push_back(v);
            }
        }
    };

    // base rows first, matrix-major (only A is evaluated in the asymmetric scheme)
    const int base_count = asym ? 1 : n;
    for (int m = 0; m < base_count; ++m) append_family({m, -1, -1});

    // hybrids grouped by (source, donor, factor)
    for (int m = 0; m < base_count; ++m)
        for (int d = 0; d < n; ++d) {
            if (d == m) continue;
            for (int j = 0; j < k; ++j) append_family({m, d, j});
        }

    if (schedule.rows.size() != static_cast<std::size_t>(bud.total_runs))
        fail(ErrorKind::Argument, "build_schedule: internal row accounting mismatch");

    EffectPairIndex index;
    index.factors = k;
    index.pairs.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        auto& list = index.pairs[static_cast<std::size_t>(j)];
        // base row vs its own hybrids
        for (int m = 0; m < base_count; ++m)
            for (int d = 0; d < n; ++d) {
                if (d == m) continue;
                for (std::size_t i = 0; i < N; ++i)
                    list.emplace_back(static_cast<std::uint32_t>(schedule.run_id({m, -1, -1}, i)),
                                      static_cast<std::uint32_t>(schedule.run_id({m, d, j}, i)));
            }
        // hybrids of the same source with different donors
        for (int m = 0; m < base_count; ++m)
            for (int d1 = 0; d1 < n; ++d1) {
                if (d1 == m) continue;
                for (int d2 = d1 + 1; d2 < n; ++d2) {
                    if (d2 == m) continue;
                    for (std::size_t i = 0; i < N; ++i)
                        list.emplace_back(static_cast<std::uint32_t>(schedule.run_id({m, d1, j}, i)),
                                          static_cast<std::uint32_t>(schedule.run_id({m, d2, j}, i)));
                }
            }
    }

    if (index.total_pairs() != static_cast<std::size_t>(bud.total_effects))
        fail(ErrorKind::Argument, "build_schedule: internal pair accounting mismatch");

    return {std::move(schedule), std::move(index)};
}

std::vector<PlanRow> plan_for_budget(int factors, std::int64_t target_runs, Scheme scheme,
                                     const std::vector<int>& n_candidates, double tolerance) {
    if (factors < 1) fail(ErrorKind::Argument, "plan: k must be >= 1");
    if (target_runs < 1) fail(ErrorKind::Argument, "plan: target must be >= 1");
    const double cap = static_cast<double>(target_runs) * tolerance;

    std::vector<PlanRow> rows;
    for (int n : n_candidates) {
        PlanRow row;
        row.matrices = n;
        row.scheme = scheme;
        if (n < 2) {
            row.note = "need at least two matrices";
            rows.push_back(row);
            continue;
        }
        if (scheme == Scheme::Asymmetric && n != 2) {
            row.note = "asymmetric plan uses n = 2";
            rows.push_back(row);
            continue;
        }
        DesignConfig cfg{factors, n, 1, scheme};
        if (static_cast<double>(budget(cfg).total_runs) > cap) {
            row.note = "minimal design exceeds budget";
            rows.push_back(row);
            continue;
        }
        std::size_t N = 1;
        while (true) {
            cfg.rows = N * 2;
            if (static_cast<double>(budget(cfg).total_runs) > cap) break;
            N *= 2;
        }
        cfg.rows = N;
        row.rows = N;
        row.budget = budget(cfg);
        row.feasible = true;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PlanRow& a, const PlanRow& b) { return a.matrices < b.matrices; });
    return rows;
}

ReuseTable reuse_counts(const DesignConfig& cfg) {
    validate(cfg);
    const std::int64_t k = cfg.factors;
    const std::int64_t n = cfg.matrices;
    ReuseTable table;
    table.runs_total = budget(cfg).total_runs;
    table.usage.resize(static_cast<std::size_t>(n));
    if (cfg.scheme == Scheme::Asymmetric) {
        table.usage[0] = 1 + (k - 1) * (n - 1);
        for (int m = 1; m < n; ++m) table.usage[static_cast<std::size_t>(m)] = 1;
    } else {
        for (int m = 0; m < n; ++m) table.usage[static_cast<std::size_t>(m)] = 1 + k * (n - 1);
    }
    for (auto u : table.usage)
        table.usage_ratio.push_back(static_cast<double>(u) / static_cast<double>(table.runs_total));
    return table;
}

std::vector<PointSet> sobol_bases(const DesignConfig& cfg, std::uint64_t seed, std::uint64_t skip) {
    validate(cfg);
    const int total_dims = cfg.factors * cfg.matrices;
    PointSet block = sobol_points(total_dims, cfg.rows, skip);
    if (seed != 0)
        block = randomize(block, RandomizationSpec::from_seed(seed, total_dims));
    std::vector<PointSet> bases(static_cast<std::size_t>(cfg.matrices));
    for (int m = 0; m < cfg.matrices; ++m) {
        auto& b = bases[static_cast<std::size_t>(m)];
        b.dims = cfg.factors;
        b.data.resize(cfg.rows * static_cast<std::size_t>(cfg.factors));
        for (std::size_t i = 0; i < cfg.rows; ++i)
            for (int j = 0; j < cfg.factors; ++j)
                b.data[i * static_cast<std::size_t>(cfg.factors) + static_cast<std::size_t>(j)] =
                    block.at(i, m * cfg.factors + j);
    }
    return bases;
}

void write_schedule_csv(const RunSchedule& schedule, const std::string& runs_path) {
    std::ostringstream out;
    out << "run_id,tag";
    for (int j = 0; j < schedule.config.factors; ++j) out << ",x" << (j + 1);
    out << "\n";
    for (std::size_t r = 0; r < schedule.rows.size(); ++r) {
        out << r << "," << schedule.rows[r].tag.label();
        for (double v : schedule.point(r)) out << "," << format_double(v);
        out << "\n";
    }
    write_lines(runs_path, out.str());
}

void write_pairs_csv(const EffectPairIndex& pairs, const std::string& pairs_path) {
    std::ostringstream out;
    out << "factor,run_id_u,run_id_v\n";
    for (int j = 0; j < pairs.factors; ++j)
        for (const auto& [u, v] : pairs.pairs[static_cast<std::size_t>(j)])
            out << (j + 1) << "," << u << "," << v << "\n";
    write_lines(pairs_path, out.str());
}

RunSchedule read_schedule_csv(const std::string& runs_path) {
    const CsvTable table = read_csv(runs_path);
    if (table.header.size() < 3 || table.header[0] != "run_id" || table.header[1] != "tag")
        fail(ErrorKind::Parse, runs_path + ": expected header run_id,tag,x1..");
    const int k = static_cast<int>(table.header.size()) - 2;

    RunSchedule schedule;
    schedule.config.factors = k;
    std::map<RunTag, std::size_t> family_rows;
    int max_matrix = 0;
    int base_matrices = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = runs_path + " row " + std::to_string(r + 1);
        if (static_cast<std::size_t>(parse_int(row[0], where)) != r)
            fail(ErrorKind::Parse, where + ": run_id out of order");
        const RunTag tag = RunTag::parse(row[1]);
        if (!tag.is_base() && tag.factor >= k)
            fail(ErrorKind::Parse, where + ": tag factor exceeds column count");
        auto [it, inserted] = family_rows.emplace(tag, 0);
        if (inserted) schedule.family_start.emplace(tag, r);
        schedule.rows.push_back({tag, it->second++});
        if (tag.is_base()) base_matrices = std::max(base_matrices, tag.source + 1);
        max_matrix = std::max({max_matrix, tag.source + 1, tag.donor + 1});
        for (int j = 0; j < k; ++j)
            schedule.points.push_back(parse_double(row[static_cast<std::size_t>(j) + 2], where));
    }
    if (schedule.rows.empty()) fail(ErrorKind::Parse, runs_path + ": no runs");
    if (base_matrices == 0) fail(ErrorKind::Parse, runs_path + ": no base rows");

    schedule.config.matrices = max_matrix;
    schedule.config.scheme = base_matrices == max_matrix ? Scheme::Symmetric : Scheme::Asymmetric;
    schedule.config.rows = family_rows.begin()->second;
    for (const auto& [tag, count] : family_rows)
        if (count != schedule.config.rows)
            fail(ErrorKind::Parse, runs_path + ": family " + tag.label() + " has uneven row count");
    return schedule;
}

EffectPairIndex read_pairs_csv(const std::string& pairs_path, std::size_t run_count) {
    const CsvTable table = read_csv(pairs_path);
    if (table.header != std::vector<std::string>{"factor", "run_id_u", "run_id_v"})
        fail(ErrorKind::Parse, pairs_path + ": expected header factor,run_id_u,run_id_v");
    EffectPairIndex index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = pairs_path + " row " + std::to_string(r + 1);
        const long long factor = parse_int(row[0], where);
        const long long u = parse_int(row[1], where);
        const long long v = parse_int(row[2], where);
        if (factor < 1) fail(ErrorKind::Parse, where + ": factor must be >= 1");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= run_count ||
            static_cast<std::size_t>(v) >= run_count)
            fail(ErrorKind::Parse, where + ": run id out of range");
        if (factor > index.factors) {
            index.factors = static_cast<int>(factor);
            index.pairs.resize(static_cast<std::size_t>(factor));
        }
        index.pairs[static_cast<std::size_t>(factor - 1)].emplace_back(static_cast<std::uint32_t>(u),
                                                                       static_cast<std::uint32_t>(v));
    }
    return index;
}

} // namespace gsa
