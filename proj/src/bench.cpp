#include "bench.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gsa {

ContenderSpec ContenderSpec::parse(const std::string& id) {
    ContenderSpec spec;
    spec.id = id;
    if (id == "adaptive") {
        spec.adaptive = true;
        return spec;
    }
    std::size_t pos = 0;
    while (pos < id.size() && std::isalpha(static_cast<unsigned char>(id[pos]))) ++pos;
    const auto scheme = parse_scheme(id.substr(0, pos));
    if (!scheme) fail(ErrorKind::Argument, "bad contender '" + id + "': unknown scheme");
    spec.scheme = *scheme;
    std::size_t digits = pos;
    while (digits < id.size() && std::isdigit(static_cast<unsigned char>(id[digits]))) ++digits;
    if (digits == pos || digits >= id.size() || id[digits] != '-')
        fail(ErrorKind::Argument, "bad contender '" + id + "': expected <scheme><n>-<estimator>");
    spec.matrices = static_cast<int>(parse_int(id.substr(pos, digits - pos), "contender n"));
    const auto est = parse_estimator(id.substr(digits + 1));
    if (!est) fail(ErrorKind::Argument, "bad contender '" + id + "': unknown estimator");
    spec.estimator = *est;
    if (spec.scheme == Scheme::Asymmetric && spec.matrices != 2)
        fail(ErrorKind::Argument, "bad contender '" + id + "': asymmetric designs use n = 2");
    return spec;
}

static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

BenchmarkSpec parse_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    BenchmarkSpec spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = path + ":" + std::to_string(lineno);
        if (key == "model") {
            spec.model_id = value;
        } else if (key == "a") {
            spec.a.clear();
            for (const auto& tok : split_list(value)) spec.a.push_back(parse_double(tok, where));
        } else if (key == "k") {
            spec.factors = static_cast<int>(parse_int(value, where));
        } else if (key == "grid") {
            spec.grid.clear();
            for (const auto& tok : split_list(value)) spec.grid.push_back(parse_int(tok, where));
        } else if (key == "reps") {
            spec.repetitions = static_cast<int>(parse_int(value, where));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(parse_int(value, where));
        } else if (key == "contenders") {
            spec.contenders.clear();
            for (const auto& tok : split_list(value)) spec.contenders.push_back(ContenderSpec::parse(tok));
        } else if (key == "tolerance") {
            spec.plan_tolerance = parse_double(value, where);
        } else if (key == "adaptive.nts") {
            spec.adaptive_warmup = static_cast<std::size_t>(parse_int(value, where));
        } else if (key == "adaptive.delta") {
            spec.adaptive_delta = parse_double(value, where);
        } else if (key == "adaptive.p") {
            spec.adaptive_window = static_cast<int>(parse_int(value, where));
        } else if (key == "adaptive.floor") {
            spec.adaptive_floor = parse_double(value, where);
        } else {
            fail(ErrorKind::Parse, where + ": unknown key '" + key + "'");
        }
    }
    return spec;
}

static void validate_spec(const BenchmarkSpec& spec) {
    if (spec.factors < 1) fail(ErrorKind::Argument, "benchmark: k must be >= 1");
    if (spec.repetitions < 1) fail(ErrorKind::Argument, "benchmark: reps must be >= 1");
    if (spec.grid.empty()) fail(ErrorKind::Argument, "benchmark: empty budget grid");
    for (std::size_t g = 1; g < spec.grid.size(); ++g)
        if (spec.grid[g] <= spec.grid[g - 1])
            fail(ErrorKind::Argument, "benchmark: grid must be strictly increasing");
    if (spec.contenders.empty()) fail(ErrorKind::Argument, "benchmark: no contenders");
}

static Model make_model(const BenchmarkSpec& spec) {
    if (spec.model_id == "g") {
        std::vector<double> a = spec.a;
        if (a.empty()) fail(ErrorKind::Argument, "benchmark: model g needs coefficients a");
        if (static_cast<int>(a.size()) != spec.factors)
            fail(ErrorKind::Argument, "benchmark: a-vector length does not match k");
        return Model::g(std::move(a));
    }
    return Model::builtin(spec.model_id, spec.factors);
}

bool BenchmarkTable::any_infeasible() const {
    for (const auto& agg : aggregates)
        if (agg.infeasible) return true;
    return false;
}

const BenchAggregate* BenchmarkTable::find(const std::string& contender, std::int64_t target) const {
    for (const auto& agg : aggregates)
        if (agg.contender == contender && agg.target == target) return &agg;
    return nullptr;
}

// Largest power-of-two N whose N_T stays within target * tolerance; 0 if none.
static std::size_t pick_rows(const ContenderSpec& c, std::int64_t target, int factors,
                             double tolerance) {
    const auto plan =
        plan_for_budget(factors, target, c.scheme, std::vector<int>{c.matrices}, tolerance);
    return plan.at(0).feasible ? plan.at(0).rows : 0;
}

BenchmarkTable run_benchmark(const BenchmarkSpec& spec) {
    validate_spec(spec);
    const Model model = make_model(spec);
    if (!model.has_analytic())
        fail(ErrorKind::Argument, "benchmark: model '" + spec.model_id + "' has no analytic reference");
    const AnalyticIndices ref = model.analytic();
    const std::size_t k = static_cast<std::size_t>(spec.factors);

    BenchmarkTable table;
    table.factors = spec.factors;

    for (const auto& contender : spec.contenders) {
        // Disjoint per-repetition sequence blocks sized for the largest grid
        // point. Rounded up to a power of two so every repetition starts on a
        // scan boundary of the sequence.
        std::size_t block = 0;
        for (std::int64_t target : spec.grid) {
            if (contender.adaptive) {
                const std::size_t warm_cost = spec.adaptive_warmup * (k + 1);
                if (static_cast<std::size_t>(target) >= warm_cost)
                    block = std::max(block, spec.adaptive_warmup +
                                                (static_cast<std::size_t>(target) - warm_cost) / 2 + 1);
            } else {
                block = std::max(block, pick_rows(contender, target, spec.factors, spec.plan_tolerance));
            }
        }
        block = std::bit_ceil(std::max<std::size_t>(block, 1));

        for (std::int64_t target : spec.grid) {
            std::size_t rows = 0;
            bool feasible = true;
            if (contender.adaptive) {
                feasible = static_cast<std::size_t>(target) >= spec.adaptive_warmup * (k + 1);
            } else {
                rows = pick_rows(contender, target, spec.factors, spec.plan_tolerance);
                feasible = rows > 0;
            }
            if (!feasible) {
                BenchAggregate agg;
                agg.contender = contender.id;
                agg.target = target;
                agg.infeasible = true;
                table.aggregates.push_back(agg);
                BenchCell cell;
                cell.contender = contender.id;
                cell.target = target;
                cell.rep = -1;
                cell.infeasible = true;
                table.cells.push_back(cell);
                continue;
            }

            double err_T_sum = 0.0, err_S_sum = 0.0;
            bool has_S = false;
            std::int64_t actual = 0;
            for (int rep = 0; rep < spec.repetitions; ++rep) {
                const std::uint64_t seed_r = mix_seed(spec.seed, static_cast<std::uint64_t>(rep));
                const std::uint64_t skip_r = 1 + static_cast<std::uint64_t>(rep) * block;
                BenchCell cell;
                cell.contender = contender.id;
                cell.target = target;
                cell.rep = rep;

                std::vector<double> t_hat(k, 0.0);
                std::optional<std::vector<double>> s_hat;
                if (contender.adaptive) {
                    AdaptiveConfig acfg;
                    acfg.warmup_rows = spec.adaptive_warmup;
                    acfg.delta = spec.adaptive_delta;
                    acfg.window = spec.adaptive_window;
                    acfg.probability_floor = spec.adaptive_floor;
                    acfg.total_budget = static_cast<std::size_t>(target);
                    acfg.seed = mix_seed(seed_r, 0xad);
                    acfg.sequence_seed = seed_r;
                    acfg.skip = skip_r;
                    const AdaptiveTrace trace = run_adaptive(model, spec.factors, acfg);
                    cell.actual = static_cast<std::int64_t>(trace.final().evaluations);
                    t_hat = trace.final().total_effect;
                } else {
                    DesignConfig cfg{spec.factors, contender.matrices, rows, contender.scheme};
                    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, seed_r, skip_r));
                    cell.actual = static_cast<std::int64_t>(schedule.run_count());
                    EvaluatedSchedule ev{std::move(schedule), {}, spec.model_id};
                    ev.y = evaluate_batch(model, ev.schedule);
                    const EstimateReport report =
                        contender.estimator == EstimatorId::Saltenis
                            ? saltenis_total(ev, pairs)
                            : correlation_total(ev, pairs,
                                                contender.estimator == EstimatorId::CorrelationCorrected);
                    for (std::size_t j = 0; j < k; ++j) t_hat[j] = report.factors[j].total_effect;
                    if (contender.scheme == Scheme::Symmetric) {
                        const EstimateReport s_report = first_order(ev, contender.estimator);
                        s_hat.emplace(k, 0.0);
                        for (std::size_t j = 0; j < k; ++j)
                            (*s_hat)[j] = *s_report.factors[j].first_order;
                    }
                }

                for (std::size_t j = 0; j < k; ++j)
                    cell.sum_abs_err_T += std::abs(t_hat[j] - ref.total_effect[j]);
                if (s_hat) {
                    double e = 0.0;
                    for (std::size_t j = 0; j < k; ++j)
                        e += std::abs((*s_hat)[j] - ref.first_order[j]);
                    cell.sum_abs_err_S = e;
                    err_S_sum += e;
                    has_S = true;
                }
                err_T_sum += cell.sum_abs_err_T;
                actual = cell.actual;
                table.cells.push_back(std::move(cell));
            }

            BenchAggregate agg;
            agg.contender = contender.id;
            agg.target = target;
            agg.actual = actual;
            agg.mae_T = err_T_sum / spec.repetitions;
            if (has_S) agg.mae_S = err_S_sum / spec.repetitions;
            table.aggregates.push_back(std::move(agg));
        }
    }
    return table;
}

Dominance compare(const BenchmarkTable& table, const std::string& contender_a,
                  const std::string& contender_b) {
    Dominance dom;
    std::size_t wins = 0;
    for (const auto& agg : table.aggregates) {
        if (agg.contender != contender_a || agg.infeasible) continue;
        const BenchAggregate* other = table.find(contender_b, agg.target);
        if (!other || other->infeasible) continue;
        DominancePoint pt;
        pt.target = agg.target;
        pt.ratio = agg.mae_T / other->mae_T;
        pt.a_wins = agg.mae_T < other->mae_T;
        if (pt.a_wins) ++wins;
        dom.points.push_back(pt);
    }
    if (dom.points.empty())
        fail(ErrorKind::Argument, "compare: contenders share no feasible grid points");
    dom.win_fraction = static_cast<double>(wins) / static_cast<double>(dom.points.size());
    return dom;
}

void write_bench_csv(const BenchmarkTable& table, const std::string& path) {
    std::ostringstream out;
    out << "contender,target_NT,actual_NT,rep,sum_abs_err_T,sum_abs_err_S,agg,infeasible\n";
    for (const auto& cell : table.cells) {
        out << cell.contender << "," << cell.target << "," << cell.actual << "," << cell.rep << ",";
        if (!cell.infeasible) out << format_double(cell.sum_abs_err_T);
        out << ",";
        if (cell.sum_abs_err_S) out << format_double(*cell.sum_abs_err_S);
        out << ",0," << (cell.infeasible ? 1 : 0) << "\n";
    }
    for (const auto& agg : table.aggregates) {
        out << agg.contender << "," << agg.target << "," << agg.actual << ",,";
        if (!agg.infeasible) out << format_double(agg.mae_T);
        out << ",";
        if (agg.mae_S) out << format_double(*agg.mae_S);
        out << ",1," << (agg.infeasible ? 1 : 0) << "\n";
    }
    write_lines(path, out.str());
}

} // namespace gsa
