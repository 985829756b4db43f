#include "gsa/gsa.h"

#include "adaptive.hpp"
#include "bench.hpp"
#include "design.hpp"
#include "discrepancy.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "models.hpp"
#include "pointset.hpp"
#include "sobol.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

using namespace gsa;

struct gsa_points {
    PointSet set;
};
struct gsa_design {
    RunSchedule schedule;
    EffectPairIndex pairs;
};
struct gsa_model {
    Model model;
};
struct gsa_report {
    EstimateReport report;
};

namespace {

thread_local std::string t_last_error;

gsa_status to_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Argument: return GSA_ERR_ARGUMENT;
        case ErrorKind::Capacity: return GSA_ERR_CAPACITY;
        case ErrorKind::DegenerateModel: return GSA_ERR_DEGENERATE_MODEL;
        case ErrorKind::Io: return GSA_ERR_IO;
        case ErrorKind::Parse: return GSA_ERR_PARSE;
        case ErrorKind::Evaluation: return GSA_ERR_EVALUATION;
        case ErrorKind::Infeasible: return GSA_ERR_INFEASIBLE;
    }
    return GSA_ERR_INTERNAL;
}

template <typename Fn>
gsa_status guarded(Fn&& fn) {
    try {
        fn();
        return GSA_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return GSA_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return GSA_ERR_INTERNAL;
    }
}

gsa_status arg_error(const char* message) {
    t_last_error = message;
    return GSA_ERR_ARGUMENT;
}

Scheme require_scheme(const char* scheme) {
    if (!scheme) fail(ErrorKind::Argument, "scheme is null");
    const auto parsed = parse_scheme(scheme);
    if (!parsed) fail(ErrorKind::Argument, std::string("unknown scheme '") + scheme + "'");
    return *parsed;
}

EstimatorId require_estimator(const char* estimator) {
    if (!estimator) fail(ErrorKind::Argument, "estimator is null");
    const auto parsed = parse_estimator(estimator);
    if (!parsed) fail(ErrorKind::Argument, std::string("unknown estimator '") + estimator + "'");
    return *parsed;
}

gsa_budget to_c(const DesignBudget& b) {
    return {b.total_runs, b.total_effects, b.economy, b.explored};
}

gsa_report* make_report(EstimateReport&& report) {
    return new gsa_report{std::move(report)};
}

// merge S estimates into a T report
void merge_first_order(EstimateReport& into, const EstimateReport& s_report) {
    for (std::size_t j = 0; j < into.factors.size(); ++j)
        into.factors[j].first_order = s_report.factors[j].first_order;
}

} // namespace

extern "C" {

const char* gsa_status_name(gsa_status status) {
    switch (status) {
        case GSA_OK: return "ok";
        case GSA_ERR_ARGUMENT: return "argument";
        case GSA_ERR_CAPACITY: return "capacity";
        case GSA_ERR_DEGENERATE_MODEL: return "degenerate-model";
        case GSA_ERR_IO: return "io";
        case GSA_ERR_PARSE: return "parse";
        case GSA_ERR_EVALUATION: return "evaluation";
        case GSA_ERR_INFEASIBLE: return "infeasible";
        case GSA_ERR_INTERNAL: return "internal";
    }
    return "?";
}

const char* gsa_last_error(void) {
    return t_last_error.c_str();
}

const char* gsa_version(void) {
    return "0.1.0";
}

int gsa_sobol_max_dims(void) {
    return DirectionTable::bundled().max_dims();
}

gsa_status gsa_points_sobol(int dims, size_t count, uint64_t skip, gsa_points** out) {
    if (!out) return arg_error("out is null");
    return guarded([&] { *out = new gsa_points{sobol_points(dims, count, skip)}; });
}

gsa_status gsa_points_randomize(const gsa_points* pts, uint64_t seed, int digital_shift,
                                gsa_points** out) {
    if (!pts || !out) return arg_error("pts/out is null");
    return guarded([&] {
        const auto spec = RandomizationSpec::from_seed(seed, pts->set.dims, digital_shift != 0);
        *out = new gsa_points{randomize(pts->set, spec)};
    });
}

gsa_status gsa_points_read_csv(const char* path, gsa_points** out) {
    if (!path || !out) return arg_error("path/out is null");
    return guarded([&] { *out = new gsa_points{read_points_csv(path)}; });
}

gsa_status gsa_points_write_csv(const gsa_points* pts, const char* path) {
    if (!pts || !path) return arg_error("pts/path is null");
    return guarded([&] { write_points_csv(pts->set, path); });
}

int gsa_points_dims(const gsa_points* pts) {
    return pts ? pts->set.dims : 0;
}

size_t gsa_points_count(const gsa_points* pts) {
    return pts ? pts->set.count() : 0;
}

gsa_status gsa_points_get(const gsa_points* pts, size_t row, int col, double* out) {
    if (!pts || !out) return arg_error("pts/out is null");
    if (row >= pts->set.count() || col < 0 || col >= pts->set.dims)
        return arg_error("point index out of range");
    *out = pts->set.at(row, col);
    return GSA_OK;
}

gsa_status gsa_points_l2_discrepancy(const gsa_points* pts, double* out) {
    if (!pts || !out) return arg_error("pts/out is null");
    return guarded([&] { *out = l2_discrepancy(pts->set).value; });
}

void gsa_points_free(gsa_points* pts) {
    delete pts;
}

gsa_status gsa_design_budget(int factors, int matrices, int64_t rows, const char* scheme,
                             gsa_budget* out) {
    if (!out) return arg_error("out is null");
    return guarded([&] {
        if (rows < 1) fail(ErrorKind::Argument, "rows must be >= 1");
        DesignConfig cfg{factors, matrices, static_cast<std::size_t>(rows), require_scheme(scheme)};
        *out = to_c(budget(cfg));
    });
}

gsa_status gsa_design_build(int factors, int matrices, int64_t rows, const char* scheme,
                            uint64_t seed, uint64_t skip, gsa_design** out) {
    if (!out) return arg_error("out is null");
    return guarded([&] {
        if (rows < 1) fail(ErrorKind::Argument, "rows must be >= 1");
        DesignConfig cfg{factors, matrices, static_cast<std::size_t>(rows), require_scheme(scheme)};
        auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, seed, skip));
        *out = new gsa_design{std::move(schedule), std::move(pairs)};
    });
}

gsa_status gsa_design_write_csv(const gsa_design* design, const char* runs_path,
                                const char* pairs_path) {
    if (!design || !runs_path || !pairs_path) return arg_error("design/path is null");
    return guarded([&] {
        write_schedule_csv(design->schedule, runs_path);
        write_pairs_csv(design->pairs, pairs_path);
    });
}

gsa_status gsa_design_read_csv(const char* runs_path, const char* pairs_path, gsa_design** out) {
    if (!runs_path || !pairs_path || !out) return arg_error("path/out is null");
    return guarded([&] {
        RunSchedule schedule = read_schedule_csv(runs_path);
        EffectPairIndex pairs = read_pairs_csv(pairs_path, schedule.run_count());
        *out = new gsa_design{std::move(schedule), std::move(pairs)};
    });
}

int64_t gsa_design_runs(const gsa_design* design) {
    return design ? static_cast<int64_t>(design->schedule.run_count()) : 0;
}

int64_t gsa_design_pairs(const gsa_design* design) {
    return design ? static_cast<int64_t>(design->pairs.total_pairs()) : 0;
}

void gsa_design_free(gsa_design* design) {
    delete design;
}

gsa_status gsa_reuse_counts(int factors, int matrices, int64_t rows, const char* scheme,
                            int64_t* base_usage, int64_t* donor_usage, int64_t* runs_total) {
    return guarded([&] {
        if (rows < 1) fail(ErrorKind::Argument, "rows must be >= 1");
        DesignConfig cfg{factors, matrices, static_cast<std::size_t>(rows), require_scheme(scheme)};
        const ReuseTable table = reuse_counts(cfg);
        if (base_usage) *base_usage = table.usage.front();
        if (donor_usage) *donor_usage = table.usage.back();
        if (runs_total) *runs_total = table.runs_total;
    });
}

gsa_status gsa_plan(int factors, int64_t target_runs, const char* scheme, const int* n_candidates,
                    size_t n_count, double tolerance, int with_discrepancy, gsa_plan_row* out_rows,
                    size_t* out_count) {
    if (!n_candidates || n_count == 0 || !out_rows || !out_count)
        return arg_error("plan: candidates/out is null");
    return guarded([&] {
        const std::vector<int> candidates(n_candidates, n_candidates + n_count);
        const auto rows = plan_for_budget(factors, target_runs, require_scheme(scheme), candidates,
                                          tolerance > 0 ? tolerance : 1.25);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            gsa_plan_row& out = out_rows[i];
            out.matrices = rows[i].matrices;
            out.rows = static_cast<int64_t>(rows[i].rows);
            out.budget = to_c(rows[i].budget);
            out.feasible = rows[i].feasible ? 1 : 0;
            out.discrepancy = std::numeric_limits<double>::quiet_NaN();
            if (rows[i].feasible && with_discrepancy) {
                DesignConfig cfg{factors, rows[i].matrices, rows[i].rows, rows[i].scheme};
                const auto bases = sobol_bases(cfg, 0);
                PointSet merged;
                merged.dims = factors;
                for (const auto& b : bases)
                    merged.data.insert(merged.data.end(), b.data.begin(), b.data.end());
                out.discrepancy = l2_discrepancy(merged).value;
            }
        }
        *out_count = rows.size();
    });
}

gsa_status gsa_model_g(const double* a, int factors, gsa_model** out) {
    if (!a || !out) return arg_error("a/out is null");
    if (factors < 1) return arg_error("factors must be >= 1");
    return guarded([&] { *out = new gsa_model{Model::g(std::vector<double>(a, a + factors))}; });
}

gsa_status gsa_model_builtin(const char* id, int factors, gsa_model** out) {
    if (!id || !out) return arg_error("id/out is null");
    return guarded([&] { *out = new gsa_model{Model::builtin(id, factors)}; });
}

gsa_status gsa_model_external(const char* command, const char* input_path, const char* output_path,
                              double timeout_seconds, int factors, gsa_model** out) {
    if (!command || !input_path || !output_path || !out) return arg_error("model spec is null");
    return guarded([&] {
        *out = new gsa_model{
            Model::external({command, input_path, output_path, timeout_seconds}, factors)};
    });
}

gsa_status gsa_model_eval_point(const gsa_model* model, const double* x, int factors, double* out) {
    if (!model || !x || !out) return arg_error("model/x/out is null");
    return guarded([&] {
        *out = model->model(std::span<const double>(x, static_cast<std::size_t>(factors)));
    });
}

gsa_status gsa_model_eval_csv(const gsa_model* model, const char* runs_csv, const char* y_csv) {
    if (!model || !runs_csv || !y_csv) return arg_error("model/path is null");
    return guarded([&] {
        const RunSchedule schedule = read_schedule_csv(runs_csv);
        write_y_csv(evaluate_batch(model->model, schedule), y_csv);
    });
}

void gsa_model_free(gsa_model* model) {
    delete model;
}

gsa_status gsa_g_analytic(const double* a, int factors, double* first_order, double* total_effect,
                          double* variance) {
    if (!a || factors < 1) return arg_error("a is null or factors < 1");
    return guarded([&] {
        const AnalyticIndices idx = g_analytic(GFunctionSpec{std::vector<double>(a, a + factors)});
        for (int j = 0; j < factors; ++j) {
            if (first_order) first_order[j] = idx.first_order[static_cast<std::size_t>(j)];
            if (total_effect) total_effect[j] = idx.total_effect[static_cast<std::size_t>(j)];
        }
        if (variance) *variance = idx.variance;
    });
}

static EstimateReport do_estimate(RunSchedule schedule, const EffectPairIndex& pairs,
                                  std::vector<double> y, const char* estimator, int with_first) {
    const EstimatorId id = require_estimator(estimator);
    EvaluatedSchedule ev{std::move(schedule), std::move(y), ""};
    EstimateReport report =
        id == EstimatorId::Saltenis
            ? saltenis_total(ev, pairs)
            : correlation_total(ev, pairs, id == EstimatorId::CorrelationCorrected);
    if (with_first) merge_first_order(report, first_order(ev, id));
    return report;
}

gsa_status gsa_estimate(const gsa_design* design, const double* y, size_t y_len,
                        const char* estimator, int first_order, gsa_report** out) {
    if (!design || !y || !out) return arg_error("design/y/out is null");
    return guarded([&] {
        *out = make_report(do_estimate(design->schedule, design->pairs,
                                       std::vector<double>(y, y + y_len), estimator, first_order));
    });
}

gsa_status gsa_estimate_csv(const char* runs_csv, const char* pairs_csv, const char* y_csv,
                            const char* estimator, int first_order, gsa_report** out) {
    if (!runs_csv || !pairs_csv || !y_csv || !out) return arg_error("path/out is null");
    return guarded([&] {
        RunSchedule schedule = read_schedule_csv(runs_csv);
        EffectPairIndex pairs = read_pairs_csv(pairs_csv, schedule.run_count());
        std::vector<double> y = read_y_csv(y_csv);
        *out = make_report(
            do_estimate(std::move(schedule), pairs, std::move(y), estimator, first_order));
    });
}

int gsa_report_factors(const gsa_report* report) {
    return report ? static_cast<int>(report->report.factors.size()) : 0;
}

double gsa_report_variance(const gsa_report* report) {
    return report ? report->report.variance_y : 0.0;
}

gsa_status gsa_report_total(const gsa_report* report, int factor, double* out) {
    if (!report || !out) return arg_error("report/out is null");
    if (factor < 0 || factor >= gsa_report_factors(report)) return arg_error("factor out of range");
    *out = report->report.factors[static_cast<std::size_t>(factor)].total_effect;
    return GSA_OK;
}

gsa_status gsa_report_first(const gsa_report* report, int factor, double* out) {
    if (!report || !out) return arg_error("report/out is null");
    if (factor < 0 || factor >= gsa_report_factors(report)) return arg_error("factor out of range");
    const auto& s = report->report.factors[static_cast<std::size_t>(factor)].first_order;
    if (!s) return arg_error("report has no first-order estimates");
    *out = *s;
    return GSA_OK;
}

gsa_status gsa_report_pairs_used(const gsa_report* report, int factor, int64_t* out) {
    if (!report || !out) return arg_error("report/out is null");
    if (factor < 0 || factor >= gsa_report_factors(report)) return arg_error("factor out of range");
    *out = static_cast<int64_t>(report->report.factors[static_cast<std::size_t>(factor)].pairs_used);
    return GSA_OK;
}

gsa_status gsa_report_write_json(const gsa_report* report, const char* path) {
    if (!report || !path) return arg_error("report/path is null");
    return guarded([&] { write_report_json(report->report, path); });
}

void gsa_report_free(gsa_report* report) {
    delete report;
}

void gsa_adaptive_config_init(gsa_adaptive_config* cfg) {
    if (!cfg) return;
    cfg->warmup_rows = 32;
    cfg->delta = 1e-4;
    cfg->window = 19;
    cfg->total_budget = 0;
    cfg->probability_floor = 1e-6;
    cfg->seed = 0;
    cfg->sequence_seed = 0;
    cfg->skip = 1;
}

gsa_status gsa_adaptive_run(const gsa_model* model, int factors, const gsa_adaptive_config* cfg,
                            const char* trace_csv, gsa_report** final_report) {
    if (!model || !cfg) return arg_error("model/cfg is null");
    return guarded([&] {
        AdaptiveConfig acfg;
        acfg.warmup_rows = cfg->warmup_rows;
        acfg.delta = cfg->delta;
        acfg.window = cfg->window;
        acfg.total_budget = cfg->total_budget;
        acfg.probability_floor = cfg->probability_floor;
        acfg.seed = cfg->seed;
        acfg.sequence_seed = cfg->sequence_seed;
        acfg.skip = cfg->skip;
        const AdaptiveTrace trace = run_adaptive(model->model, factors, acfg);
        if (trace_csv) write_trace_csv(trace, factors, trace_csv);
        if (final_report) {
            EstimateReport report;
            report.estimator = EstimatorId::Saltenis;
            report.variance_y = 0.0;
            const auto& last = trace.final();
            for (int j = 0; j < factors; ++j)
                report.factors.push_back({last.total_effect[static_cast<std::size_t>(j)],
                                          std::nullopt,
                                          last.pair_counts[static_cast<std::size_t>(j)]});
            *final_report = make_report(std::move(report));
        }
    });
}

gsa_status gsa_bench_run(const char* config_path, const char* results_csv, int* any_infeasible) {
    if (!config_path || !results_csv) return arg_error("path is null");
    return guarded([&] {
        const BenchmarkSpec spec = parse_bench_config(config_path);
        const BenchmarkTable table = run_benchmark(spec);
        write_bench_csv(table, results_csv);
        if (any_infeasible) *any_infeasible = table.any_infeasible() ? 1 : 0;
    });
}

} // extern "C"
