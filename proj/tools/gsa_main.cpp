// gsa - command line front end over the shared-library C API.
#include <gsa/gsa.h>

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

int die(gsa_status status) {
    std::fprintf(stderr, "gsa: %s error: %s\n", gsa_status_name(status), gsa_last_error());
    return 1;
}

#define CHECK(call)                         \
    do {                                    \
        const gsa_status rc_ = (call);      \
        if (rc_ != GSA_OK) return die(rc_); \
    } while (0)

std::vector<double> parse_a_list(const std::string& csv) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(std::stod(cur));
            cur.clear();
        }
    };
    for (char c : csv) {
        if (c == ',')
            flush();
        else
            cur += c;
    }
    flush();
    return out;
}

struct ModelHandle {
    gsa_model* ptr = nullptr;
    ~ModelHandle() { gsa_model_free(ptr); }
};

int make_model(const std::string& id, const std::string& a_csv, int k, const std::string& command,
               const std::string& in_path, const std::string& out_path, double timeout,
               ModelHandle& model) {
    if (id == "g") {
        const std::vector<double> a = parse_a_list(a_csv);
        if (a.empty()) {
            std::fprintf(stderr, "gsa: model g needs --a\n");
            return 1;
        }
        if (k != 0 && k != static_cast<int>(a.size())) {
            std::fprintf(stderr, "gsa: --k disagrees with the length of --a\n");
            return 1;
        }
        CHECK(gsa_model_g(a.data(), static_cast<int>(a.size()), &model.ptr));
    } else if (id == "external") {
        if (command.empty() || k == 0) {
            std::fprintf(stderr, "gsa: external model needs --command and --k\n");
            return 1;
        }
        CHECK(gsa_model_external(command.c_str(), in_path.c_str(), out_path.c_str(), timeout, k,
                                 &model.ptr));
    } else {
        if (k == 0) {
            std::fprintf(stderr, "gsa: model %s needs --k\n", id.c_str());
            return 1;
        }
        CHECK(gsa_model_builtin(id.c_str(), k, &model.ptr));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variance-based sensitivity analysis toolkit"};
    app.require_subcommand(1);

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "generate Sobol' points as CSV");
    int s_dims = 0;
    std::size_t s_count = 0;
    std::uint64_t s_skip = 1, s_seed = 0;
    bool s_shift = false;
    std::string s_out;
    sample->add_option("--dims", s_dims)->required();
    sample->add_option("--count", s_count)->required();
    sample->add_option("--skip", s_skip, "first sequence index (default 1)");
    sample->add_option("--seed", s_seed, "column randomization seed (omit for raw sequence)");
    sample->add_flag("--shift", s_shift, "add a seed-derived digital shift");
    sample->add_option("--out", s_out)->required();

    // ---- discrepancy ----
    auto* disc = app.add_subcommand("discrepancy", "L2 discrepancy of a points CSV");
    std::string d_in;
    disc->add_option("--in", d_in)->required();

    // ---- design ----
    auto* design = app.add_subcommand("design", "write runs.csv and pairs.csv for a design");
    int g_k = 0, g_n = 2;
    std::int64_t g_rows = 0;
    std::string g_scheme = "asym", g_dir = ".";
    std::uint64_t g_seed = 0, g_skip = 1;
    design->add_option("--k", g_k)->required();
    design->add_option("--n", g_n, "number of base matrices (default 2)");
    design->add_option("--rows", g_rows, "rows per base matrix N")->required();
    design->add_option("--scheme", g_scheme, "sym|asym (default asym)");
    design->add_option("--seed", g_seed, "column randomization seed (0 = none)");
    design->add_option("--skip", g_skip, "first sequence index (default 1)");
    design->add_option("--out", g_dir, "output directory")->required();

    // ---- plan ----
    auto* plan = app.add_subcommand("plan", "feasible (n, N) designs for a run budget");
    int p_k = 0;
    std::int64_t p_budget = 0;
    std::string p_scheme = "sym";
    int p_nmax = 10;
    bool p_no_disc = false;
    plan->add_option("--k", p_k)->required();
    plan->add_option("--budget", p_budget, "target total runs N_T")->required();
    plan->add_option("--scheme", p_scheme, "sym|asym (default sym)");
    plan->add_option("--n-max", p_nmax, "largest matrix count to consider (default 10)");
    plan->add_flag("--no-discrepancy", p_no_disc, "skip the discrepancy column");

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "evaluate a model over runs.csv");
    std::string e_model = "g", e_a, e_runs, e_out, e_cmd, e_in_path = "model_input.csv",
                e_out_path = "model_output.csv";
    int e_k = 0;
    double e_timeout = 0.0;
    eval->add_option("--model", e_model, "g|sum|x1|external (default g)");
    eval->add_option("--a", e_a, "comma-separated G coefficients");
    eval->add_option("--k", e_k, "factor count (non-g models)");
    eval->add_option("--command", e_cmd, "external model command");
    eval->add_option("--model-input", e_in_path, "external protocol input CSV path");
    eval->add_option("--model-output", e_out_path, "external protocol output path");
    eval->add_option("--timeout", e_timeout, "external model timeout seconds");
    eval->add_option("--runs", e_runs)->required();
    eval->add_option("--out", e_out)->required();

    // ---- estimate ----
    auto* estimate = app.add_subcommand("estimate", "sensitivity indices from evaluated runs");
    std::string t_runs, t_pairs, t_y, t_est = "saltenis", t_out;
    bool t_first = false;
    estimate->add_option("--runs", t_runs)->required();
    estimate->add_option("--pairs", t_pairs)->required();
    estimate->add_option("--y", t_y)->required();
    estimate->add_option("--estimator", t_est, "saltenis|corr|corr-corrected (default saltenis)");
    estimate->add_flag("--first-order", t_first, "also estimate S_j");
    estimate->add_option("--out", t_out, "report JSON path")->required();

    // ---- adaptive ----
    auto* adaptive = app.add_subcommand("adaptive", "Russian-roulette total-effect sampling");
    std::string a_model = "g", a_a, a_trace;
    int a_k = 0;
    std::uint64_t a_budget = 0, a_nts = 32, a_seed = 0;
    double a_delta = 1e-4, a_floor = 1e-6;
    int a_p = 19;
    adaptive->add_option("--model", a_model, "g|sum|x1 (default g)");
    adaptive->add_option("--a", a_a, "comma-separated G coefficients");
    adaptive->add_option("--k", a_k, "factor count");
    adaptive->add_option("--budget", a_budget, "total model evaluations")->required();
    adaptive->add_option("--nts", a_nts, "warm-up rows (default 32)");
    adaptive->add_option("--delta", a_delta, "oscillation threshold (default 1e-4)");
    adaptive->add_option("--p", a_p, "trailing window length (default 19)");
    adaptive->add_option("--floor", a_floor, "selection probability floor (default 1e-6)");
    adaptive->add_option("--seed", a_seed, "roulette and randomization seed");
    adaptive->add_option("--trace", a_trace, "trace CSV path")->required();

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "MAE-vs-cost benchmark from a config file");
    std::string b_cfg, b_out;
    bench->add_option("--config", b_cfg)->required();
    bench->add_option("--out", b_out)->required();

    CLI11_PARSE(app, argc, argv);

    if (*sample) {
        gsa_points* raw = nullptr;
        CHECK(gsa_points_sobol(s_dims, s_count, s_skip, &raw));
        gsa_points* final_pts = raw;
        if (sample->count("--seed") > 0) {
            gsa_points* randomized = nullptr;
            const gsa_status rc = gsa_points_randomize(raw, s_seed, s_shift ? 1 : 0, &randomized);
            if (rc != GSA_OK) {
                gsa_points_free(raw);
                return die(rc);
            }
            gsa_points_free(raw);
            final_pts = randomized;
        }
        const gsa_status rc = gsa_points_write_csv(final_pts, s_out.c_str());
        gsa_points_free(final_pts);
        if (rc != GSA_OK) return die(rc);
        return 0;
    }

    if (*disc) {
        gsa_points* pts = nullptr;
        CHECK(gsa_points_read_csv(d_in.c_str(), &pts));
        double value = 0.0;
        const gsa_status rc = gsa_points_l2_discrepancy(pts, &value);
        gsa_points_free(pts);
        if (rc != GSA_OK) return die(rc);
        std::printf("%.6g\n", value);
        return 0;
    }

    if (*design) {
        gsa_design* d = nullptr;
        CHECK(gsa_design_build(g_k, g_n, g_rows, g_scheme.c_str(), g_seed, g_skip, &d));
        const std::string runs = g_dir + "/runs.csv";
        const std::string pairs = g_dir + "/pairs.csv";
        const gsa_status rc = gsa_design_write_csv(d, runs.c_str(), pairs.c_str());
        const std::int64_t n_runs = gsa_design_runs(d);
        const std::int64_t n_pairs = gsa_design_pairs(d);
        gsa_design_free(d);
        if (rc != GSA_OK) return die(rc);
        std::printf("wrote %s (%" PRId64 " runs) and %s (%" PRId64 " pairs)\n", runs.c_str(),
                    n_runs, pairs.c_str(), n_pairs);
        return 0;
    }

    if (*plan) {
        if (p_scheme == "asym" && plan->count("--n-max") == 0) p_nmax = 2;
        std::vector<int> candidates;
        for (int n = 2; n <= p_nmax; ++n) candidates.push_back(n);
        std::vector<gsa_plan_row> rows(candidates.size());
        size_t count = 0;
        CHECK(gsa_plan(p_k, p_budget, p_scheme.c_str(), candidates.data(), candidates.size(), 0.0,
                       p_no_disc ? 0 : 1, rows.data(), &count));
        std::printf("%6s %4s %8s %8s %8s %6s %10s\n", "N", "n", "N_T", "E_T", "e", "nN", "D");
        for (size_t i = 0; i < count; ++i) {
            const gsa_plan_row& r = rows[i];
            if (!r.feasible) {
                std::printf("%6s %4d %8s %8s %8s %6s %10s\n", "-", r.matrices, "-", "-", "-", "-",
                            "infeasible");
                continue;
            }
            std::printf("%6" PRId64 " %4d %8" PRId64 " %8" PRId64 " %8.3f %6" PRId64 " ",
                        r.rows, r.matrices, r.budget.total_runs, r.budget.total_effects,
                        r.budget.economy, r.budget.explored);
            if (std::isnan(r.discrepancy))
                std::printf("%10s\n", "-");
            else
                std::printf("%10.2g\n", r.discrepancy);
        }
        return 0;
    }

    if (*eval) {
        ModelHandle model;
        if (const int rc = make_model(e_model, e_a, e_k, e_cmd, e_in_path, e_out_path, e_timeout, model))
            return rc;
        CHECK(gsa_model_eval_csv(model.ptr, e_runs.c_str(), e_out.c_str()));
        return 0;
    }

    if (*estimate) {
        gsa_report* report = nullptr;
        CHECK(gsa_estimate_csv(t_runs.c_str(), t_pairs.c_str(), t_y.c_str(), t_est.c_str(),
                               t_first ? 1 : 0, &report));
        const gsa_status rc = gsa_report_write_json(report, t_out.c_str());
        gsa_report_free(report);
        if (rc != GSA_OK) return die(rc);
        return 0;
    }

    if (*adaptive) {
        ModelHandle model;
        if (const int rc = make_model(a_model, a_a, a_k, "", "", "", 0.0, model)) return rc;
        const int factors = a_k ? a_k : static_cast<int>(parse_a_list(a_a).size());
        gsa_adaptive_config cfg;
        gsa_adaptive_config_init(&cfg);
        cfg.warmup_rows = a_nts;
        cfg.delta = a_delta;
        cfg.window = a_p;
        cfg.total_budget = a_budget;
        cfg.probability_floor = a_floor;
        cfg.seed = a_seed;
        cfg.sequence_seed = a_seed;
        CHECK(gsa_adaptive_run(model.ptr, factors, &cfg, a_trace.c_str(), nullptr));
        return 0;
    }

    if (*bench) {
        int infeasible = 0;
        CHECK(gsa_bench_run(b_cfg.c_str(), b_out.c_str(), &infeasible));
        if (infeasible) {
            std::fprintf(stderr, "gsa: some contender rows are infeasible (flagged in %s)\n",
                         b_out.c_str());
            return 2;
        }
        return 0;
    }

    return 0;
}
