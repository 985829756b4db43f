// Exercises the shared-library surface the way an external consumer would:
// only gsa/gsa.h, no core headers.
#include <gsa/gsa.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct PointsGuard {
    gsa_points* p = nullptr;
    ~PointsGuard() { gsa_points_free(p); }
};

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::strcmp(gsa_status_name(GSA_OK), "ok") == 0);
    CHECK(std::strcmp(gsa_status_name(GSA_ERR_CAPACITY), "capacity") == 0);
    CHECK(gsa_version() != nullptr);
    CHECK(gsa_sobol_max_dims() >= 64);
}

TEST_CASE("sobol points through the C API") {
    PointsGuard pts;
    REQUIRE(gsa_points_sobol(2, 3, 1, &pts.p) == GSA_OK);
    CHECK(gsa_points_dims(pts.p) == 2);
    CHECK(gsa_points_count(pts.p) == 3);
    double v = 0.0;
    REQUIRE(gsa_points_get(pts.p, 0, 0, &v) == GSA_OK);
    CHECK(v == 0.5);
    REQUIRE(gsa_points_get(pts.p, 1, 1, &v) == GSA_OK);
    CHECK(v == 0.25);
    CHECK(gsa_points_get(pts.p, 5, 0, &v) == GSA_ERR_ARGUMENT);

    gsa_points* bad = nullptr;
    CHECK(gsa_points_sobol(0, 3, 1, &bad) == GSA_ERR_ARGUMENT);
    CHECK(gsa_points_sobol(100000, 3, 1, &bad) == GSA_ERR_CAPACITY);
    CHECK(gsa_last_error()[0] != '\0');
}

TEST_CASE("randomize, write, read, discrepancy") {
    PointsGuard pts;
    REQUIRE(gsa_points_sobol(6, 128, 1, &pts.p) == GSA_OK);
    PointsGuard shuffled;
    REQUIRE(gsa_points_randomize(pts.p, 42, 0, &shuffled.p) == GSA_OK);
    double d0 = 0.0, d1 = 0.0;
    REQUIRE(gsa_points_l2_discrepancy(pts.p, &d0) == GSA_OK);
    REQUIRE(gsa_points_l2_discrepancy(shuffled.p, &d1) == GSA_OK);
    CHECK(d0 == doctest::Approx(d1).epsilon(1e-12));

    REQUIRE(gsa_points_write_csv(pts.p, "capi_points.csv") == GSA_OK);
    PointsGuard back;
    REQUIRE(gsa_points_read_csv("capi_points.csv", &back.p) == GSA_OK);
    CHECK(gsa_points_count(back.p) == 128);
    CHECK(gsa_points_read_csv("no/such/file.csv", &back.p) == GSA_ERR_IO);
}

TEST_CASE("budget, reuse and plan") {
    gsa_budget budget{};
    REQUIRE(gsa_design_budget(6, 2, 64, "asym", &budget) == GSA_OK);
    CHECK(budget.total_runs == 448);
    CHECK(budget.total_effects == 384);
    CHECK(budget.explored == 128);
    CHECK(gsa_design_budget(6, 2, 64, "diagonal", &budget) == GSA_ERR_ARGUMENT);

    int64_t base = 0, donor = 0, runs = 0;
    REQUIRE(gsa_reuse_counts(3, 4, 1, "sym", &base, &donor, &runs) == GSA_OK);
    CHECK(base == 10);
    CHECK(donor == 10);
    REQUIRE(gsa_reuse_counts(3, 2, 1, "asym", &base, &donor, &runs) == GSA_OK);
    CHECK(base == 3);
    CHECK(donor == 1);

    const int candidates[] = {2, 3, 10};
    gsa_plan_row rows[3];
    size_t count = 0;
    REQUIRE(gsa_plan(6, 500, "sym", candidates, 3, 0.0, 1, rows, &count) == GSA_OK);
    REQUIRE(count == 3);
    CHECK(rows[0].rows == 32);
    CHECK(rows[0].budget.total_runs == 448);
    CHECK(rows[1].budget.total_runs == 624);
    CHECK(rows[2].budget.total_runs == 550);
    for (size_t i = 0; i < count; ++i) {
        CHECK(rows[i].feasible == 1);
        CHECK(std::isfinite(rows[i].discrepancy));
        CHECK(rows[i].discrepancy > 0.0);
    }
}

TEST_CASE("design, model, estimate round trip through files") {
    gsa_design* design = nullptr;
    REQUIRE(gsa_design_build(2, 2, 256, "sym", 7, 1, &design) == GSA_OK);
    CHECK(gsa_design_runs(design) == 2 * 256 * 3);
    REQUIRE(gsa_design_write_csv(design, "capi_runs.csv", "capi_pairs.csv") == GSA_OK);

    gsa_model* model = nullptr;
    const double a[] = {0.0, 0.0};
    REQUIRE(gsa_model_g(a, 2, &model) == GSA_OK);
    double value = 0.0;
    const double x[] = {0.25, 0.75};
    REQUIRE(gsa_model_eval_point(model, x, 2, &value) == GSA_OK);
    CHECK(value == doctest::Approx(1.0));
    REQUIRE(gsa_model_eval_csv(model, "capi_runs.csv", "capi_y.csv") == GSA_OK);

    gsa_report* report = nullptr;
    REQUIRE(gsa_estimate_csv("capi_runs.csv", "capi_pairs.csv", "capi_y.csv", "saltenis", 1,
                             &report) == GSA_OK);
    REQUIRE(gsa_report_factors(report) == 2);
    CHECK(gsa_report_variance(report) > 0.0);
    double t = 0.0, s = 0.0;
    int64_t pairs = 0;
    for (int j = 0; j < 2; ++j) {
        REQUIRE(gsa_report_total(report, j, &t) == GSA_OK);
        REQUIRE(gsa_report_first(report, j, &s) == GSA_OK);
        REQUIRE(gsa_report_pairs_used(report, j, &pairs) == GSA_OK);
        CHECK(std::abs(t - 4.0 / 7.0) < 0.05);
        CHECK(std::abs(s - 3.0 / 7.0) < 0.05);
        CHECK(pairs == 512);
    }
    REQUIRE(gsa_report_write_json(report, "capi_report.json") == GSA_OK);
    std::ifstream json("capi_report.json");
    CHECK(json.good());
    gsa_report_free(report);

    // estimation straight from the in-memory design
    std::vector<double> y(static_cast<size_t>(gsa_design_runs(design)));
    for (size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 17) * 0.1;
    gsa_report* report2 = nullptr;
    REQUIRE(gsa_estimate(design, y.data(), y.size(), "corr", 0, &report2) == GSA_OK);
    CHECK(gsa_report_first(report2, 0, &s) == GSA_ERR_ARGUMENT);
    gsa_report_free(report2);

    gsa_design* reread = nullptr;
    REQUIRE(gsa_design_read_csv("capi_runs.csv", "capi_pairs.csv", &reread) == GSA_OK);
    CHECK(gsa_design_runs(reread) == gsa_design_runs(design));
    CHECK(gsa_design_pairs(reread) == gsa_design_pairs(design));
    gsa_design_free(reread);
    gsa_design_free(design);
    gsa_model_free(model);
}

TEST_CASE("analytic helper") {
    const double a[] = {0.0, 0.0};
    double s[2], t[2], variance = 0.0;
    REQUIRE(gsa_g_analytic(a, 2, s, t, &variance) == GSA_OK);
    CHECK(s[0] == doctest::Approx(3.0 / 7.0));
    CHECK(t[1] == doctest::Approx(4.0 / 7.0));
    CHECK(variance == doctest::Approx(7.0 / 9.0));
}

TEST_CASE("adaptive run through the C API") {
    gsa_model* model = nullptr;
    const double a[] = {0.5, 3.9, 9.99};
    REQUIRE(gsa_model_g(a, 3, &model) == GSA_OK);
    gsa_adaptive_config cfg;
    gsa_adaptive_config_init(&cfg);
    CHECK(cfg.warmup_rows == 32);
    CHECK(cfg.delta == doctest::Approx(1e-4));
    CHECK(cfg.window == 19);
    cfg.total_budget = 600;
    cfg.seed = 5;
    cfg.sequence_seed = 5;
    gsa_report* report = nullptr;
    REQUIRE(gsa_adaptive_run(model, 3, &cfg, "capi_trace.csv", &report) == GSA_OK);
    REQUIRE(report != nullptr);
    double t = 0.0;
    REQUIRE(gsa_report_total(report, 0, &t) == GSA_OK);
    CHECK(t > 0.5);
    gsa_report_free(report);

    cfg.total_budget = 10;  // below warm-up
    CHECK(gsa_adaptive_run(model, 3, &cfg, nullptr, nullptr) == GSA_ERR_ARGUMENT);
    gsa_model_free(model);
}

TEST_CASE("benchmark run through the C API") {
    {
        std::ofstream out("capi_bench.cfg");
        out << "model = g\na = 0.0, 9.0\nk = 2\ngrid = 48, 96\nreps = 2\nseed = 3\n"
            << "contenders = asym2-saltenis, sym2-saltenis\n";
    }
    int infeasible = -1;
    REQUIRE(gsa_bench_run("capi_bench.cfg", "capi_bench.csv", &infeasible) == GSA_OK);
    CHECK(infeasible == 0);
    std::ifstream in("capi_bench.csv");
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header.rfind("contender,", 0) == 0);
    CHECK(gsa_bench_run("missing.cfg", "capi_bench.csv", &infeasible) == GSA_ERR_IO);
}
