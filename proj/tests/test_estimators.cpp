#include "design.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "models.hpp"
#include "sobol.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <span>

using namespace gsa;

namespace {

EvaluatedSchedule evaluate(const RunSchedule& schedule,
                           const std::function<double(std::span<const double>)>& f) {
    EvaluatedSchedule ev{schedule, {}, "test"};
    for (std::size_t r = 0; r < schedule.run_count(); ++r) ev.y.push_back(f(schedule.point(r)));
    return ev;
}

} // namespace

TEST_CASE("total variance over base rows") {
    DesignConfig cfg{1, 2, 2, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 0));
    EvaluatedSchedule ev{schedule, {0.0, 1.0, 5.0, 7.0}, "t"};  // A rows carry 0 and 1
    CHECK(total_variance(ev) == doctest::Approx(0.5));

    DesignConfig cfg4{1, 2, 4, Scheme::Asymmetric};
    auto [sched4, pairs4] = build_schedule(cfg4, sobol_bases(cfg4, 0));
    EvaluatedSchedule ev4{sched4, {1.0, 2.0, 3.0, 4.0, 9.0, 9.0, 9.0, 9.0}, "t"};
    CHECK(total_variance(ev4) == doctest::Approx(5.0 / 3.0));

    EvaluatedSchedule constant{sched4, std::vector<double>(8, 2.0), "t"};
    CHECK(total_variance(constant) == 0.0);
    CHECK_THROWS_AS(saltenis_total(constant, pairs4), Error);
}

TEST_CASE("symmetric designs pool all base matrices into the variance") {
    DesignConfig cfg{1, 2, 2, Scheme::Symmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 0));
    // rows: A0 A1 B0 B1 then hybrids
    std::vector<double> y(schedule.run_count(), 0.0);
    y[0] = 1.0;
    y[1] = 2.0;
    y[2] = 3.0;
    y[3] = 4.0;
    EvaluatedSchedule ev{schedule, y, "t"};
    CHECK(total_variance(ev) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("saltenis hand-worked example") {
    // base outputs 0 and 2 give variance 2; the two factor-1 pairs carry
    // differences 1 and 2, so the numerator is (1 + 4) / 4 = 1.25
    DesignConfig cfg{1, 2, 2, Scheme::Asymmetric};
    auto [schedule, ignored] = build_schedule(cfg, sobol_bases(cfg, 0));
    EvaluatedSchedule ev{schedule, {0.0, 2.0, 1.0, 4.0}, "t"};
    EffectPairIndex pairs;
    pairs.factors = 1;
    pairs.pairs = {{{2, 0}, {3, 1}}};
    const auto report = saltenis_total(ev, pairs);
    CHECK(report.variance_y == doctest::Approx(2.0));
    CHECK(report.factors[0].total_effect == doctest::Approx(0.625));
    CHECK(report.factors[0].pairs_used == 2);
}

TEST_CASE("an empty pair list is rejected") {
    DesignConfig cfg{1, 2, 4, Scheme::Asymmetric};
    auto [schedule, ignored] = build_schedule(cfg, sobol_bases(cfg, 0));
    EvaluatedSchedule ev{schedule, {0.0, 1.0, 2.0, 3.0, 0.5, 0.5, 0.5, 0.5}, "t"};
    EffectPairIndex pairs;
    pairs.factors = 1;
    pairs.pairs.resize(1);
    CHECK_THROWS_AS(saltenis_total(ev, pairs), Error);
    CHECK_THROWS_AS(correlation_total(ev, pairs, false), Error);
}

TEST_CASE("a factor with identical pair outputs has zero total effect") {
    DesignConfig cfg{2, 2, 64, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 1));
    const auto ev = evaluate(schedule, [](std::span<const double> x) { return x[0]; });
    const auto report = saltenis_total(ev, pairs);
    CHECK(report.factors[1].total_effect == 0.0);
    CHECK(report.factors[0].total_effect > 0.5);
}

TEST_CASE("saltenis is invariant under swapping pair order") {
    DesignConfig cfg{3, 2, 16, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 3));
    const GFunctionSpec g{{0.5, 2.0, 9.0}};
    const auto ev = evaluate(schedule, [&](std::span<const double> x) { return g_function(x, g); });
    const auto direct = saltenis_total(ev, pairs);
    EffectPairIndex swapped = pairs;
    for (auto& list : swapped.pairs)
        for (auto& [u, v] : list) std::swap(u, v);
    const auto reversed = saltenis_total(ev, swapped);
    for (int j = 0; j < 3; ++j)
        CHECK(direct.factors[static_cast<std::size_t>(j)].total_effect ==
              reversed.factors[static_cast<std::size_t>(j)].total_effect);
}

TEST_CASE("estimates are invariant under shifting and scaling the output") {
    DesignConfig cfg{3, 2, 32, Scheme::Symmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 5));
    const GFunctionSpec g{{0.0, 1.0, 4.0}};
    const auto base = evaluate(schedule, [&](std::span<const double> x) { return g_function(x, g); });

    auto transformed = [&](double scale, double shift) {
        EvaluatedSchedule ev = base;
        for (double& v : ev.y) v = scale * v + shift;
        return ev;
    };

    for (const bool corrected : {false, true}) {
        const auto r0 = correlation_total(base, pairs, corrected);
        const auto r1 = correlation_total(transformed(1.0, 3.0), pairs, corrected);
        const auto r2 = correlation_total(transformed(2.5, 0.0), pairs, corrected);
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(r1.factors[static_cast<std::size_t>(j)].total_effect -
                           r0.factors[static_cast<std::size_t>(j)].total_effect) < 1e-10);
            CHECK(std::abs(r2.factors[static_cast<std::size_t>(j)].total_effect -
                           r0.factors[static_cast<std::size_t>(j)].total_effect) < 1e-10);
        }
    }
    const auto s0 = saltenis_total(base, pairs);
    const auto s1 = saltenis_total(transformed(1.0, 3.0), pairs);
    const auto s2 = saltenis_total(transformed(2.5, 0.0), pairs);
    const auto f0 = first_order(base, EstimatorId::Saltenis);
    const auto f1 = first_order(transformed(1.0, 3.0), EstimatorId::Saltenis);
    const auto f2 = first_order(transformed(2.5, 0.0), EstimatorId::Saltenis);
    for (int j = 0; j < 3; ++j) {
        const auto u = static_cast<std::size_t>(j);
        CHECK(std::abs(s1.factors[u].total_effect - s0.factors[u].total_effect) < 1e-10);
        CHECK(std::abs(s2.factors[u].total_effect - s0.factors[u].total_effect) < 1e-10);
        CHECK(std::abs(*f1.factors[u].first_order - *f0.factors[u].first_order) < 1e-10);
        CHECK(std::abs(*f2.factors[u].first_order - *f0.factors[u].first_order) < 1e-10);
    }
}

TEST_CASE("correlation estimator on hand-made couples") {
    DesignConfig cfg{1, 2, 2, Scheme::Asymmetric};
    auto [schedule, ignored] = build_schedule(cfg, sobol_bases(cfg, 0));
    EffectPairIndex pairs;
    pairs.factors = 1;
    pairs.pairs = {{{0, 2}, {1, 3}}};  // couple vectors (y0,y1) vs (y2,y3)

    // identical vectors: rho = 1, T = 0
    EvaluatedSchedule same{schedule, {1.0, 2.0, 1.0, 2.0}, "t"};
    CHECK(correlation_total(same, pairs, false).factors[0].total_effect ==
          doctest::Approx(0.0).epsilon(1e-12));

    // anti-ordered vectors: rho = -1, raw estimate T = 2 is reported as-is
    EvaluatedSchedule anti{schedule, {0.0, 1.0, 1.0, 0.0}, "t"};
    CHECK(correlation_total(anti, pairs, false).factors[0].total_effect == doctest::Approx(2.0));

    // constant couple member
    EvaluatedSchedule flat{schedule, {1.0, 1.0, 0.0, 2.0}, "t"};
    CHECK_THROWS_AS(correlation_total(flat, pairs, false), Error);
}

TEST_CASE("asymmetric designs have no spurious couples so correction is a no-op") {
    DesignConfig cfg{2, 2, 64, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 9));
    const GFunctionSpec g{{0.5, 3.0}};
    const auto ev = evaluate(schedule, [&](std::span<const double> x) { return g_function(x, g); });
    const auto plain = correlation_total(ev, pairs, false);
    const auto corrected = correlation_total(ev, pairs, true);
    for (int j = 0; j < 2; ++j)
        CHECK(plain.factors[static_cast<std::size_t>(j)].total_effect ==
              corrected.factors[static_cast<std::size_t>(j)].total_effect);
}

TEST_CASE("converges to the analytic two-factor G indices") {
    const GFunctionSpec g{{0.0, 0.0}};
    // total effects on the asymmetric design
    DesignConfig cfg{2, 2, 8192, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 0));
    const auto ev = evaluate(schedule, [&](std::span<const double> x) { return g_function(x, g); });
    const auto report = saltenis_total(ev, pairs);
    CHECK(report.factors[0].total_effect == doctest::Approx(4.0 / 7.0).epsilon(0.035));
    CHECK(std::abs(report.factors[0].total_effect - 4.0 / 7.0) < 0.02);
    CHECK(std::abs(report.factors[1].total_effect - 4.0 / 7.0) < 0.02);

    // first order needs donor base evaluations: symmetric n=2
    DesignConfig scfg{2, 2, 8192, Scheme::Symmetric};
    auto [ssched, spairs] = build_schedule(scfg, sobol_bases(scfg, 0));
    const auto sev = evaluate(ssched, [&](std::span<const double> x) { return g_function(x, g); });
    const auto sreport = first_order(sev, EstimatorId::Saltenis);
    CHECK(std::abs(*sreport.factors[0].first_order - 3.0 / 7.0) < 0.02);
    CHECK(std::abs(*sreport.factors[1].first_order - 3.0 / 7.0) < 0.02);
}

TEST_CASE("first order vanishes for an inert factor") {
    DesignConfig cfg{2, 2, 1024, Scheme::Symmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 2));
    const auto ev = evaluate(schedule, [](std::span<const double> x) { return x[0]; });
    const auto report = first_order(ev, EstimatorId::Saltenis);
    CHECK(std::abs(*report.factors[1].first_order) < 0.05);
    CHECK(*report.factors[0].first_order == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("additive model: S matches T and first orders sum to one") {
    DesignConfig cfg{2, 2, 4096, Scheme::Symmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 4));
    const auto ev = evaluate(schedule, [](std::span<const double> x) { return x[0] + x[1]; });
    const auto total = saltenis_total(ev, pairs);
    const auto first = first_order(ev, EstimatorId::Saltenis);
    double sum_s = 0.0;
    for (int j = 0; j < 2; ++j) {
        const auto u = static_cast<std::size_t>(j);
        CHECK(std::abs(total.factors[u].total_effect - *first.factors[u].first_order) < 0.03);
        sum_s += *first.factors[u].first_order;
    }
    CHECK(sum_s == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("first order requires donor base evaluations") {
    DesignConfig cfg{2, 2, 16, Scheme::Asymmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 6));
    const auto ev = evaluate(schedule, [](std::span<const double> x) { return x[0] + x[1]; });
    CHECK_THROWS_AS(first_order(ev, EstimatorId::Saltenis), Error);
}

TEST_CASE("exhaustive corner pairs reproduce the exact conditional variance") {
    const auto corner_f = [](const std::vector<double>& x) {
        double v = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) v += (2.0 + static_cast<double>(j)) * x[j];
        v += 5.0 * x[0] * (x.size() > 1 ? x[1] : 1.0) * (x.size() > 2 ? x[2] : 1.0);
        return v;
    };
    for (int k = 1; k <= 3; ++k) {
        const std::size_t corners = 1u << k;
        // base matrix: every corner listed twice; donor matrix: all-zero rows
        // then all-one rows, so pairs enumerate every (corner, donor value)
        PointSet a, b;
        a.dims = b.dims = k;
        for (int r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < corners; ++c)
                for (int j = 0; j < k; ++j) {
                    a.data.push_back(static_cast<double>((c >> j) & 1));
                    b.data.push_back(static_cast<double>(r));
                }
        DesignConfig cfg{k, 2, 2 * corners, Scheme::Asymmetric};
        auto [schedule, pairs] = build_schedule(cfg, {a, b});
        EvaluatedSchedule ev{schedule, {}, "corner"};
        for (std::size_t r = 0; r < schedule.run_count(); ++r) {
            const auto p = schedule.point(r);
            ev.y.push_back(corner_f(std::vector<double>(p.begin(), p.end())));
        }
        const auto report = saltenis_total(ev, pairs);
        for (int j = 0; j < k; ++j) {
            const double numerator =
                report.factors[static_cast<std::size_t>(j)].total_effect * report.variance_y;
            const double exact = oracles::corner_conditional_variance(corner_f, k, j);
            CHECK(std::abs(numerator - exact) < 1e-12);
        }
    }
}

TEST_CASE("conditional decomposition identity holds under quadrature") {
    const GFunctionSpec g{{0.3, 1.7}};
    const auto quad = oracles::quadrature_2d(
        [&](double x, double y) { return g_function(std::vector<double>{x, y}, g); }, 256);
    for (int axis = 0; axis < 2; ++axis) {
        const double lhs = quad.var_of_mean[axis] + quad.mean_of_var[axis];
        CHECK(std::abs(lhs - quad.variance) / quad.variance < 1e-3);
    }
}

TEST_CASE("report JSON serialisation") {
    DesignConfig cfg{2, 2, 8, Scheme::Symmetric};
    auto [schedule, pairs] = build_schedule(cfg, sobol_bases(cfg, 8));
    const auto ev = evaluate(schedule, [](std::span<const double> x) { return x[0] * 2 + x[1]; });
    auto report = saltenis_total(ev, pairs);
    report.factors[0].first_order = 0.5;
    write_report_json(report, "estimators_report.json");
    std::ifstream in("estimators_report.json");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"estimator_id\": \"saltenis\"") != std::string::npos);
    CHECK(text.find("\"variance_Y\"") != std::string::npos);
    CHECK(text.find("\"S\": 0.5") != std::string::npos);
    CHECK(text.find("\"pairs_used\"") != std::string::npos);
}
