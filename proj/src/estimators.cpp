#include "estimators.hpp"

#include "csv.hpp"
#include "error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>

namespace gsa {

const char* estimator_name(EstimatorId id) {
    switch (id) {
        case EstimatorId::Saltenis: return "saltenis";
        case EstimatorId::Correlation: return "correlation";
        case EstimatorId::CorrelationCorrected: return "correlation_corrected";
    }
    return "?";
}

std::optional<EstimatorId> parse_estimator(const std::string& name) {
    if (name == "saltenis") return EstimatorId::Saltenis;
    if (name == "corr" || name == "correlation") return EstimatorId::Correlation;
    if (name == "corr-corrected" || name == "correlation_corrected")
        return EstimatorId::CorrelationCorrected;
    return std::nullopt;
}

static void check_lengths(const EvaluatedSchedule& ev) {
    if (ev.y.size() != ev.schedule.run_count())
        fail(ErrorKind::Argument, "evaluated schedule: y length " + std::to_string(ev.y.size()) +
                                      " does not match " + std::to_string(ev.schedule.run_count()) +
                                      " runs");
    for (double v : ev.y)
        if (!std::isfinite(v)) fail(ErrorKind::Argument, "evaluated schedule: non-finite output");
}

double total_variance(const EvaluatedSchedule& ev) {
    check_lengths(ev);
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < ev.schedule.rows.size(); ++r)
        if (ev.schedule.rows[r].tag.is_base()) {
            ++count;
            mean += (ev.y[r] - mean) / static_cast<double>(count);
        }
    if (count < 2) fail(ErrorKind::Argument, "total_variance: fewer than 2 base rows");
    double ss = 0.0;
    for (std::size_t r = 0; r < ev.schedule.rows.size(); ++r)
        if (ev.schedule.rows[r].tag.is_base()) {
            const double d = ev.y[r] - mean;
            ss += d * d;
        }
    return ss / static_cast<double>(count - 1);
}

EstimateReport saltenis_total(const EvaluatedSchedule& ev, const EffectPairIndex& pairs) {
    check_lengths(ev);
    const double variance = total_variance(ev);
    if (variance <= 0.0)
        fail(ErrorKind::DegenerateModel, "saltenis_total: model output has zero variance");

    EstimateReport report;
    report.estimator = EstimatorId::Saltenis;
    report.variance_y = variance;
    for (int j = 0; j < pairs.factors; ++j) {
        const auto& list = pairs.pairs[static_cast<std::size_t>(j)];
        if (list.empty())
            fail(ErrorKind::Argument, "saltenis_total: no pairs for factor " + std::to_string(j + 1));
        double sum = 0.0;
        for (const auto& [u, v] : list) {
            const double d = ev.y[u] - ev.y[v];
            sum += d * d;
        }
        const double numerator = sum / (2.0 * static_cast<double>(list.size()));
        report.factors.push_back({numerator / variance, std::nullopt, list.size()});
    }
    return report;
}

namespace {

double pearson(std::span<const double> u, std::span<const double> v) {
    const std::size_t n = u.size();
    if (n < 2) fail(ErrorKind::Argument, "pearson: vector couple needs at least 2 entries");
    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double cov = 0.0, vu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double du = u[i] - mu;
        const double dv = v[i] - mv;
        cov += du * dv;
        vu += du * du;
        vv += dv * dv;
    }
    // (N-1) cancels between the covariance and the variances
    if (vu <= 0.0 || vv <= 0.0)
        fail(ErrorKind::DegenerateModel, "pearson: zero-variance vector");
    return cov / std::sqrt(vu * vv);
}

// y values of family rows i = 0..N-1
std::vector<double> family_values(const EvaluatedSchedule& ev, const RunTag& tag) {
    const std::size_t start = ev.schedule.run_id(tag, 0);
    const std::size_t n = ev.schedule.config.rows;
    return {ev.y.begin() + static_cast<std::ptrdiff_t>(start),
            ev.y.begin() + static_cast<std::ptrdiff_t>(start + n)};
}

// Couples with no shared columns: base vs base, and opposed hybrids
// M_M'^(j) vs M'_M^(j). Only couples actually present in the schedule count.
double mean_spurious_correlation(const EvaluatedSchedule& ev) {
    const auto& sched = ev.schedule;
    const int n = sched.config.matrices;
    const int k = sched.config.factors;
    double sum = 0.0;
    std::size_t count = 0;
    auto has = [&](const RunTag& t) { return sched.family_start.count(t) != 0; };
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = m1 + 1; m2 < n; ++m2) {
            if (has({m1, -1, -1}) && has({m2, -1, -1})) {
                const auto u = family_values(ev, {m1, -1, -1});
                const auto v = family_values(ev, {m2, -1, -1});
                sum += pearson(u, v);
                ++count;
            }
            for (int j = 0; j < k; ++j)
                if (has({m1, m2, j}) && has({m2, m1, j})) {
                    const auto u = family_values(ev, {m1, m2, j});
                    const auto v = family_values(ev, {m2, m1, j});
                    sum += pearson(u, v);
                    ++count;
                }
        }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

} // namespace

EstimateReport correlation_total(const EvaluatedSchedule& ev, const EffectPairIndex& pairs,
                                 bool corrected) {
    check_lengths(ev);
    EstimateReport report;
    report.estimator = corrected ? EstimatorId::CorrelationCorrected : EstimatorId::Correlation;
    report.variance_y = total_variance(ev);

    const double rho0 = corrected ? mean_spurious_correlation(ev) : 0.0;
    if (corrected && !(std::abs(1.0 - rho0) > 1e-12))
        fail(ErrorKind::DegenerateModel, "correlation_total: spurious correlation is 1");

    for (int j = 0; j < pairs.factors; ++j) {
        const auto& list = pairs.pairs[static_cast<std::size_t>(j)];
        if (list.empty())
            fail(ErrorKind::Argument, "correlation_total: no pairs for factor " + std::to_string(j + 1));
        // group the factor's pairs into vector couples by tag couple
        std::vector<std::pair<RunTag, RunTag>> order;
        std::map<std::pair<RunTag, RunTag>, std::pair<std::vector<double>, std::vector<double>>> couples;
        for (const auto& [u, v] : list) {
            const auto key = std::make_pair(ev.schedule.rows[u].tag, ev.schedule.rows[v].tag);
            auto it = couples.find(key);
            if (it == couples.end()) {
                it = couples.emplace(key, std::pair<std::vector<double>, std::vector<double>>{}).first;
                order.push_back(key);
            }
            it->second.first.push_back(ev.y[u]);
            it->second.second.push_back(ev.y[v]);
        }
        double rho_sum = 0.0;
        for (const auto& key : order) {
            const auto& [us, vs] = couples.at(key);
            rho_sum += pearson(us, vs);
        }
        const double rho_mean = rho_sum / static_cast<double>(order.size());
        const double total = corrected ? 1.0 - (rho_mean - rho0) / (1.0 - rho0) : 1.0 - rho_mean;
        report.factors.push_back({total, std::nullopt, list.size()});
    }
    return report;
}

EstimateReport first_order(const EvaluatedSchedule& ev, EstimatorId estimator) {
    check_lengths(ev);
    const auto& sched = ev.schedule;
    const int n = sched.config.matrices;
    const int k = sched.config.factors;
    const std::size_t N = sched.config.rows;
    const double variance = total_variance(ev);
    if (variance <= 0.0)
        fail(ErrorKind::DegenerateModel, "first_order: model output has zero variance");

    auto has = [&](const RunTag& t) { return sched.family_start.count(t) != 0; };
    const double rho0 =
        estimator == EstimatorId::CorrelationCorrected ? mean_spurious_correlation(ev) : 0.0;
    if (estimator == EstimatorId::CorrelationCorrected && !(std::abs(1.0 - rho0) > 1e-12))
        fail(ErrorKind::DegenerateModel, "first_order: spurious correlation is 1");

    EstimateReport report;
    report.estimator = estimator;
    report.variance_y = variance;
    for (int j = 0; j < k; ++j) {
        double acc = 0.0;
        std::size_t families = 0;
        std::size_t used = 0;
        for (int m = 0; m < n; ++m)
            for (int d = 0; d < n; ++d) {
                if (d == m) continue;
                // needs the hybrid M_D^(j) and the donor's own base rows f(d_i)
                if (!has({m, d, j}) || !has({d, -1, -1}) || !has({m, -1, -1})) continue;
                const auto donor_base = family_values(ev, {d, -1, -1});
                const auto hybrid = family_values(ev, {m, d, j});
                if (estimator == EstimatorId::Saltenis) {
                    const auto source_base = family_values(ev, {m, -1, -1});
                    // donor values enter centred so a constant output shift
                    // cancels exactly instead of only in expectation
                    double donor_mean = 0.0;
                    for (std::size_t i = 0; i < N; ++i) donor_mean += donor_base[i];
                    donor_mean /= static_cast<double>(N);
                    double s = 0.0;
                    for (std::size_t i = 0; i < N; ++i)
                        s += (donor_base[i] - donor_mean) * (hybrid[i] - source_base[i]);
                    acc += s / static_cast<double>(N) / variance;
                } else {
                    acc += pearson(donor_base, hybrid);
                }
                ++families;
                used += N;
            }
        if (families == 0)
            fail(ErrorKind::Argument,
                 "first_order: design has no donor base evaluations for factor " + std::to_string(j + 1));
        double s = acc / static_cast<double>(families);
        if (estimator == EstimatorId::CorrelationCorrected) s = (s - rho0) / (1.0 - rho0);
        FactorEstimate est;
        est.total_effect = std::numeric_limits<double>::quiet_NaN();
        est.first_order = s;
        est.pairs_used = used;
        report.factors.push_back(est);
    }
    return report;
}

void write_report_json(const EstimateReport& report, const std::string& path) {
    nlohmann::json doc;
    doc["estimator_id"] = estimator_name(report.estimator);
    doc["variance_Y"] = report.variance_y;
    doc["factors"] = nlohmann::json::array();
    for (std::size_t j = 0; j < report.factors.size(); ++j) {
        nlohmann::json f;
        f["factor"] = j + 1;
        if (!std::isnan(report.factors[j].total_effect)) f["T"] = report.factors[j].total_effect;
        if (report.factors[j].first_order) f["S"] = *report.factors[j].first_order;
        f["pairs_used"] = report.factors[j].pairs_used;
        doc["factors"].push_back(std::move(f));
    }
    write_lines(path, doc.dump(2) + "\n");
}

} // namespace gsa
