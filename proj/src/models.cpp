#include "models.hpp"

#include "csv.hpp"
#include "error.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace gsa {

double g_function(std::span<const double> x, const GFunctionSpec& spec) {
    if (x.size() != spec.a.size())
        fail(ErrorKind::Argument, "g_function: point has " + std::to_string(x.size()) +
                                      " coordinates, spec has " + std::to_string(spec.a.size()));
    double prod = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= 0.0 && x[j] <= 1.0))
            fail(ErrorKind::Argument, "g_function: coordinate outside [0,1]");
        prod *= (std::abs(4.0 * x[j] - 2.0) + spec.a[j]) / (1.0 + spec.a[j]);
    }
    return prod;
}

AnalyticIndices g_analytic(const GFunctionSpec& spec) {
    const int k = spec.factors();
    if (k < 1) fail(ErrorKind::Argument, "g_analytic: empty coefficient vector");
    for (double a : spec.a)
        if (!(a >= 0.0)) fail(ErrorKind::Argument, "g_analytic: coefficients must be >= 0");

    AnalyticIndices out;
    out.partial_variance.resize(static_cast<std::size_t>(k));
    double prod_all = 1.0;
    for (int j = 0; j < k; ++j) {
        const double vj = (1.0 / 3.0) / std::pow(1.0 + spec.a[static_cast<std::size_t>(j)], 2);
        out.partial_variance[static_cast<std::size_t>(j)] = vj;
        prod_all *= 1.0 + vj;
    }
    out.variance = prod_all - 1.0;
    for (int j = 0; j < k; ++j) {
        const double vj = out.partial_variance[static_cast<std::size_t>(j)];
        out.first_order.push_back(vj / out.variance);
        out.total_effect.push_back(vj * (prod_all / (1.0 + vj)) / out.variance);
    }
    return out;
}

Model Model::g(std::vector<double> a) {
    if (a.empty()) fail(ErrorKind::Argument, "model g: empty coefficient vector");
    for (double c : a)
        if (!(c >= 0.0)) fail(ErrorKind::Argument, "model g: coefficients must be >= 0");
    Model m;
    m.id_ = "g";
    m.factors_ = static_cast<int>(a.size());
    GFunctionSpec spec{std::move(a)};
    m.analytic_ = [spec] { return g_analytic(spec); };
    m.fn_ = [spec = std::move(spec)](std::span<const double> x) { return g_function(x, spec); };
    return m;
}

Model Model::builtin(const std::string& id, int factors) {
    if (factors < 1) fail(ErrorKind::Argument, "model: factors must be >= 1");
    Model m;
    m.id_ = id;
    m.factors_ = factors;
    if (id == "sum") {
        m.fn_ = [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v;
            return s;
        };
    } else if (id == "x1") {
        m.fn_ = [](std::span<const double> x) { return x[0]; };
        // f = X_1 uniform on [0,1]: all variance on factor 1
        m.analytic_ = [factors] {
            AnalyticIndices a;
            a.variance = 1.0 / 12.0;
            a.partial_variance.assign(static_cast<std::size_t>(factors), 0.0);
            a.first_order.assign(static_cast<std::size_t>(factors), 0.0);
            a.total_effect.assign(static_cast<std::size_t>(factors), 0.0);
            a.partial_variance[0] = 1.0 / 12.0;
            a.first_order[0] = 1.0;
            a.total_effect[0] = 1.0;
            return a;
        };
    } else {
        fail(ErrorKind::Argument, "unknown builtin model '" + id + "'");
    }
    return m;
}

Model Model::external(ExternalModelSpec spec, int factors) {
    if (factors < 1) fail(ErrorKind::Argument, "model: factors must be >= 1");
    if (spec.command.empty() || spec.input_path.empty() || spec.output_path.empty())
        fail(ErrorKind::Argument, "external model needs command, input path and output path");
    Model m;
    m.id_ = "external";
    m.factors_ = factors;
    m.external_ = std::make_shared<const ExternalModelSpec>(std::move(spec));
    return m;
}

double Model::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != factors_)
        fail(ErrorKind::Argument, "model: point length mismatch");
    if (fn_) return fn_(x);
    PointSet one;
    one.dims = factors_;
    one.data.assign(x.begin(), x.end());
    return evaluate_rows(one)[0];
}

AnalyticIndices Model::analytic() const {
    if (!analytic_) fail(ErrorKind::Argument, "model '" + id_ + "' has no analytic reference");
    return analytic_();
}

static std::vector<double> run_external(const ExternalModelSpec& spec, const PointSet& rows) {
    write_points_csv(rows, spec.input_path);
    std::error_code ec;
    std::filesystem::remove(spec.output_path, ec);

    std::string command = spec.command;
    if (spec.timeout_seconds > 0.0) {
        // the command may contain arbitrary quoting, so hand it to timeout
        // through a script instead of re-escaping it
        const std::string script = spec.output_path + ".cmd.sh";
        write_lines(script, spec.command + "\n");
        std::ostringstream wrapped;
        wrapped << "timeout " << spec.timeout_seconds << " /bin/sh " << script;
        command = wrapped.str();
    }
    const int rc = std::system(command.c_str());
    if (rc != 0)
        fail(ErrorKind::Evaluation, "external model failed (exit " + std::to_string(rc) +
                                        ") for runs 0.." + std::to_string(rows.count()) + ": " +
                                        spec.command);
    std::vector<double> y = read_value_lines(spec.output_path);
    if (y.size() != rows.count())
        fail(ErrorKind::Evaluation, "external model wrote " + std::to_string(y.size()) +
                                        " values for " + std::to_string(rows.count()) + " runs");
    for (double v : y)
        if (!std::isfinite(v)) fail(ErrorKind::Evaluation, "external model produced a non-finite value");
    return y;
}

std::vector<double> Model::evaluate_rows(const PointSet& rows) const {
    if (rows.dims != factors_) fail(ErrorKind::Argument, "model: rows have wrong dimension");
    if (external_) return run_external(*external_, rows);
    std::vector<double> y;
    y.reserve(rows.count());
    for (std::size_t i = 0; i < rows.count(); ++i) {
        const double v = fn_(rows.row(i));
        if (!std::isfinite(v)) fail(ErrorKind::Evaluation, "model produced a non-finite value");
        y.push_back(v);
    }
    return y;
}

std::vector<double> evaluate_points(const Model& model, const PointSet& rows,
                                    std::size_t* evaluations) {
    auto y = model.evaluate_rows(rows);
    if (evaluations) *evaluations += y.size();
    return y;
}

std::vector<double> evaluate_batch(const Model& model, const RunSchedule& runs,
                                   std::size_t* evaluations) {
    PointSet rows;
    rows.dims = runs.config.factors;
    rows.data = runs.points;
    return evaluate_points(model, rows, evaluations);
}

void write_y_csv(const std::vector<double>& y, const std::string& path) {
    std::ostringstream out;
    out << "y\n";
    for (double v : y) out << format_double(v) << "\n";
    write_lines(path, out.str());
}

std::vector<double> read_y_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int col = table.column("y");
    if (col < 0) fail(ErrorKind::Parse, path + ": expected a 'y' column");
    std::vector<double> y;
    y.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        y.push_back(parse_double(table.rows[r][static_cast<std::size_t>(col)],
                                 path + " row " + std::to_string(r + 1)));
    return y;
}

} // namespace gsa
