#pragma once

#include "design.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gsa {

/// Sobol' G function: prod_j (|4x_j - 2| + a_j) / (1 + a_j).
struct GFunctionSpec {
    std::vector<double> a;

    int factors() const { return static_cast<int>(a.size()); }
};

double g_function(std::span<const double> x, const GFunctionSpec& spec);

// Closed-form variance decomposition of G: per-factor partial variance
// V_j = (1/3)/(1+a_j)^2, total variance V = prod(1+V_j) - 1.
struct AnalyticIndices {
    std::vector<double> partial_variance;  // V_j
    std::vector<double> first_order;       // S_j
    std::vector<double> total_effect;      // T_j
    double variance = 0.0;                 // V
};

AnalyticIndices g_analytic(const GFunctionSpec& spec);

struct ExternalModelSpec {
    std::string command;      // run via the shell; reads input_path, writes output_path
    std::string input_path;
    std::string output_path;
    double timeout_seconds = 0.0;  // 0 = no limit
};

// A scalar model over the unit hypercube. Built-ins are evaluated in-process;
// external models go through the batch file protocol.
class Model {
public:
    static Model g(std::vector<double> a);
    static Model builtin(const std::string& id, int factors);
    static Model external(ExternalModelSpec spec, int factors);

    int factors() const { return factors_; }
    const std::string& id() const { return id_; }

    double operator()(std::span<const double> x) const;
    std::vector<double> evaluate_rows(const PointSet& rows) const;

    /// Analytic reference indices, when the model has them.
    bool has_analytic() const { return static_cast<bool>(analytic_); }
    AnalyticIndices analytic() const;

private:
    Model() = default;

    std::string id_;
    int factors_ = 0;
    std::function<double(std::span<const double>)> fn_;  // empty for external
    std::shared_ptr<const ExternalModelSpec> external_;
    std::function<AnalyticIndices()> analytic_;
};

/// One output value per run, in schedule order. evaluations is incremented by
/// the number of rows (the benchmark cost axis).
std::vector<double> evaluate_batch(const Model& model, const RunSchedule& runs,
                                   std::size_t* evaluations = nullptr);

std::vector<double> evaluate_points(const Model& model, const PointSet& rows,
                                    std::size_t* evaluations = nullptr);

void write_y_csv(const std::vector<double>& y, const std::string& path);
std::vector<double> read_y_csv(const std::string& path);

} // namespace gsa
