#include "discrepancy.hpp"

#include "error.hpp"

#include <cmath>

namespace gsa {

DiscrepancyReport l2_discrepancy(const PointSet& pts) {
    const std::size_t n = pts.count();
    if (n == 0) fail(ErrorKind::Argument, "l2_discrepancy: empty point set");
    const int k = pts.dims;

    double single = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < k; ++j) {
            const double x = pts.at(i, j);
            prod *= 0.5 * (1.0 - x * x);
        }
        single += prod;
    }

    double pair = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // diagonal term: max(x, x) = x
        double diag = 1.0;
        for (int j = 0; j < k; ++j) diag *= 1.0 - pts.at(i, j);
        pair += diag;
        for (std::size_t m = i + 1; m < n; ++m) {
            double prod = 1.0;
            for (int j = 0; j < k; ++j) prod *= 1.0 - std::max(pts.at(i, j), pts.at(m, j));
            pair += 2.0 * prod;
        }
    }

    const double nn = static_cast<double>(n);
    const double d2 = std::pow(3.0, -k) - (2.0 / nn) * single + pair / (nn * nn);
    // d2 can dip a hair below zero from cancellation on very uniform sets
    return {std::sqrt(std::max(d2, 0.0)), n, k};
}

} // namespace gsa
