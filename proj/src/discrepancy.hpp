#pragma once

#include "pointset.hpp"

namespace gsa {

struct DiscrepancyReport {
    double value = 0.0;
    std::size_t point_count = 0;
    int dims = 0;
};

// Root-mean-square (L2 star) discrepancy, closed form:
//   D^2 = 3^-k - (2/N) sum_i prod_j (1 - x_ij^2)/2
//              + (1/N^2) sum_i sum_m prod_j (1 - max(x_ij, x_mj))
DiscrepancyReport l2_discrepancy(const PointSet& pts);

} // namespace gsa
