#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gsa {

/// A count x dims block of points in the half-open unit hypercube, row-major.
struct PointSet {
    int dims = 0;
    std::vector<double> data;

    std::size_t count() const {
        return dims > 0 ? data.size() / static_cast<std::size_t>(dims) : 0;
    }
    double at(std::size_t row, int col) const {
        return data[row * static_cast<std::size_t>(dims) + static_cast<std::size_t>(col)];
    }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(dims), static_cast<std::size_t>(dims)};
    }
};

/// Seed-derived column relabelling, optionally with a per-column shift mod 1.
struct RandomizationSpec {
    std::uint64_t seed = 0;
    std::vector<int> column_permutation;
    bool digital_shift_enabled = false;

    static RandomizationSpec from_seed(std::uint64_t seed, int dims, bool digital_shift = false);
};

// Output column j is input column column_permutation[j]; the shift offsets are
// derived from the seed per output column.
PointSet randomize(const PointSet& pts, const RandomizationSpec& spec);

PointSet read_points_csv(const std::string& path);
void write_points_csv(const PointSet& pts, const std::string& path);

} // namespace gsa
