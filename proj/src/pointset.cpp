#include "pointset.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"

#include <cmath>
#include <sstream>

namespace gsa {

RandomizationSpec RandomizationSpec::from_seed(std::uint64_t seed, int dims, bool digital_shift) {
    if (dims <= 0) fail(ErrorKind::Argument, "randomization needs dims >= 1");
    RandomizationSpec spec;
    spec.seed = seed;
    spec.digital_shift_enabled = digital_shift;
    spec.column_permutation = seeded_permutation(seed, dims);
    return spec;
}

PointSet randomize(const PointSet& pts, const RandomizationSpec& spec) {
    if (static_cast<int>(spec.column_permutation.size()) != pts.dims)
        fail(ErrorKind::Argument, "permutation length " +
                                      std::to_string(spec.column_permutation.size()) +
                                      " does not match dims " + std::to_string(pts.dims));
    std::vector<bool> seen(static_cast<std::size_t>(pts.dims), false);
    for (int c : spec.column_permutation) {
        if (c < 0 || c >= pts.dims || seen[static_cast<std::size_t>(c)])
            fail(ErrorKind::Argument, "column_permutation is not a permutation");
        seen[static_cast<std::size_t>(c)] = true;
    }

    std::vector<double> shift(static_cast<std::size_t>(pts.dims), 0.0);
    if (spec.digital_shift_enabled) {
        SplitMix64 rng(mix_seed(spec.seed, 0x5f1d));
        for (auto& s : shift) s = rng.next_double();
    }

    PointSet out;
    out.dims = pts.dims;
    out.data.resize(pts.data.size());
    const std::size_t n = pts.count();
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < pts.dims; ++j) {
            double v = pts.at(i, spec.column_permutation[static_cast<std::size_t>(j)]);
            if (spec.digital_shift_enabled) {
                v += shift[static_cast<std::size_t>(j)];
                v -= std::floor(v);
            }
            out.data[i * static_cast<std::size_t>(pts.dims) + static_cast<std::size_t>(j)] = v;
        }
    }
    return out;
}

PointSet read_points_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    PointSet pts;
    pts.dims = static_cast<int>(table.header.size());
    if (pts.dims == 0) fail(ErrorKind::Parse, path + ": no columns");
    pts.data.reserve(table.rows.size() * table.header.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (const auto& field : table.rows[r])
            pts.data.push_back(parse_double(field, path + " row " + std::to_string(r + 1)));
    return pts;
}

void write_points_csv(const PointSet& pts, const std::string& path) {
    std::ostringstream out;
    for (int j = 0; j < pts.dims; ++j) out << (j ? "," : "") << "x" << (j + 1);
    out << "\n";
    const std::size_t n = pts.count();
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < pts.dims; ++j) out << (j ? "," : "") << format_double(pts.at(i, j));
        out << "\n";
    }
    write_lines(path, out.str());
}

} // namespace gsa
