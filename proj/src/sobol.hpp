#pragma once

#include "pointset.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gsa {

// Direction numbers for Sobol' LP_tau sequences. The bundled table carries the
// Joe-Kuo D6 search values (dimensions 2..129); dimension 1 is the base-2
// van der Corput radix inverse and needs no data.
struct DirectionTable {
    struct Entry {
        int degree = 0;
        std::uint32_t polynomial = 0;          // inner coefficients of the primitive polynomial
        std::vector<std::uint32_t> initial;    // m_1 .. m_degree, odd, m_k < 2^k
    };

    std::vector<Entry> entries;  // entries[i] describes sequence dimension i + 2

    int max_dims() const { return static_cast<int>(entries.size()) + 1; }

    static DirectionTable parse(std::istream& in, const std::string& context);
    static DirectionTable load_file(const std::string& path);
    static const DirectionTable& bundled();
};

// Gray-code Sobol' generator; 32-bit resolution.
class SobolSequence {
public:
    explicit SobolSequence(int dims, const DirectionTable& table = DirectionTable::bundled());

    int dims() const { return dims_; }
    std::uint64_t index() const { return index_; }

    /// Position so that the next emitted point is sequence element `index`.
    void seek(std::uint64_t index);
    /// Emit the point at the current index and advance.
    void next(std::span<double> out);

private:
    int dims_;
    std::uint64_t index_ = 0;
    std::vector<std::uint32_t> state_;       // per-dimension XOR accumulator
    std::vector<std::uint32_t> direction_;   // dims x 32, dimension-major
};

/// Points at sequence indices skip .. skip+count-1. Index 0 is the origin, so
/// callers default skip to 1.
PointSet sobol_points(int dims, std::size_t count, std::uint64_t skip = 1,
                      const DirectionTable& table = DirectionTable::bundled());

} // namespace gsa
