#include "sobol.hpp"

#include "error.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace gsa {

namespace detail {
extern const char kJoeKuoD6Text[];
}

static constexpr int kBits = 32;

DirectionTable DirectionTable::parse(std::istream& in, const std::string& context) {
    DirectionTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        std::istringstream fields(line);
        Entry entry;
        if (!(fields >> entry.degree)) continue;  // blank or comment-only line
        const std::string where = context + ":" + std::to_string(lineno);
        if (entry.degree < 1 || entry.degree > kBits)
            fail(ErrorKind::Parse, where + ": bad degree " + std::to_string(entry.degree));
        if (!(fields >> entry.polynomial))
            fail(ErrorKind::Parse, where + ": missing polynomial");
        for (int k = 0; k < entry.degree; ++k) {
            std::uint32_t m = 0;
            if (!(fields >> m)) fail(ErrorKind::Parse, where + ": expected " +
                                                           std::to_string(entry.degree) +
                                                           " direction integers");
            if (m % 2 == 0 || m >= (1u << (k + 1)))
                fail(ErrorKind::Parse, where + ": direction integer " + std::to_string(m) +
                                           " invalid at position " + std::to_string(k + 1));
            entry.initial.push_back(m);
        }
        std::string trailing;
        if (fields >> trailing)
            fail(ErrorKind::Parse, where + ": trailing token '" + trailing + "'");
        table.entries.push_back(std::move(entry));
    }
    if (table.entries.empty()) fail(ErrorKind::Parse, context + ": no entries");
    return table;
}

DirectionTable DirectionTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open direction table " + path);
    return parse(in, path);
}

const DirectionTable& DirectionTable::bundled() {
    static const DirectionTable table = [] {
        std::istringstream in(detail::kJoeKuoD6Text);
        return parse(in, "<bundled>");
    }();
    return table;
}

SobolSequence::SobolSequence(int dims, const DirectionTable& table) : dims_(dims) {
    if (dims < 1) fail(ErrorKind::Argument, "sobol: dims must be >= 1");
    if (dims > table.max_dims())
        fail(ErrorKind::Capacity, "sobol: dims " + std::to_string(dims) +
                                      " exceeds table capacity " + std::to_string(table.max_dims()));

    direction_.assign(static_cast<std::size_t>(dims) * kBits, 0);
    state_.assign(static_cast<std::size_t>(dims), 0);

    // First dimension: m_l = 1 for all l.
    for (int l = 0; l < kBits; ++l) direction_[static_cast<std::size_t>(l)] = 1u << (kBits - 1 - l);

    for (int d = 1; d < dims; ++d) {
        const auto& e = table.entries[static_cast<std::size_t>(d - 1)];
        const int s = e.degree;
        std::uint32_t m[kBits];
        for (int l = 0; l < s; ++l) m[l] = e.initial[static_cast<std::size_t>(l)];
        // Recurrence over the primitive polynomial x^s + c_1 x^(s-1) + ... + 1,
        // inner coefficients encoded in e.polynomial (c_1 in the top bit).
        for (int l = s; l < kBits; ++l) {
            std::uint32_t v = m[l - s] ^ (m[l - s] << s);
            for (int t = 1; t < s; ++t)
                if ((e.polynomial >> (s - 1 - t)) & 1u) v ^= m[l - t] << t;
            m[l] = v;
        }
        for (int l = 0; l < kBits; ++l)
            direction_[static_cast<std::size_t>(d) * kBits + static_cast<std::size_t>(l)] =
                m[l] << (kBits - 1 - l);
    }
}

void SobolSequence::seek(std::uint64_t index) {
    if (index >= (1ull << kBits))
        fail(ErrorKind::Capacity, "sobol: sequence index exceeds 2^32");
    index_ = index;
    const std::uint64_t gray = index ^ (index >> 1);
    for (int d = 0; d < dims_; ++d) {
        std::uint32_t x = 0;
        for (int b = 0; b < kBits; ++b)
            if ((gray >> b) & 1ull)
                x ^= direction_[static_cast<std::size_t>(d) * kBits + static_cast<std::size_t>(b)];
        state_[static_cast<std::size_t>(d)] = x;
    }
}

void SobolSequence::next(std::span<double> out) {
    if (out.size() != static_cast<std::size_t>(dims_))
        fail(ErrorKind::Argument, "sobol: output span size mismatch");
    if (index_ >= (1ull << kBits))
        fail(ErrorKind::Capacity, "sobol: sequence exhausted at 2^32 points");
    constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
    for (int d = 0; d < dims_; ++d)
        out[static_cast<std::size_t>(d)] = static_cast<double>(state_[static_cast<std::size_t>(d)]) * scale;
    // Gray-code step: the bit changing between gray(i) and gray(i+1) is ctz(i+1).
    const std::uint64_t nxt = index_ + 1;
    if (nxt < (1ull << kBits)) {
        const int bit = std::countr_zero(nxt);
        for (int d = 0; d < dims_; ++d)
            state_[static_cast<std::size_t>(d)] ^=
                direction_[static_cast<std::size_t>(d) * kBits + static_cast<std::size_t>(bit)];
    }
    index_ = nxt;
}

PointSet sobol_points(int dims, std::size_t count, std::uint64_t skip, const DirectionTable& table) {
    SobolSequence seq(dims, table);
    seq.seek(skip);
    PointSet pts;
    pts.dims = dims;
    pts.data.resize(count * static_cast<std::size_t>(dims));
    for (std::size_t i = 0; i < count; ++i)
        seq.next({pts.data.data() + i * static_cast<std::size_t>(dims), static_cast<std::size_t>(dims)});
    return pts;
}

} // namespace gsa
