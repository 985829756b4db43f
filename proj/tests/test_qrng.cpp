#include "discrepancy.hpp"
#include "error.hpp"
#include "pointset.hpp"
#include "rng.hpp"
#include "sobol.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace gsa;

TEST_CASE("first dimension starts 0.5, 0.75, 0.25") {
    const PointSet pts = sobol_points(1, 3);
    REQUIRE(pts.count() == 3);
    CHECK(pts.at(0, 0) == 0.5);
    CHECK(pts.at(1, 0) == 0.75);
    CHECK(pts.at(2, 0) == 0.25);
}

TEST_CASE("empty request gives an empty set") {
    const PointSet pts = sobol_points(5, 0);
    CHECK(pts.count() == 0);
    CHECK(pts.dims == 5);
}

TEST_CASE("coordinates stay inside the half-open unit cube") {
    const PointSet pts = sobol_points(12, 256);
    REQUIRE(pts.data.size() == 3072);
    for (double v : pts.data) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("dimension errors") {
    CHECK_THROWS_AS(sobol_points(0, 4), Error);
    const int max_dims = DirectionTable::bundled().max_dims();
    CHECK(max_dims >= 64);
    try {
        sobol_points(max_dims + 1, 1);
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
}

TEST_CASE("prefix property") {
    for (int dims : {1, 6, 12}) {
        const PointSet shorter = sobol_points(dims, 50);
        const PointSet longer = sobol_points(dims, 200);
        for (std::size_t i = 0; i < shorter.data.size(); ++i)
            REQUIRE(shorter.data[i] == longer.data[i]);
    }
}

TEST_CASE("one point per dyadic interval in one dimension") {
    // a full scan starting at index 0 puts exactly one point in every [t/N, (t+1)/N)
    const std::size_t n = 64;
    const PointSet pts = sobol_points(1, n, 0);
    std::vector<int> bucket(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        bucket[static_cast<std::size_t>(pts.at(i, 0) * static_cast<double>(n))] += 1;
    for (int c : bucket) CHECK(c == 1);
}

TEST_CASE("seek matches sequential generation") {
    SobolSequence seq(8);
    seq.seek(1);
    std::vector<double> row(8);
    for (int i = 0; i < 37; ++i) seq.next(row);
    SobolSequence jumped(8);
    jumped.seek(38);
    std::vector<double> row2(8);
    jumped.next(row2);
    seq.next(row);
    CHECK(row == row2);
}

TEST_CASE("bundled table matches the data file") {
    const DirectionTable file = DirectionTable::load_file(std::string(GSA_SOURCE_DIR) + "/data/joe-kuo-d6.txt");
    const DirectionTable& bundled = DirectionTable::bundled();
    REQUIRE(file.entries.size() == bundled.entries.size());
    for (std::size_t i = 0; i < file.entries.size(); ++i) {
        CHECK(file.entries[i].degree == bundled.entries[i].degree);
        CHECK(file.entries[i].polynomial == bundled.entries[i].polynomial);
        CHECK(file.entries[i].initial == bundled.entries[i].initial);
    }
}

TEST_CASE("direction table parse rejects bad rows") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return DirectionTable::parse(in, "test");
    };
    CHECK_THROWS_AS(parse("1 0 2\n"), Error);        // even m
    CHECK_THROWS_AS(parse("2 1 1 9\n"), Error);      // m_2 >= 2^2
    CHECK_THROWS_AS(parse("2 1 1\n"), Error);        // missing m
    CHECK_THROWS_AS(parse("1 0 1 7\n"), Error);      // trailing token
    CHECK_THROWS_AS(parse("# only comments\n"), Error);
    CHECK(parse("1 0 1 # corput-like\n2 1 1 3\n").entries.size() == 2);
}

TEST_CASE("randomize identity and swap") {
    const PointSet pts = sobol_points(2, 16);
    RandomizationSpec identity;
    identity.column_permutation = {0, 1};
    const PointSet same = randomize(pts, identity);
    CHECK(same.data == pts.data);

    RandomizationSpec swap;
    swap.column_permutation = {1, 0};
    const PointSet swapped = randomize(pts, swap);
    for (std::size_t i = 0; i < pts.count(); ++i) {
        CHECK(swapped.at(i, 0) == pts.at(i, 1));
        CHECK(swapped.at(i, 1) == pts.at(i, 0));
    }
}

TEST_CASE("seeds 1 and 2 derive different permutations") {
    const auto a = RandomizationSpec::from_seed(1, 12);
    const auto b = RandomizationSpec::from_seed(2, 12);
    CHECK(a.column_permutation != b.column_permutation);
    CHECK(a.column_permutation == RandomizationSpec::from_seed(1, 12).column_permutation);
    // both are bijections
    for (const auto& spec : {a, b}) {
        auto sorted = spec.column_permutation;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < 12; ++j) CHECK(sorted[static_cast<std::size_t>(j)] == j);
    }
}

TEST_CASE("randomize validates the permutation") {
    const PointSet pts = sobol_points(3, 4);
    RandomizationSpec bad;
    bad.column_permutation = {0, 1};
    CHECK_THROWS_AS(randomize(pts, bad), Error);
    bad.column_permutation = {0, 1, 1};
    CHECK_THROWS_AS(randomize(pts, bad), Error);
}

TEST_CASE("digital shift keeps points in range and preserves determinism") {
    const PointSet pts = sobol_points(4, 32);
    const auto spec = RandomizationSpec::from_seed(9, 4, true);
    const PointSet shifted = randomize(pts, spec);
    CHECK(shifted.data != pts.data);
    for (double v : shifted.data) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK(randomize(pts, spec).data == shifted.data);
}

TEST_CASE("single midpoint discrepancy equals the closed form") {
    PointSet pts;
    pts.dims = 1;
    pts.data = {0.5};
    const auto report = l2_discrepancy(pts);
    // D^2 = 1/3 - 3/4 + 1/2 = 1/12
    CHECK(report.value == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-12));
    CHECK(report.point_count == 1);
    CHECK(report.dims == 1);
}

TEST_CASE("discrepancy is invariant under duplication and row order") {
    const PointSet pts = sobol_points(3, 40);
    const double base = l2_discrepancy(pts).value;

    PointSet doubled = pts;
    doubled.data.insert(doubled.data.end(), pts.data.begin(), pts.data.end());
    CHECK(l2_discrepancy(doubled).value == doctest::Approx(base).epsilon(1e-12));

    PointSet reversed;
    reversed.dims = pts.dims;
    for (std::size_t i = pts.count(); i-- > 0;)
        for (int j = 0; j < pts.dims; ++j) reversed.data.push_back(pts.at(i, j));
    CHECK(l2_discrepancy(reversed).value == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("column permutation preserves discrepancy exactly") {
    const PointSet pts = sobol_points(6, 128);
    const auto spec = RandomizationSpec::from_seed(17, 6);
    CHECK(l2_discrepancy(randomize(pts, spec)).value ==
          doctest::Approx(l2_discrepancy(pts).value).epsilon(1e-14));
}

TEST_CASE("discrepancy rejects an empty set") {
    PointSet pts;
    pts.dims = 2;
    CHECK_THROWS_AS(l2_discrepancy(pts), Error);
}

TEST_CASE("Sobol' points beat pseudo-random sets on discrepancy") {
    for (std::size_t n : {64u, 256u}) {
        const double sobol = l2_discrepancy(sobol_points(6, n)).value;
        std::vector<double> random;
        for (int r = 0; r < 100; ++r)
            random.push_back(l2_discrepancy(oracles::pseudo_random_points(6, n, 1000 + r)).value);
        std::nth_element(random.begin(), random.begin() + 50, random.end());
        CHECK(sobol < random[50]);
    }
}

TEST_CASE("points CSV round trip") {
    const PointSet pts = sobol_points(4, 10);
    write_points_csv(pts, "qrng_roundtrip.csv");
    const PointSet back = read_points_csv("qrng_roundtrip.csv");
    CHECK(back.dims == pts.dims);
    CHECK(back.data == pts.data);
}
