#include "blockband/bootstrap/block_bootstrap.hpp"
#include "blockband/bootstrap/sample_io.hpp"
#include "blockband/error.hpp"
#include "blockband/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace blockband;
using namespace blockband::bootstrap;

namespace {

// Row i holds (i, 100 + i) so a row's origin is readable from its values.
Matrix labelled_rows(Index n) {
    Matrix m(n, 2);
    for (Index i = 0; i < n; ++i) {
        m(i, 0) = static_cast<double>(i);
        m(i, 1) = 100.0 + static_cast<double>(i);
    }
    return m;
}

void check_trace_matches_rows(const BootstrapSample& s, const Matrix& rows) {
    REQUIRE(static_cast<Index>(s.index_trace.size()) == s.values.rows());
    for (Index r = 0; r < s.values.rows(); ++r) {
        const auto src = static_cast<Index>(s.index_trace[static_cast<std::size_t>(r)]);
        CHECK(s.values.row(r) == rows.row(src));
    }
}

}  // namespace

TEST_CASE("nobb hand example: blocks (3,1,3) of n=6, l=2") {
    const Matrix rows = labelled_rows(6);
    const std::vector<std::size_t> starts{4, 0, 4};  // 1-based blocks 3, 1, 3
    const auto s = gather_blocks(rows, starts, 2, 6);
    const std::vector<std::size_t> expected{4, 5, 0, 1, 4, 5};  // X5 X6 X1 X2 X5 X6
    CHECK(s.index_trace == expected);
    check_trace_matches_rows(s, rows);
}

TEST_CASE("nobb laws") {
    SUBCASE("l = n returns the source series") {
        const Matrix rows = labelled_rows(5);
        const auto s = nobb(rows, 5, 11);
        CHECK(s.values == rows);
    }
    SUBCASE("n=7, l=3 never uses the last row") {
        const Matrix rows = labelled_rows(7);
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto s = nobb(rows, 3, seed);
            CHECK(s.values.rows() == 6);
            for (std::size_t src : s.index_trace) {
                CHECK(src < 6);
            }
            for (std::size_t start : s.block_starts) {
                CHECK(start % 3 == 0);
            }
        }
    }
}

TEST_CASE("mbb hand example: starts (2,0) of n=4, l=2") {
    const Matrix rows = labelled_rows(4);
    const std::vector<std::size_t> starts{2, 0};
    const auto s = gather_blocks(rows, starts, 2, 4);
    CHECK(s.index_trace == std::vector<std::size_t>{2, 3, 0, 1});
    check_trace_matches_rows(s, rows);
}

TEST_CASE("mbb laws") {
    SUBCASE("n=5, l=3 candidate starts are exactly {0,1,2}") {
        std::set<std::size_t> seen;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            for (std::size_t st : mbb_starts(5, 3, 4, seed)) seen.insert(st);
        }
        CHECK(seen == std::set<std::size_t>{0, 1, 2});
    }
    SUBCASE("l = n repeats the series k times") {
        const Matrix rows = labelled_rows(3);
        const auto s = mbb(rows, 3, Index{2}, 5);
        REQUIRE(s.values.rows() == 6);
        CHECK(s.values.topRows(3) == rows);
        CHECK(s.values.bottomRows(3) == rows);
    }
    SUBCASE("default k gives exactly n rows") {
        const Matrix rows = labelled_rows(10);
        const auto s = mbb(rows, 3, std::nullopt, 5);
        CHECK(s.values.rows() == 10);
        CHECK(s.block_starts.size() == 4);
        check_trace_matches_rows(s, rows);
    }
}

TEST_CASE("lbb bounds") {
    const auto b = lbb_bounds(100, 10, 0.1, 2);
    CHECK(b.j1 == 10);
    CHECK(b.j2 == 30);
    for (Index n : {20, 50, 100}) {
        CHECK(lbb_bounds(n, 2, 0.1, 0).j1 == 1);
    }
    for (Index m = 0; m < 3; ++m) {
        const auto full = lbb_bounds(40, 2, 1.0, m);
        CHECK(full.j1 == 1);
        CHECK(full.j2 == 39);
    }
    CHECK_THROWS_AS((void)lbb_radius(30, 0.05), Error);  // 1.5 rows
    CHECK_THROWS_AS((void)lbb_radius(30, 0.0), Error);
    CHECK(lbb_radius(30, 0.1) == 3);
    CHECK(snap_locality(30, 0.05) == doctest::Approx(2.0 / 30.0));
    CHECK(snap_locality(30, 0.001) == doctest::Approx(1.0 / 30.0));
}

TEST_CASE("lbb starts respect the bounds") {
    const Matrix rows = labelled_rows(60);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = lbb(rows, 4, 0.1, seed);
        CHECK(s.values.rows() == 60);
        for (std::size_t m = 0; m < s.block_starts.size(); ++m) {
            const auto b = lbb_bounds(60, 4, 0.1, static_cast<Index>(m));
            CHECK(static_cast<Index>(s.block_starts[m]) >= b.j1 - 1);
            CHECK(static_cast<Index>(s.block_starts[m]) <= b.j2 - 1);
        }
        check_trace_matches_rows(s, rows);
    }
}

TEST_CASE("block length validation") {
    const Matrix rows = labelled_rows(5);
    CHECK_THROWS_AS((void)nobb(rows, 0, 1), Error);
    CHECK_THROWS_AS((void)mbb(rows, 6, std::nullopt, 1), Error);
    try {
        check_block_length(5, 6);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadBlockLength);
    }
}

TEST_CASE("resampling is deterministic and independent of threads") {
    const Matrix rows = testing::random_matrix(40, 3, 3);
    const BlockScheme schemes[] = {{Variant::NOBB, 3, std::nullopt, 1.0},
                                   {Variant::MBB, 4, std::nullopt, 1.0},
                                   {Variant::LBB, 5, std::nullopt, 0.25}};
    for (const auto& scheme : schemes) {
        std::vector<Matrix> serial(8);
        std::vector<Matrix> threaded(8);
        parallel_for(8, 1, [&](std::size_t r) { serial[r] = resample(rows, scheme, 100 + r).values; });
        parallel_for(8, 4, [&](std::size_t r) { threaded[r] = resample(rows, scheme, 100 + r).values; });
        for (std::size_t r = 0; r < 8; ++r) {
            CHECK(serial[r] == threaded[r]);
        }
        const auto trace = resample_trace(40, scheme, 100);
        CHECK(trace == resample(rows, scheme, 100).index_trace);
    }
}

TEST_CASE("sample sidecar replays the sample") {
    const Matrix rows = testing::random_matrix(30, 2, 8);
    const auto s = lbb(rows, 3, 0.2, 77);
    const auto sidecar = sample_sidecar(s);
    CHECK(sidecar.at("seed").get<std::uint64_t>() == 77);
    CHECK(sidecar.at("generator").get<std::string>() == "mt19937_64");
    const auto back = replay_sample(sidecar, rows);
    CHECK(back.values == s.values);
    CHECK(back.index_trace == s.index_trace);
    const auto scheme = scheme_from_json(scheme_to_json(s.scheme));
    CHECK(scheme.variant == Variant::LBB);
    CHECK(scheme.block_length == 3);
    CHECK(scheme.lbb_locality == 0.2);

    std::ostringstream csv;
    write_sample_csv(csv, s, {"a", "b"});
    CHECK(csv.str().rfind("row,a,b\n", 0) == 0);
}

TEST_CASE("variant names") {
    CHECK(parse_variant("NOBB") == Variant::NOBB);
    CHECK(parse_variant("mbb") == Variant::MBB);
    CHECK(variant_name(Variant::LBB) == "lbb");
    CHECK_THROWS_AS((void)parse_variant("cbb"), Error);
}
