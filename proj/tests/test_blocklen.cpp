#include "blockband/blocklen/objective.hpp"
#include "blockband/error.hpp"
#include "blockband/series/windows.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace blockband;
using namespace blockband::blocklen;
using series::make_windows;

TEST_CASE("filtered_mean examples") {
    Matrix rows(2, 1);
    rows << 3, 5;
    const auto w = make_windows(rows, 1, 1);
    CHECK(filtered_mean(w, 2, 1)(0, 0) == 4.0);
    CHECK(filtered_mean(w, 1, 1) == w.window(0));

    const Matrix rnd = testing::random_matrix(5, 2, 21);
    const auto w4 = make_windows(rnd, 2, 1);
    REQUIRE(w4.count() == 4);
    const Matrix fm = filtered_mean(w4, 2, 2);
    for (Index k = 0; k < 2; ++k) {
        for (Index j = 0; j < 2; ++j) {
            double s = 0.0;
            for (Index kp = 0; kp < 4; ++kp) s += rnd(kp + k, j);
            CHECK(std::abs(fm(k, j) - s / 4.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)filtered_mean(w4, 3, 2), Error);
}

TEST_CASE("filtered_mean is linear in the windows") {
    const Matrix a = testing::random_matrix(9, 2, 1);
    const Matrix b = testing::random_matrix(9, 2, 2);
    const Matrix combo = 2.5 * a - 0.75 * b;
    const Matrix lhs = filtered_mean(make_windows(combo, 3, 1), 2, 3);
    const Matrix rhs = 2.5 * filtered_mean(make_windows(a, 3, 1), 2, 3) - 0.75 * filtered_mean(make_windows(b, 3, 1), 2, 3);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empirical_distance examples") {
    const Matrix rows = testing::random_matrix(12, 2, 4);
    const auto w = make_windows(rows, 3, 1);
    for (Index l = 1; l <= w.count(); ++l) {
        CHECK(empirical_distance(w, w, l) == 0.0);
    }

    const Matrix constant = Matrix::Constant(15, 2, 0.3);
    const auto cw = make_windows(constant, 2, 1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto trace = bootstrap::resample_trace(cw.count(), {bootstrap::Variant::MBB, 3, std::nullopt, 1.0}, seed);
        CHECK(empirical_distance(cw, cw.reorder(trace), 3) == 0.0);
    }

    // n* = 6, T = 2, n_f = 2, l = 2 with fixed values and a fixed permutation.
    Matrix fixed(7, 2);
    fixed << 0.1, -0.2, 0.4, 0.05, -0.3, 0.25, 0.2, -0.1, 0.0, 0.15, -0.05, 0.3, 0.35, -0.25;
    const auto fw = make_windows(fixed, 2, 1);
    REQUIRE(fw.count() == 6);
    const std::vector<std::size_t> order{4, 5, 0, 1, 2, 3};
    const double got = empirical_distance(fw, fw.reorder(order), 2);
    CHECK(std::abs(got - oracle::distance(fixed, 2, 1, order, 2)) < 1e-12);
    CHECK(got > 0.0);
}

TEST_CASE("empirical_distance is symmetric") {
    const Matrix rows = testing::random_matrix(20, 2, 6);
    const auto w = make_windows(rows, 3, 1);
    const auto trace = bootstrap::resample_trace(w.count(), {bootstrap::Variant::NOBB, 3, std::nullopt, 1.0}, 9);
    const auto boot = w.reorder(trace);
    std::vector<std::size_t> identity(trace.size());
    std::iota(identity.begin(), identity.end(), 0);
    const auto trimmed = w.reorder(identity);
    CHECK(empirical_distance(trimmed, boot, 3) == doctest::Approx(empirical_distance(boot, trimmed, 3)).epsilon(1e-14));
}

TEST_CASE("empirical_distance errors") {
    const auto a = make_windows(testing::random_matrix(6, 2, 1), 2, 1);
    const auto b = make_windows(testing::random_matrix(6, 1, 1), 2, 1);
    CHECK_THROWS_AS((void)empirical_distance(a, b, 1), Error);
    CHECK_THROWS_AS((void)empirical_distance(a, a, 6), Error);
}

TEST_CASE("penalty") {
    CHECK(std::abs(penalty(5, 100, 2.0) - 5.0 * std::log(100.0) / 1e4) < 1e-18);
    CHECK(penalty(5, 100, 2.0) == doctest::Approx(2.30259e-3).epsilon(1e-5));
    CHECK(penalty(0, 100, 2.0) == 0.0);
    CHECK(penalty(3, 100, 40.0) < 1e-70);
    CHECK(penalized_objective(0.25, 3, 100, 40.0) == doctest::Approx(0.25));
    for (Index l = 1; l < 50; ++l) {
        CHECK(penalty(l + 1, 64, 2.0) > penalty(l, 64, 2.0));
    }
}

TEST_CASE("select_block_length on a constant series picks l_min") {
    const Matrix constant = Matrix::Zero(60, 2);
    BlockLenConfig c;
    c.lookback = 5;
    c.l_min = 2;
    c.seed = 3;
    const auto curve = select_block_length(constant, c);
    CHECK(curve.best_l == 2);
    for (const auto& p : curve.points) {
        CHECK(p.distance == 0.0);
    }
}

TEST_CASE("select_block_length matches the brute-force curve") {
    const Matrix rows = testing::random_matrix(40, 2, 12, -0.05, 0.05);
    for (auto variant : {bootstrap::Variant::NOBB, bootstrap::Variant::MBB, bootstrap::Variant::LBB}) {
        BlockLenConfig c;
        c.lookback = 4;
        c.replicates = 3;
        c.variant = variant;
        c.lbb_locality = 0.2;
        c.seed = 17;
        const auto curve = select_block_length(rows, c);
        CHECK(curve.n_star == 37);
        CHECK(curve.l_max == 9);
        const auto expected = oracle::curve(rows, c, curve.l_max);
        REQUIRE(expected.size() == curve.points.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(curve.points[i].l == expected[i].l);
            CHECK(std::abs(curve.points[i].distance - expected[i].distance) < 1e-12);
            CHECK(std::abs(curve.points[i].total - expected[i].total) < 1e-12);
            CHECK(curve.points[i].total == curve.points[i].distance + curve.points[i].penalty);
            if (i > 0) {
                CHECK(curve.points[i].penalty > curve.points[i - 1].penalty);
            }
        }
    }
}

TEST_CASE("select_block_length is reproducible and independent of workers") {
    const Matrix rows = testing::random_matrix(40, 2, 31);
    BlockLenConfig c;
    c.lookback = 4;
    c.replicates = 1;
    c.seed = 5;
    const auto a = select_block_length(rows, c);
    const auto b = select_block_length(rows, c);
    c.workers = 3;
    const auto threaded = select_block_length(rows, c);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].total == b.points[i].total);
        CHECK(a.points[i].total == threaded.points[i].total);
    }
    CHECK(a.best_l == threaded.best_l);
}

TEST_CASE("select_block_length rejects bad ranges") {
    const Matrix rows = testing::random_matrix(20, 1, 3);
    BlockLenConfig c;
    c.lookback = 3;
    c.l_max = 40;  // beyond n* = 18
    try {
        (void)select_block_length(rows, c);
        FAIL("expected BadConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadConfig);
    }
    c.l_max = 0;
    c.l_min = 0;
    CHECK_THROWS_AS((void)select_block_length(rows, c), Error);
    c.l_min = 1;
    c.alpha = 0.0;
    CHECK_THROWS_AS((void)select_block_length(rows, c), Error);
}
