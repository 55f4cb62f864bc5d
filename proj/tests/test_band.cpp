#include "blockband/band/band.hpp"
#include "blockband/band/band_io.hpp"
#include "blockband/error.hpp"
#include "blockband/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace blockband;
using namespace blockband::band;

namespace {

EnsemblePredictions ensemble_of(const std::vector<Matrix>& members) {
    EnsemblePredictions e;
    e.members = members;
    return e;
}

// Multiples of 1/8 in [-100, 100]: sums, differences and halves stay exact.
std::vector<Matrix> dyadic_members(Index reps, Index steps, Index features, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> out;
    for (Index r = 0; r < reps; ++r) {
        Matrix m(steps, features);
        for (Index t = 0; t < steps; ++t) {
            for (Index j = 0; j < features; ++j) {
                m(t, j) = static_cast<double>(rng.uniform_int(-800, 800)) / 8.0;
            }
        }
        out.push_back(m);
    }
    return out;
}

ConfidenceBand band_from(const Matrix& lower, const Matrix& upper, const Matrix& actual) {
    ConfidenceBand b;
    b.lower = lower;
    b.upper = upper;
    b.average = (upper + lower) / 2.0;
    b.actual = actual;
    return b;
}

}  // namespace

TEST_CASE("quantile rule on {1, 2, 3}") {
    const std::vector<Matrix> members{Matrix::Constant(1, 1, 3.0), Matrix::Constant(1, 1, 1.0),
                                      Matrix::Constant(1, 1, 2.0)};
    const auto b = percentile_band(ensemble_of(members), 0.95, Matrix::Zero(1, 1));
    CHECK(std::abs(b.lower(0, 0) - 1.05) < 1e-12);
    CHECK(std::abs(b.upper(0, 0) - 2.95) < 1e-12);
    CHECK(b.average(0, 0) == (b.upper(0, 0) + b.lower(0, 0)) / 2.0);

    const std::vector<double> sorted{1.0, 2.0, 3.0};
    CHECK(quantile_sorted(sorted, 0.0) == 1.0);
    CHECK(quantile_sorted(sorted, 0.5) == 2.0);
    CHECK(quantile_sorted(sorted, 1.0) == 3.0);
    CHECK(quantile_sorted(sorted, 0.75) == 2.5);
}

TEST_CASE("identical replicates give a zero-width band") {
    const Matrix m = testing::random_matrix(4, 2, 3);
    const auto b = percentile_band(ensemble_of({m, m, m, m}), 0.95, m);
    CHECK(b.lower == m);
    CHECK(b.upper == m);
    CHECK(abwd(b).isZero(0.0));
}

TEST_CASE("percentile_band errors") {
    const Matrix m = Matrix::Zero(2, 2);
    try {
        (void)percentile_band(ensemble_of({m}), 0.95, m);
        FAIL("expected TooFewReplicates");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewReplicates);
    }
    CHECK_THROWS_AS((void)percentile_band(ensemble_of({m, m}), 1.0, m), Error);
    CHECK_THROWS_AS((void)percentile_band(ensemble_of({m, Matrix::Zero(3, 2)}), 0.9, m), Error);
}

TEST_CASE("coverage of standard normal draws") {
    Rng rng(2024);
    std::vector<Matrix> members(1000, Matrix(1, 1));
    for (auto& m : members) m(0, 0) = rng.normal();
    const auto b = percentile_band(ensemble_of(members), 0.95, Matrix::Zero(1, 1));
    int inside = 0;
    for (const auto& m : members) inside += (m(0, 0) >= b.lower(0, 0) && m(0, 0) <= b.upper(0, 0)) ? 1 : 0;
    const double fraction = inside / 1000.0;
    CHECK(fraction >= 0.94);
    CHECK(fraction <= 0.96);
}

TEST_CASE("band shape, ordering and level monotonicity") {
    const auto members = dyadic_members(30, 6, 3, 8);
    const Matrix actual = Matrix::Zero(6, 3);
    const auto narrow = percentile_band(ensemble_of(members), 0.5, actual);
    const auto wide = percentile_band(ensemble_of(members), 0.9, actual);
    const auto widest = percentile_band(ensemble_of(members), 0.999999, actual);
    for (Index t = 0; t < 6; ++t) {
        for (Index j = 0; j < 3; ++j) {
            CHECK(narrow.lower(t, j) <= narrow.average(t, j));
            CHECK(narrow.average(t, j) <= narrow.upper(t, j));
            CHECK(wide.lower(t, j) <= narrow.lower(t, j));
            CHECK(wide.upper(t, j) >= narrow.upper(t, j));
            double lo = members[0](t, j);
            double hi = lo;
            for (const auto& m : members) {
                lo = std::min(lo, m(t, j));
                hi = std::max(hi, m(t, j));
            }
            CHECK(widest.lower(t, j) == doctest::Approx(lo).epsilon(1e-4));
            CHECK(widest.upper(t, j) == doctest::Approx(hi).epsilon(1e-4));
        }
    }
}

TEST_CASE("metric examples") {
    const Matrix lower = Matrix::Constant(10, 2, 1.0);
    const Matrix upper = Matrix::Constant(10, 2, 3.5);
    const auto on_mid = band_from(lower, upper, Matrix::Constant(10, 2, 2.25));
    CHECK(mad(on_mid).isZero(0.0));
    CHECK(msd(on_mid).isZero(0.0));
    const auto offset = band_from(lower, upper, Matrix::Constant(10, 2, 5.25));
    CHECK(mad(offset)[0] == 3.0);
    CHECK(msd(offset)[1] == 9.0);
    CHECK(abwd(offset)[0] == 25.0);
    CHECK(abwd(band_from(lower, lower, lower)).isZero(0.0));
}

TEST_CASE("metrics equal loop oracles") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix lower = testing::random_matrix(7, 2, seed, -5, 0);
        const Matrix upper = lower + testing::random_matrix(7, 2, seed + 50, 0, 3);
        const Matrix actual = testing::random_matrix(7, 2, seed + 90, -6, 4);
        const auto b = band_from(lower, upper, actual);
        const auto m = compute_metrics(b);
        for (Index j = 0; j < 2; ++j) {
            CHECK(std::abs(m.mad[j] - oracle::mad(actual, b.average, j)) <= 1e-12);
            CHECK(std::abs(m.msd[j] - oracle::msd(actual, b.average, j)) <= 1e-12);
            CHECK(std::abs(m.abwd[j] - oracle::abwd(upper, lower, j)) <= 1e-12);
        }
    }
}

TEST_CASE("shift equivariance is exact") {
    const auto members = dyadic_members(41, 5, 2, 77);
    const Matrix actual = dyadic_members(1, 5, 2, 78).front();
    const double c = 13.375;
    std::vector<Matrix> shifted;
    for (const auto& m : members) shifted.push_back(m.array() + c);
    const Matrix actual_shifted = actual.array() + c;

    const auto a = percentile_band(ensemble_of(members), 0.95, actual);
    const auto b = percentile_band(ensemble_of(shifted), 0.95, actual_shifted);
    CHECK(b.lower == Matrix(a.lower.array() + c));
    CHECK(b.upper == Matrix(a.upper.array() + c));
    CHECK(b.average == Matrix(a.average.array() + c));
    const auto ma = compute_metrics(a);
    const auto mb = compute_metrics(b);
    CHECK(ma.mad == mb.mad);
    CHECK(ma.msd == mb.msd);
    CHECK(ma.abwd == mb.abwd);
}

TEST_CASE("scale equivariance within 1e-10") {
    const double lambda = 3.7;
    std::vector<Matrix> members;
    for (std::uint64_t r = 0; r < 25; ++r) members.push_back(testing::random_matrix(6, 3, 300 + r, 1, 50));
    const Matrix actual = testing::random_matrix(6, 3, 999, 1, 50);
    std::vector<Matrix> scaled;
    for (const auto& m : members) scaled.push_back(lambda * m);

    const auto a = percentile_band(ensemble_of(members), 0.95, actual);
    const auto b = percentile_band(ensemble_of(scaled), 0.95, lambda * actual);
    CHECK(testing::max_relative_error(b.lower, lambda * a.lower) < 1e-10);
    CHECK(testing::max_relative_error(b.upper, lambda * a.upper) < 1e-10);
    CHECK(testing::max_relative_error(b.average, lambda * a.average) < 1e-10);
    const auto ma = compute_metrics(a);
    const auto mb = compute_metrics(b);
    for (Index j = 0; j < 3; ++j) {
        CHECK(std::abs(mb.mad[j] - lambda * ma.mad[j]) <= 1e-10 * lambda * ma.mad[j]);
        CHECK(std::abs(mb.abwd[j] - lambda * ma.abwd[j]) <= 1e-10 * lambda * ma.abwd[j]);
        CHECK(std::abs(mb.msd[j] - lambda * lambda * ma.msd[j]) <= 1e-10 * lambda * lambda * ma.msd[j]);
    }
}

TEST_CASE("band CSV round trip and evaluation") {
    const auto members = dyadic_members(10, 4, 2, 5);
    auto b = percentile_band(ensemble_of(members), 0.9, testing::random_matrix(4, 2, 6));
    b.feature_names = {"Open", "Close"};
    b.timestamps = {18000, 18001, 18004, 18005};
    std::stringstream csv;
    write_band_csv(csv, b);
    CHECK(csv.str().rfind("t,feature,y,lower,avg,upper\n2019-04-14,Open,", 0) == 0);
    const auto back = read_band_csv(csv);
    CHECK(back.lower == b.lower);
    CHECK(back.upper == b.upper);
    CHECK(back.average == b.average);
    CHECK(back.actual == b.actual);
    CHECK(back.feature_names == b.feature_names);
    CHECK(metrics_json(compute_metrics(back)) == metrics_json(compute_metrics(b)));

    std::istringstream equal("t,feature,y,lower,avg,upper\n0,a,2,1,2,3\n0,b,5,5,5,5\n1,a,1,0,1,2\n1,b,4,3,4,5\n");
    const auto j = metrics_json(compute_metrics(read_band_csv(equal)));
    CHECK(j["a"]["mad"] == 0.0);
    CHECK(j["b"]["msd"] == 0.0);
    CHECK(j["a"]["abwd"] == 4.0);

    std::istringstream truncated("t,feature,y,lower,avg,upper\n0,a,2,1,2,3\n0,b,5,5,5,5\n1,a,1,0,1,2\n");
    try {
        (void)read_band_csv(truncated);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
    std::istringstream cut("t,feature,y,lower,avg,upper\n0,a,2,1,2\n");
    CHECK_THROWS_AS((void)read_band_csv(cut), Error);
}
