// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "blockband/band/band.hpp"
#include "blockband/band/band_io.hpp"
#include "blockband/blocklen/objective.hpp"
#include "blockband/bootstrap/block_bootstrap.hpp"
#include "blockband/forecaster/lstm.hpp"
#include "blockband/pipeline/commands.hpp"
#include "blockband/pipeline/config.hpp"
#include "blockband/pipeline/pipeline.hpp"
#include "blockband/pipeline/synthetic.hpp"
#include "blockband/rng.hpp"
#include "blockband/series/csv.hpp"
#include "blockband/series/multi_series.hpp"
#include "blockband/series/transforms.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace blockband;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failing condition and keeps the verdict.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && pass_) {
            pass_ = false;
            first_failure_ = what;
        }
    }
    [[nodiscard]] bool pass() const { return pass_; }
    [[nodiscard]] Outcome done(std::string summary) const {
        if (!pass_) summary = "first failure: " + first_failure_ + "; " + summary;
        return {pass_, std::move(summary)};
    }

private:
    bool pass_ = true;
    std::string first_failure_;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// -- 1. bootstrap correctness --

Outcome bootstrap_laws() {
    using namespace bootstrap;
    Check check;
    Rng pick(1001);
    int instances = 0;
    for (; instances < 1000; ++instances) {
        const Index n = pick.uniform_int(1, 64);
        const Index l = pick.uniform_int(1, n);
        const Index nf = pick.uniform_int(1, 3);
        const auto variant = static_cast<Variant>(pick.uniform_int(0, 2));
        BlockScheme scheme;
        scheme.variant = variant;
        scheme.block_length = l;
        if (variant == Variant::LBB) {
            scheme.lbb_locality = static_cast<double>(pick.uniform_int(1, n)) / static_cast<double>(n);
        }
        const Matrix rows = testing::random_matrix(n, nf, 5000 + static_cast<std::uint64_t>(instances));
        const std::uint64_t seed = pick.next_u64();
        const auto s = resample(rows, scheme, seed);
        const std::string tag = std::string(variant_name(variant)) + " n=" + std::to_string(n) +
                                " l=" + std::to_string(l);

        const Index expected_rows = variant == Variant::MBB ? n : l * (n / l);
        check.expect(s.values.rows() == expected_rows, tag + ": output length");
        check.expect(static_cast<Index>(s.index_trace.size()) == s.values.rows(), tag + ": trace length");
        check.expect(static_cast<Index>(s.block_starts.size()) * l >= s.values.rows(), tag + ": block count");

        for (std::size_t m = 0; m < s.block_starts.size(); ++m) {
            const auto start = static_cast<Index>(s.block_starts[m]);
            switch (variant) {
                case Variant::NOBB:
                    check.expect(start % l == 0 && start + l <= n, tag + ": nobb start");
                    break;
                case Variant::MBB:
                    check.expect(start >= 0 && start <= n - l, tag + ": mbb start");
                    break;
                case Variant::LBB: {
                    // 1-based bounds around the block's own position m*l.
                    const Index nb = static_cast<Index>(std::llround(static_cast<double>(n) * scheme.lbb_locality));
                    const Index mm = static_cast<Index>(m);
                    const Index j1 = std::max<Index>(1, mm * l - nb);
                    const Index j2 = std::min<Index>(n - l + 1, mm * l + nb);
                    check.expect(start + 1 >= j1 && start + 1 <= j2, tag + ": lbb start outside [J1, J2]");
                    break;
                }
            }
            for (Index k = 0; k < l; ++k) {
                const Index r = static_cast<Index>(m) * l + k;
                if (r >= s.values.rows()) break;
                check.expect(static_cast<Index>(s.index_trace[static_cast<std::size_t>(r)]) == start + k,
                             tag + ": segment not contiguous");
            }
        }
        for (Index r = 0; r < s.values.rows(); ++r) {
            const auto src = static_cast<Index>(s.index_trace[static_cast<std::size_t>(r)]);
            for (Index j = 0; j < nf; ++j) {
                check.expect(s.values(r, j) == rows(src, j), tag + ": row differs from its source");
            }
        }
        const auto again = resample(rows, scheme, seed);
        check.expect(again.index_trace == s.index_trace && again.values == s.values, tag + ": not deterministic");
    }
    return check.done(std::to_string(instances) + " instances");
}

// -- 2. NOBB uniformity --

Outcome nobb_uniformity() {
    Check check;
    const long target = 100000;
    long counts[3] = {0, 0, 0};
    long draws = 0;
    for (std::uint64_t seed = 0; draws < target; ++seed) {
        for (std::size_t start : bootstrap::nobb_starts(6, 2, seed)) {
            if (draws == target) break;
            check.expect(start % 2 == 0 && start <= 4, "start outside {0, 2, 4}");
            ++counts[std::min<std::size_t>(start / 2, 2)];
            ++draws;
        }
    }
    std::string freq;
    for (long c : counts) {
        const double f = static_cast<double>(c) / static_cast<double>(draws);
        check.expect(std::abs(f - 1.0 / 3.0) <= 0.01, "frequency " + fmt(f) + " outside 1/3 +- 0.01");
        freq += (freq.empty() ? "" : ", ") + fmt(f, 5);
    }
    return check.done(std::to_string(draws) + " draws, frequencies " + freq);
}

// -- 3. block-length objective --

Outcome blocklen_oracle() {
    using blocklen::BlockLenConfig;
    Check check;
    int instances = 0;
    double worst = 0.0;
    std::uint64_t data_seed = 1;
    for (auto variant : {bootstrap::Variant::NOBB, bootstrap::Variant::MBB, bootstrap::Variant::LBB}) {
        for (Index n_star = 2; n_star <= 8; ++n_star) {
            for (Index T = 1; T <= 3; ++T) {
                for (Index nf = 1; nf <= 2; ++nf) {
                    for (Index l_min = 1; l_min <= n_star; ++l_min) {
                        for (Index l_max = l_min; l_max <= n_star; ++l_max) {
                            const Matrix rows =
                                testing::random_matrix(n_star + T - 1, nf, data_seed++, -0.05, 0.05);
                            BlockLenConfig c;
                            c.lookback = T;
                            c.l_min = l_min;
                            c.l_max = l_max;
                            c.replicates = 2;
                            c.variant = variant;
                            c.lbb_locality = 0.3;
                            c.seed = data_seed;
                            const std::string tag = std::string(bootstrap::variant_name(variant)) +
                                                    " n*=" + std::to_string(n_star) + " T=" + std::to_string(T) +
                                                    " l=" + std::to_string(l_min) + ".." + std::to_string(l_max);
                            const auto curve = blocklen::select_block_length(rows, c);
                            const auto expected = oracle::curve(rows, c, l_max);
                            ++instances;
                            check.expect(curve.points.size() == expected.size(), tag + ": curve size");
                            if (curve.points.size() != expected.size()) continue;
                            Index argmin = expected.front().l;
                            double best = expected.front().total;
                            for (std::size_t i = 0; i < expected.size(); ++i) {
                                const auto& p = curve.points[i];
                                const double d = std::max(std::abs(p.distance - expected[i].distance),
                                                          std::abs(p.total - expected[i].total));
                                worst = std::max(worst, d);
                                check.expect(p.l == expected[i].l && d <= 1e-12, tag + ": differs from oracle");
                                if (i > 0) {
                                    check.expect(p.penalty > curve.points[i - 1].penalty,
                                                 tag + ": penalty not increasing");
                                }
                                if (expected[i].total < best) {
                                    best = expected[i].total;
                                    argmin = expected[i].l;
                                }
                            }
                            check.expect(curve.best_l == argmin, tag + ": argmin differs from oracle");

                            const auto flat =
                                blocklen::select_block_length(Matrix::Constant(rows.rows(), nf, 0.01), c);
                            check.expect(flat.best_l == l_min, tag + ": constant series argmin != l_min");
                        }
                    }
                }
            }
        }
    }
    return check.done(std::to_string(instances) + " instances, max abs deviation " + fmt(worst, 3));
}

// -- 4. LSTM gradient check --

Outcome gradient_check() {
    using namespace forecaster;
    Check check;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const LstmArchitecture arch{2, 4, 1, Activation::Tanh};
        LstmParams p(arch);
        Rng rng(seed);
        for (Index k = 0; k < p.size(); ++k) p.flat()[k] = rng.uniform(-0.5, 0.5);
        const Matrix seq = testing::random_matrix(5, 2, seed + 100, 0.0, 1.0);
        const RowVector target = testing::random_matrix(1, 2, seed + 200, 0.0, 1.0);
        const double err = oracle::gradient_check(seq, target, p, 1e-5);
        worst = std::max(worst, err);
        check.expect(err < 1e-4, "instance " + std::to_string(seed) + " relative error " + fmt(err));
    }
    return check.done("10 instances, worst relative error " + fmt(worst, 3));
}

// -- 5. transform round trips --

Outcome transform_round_trips() {
    Check check;
    double worst_log = 0.0;
    double worst_minmax = 0.0;
    Rng pick(55);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Index rows = pick.uniform_int(2, 80);
        const Index cols = pick.uniform_int(1, 5);
        const Matrix m = testing::random_matrix(rows, cols, seed, 1e-3, 1e4);
        const auto series = series::MultiSeries::from_values(m);
        const auto back = series::inverse_log_ratio(series::log_ratio(series));
        worst_log = std::max(worst_log, testing::max_relative_error(back.values(), m));
        const auto scaled = series::minmax_scale(series);
        const auto restored = series::inverse_minmax(scaled.series, scaled.params);
        worst_minmax = std::max(worst_minmax, testing::max_relative_error(restored.values(), m));
    }
    check.expect(worst_log < 1e-10, "log-ratio round trip error " + fmt(worst_log));
    check.expect(worst_minmax < 1e-10, "min-max round trip error " + fmt(worst_minmax));
    return check.done("100 matrices, worst log-ratio " + fmt(worst_log, 3) + ", worst min-max " +
                      fmt(worst_minmax, 3));
}

// -- 6. quantile and metric oracles --

band::EnsemblePredictions ensemble_of(std::vector<Matrix> members) {
    band::EnsemblePredictions e;
    e.members = std::move(members);
    return e;
}

Outcome quantile_and_metrics() {
    Check check;
    std::vector<Matrix> three;
    for (double v : {3.0, 1.0, 2.0}) three.push_back(Matrix::Constant(1, 1, v));
    const auto b = band::percentile_band(ensemble_of(three), 0.95, Matrix::Zero(1, 1));
    check.expect(std::abs(b.lower(0, 0) - 1.05) < 1e-12 && std::abs(b.upper(0, 0) - 2.95) < 1e-12,
                 "{1,2,3} gave [" + fmt(b.lower(0, 0), 17) + ", " + fmt(b.upper(0, 0), 17) + "]");

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<Matrix> members;
        for (std::uint64_t r = 0; r < 15; ++r) members.push_back(testing::random_matrix(9, 3, seed * 100 + r, -5, 5));
        const Matrix actual = testing::random_matrix(9, 3, seed * 100 + 99, -6, 6);
        const auto band = band::percentile_band(ensemble_of(members), 0.95, actual);
        const auto m = band::compute_metrics(band);
        for (Index j = 0; j < 3; ++j) {
            check.expect(std::abs(m.mad[j] - oracle::mad(actual, band.average, j)) <= 1e-12, "mad oracle");
            check.expect(std::abs(m.msd[j] - oracle::msd(actual, band.average, j)) <= 1e-12, "msd oracle");
            check.expect(std::abs(m.abwd[j] - oracle::abwd(band.upper, band.lower, j)) <= 1e-12, "abwd oracle");
        }
    }

    // Shift: multiples of 1/8 keep every interpolation step exact.
    Rng rng(77);
    std::vector<Matrix> dyadic;
    for (int r = 0; r < 41; ++r) {
        Matrix m(6, 2);
        for (Index k = 0; k < m.size(); ++k) m.data()[k] = static_cast<double>(rng.uniform_int(-800, 800)) / 8.0;
        dyadic.push_back(m);
    }
    Matrix actual(6, 2);
    for (Index k = 0; k < actual.size(); ++k) actual.data()[k] = static_cast<double>(rng.uniform_int(-800, 800)) / 8.0;
    const double c = 13.375;
    std::vector<Matrix> shifted;
    for (const auto& m : dyadic) shifted.push_back(m.array() + c);
    const auto base = band::percentile_band(ensemble_of(dyadic), 0.95, actual);
    const auto moved = band::percentile_band(ensemble_of(shifted), 0.95, Matrix(actual.array() + c));
    check.expect(moved.lower == Matrix(base.lower.array() + c) && moved.upper == Matrix(base.upper.array() + c) &&
                     moved.average == Matrix(base.average.array() + c),
                 "shifted band is not an exact translate");
    const auto mb = band::compute_metrics(base);
    const auto mm = band::compute_metrics(moved);
    check.expect(mb.mad == mm.mad && mb.msd == mm.msd && mb.abwd == mm.abwd, "metrics changed under shift");

    const double lambda = 3.7;
    std::vector<Matrix> positive;
    std::vector<Matrix> scaled;
    for (std::uint64_t r = 0; r < 25; ++r) {
        positive.push_back(testing::random_matrix(6, 3, 300 + r, 1, 50));
        scaled.push_back(lambda * positive.back());
    }
    const Matrix y = testing::random_matrix(6, 3, 999, 1, 50);
    const auto a = band::percentile_band(ensemble_of(positive), 0.95, y);
    const auto s = band::percentile_band(ensemble_of(scaled), 0.95, lambda * y);
    double worst = std::max({testing::max_relative_error(s.lower, lambda * a.lower),
                             testing::max_relative_error(s.upper, lambda * a.upper),
                             testing::max_relative_error(s.average, lambda * a.average)});
    const auto ma = band::compute_metrics(a);
    const auto ms = band::compute_metrics(s);
    for (Index j = 0; j < 3; ++j) {
        worst = std::max(worst, std::abs(ms.mad[j] - lambda * ma.mad[j]) / (lambda * ma.mad[j]));
        worst = std::max(worst, std::abs(ms.abwd[j] - lambda * ma.abwd[j]) / (lambda * ma.abwd[j]));
        worst = std::max(worst, std::abs(ms.msd[j] - lambda * lambda * ma.msd[j]) / (lambda * lambda * ma.msd[j]));
    }
    check.expect(worst <= 1e-10, "scale equivariance error " + fmt(worst));
    return check.done("[1.05, 2.95], oracles within 1e-12, exact shift, scale error " + fmt(worst, 3));
}

// -- 7. coverage --

Outcome coverage() {
    Check check;
    const Index steps = 20;
    const Index features = 5;
    const int draws = 1000;
    Rng rng(2024);
    std::vector<Matrix> members(draws, Matrix(steps, features));
    for (auto& m : members) {
        for (Index k = 0; k < m.size(); ++k) m.data()[k] = rng.normal();
    }
    const auto b = band::percentile_band(ensemble_of(members), 0.95, Matrix::Zero(steps, features));
    int good = 0;
    double lo = 1.0;
    double hi = 0.0;
    for (Index t = 0; t < steps; ++t) {
        for (Index j = 0; j < features; ++j) {
            int inside = 0;
            for (const auto& m : members) inside += (m(t, j) >= b.lower(t, j) && m(t, j) <= b.upper(t, j)) ? 1 : 0;
            const double f = inside / static_cast<double>(draws);
            lo = std::min(lo, f);
            hi = std::max(hi, f);
            good += (f >= 0.94 && f <= 0.96) ? 1 : 0;
        }
    }
    const double share = good / static_cast<double>(steps * features);
    check.expect(share >= 0.95, "only " + fmt(share) + " of cells in [0.94, 0.96]");
    return check.done(std::to_string(steps * features) + " cells, " + fmt(share) + " in range, fractions " +
                      fmt(lo) + ".." + fmt(hi));
}

// -- 8. end-to-end determinism, baseline --

std::ostream& sink() {
    static std::ostringstream s;
    s.str({});
    return s;
}

Outcome baseline_end_to_end() {
    Check check;
    testing::TempDir dir("acceptance-e2e");
    {
        std::ofstream out(dir / "data.csv");
        series::write_series_csv(out, pipeline::synthetic_ar1({}));
    }
    std::string summary;
    for (auto variant : {bootstrap::Variant::NOBB, bootstrap::Variant::MBB, bootstrap::Variant::LBB}) {
        const std::string name(bootstrap::variant_name(variant));
        pipeline::PipelineConfig c;
        c.input = (dir / "data.csv").string();
        c.out = (dir / name).string();
        c.forecaster = pipeline::ForecasterKind::Baseline;
        c.replicates = 16;
        c.scheme = variant;

        const auto start = std::chrono::steady_clock::now();
        const auto manifest = pipeline::cmd_pipeline(c, sink());
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(seconds < 60.0, name + ": took " + fmt(seconds) + " s");

        const fs::path out = c.out;
        std::ifstream band_in(out / "band.csv");
        const auto band = band::read_band_csv(band_in);
        check.expect(band.steps() > 0 && band.num_features() == 3, name + ": band shape");
        for (Index t = 0; t < band.steps(); ++t) {
            for (Index j = 0; j < band.num_features(); ++j) {
                check.expect(band.lower(t, j) <= band.average(t, j) && band.average(t, j) <= band.upper(t, j),
                             name + ": L <= avg <= U violated");
            }
        }

        auto replay = pipeline::config_from_manifest(out / "manifest.json");
        replay.out = (dir / (name + "-replay")).string();
        const auto again = pipeline::cmd_pipeline(replay, sink());
        check.expect(again["outputs"] == manifest["outputs"], name + ": replay output digests differ");
        for (const auto& [file, sha] : manifest["outputs"].items()) {
            check.expect(slurp(out / file) == slurp(fs::path(replay.out) / file), name + ": replay differs in " + file);
        }
        check.expect(pipeline::dump_json(pipeline::cmd_evaluate(out / "band.csv")) == slurp(out / "metrics.json"),
                     name + ": evaluate differs from metrics.json");
        summary += (summary.empty() ? "" : ", ") + name + " " + fmt(seconds, 3) + " s (l=" +
                   std::to_string(manifest["block_length"]["value"].get<Index>()) + ")";
    }
    return check.done(summary);
}

// -- 9. LSTM smoke --

Outcome lstm_smoke() {
    Check check;
    testing::TempDir dir("acceptance-lstm");
    const auto raw = pipeline::synthetic_ar1({});
    {
        std::ofstream out(dir / "data.csv");
        series::write_series_csv(out, raw);
    }
    pipeline::PipelineConfig c;
    c.input = (dir / "data.csv").string();
    c.out = (dir / "out").string();
    c.forecaster = pipeline::ForecasterKind::Lstm;
    c.replicates = 8;
    c.train.hidden_size = 16;
    c.train.epochs = 50;
    const auto run = pipeline::run_pipeline(raw, c);

    double min_reduction = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < run.replicates.size(); ++r) {
        const auto& h = run.replicates[r].history;
        check.expect(!h.train_loss.empty(), "replicate " + std::to_string(r) + " has no history");
        if (h.train_loss.empty()) continue;
        const double first = h.train_loss.front();
        const double best = h.train_loss[static_cast<std::size_t>(h.best_epoch)];
        const double reduction = (first - best) / first;
        min_reduction = std::min(min_reduction, reduction);
        check.expect(reduction >= 0.5, "replicate " + std::to_string(r) + " loss reduction " + fmt(reduction) +
                                           " (best epoch " + std::to_string(h.best_epoch + 1) + ")");
    }

    std::string widths;
    for (Index j = 0; j < run.band.num_features(); ++j) {
        const double half_width = (run.band.upper.col(j) - run.band.lower.col(j)).mean() / 2.0;
        const double mad = run.metrics.mad[j];
        const std::string& name = run.metrics.features[static_cast<std::size_t>(j)];
        check.expect(std::isfinite(mad), name + ": MAD not finite");
        check.expect(mad < 10.0 * half_width,
                     name + ": MAD " + fmt(mad) + " >= 10 x mean half-width " + fmt(10.0 * half_width));
        widths += (widths.empty() ? "" : ", ") + name + " MAD " + fmt(mad) + " vs " + fmt(10.0 * half_width);
    }
    return check.done("l=" + std::to_string(run.block_length) + ", min loss reduction " + fmt(min_reduction, 3) +
                      ", " + widths);
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "bootstrap correctness", 10.0, bootstrap_laws},
        {2, "NOBB uniformity", 0.0, nobb_uniformity},
        {3, "block-length objective oracle", 5.0, blocklen_oracle},
        {4, "LSTM gradient check", 30.0, gradient_check},
        {5, "transform round trips", 0.0, transform_round_trips},
        {6, "quantile and metric oracles", 0.0, quantile_and_metrics},
        {7, "ensemble coverage", 0.0, coverage},
        {8, "end-to-end determinism (baseline)", 0.0, baseline_end_to_end},
        {9, "LSTM end-to-end smoke", 600.0, lstm_smoke},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds >= c.budget_seconds) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s) [%.2f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
