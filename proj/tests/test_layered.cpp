#include <doctest.h>

#include <cmath>
#include <map>

#include "lcrw/layered.hpp"
#include "lcrw/oracle.hpp"
#include "lcrw/stats.hpp"
#include "lcrw/theory.hpp"

using namespace lcrw;

namespace {

LayeredModel constant_model(double c, int d1 = 1, int d2 = 1) {
    return LayeredModel(d1, d2, SceneryField(1, 1.0, d2, SceneryLaw::Constant, std::nullopt, c));
}
LayeredModel pareto_model(double alpha, int d1 = 1, int d2 = 1, std::uint64_t seed = 1) {
    return LayeredModel(d1, d2, SceneryField(seed, alpha, d2));
}
LayeredModel capped_model(double alpha, double cap, int d1 = 1, int d2 = 1, std::uint64_t seed = 1) {
    return LayeredModel(d1, d2, SceneryField(seed, alpha, d2, SceneryLaw::CappedPareto, cap));
}

using Hist = std::map<std::vector<std::int64_t>, std::int64_t>;

Hist endpoint_hist(const LayeredModel& m, double t, std::int64_t n, std::uint64_t seed, bool gillespie) {
    Hist h;
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng(rng::key_of(seed, static_cast<std::uint64_t>(i)));
        const auto [x1, x2] = gillespie ? layered::direct_gillespie(m, t, rng)
                                        : layered::sample_timechange(m, t, rng);
        std::vector<std::int64_t> key;
        for (int k = 0; k < x1.dim(); ++k) key.push_back(x1[k]);
        for (int k = 0; k < x2.dim(); ++k) key.push_back(x2[k]);
        ++h[key];
    }
    return h;
}

}  // namespace

TEST_CASE("t=0 stays at the origin") {
    RngStream rng(1);
    const auto [a, b] = layered::sample_timechange(pareto_model(0.5), 0.0, rng);
    CHECK(a == Point{0});
    CHECK(b == Point{0});
    const auto [c, d] = layered::direct_gillespie(pareto_model(0.5), 0.0, rng);
    CHECK(c == Point{0});
    CHECK(d == Point{0});
}

TEST_CASE("gillespie event count for the free walk is poisson 4t") {
    const LayeredModel m = constant_model(1.0);
    const double t = 50.0;
    const std::int64_t n = 4000;
    // count events through the jump structure: endpoint parity is weak, so
    // track the mean move count via a modified run: total displacement second
    // moment = 2t per coordinate instead
    double sq1 = 0.0, sq2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng(rng::key_of(5, static_cast<std::uint64_t>(i)));
        const auto [x1, x2] = layered::direct_gillespie(m, t, rng);
        sq1 += static_cast<double>(x1.sq_norm());
        sq2 += static_cast<double>(x2.sq_norm());
    }
    const double se = 2.0 * t * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(sq1 / n - 2.0 * t) <= 4.0 * se);
    CHECK(std::abs(sq2 / n - 2.0 * t) <= 4.0 * se);
}

TEST_CASE("constant scenery: endpoint matches the product of free kernels") {
    // Constant(1) on Z^{1+1}: X_t is the free walk on Z^2; chi-square of 1e6
    // samples at t=3 against kernel x kernel
    const LayeredModel m = constant_model(1.0);
    const double t = 3.0;
    const std::int64_t n = 1000000;
    const Hist h = endpoint_hist(m, t, n, 77, false);

    std::vector<std::int64_t> observed;
    std::vector<double> expected;
    for (Coord a = -9; a <= 9; ++a) {
        for (Coord b = -9; b <= 9; ++b) {
            const auto it = h.find({a, b});
            observed.push_back(it == h.end() ? 0 : it->second);
            expected.push_back(walk::kernel(1, t, Point{a}) * walk::kernel(1, t, Point{b}));
        }
    }
    const auto r = stats::chi_square_goodness(observed, expected, n);
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("representation equivalence at small scale") {
    const LayeredModel m = pareto_model(3.0, 1, 1, 42);
    const double t = 2.0;
    const std::int64_t n = 200000;
    const Hist a = endpoint_hist(m, t, n, 101, false);
    const Hist b = endpoint_hist(m, t, n, 202, true);
    const auto r = stats::chi_square_two_sample(a, b);
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("gillespie first-coordinate marginal matches the rate-c kernel") {
    const double c = 2.5, t = 4.0;
    const LayeredModel m = constant_model(c);
    const std::int64_t n = 400000;
    std::map<Coord, std::int64_t> h;
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng(rng::key_of(7, static_cast<std::uint64_t>(i)));
        const auto [x1, x2] = layered::direct_gillespie(m, t, rng);
        ++h[x1[0]];
    }
    std::vector<std::int64_t> observed;
    std::vector<double> expected;
    for (Coord a = -25; a <= 25; ++a) {
        observed.push_back(h.count(a) ? h[a] : 0);
        expected.push_back(walk::kernel(1, t, Point{a}, c));
    }
    CHECK(stats::chi_square_goodness(observed, expected, n).p_value > 1e-3);
}

TEST_CASE("kernel estimate: constant scenery reduces to the kernel product") {
    const LayeredModel m = constant_model(1.0);
    const double t = 2.0;
    EstimatorOptions opt;
    opt.n_samples = 400000;
    const auto est = layered::kernel_estimate(m, t, Point{0}, Point{0}, KernelMode::RaoBlackwell, opt);
    const double expect = walk::kernel(1, t, Point{0}) * walk::kernel(1, t, Point{0});
    CHECK(std::abs(est.mean - expect) <= 4.0 * est.stderr_);
    // Rao-Blackwell: with constant scenery the conditional value is exact, so
    // the only variance left is the endpoint indicator
    CHECK(est.stderr_ < 1e-3);
}

TEST_CASE("kernel estimate agrees with the uniformization oracle") {
    const LayeredModel m = capped_model(0.5, 10.0, 1, 1, 9);
    const double t = 5.0;
    const GeneratorBox g = GeneratorBox::layered(m, Box::centered(2, 25), Boundary::Absorbing);
    EstimatorOptions opt;
    opt.n_samples = 300000;
    for (Coord target1 : {0, 3}) {
        const auto est = layered::kernel_estimate(m, t, Point{target1}, Point{0}, KernelMode::RaoBlackwell, opt);
        const auto oracle = g.exact_prob(t, Point{0, 0}, Point{target1, 0});
        CHECK(std::abs(est.mean - oracle.value) <= 4.0 * est.stderr_ + oracle.absorbed_mass);
    }
}

TEST_CASE("direct gillespie estimator agrees and rao-blackwell dominates it") {
    const LayeredModel m = capped_model(0.5, 10.0, 1, 1, 9);
    const double t = 5.0;
    EstimatorOptions opt;
    opt.n_samples = 200000;
    const auto rb = layered::kernel_estimate(m, t, Point{0}, Point{0}, KernelMode::RaoBlackwell, opt);
    EstimatorOptions opt2 = opt;
    opt2.run_seed = 999;
    const auto dg = layered::kernel_estimate(m, t, Point{0}, Point{0}, KernelMode::DirectGillespie, opt2);
    CHECK(std::abs(rb.mean - dg.mean) <= 4.0 * std::sqrt(rb.stderr_ * rb.stderr_ + dg.stderr_ * dg.stderr_));
    CHECK(rb.stderr_ < dg.stderr_);  // strict at pinned targets
}

TEST_CASE("moddev: delta 0 reduces to the on-diagonal kernel estimate") {
    const LayeredModel m = pareto_model(1.0, 1, 3, 5);
    EstimatorOptions opt;
    opt.n_samples = 20000;
    const std::vector<double> grid = {16.0};
    const auto series = layered::moddev_estimate(m, grid, 0.0, true, opt);
    EstimatorOptions opt2 = opt;
    opt2.run_seed = rng::key_of(opt.run_seed, 0, 0) * 0 + opt.run_seed;  // same seed semantics differ; compare statistically
    const auto direct = layered::kernel_estimate(m, 16.0, Point{0}, Point{0, 0, 0}, KernelMode::RaoBlackwell, opt2);
    const double se = std::sqrt(series.records[0].stderr_ * series.records[0].stderr_ +
                                direct.stderr_ * direct.stderr_);
    CHECK(std::abs(series.records[0].estimate - direct.mean) <= 4.0 * se);
}

TEST_CASE("moddev target rounding") {
    CHECK(layered::moddev_target(1024.0, 0.6) == 64);   // exact power of two
    CHECK(layered::moddev_target(2048.0, 0.6) == 97);   // floor(2^6.6) = floor(97.005)
    CHECK(layered::moddev_target(100.0, 0.0) == 1);
}

TEST_CASE("csrw: constant scenery has the closed-form time change") {
    // B(t) = (2 d1 c + 2 d2) t, so Y_t is the free pair at time t/(2c+2) with
    // first coordinate run at elapsed c t/(2c+2)
    const double c = 3.0, t = 12.0;
    const LayeredModel m = constant_model(c);
    const std::int64_t n = 400000;
    std::map<Coord, std::int64_t> h1, h2;
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng(rng::key_of(13, static_cast<std::uint64_t>(i)));
        const auto [x1, x2] = layered::csrw_timechange(m, t, rng);
        ++h1[x1[0]];
        ++h2[x2[0]];
    }
    const double u = t / (2.0 * c + 2.0);  // B^{-1}(t)
    std::vector<std::int64_t> o1, o2;
    std::vector<double> e1, e2;
    for (Coord a = -22; a <= 22; ++a) {
        o1.push_back(h1.count(a) ? h1[a] : 0);
        e1.push_back(walk::kernel(1, c * u, Point{a}));  // elapsed A^2(B^-1) = c u
        o2.push_back(h2.count(a) ? h2[a] : 0);
        e2.push_back(walk::kernel(1, u, Point{a}));
    }
    CHECK(stats::chi_square_goodness(o1, e1, n).p_value > 1e-3);
    CHECK(stats::chi_square_goodness(o2, e2, n).p_value > 1e-3);
}

TEST_CASE("lclt ratio: constant scenery gives ratio 1") {
    const double c = 2.0;  // E[z] = c exactly, alpha irrelevant for constant law
    LayeredModel m(1, 1, SceneryField(1, 3.0, 1, SceneryLaw::Constant, std::nullopt, c));
    EstimatorOptions opt;
    opt.n_samples = 60000;
    const double t = 64.0;
    std::vector<std::pair<Point, Point>> targets = {{Point{0}, Point{0}}, {Point{4}, Point{-3}}};
    // constant law mean() returns c
    const auto entries = layered::lclt_ratio(m, t, targets, opt);
    REQUIRE(entries.size() == 2);
    for (const auto& e : entries) {
        CHECK(std::abs(e.ratio - 1.0) <= 4.0 * e.stderr_);
        CHECK(e.stderr_ < 0.2);
    }
}

TEST_CASE("lclt numerator agrees with the single-walk indicator estimator") {
    const LayeredModel m = pareto_model(3.0, 1, 1, 21);
    const double t = 32.0;
    EstimatorOptions opt;
    opt.n_samples = 120000;
    const Point x1{2}, x2{-1};
    const auto entries = layered::lclt_ratio(m, t, {{x1, x2}}, opt);
    REQUIRE(entries.size() == 1);

    // raw kernel_estimate of the same probability
    EstimatorOptions opt2;
    opt2.n_samples = 400000;
    opt2.run_seed = 4242;
    const auto raw = layered::kernel_estimate(m, t, x1, x2, KernelMode::RaoBlackwell, opt2);
    const double se = std::sqrt(entries[0].stderr_ * entries[0].denominator *
                                    entries[0].stderr_ * entries[0].denominator +
                                raw.stderr_ * raw.stderr_);
    CHECK(std::abs(entries[0].numerator - raw.mean) <= 4.0 * se);
}

TEST_CASE("lclt numerator agrees with the uniformization oracle") {
    const LayeredModel m = capped_model(2.0, 8.0, 1, 1, 33);
    const double t = 10.0;
    EstimatorOptions opt;
    opt.n_samples = 150000;
    const Point x1{1}, x2{2};
    const auto entries = layered::lclt_ratio(m, t, {{x1, x2}}, opt);
    const GeneratorBox g = GeneratorBox::layered(m, Box::centered(2, 30), Boundary::Absorbing);
    const auto oracle = g.exact_prob(t, Point{0, 0}, Point{1, 2});
    CHECK(std::abs(entries[0].numerator - oracle.value) <=
          4.0 * entries[0].stderr_ * entries[0].denominator + oracle.absorbed_mass + 1e-12);
}

TEST_CASE("lclt refuses infinite-mean laws") {
    const LayeredModel m = pareto_model(0.9);
    EstimatorOptions opt;
    CHECK_THROWS_AS(layered::lclt_ratio(m, 8.0, {{Point{0}, Point{0}}}, opt), RegimeError);
}

TEST_CASE("green estimate: free walk on Z^3 against the box oracle") {
    // Constant(1), d1=1, d2=2: free walk on Z^3; target distance 5
    const LayeredModel m = constant_model(1.0, 1, 2);
    EstimatorOptions opt;
    opt.n_samples = 60000;
    const auto ge = layered::green_estimate(m, 5, {}, opt);

    const GeneratorBox g = GeneratorBox::free_walk(3, 16, Boundary::Absorbing);
    const auto oracle = g.exact_green(Point{0, 0, 0}, Point{5, 0, 0});
    CHECK(std::abs(ge.value - oracle.value) <= 0.10 * oracle.value + ge.stderr_);
}

TEST_CASE("green estimate refuses recurrent models") {
    const LayeredModel m = pareto_model(2.0, 1, 1);  // finite mean on Z^{1+1}: recurrent
    EstimatorOptions opt;
    CHECK_THROWS_AS(layered::green_estimate(m, 8, {}, opt), RegimeError);
}

TEST_CASE("timechange vs gillespie on the multidimensional layer") {
    const LayeredModel m = pareto_model(3.0, 2, 1, 15);
    const double t = 1.5;
    const std::int64_t n = 150000;
    const Hist a = endpoint_hist(m, t, n, 31, false);
    const Hist b = endpoint_hist(m, t, n, 32, true);
    CHECK(stats::chi_square_two_sample(a, b).p_value > 1e-3);
}
