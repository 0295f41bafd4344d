#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lcrw/stats.hpp"
#include "lcrw/walk.hpp"

using namespace lcrw;

TEST_CASE("t=0 path has no jumps") {
    const WalkPath p = walk::simulate_path(3, 0.0, 12345);
    CHECK(p.jump_times.empty());
    CHECK(p.endpoint() == Point{0, 0, 0});
    CHECK(walk::range_size(p) == 1);
}

TEST_CASE("jump count matches the poisson mean 2dt") {
    const int replicas = 10000;
    const double t = 1000.0;
    double jumps = 0.0;
    for (int i = 0; i < replicas; ++i)
        jumps += static_cast<double>(walk::simulate_path(1, t, rng::key_of(3, i)).jump_times.size());
    const double mean = jumps / replicas;
    const double se = std::sqrt(2.0 * t / replicas);
    CHECK(std::abs(mean - 2.0 * t) <= 3.0 * se);
}

TEST_CASE("endpoint second moment is 2t per coordinate") {
    const int replicas = 8000;
    const double t = 500.0;
    double sq = 0.0;
    for (int i = 0; i < replicas; ++i) {
        const Point e = walk::simulate_path(2, t, rng::key_of(5, i)).endpoint();
        sq += static_cast<double>(e.sq_norm());
    }
    const double mean = sq / replicas;                      // E|S_t|^2 = 4t in d=2
    const double se = std::sqrt(2.0) * 4.0 * t / std::sqrt(replicas);  // var(chi2-ish) ~ 2 (4t)^2 / n
    CHECK(std::abs(mean - 4.0 * t) <= 3.0 * se);
}

TEST_CASE("holding times have mean 1/(2d)") {
    const WalkPath p = walk::simulate_path(3, 4000.0, 777);
    double sum = 0.0;
    for (std::int64_t k = 0; k + 1 < p.n_sites(); ++k) sum += p.interval_end(k) - p.interval_start(k);
    const double mean = sum / static_cast<double>(p.jump_times.size());
    const double expect = 1.0 / 6.0;
    CHECK(std::abs(mean - expect) <= 4.0 * expect / std::sqrt(static_cast<double>(p.jump_times.size())));
}

TEST_CASE("consecutive sites differ by one step") {
    const WalkPath p = walk::simulate_path(2, 50.0, 42);
    for (std::int64_t k = 1; k < p.n_sites(); ++k) {
        Coord l1 = 0;
        for (int i = 0; i < p.dim; ++i) l1 += std::abs(p.site(k)[i] - p.site(k - 1)[i]);
        CHECK(l1 == 1);
    }
}

TEST_CASE("occupation: trivial paths and mass conservation") {
    WalkPath still;
    still.dim = 1;
    still.horizon = 3.0;
    still.start = Point{0};
    still.sites_flat = {0};
    const auto occ0 = walk::occupation(still);
    CHECK(occ0.local_time.at(Point{0}) == 3.0);

    WalkPath two;
    two.dim = 1;
    two.horizon = 1.0;
    two.start = Point{0};
    two.jump_times = {0.4};
    two.sites_flat = {0, 1};
    const auto occ1 = walk::occupation(two);
    CHECK(occ1.local_time.at(Point{0}) == doctest::Approx(0.4));
    CHECK(occ1.local_time.at(Point{1}) == doctest::Approx(0.6));

    const WalkPath p = walk::simulate_path(2, 800.0, 9001);
    const auto occ = walk::occupation(p);
    CHECK(std::abs(occ.total - p.horizon) <= 1e-9 * p.horizon);
}

TEST_CASE("range: 1-d interval property") {
    const WalkPath p = walk::simulate_path(1, 300.0, 31337);
    Coord mn = 0, mx = 0;
    for (std::int64_t k = 0; k < p.n_sites(); ++k) {
        mn = std::min(mn, p.site(k)[0]);
        mx = std::max(mx, p.site(k)[0]);
    }
    CHECK(walk::range_size(p) == mx - mn + 1);
}

TEST_CASE("mean range grows monotonically in t at fixed dimension") {
    double prev = 0.0;
    for (double t : {256.0, 512.0, 1024.0, 2048.0}) {
        double range = 0.0;
        const int replicas = 400;
        for (int i = 0; i < replicas; ++i)
            range += static_cast<double>(walk::range_size(walk::simulate_path(3, t, rng::key_of(11, i, static_cast<std::uint64_t>(t)))));
        range /= replicas;
        CHECK(range > prev);
        prev = range;
    }
}

TEST_CASE("kernel: t=0 and the classic e^-2 I_0(2) value") {
    CHECK(walk::kernel(1, 0.0, Point{0}) == 1.0);
    CHECK(walk::kernel(1, 0.0, Point{3}) == 0.0);
    // independent truncated power-series value of e^-2 I_0(2)
    double series = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) {
            term *= 1.0 / (static_cast<double>(k) * k);
        }
        series += term * std::pow(1.0, 2 * k);  // (z/2)^{2k}/(k!)^2 at z=2
    }
    series *= std::exp(-2.0);
    CHECK(walk::kernel(1, 1.0, Point{0}) == doctest::Approx(series).epsilon(1e-12));
    CHECK(walk::kernel(1, 1.0, Point{0}) == doctest::Approx(0.30850832255367104).epsilon(1e-12));
}

TEST_CASE("kernel normalization over a truncated box") {
    // d=2, t=3: sum over |x_i| <= 60 equals 1 within 1e-10
    double sum = 0.0;
    for (Coord a = -60; a <= 60; ++a)
        for (Coord b = -60; b <= 60; ++b) sum += walk::kernel(2, 3.0, Point{a, b});
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

    // d=1 at t = 1000, radius 8 sqrt(2t)
    double s1 = 0.0;
    const Coord r = static_cast<Coord>(8.0 * std::sqrt(2000.0));
    for (Coord a = -r; a <= r; ++a) s1 += walk::kernel(1, 1000.0, Point{a});
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kernel symmetry under reflection and permutation") {
    for (double t : {0.7, 13.0}) {
        CHECK(walk::kernel(2, t, Point{3, -5}) == walk::kernel(2, t, Point{-3, 5}));
        CHECK(walk::kernel(2, t, Point{3, -5}) == walk::kernel(2, t, Point{-5, 3}));
        CHECK(walk::kernel(3, t, Point{1, 2, 0}) == walk::kernel(3, t, Point{0, 2, 1}));
    }
}

TEST_CASE("chapman-kolmogorov") {
    const double s = 0.8, t = 1.3;
    for (Coord target : {0, 2, 5}) {
        double conv = 0.0;
        for (Coord y = -40; y <= 40; ++y)
            conv += walk::kernel(1, s, Point{y}) * walk::kernel(1, t, Point{target - y});
        CHECK(conv == doctest::Approx(walk::kernel(1, s + t, Point{target})).epsilon(1e-9));
    }
}

TEST_CASE("local clt: sqrt(t) p_t(0) -> (4 pi)^{-1/2}") {
    const double t = 1e4;
    const double lhs = std::sqrt(t) * walk::kernel(1, t, Point{0});
    CHECK(lhs == doctest::Approx(1.0 / std::sqrt(4.0 * 3.14159265358979)).epsilon(0.01));
}

TEST_CASE("gaussian envelope with constants fitted on a disjoint grid") {
    // fit c1..c4 of c t^-1/2 exp(-c x^2/t) on a training grid, then require
    // the envelope to hold on a validation grid
    auto ratio = [&](double t, Coord x) {
        return walk::kernel(1, t, Point{x}) * std::sqrt(t);
    };
    auto exponent = [&](double t, Coord x) { return static_cast<double>(x) * x / t; };

    double c2 = 0.0, c4 = 1e9;  // envelope rates: lower needs large c2, upper small c4
    double c1 = 1e9, c3 = 0.0;
    for (double t : {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 10000.0}) {
        for (Coord x = 0; x <= static_cast<Coord>(t); x += std::max<Coord>(1, static_cast<Coord>(t / 16))) {
            const double r = ratio(t, x);
            const double e = exponent(t, x);
            if (e > 0.0) {
                // p sqrt(t) = a exp(-b e) bounds: track the needed rates
                c2 = std::max(c2, -std::log(std::max(r, 1e-300)) / e);
                c4 = std::min(c4, -std::log(std::min(r, 0.999)) / e);
            }
            c1 = std::min(c1, r);
            c3 = std::max(c3, r);
        }
    }
    c1 *= 0.5;
    c3 *= 2.0;
    c2 = std::max(c2, 1.0) * 1.2;
    c4 = std::max(1e-3, c4 * 0.8);

    for (double t : {2.0, 8.0, 32.0, 128.0, 512.0, 4096.0}) {
        for (Coord x = 0; x <= static_cast<Coord>(t); x += std::max<Coord>(1, static_cast<Coord>(t / 11))) {
            const double p = walk::kernel(1, t, Point{x});
            const double lo = c1 / std::sqrt(t) * std::exp(-c2 * x * x / t);
            const double hi = c3 / std::sqrt(t) * std::exp(-c4 * x * x / t);
            CHECK(lo <= p);
            CHECK(p <= hi);
        }
    }
}

TEST_CASE("kernel matches simulation at d=1, t=5") {
    const double t = 5.0;
    const std::int64_t n = 1000000;
    std::map<Coord, std::int64_t> counts;
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng(rng::key_of(1234, static_cast<std::uint64_t>(i)));
        const Point e = stream_walk(1, t, rng, [](const Point&, double, double) { return true; });
        ++counts[e[0]];
    }
    for (Coord x = -8; x <= 8; ++x) {
        const double p = walk::kernel(1, t, Point{x});
        const double emp = static_cast<double>(counts[x]) / static_cast<double>(n);
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
        CHECK(std::abs(emp - p) <= 4.0 * se);
    }
}

TEST_CASE("kernel argument errors") {
    CHECK_THROWS_AS(walk::kernel(1, -1.0, Point{0}), std::invalid_argument);
    CHECK_THROWS_AS(walk::kernel(2, 1.0, Point{0}), std::invalid_argument);
}
