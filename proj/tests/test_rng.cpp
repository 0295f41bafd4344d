#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "lcrw/rng.hpp"

using namespace lcrw;

TEST_CASE("site keys match the frozen test vectors") {
    std::ifstream in(std::string(LCRW_TEST_DATA) + "/site_key_vectors.csv");
    REQUIRE(in.good());
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        const std::uint64_t seed = std::stoull(tok);
        std::getline(ss, tok, ',');
        const int dim = std::stoi(tok);
        std::vector<Coord> coords;
        for (int i = 0; i < dim; ++i) {
            std::getline(ss, tok, ',');
            coords.push_back(static_cast<Coord>(std::stoll(tok)));
        }
        std::getline(ss, tok, ',');
        const std::uint64_t key = std::stoull(tok, nullptr, 16);
        std::getline(ss, tok, ',');
        const double uniform = std::stod(tok);

        const std::uint64_t got = rng::key_of(seed, coords);
        CHECK(got == key);
        CHECK(rng::to_unit(got) == doctest::Approx(uniform).epsilon(1e-15));
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("unit variates stay inside the open interval") {
    CHECK(rng::to_unit(0) > 0.0);
    CHECK(rng::to_unit(~0ull) < 1.0);
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(17), b(17), c(18);
    std::vector<std::uint64_t> va, vb, vc;
    for (int i = 0; i < 8; ++i) {
        va.push_back(a.next_u64());
        vb.push_back(b.next_u64());
        vc.push_back(c.next_u64());
    }
    CHECK(va == vb);
    CHECK(va != vc);
}

TEST_CASE("exponential and poisson sample moments") {
    RngStream rng(99);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.next_exponential(4.0);
    CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));

    for (double mean : {0.5, 5.0, 40.0, 3000.0}) {
        double s = 0.0, sq = 0.0;
        const int m = 100000;
        for (int i = 0; i < m; ++i) {
            const double k = static_cast<double>(rng.next_poisson(mean));
            s += k;
            sq += k * k;
        }
        const double mu = s / m;
        const double var = sq / m - mu * mu;
        CHECK(mu == doctest::Approx(mean).epsilon(0.03));
        CHECK(var == doctest::Approx(mean).epsilon(0.08));
    }
}
