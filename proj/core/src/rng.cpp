#include "lcrw/rng.hpp"

#include <stdexcept>

namespace lcrw {

namespace {

// PTRD transformed-rejection Poisson sampler (W. Hörmann, 1993), exact for
// mean >= 10.  Deterministic given the stream.
std::int64_t poisson_ptrd(RngStream& rng, double mu) {
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        double u;
        double v = rng.next_unit();
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<std::int64_t>(std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mu + 0.445));
        }
        if (v >= v_r) {
            u = rng.next_unit() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = rng.next_unit() * v_r;
        }
        const double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) continue;
        const double k = std::floor((2.0 * a / us + b) * u + mu + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        const double log_mu = std::log(mu);
        if (k >= 10.0) {
            if (std::log(v * smu) <= (k + 0.5) * std::log(mu / k) - mu - 0.5 * std::log(6.283185307179586477) +
                                         k - (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
                return static_cast<std::int64_t>(k);
            }
        } else if (k >= 0.0) {
            if (std::log(v) <= k * log_mu - mu - std::lgamma(k + 1.0)) {
                return static_cast<std::int64_t>(k);
            }
        }
    }
}

}  // namespace

std::int64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // product-of-uniforms inversion
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = next_unit();
        while (prod > limit) {
            prod *= next_unit();
            ++k;
        }
        return k;
    }
    return poisson_ptrd(*this, mean);
}

}  // namespace lcrw
