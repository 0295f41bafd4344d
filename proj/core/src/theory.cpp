#include "lcrw/theory.hpp"

#include <algorithm>
#include <cmath>

namespace lcrw::theory {

namespace {
void require(bool ok, const std::string& msg) {
    if (!ok) throw RegimeError(msg);
}
void check_dims(int d1, int d2) {
    require(d1 >= 1 && d2 >= 1, "layer and scenery dimensions must be >= 1");
}
}  // namespace

double s_exponent(int d2, double alpha) {
    require(d2 >= 1, "dimension must be >= 1");
    require(alpha > 0.0, "alpha must be > 0");
    if (d2 == 1) return std::max((alpha + 1.0) / (2.0 * alpha), 1.0);
    return std::max(1.0 / alpha, 1.0);
}

double ondiag_exponent(int d1, int d2, double alpha) {
    check_dims(d1, d2);
    return 0.5 * d1 * s_exponent(d2, alpha) + 0.5 * d2;
}

double spectral_dimension(int d1, int d2, double alpha) {
    check_dims(d1, d2);
    return d1 * s_exponent(d2, alpha) + d2;
}

double moddev_exponent(int d1, int d2, double alpha, double delta) {
    check_dims(d1, d2);
    require(d2 >= 3, "moderate-deviation power law needs scenery dimension >= 3");
    require(alpha > 0.0, "alpha must be > 0");
    require(alpha != 0.5 * d2, "o(1)-boundary: alpha == d2/2 is excluded");
    require(alpha < 0.5 * d2, "power-law regime needs alpha < d2/2");
    require(delta >= 0.0, "delta must be >= 0");
    const double delta_star = std::max(1.0 / (2.0 * alpha), 0.5);
    const double delta_max = d2 / (4.0 * alpha);
    require(delta < delta_max,
            "out of the power-law regime: requires delta < d2/(4*alpha) (stretched-exponential decay beyond)");
    if (delta <= delta_star) return d1 * delta_star + 0.5 * d2;
    return delta * (d1 + 2.0 * alpha) - 1.0 + 0.5 * d2;
}

double green_exponent(int d1, int d2, double alpha) {
    check_dims(d1, d2);
    require(alpha > 0.0, "alpha must be > 0");
    if (d1 == 1 && d2 == 1) {
        require(alpha != 1.0, "o(1)-boundary: alpha == 1 on Z^{1+1} is excluded");
        require(alpha < 1.0, "recurrent regime: Z^{1+1} with finite-mean conductance has no Green function");
    }
    if (d2 == 1) return -d1 + std::min(1.0, 2.0 * alpha / (alpha + 1.0));
    return -d1 - std::min({1.0, alpha, 4.0 * alpha / d2}) * (d2 - 2.0);
}

double csrw_spectral_dimension(int d1, int d2, double alpha) {
    check_dims(d1, d2);
    require(alpha > 0.0, "alpha must be > 0");
    if (d2 == 1) {
        if (d1 == 1) {
            require(alpha != 1.0, "o(1)-boundary: alpha == 1 on Z^{1+1} is excluded");
            require(alpha < 1.0, "constant-speed spectral dimension on Z^{1+1} needs alpha < 1");
        }
        return d1 + std::min(1.0, 2.0 / (alpha + 1.0));
    }
    return d1 + 2.0 + std::min({1.0, alpha, 4.0 * alpha / d2}) * (d2 - 2.0);
}

double intrinsic_distance(int d2, double alpha, const Point& x, const Point& y) {
    require(x.dim() == 1 + d2 && y.dim() == 1 + d2, "points must live on Z^{1+d2}");
    const double s = s_exponent(d2, alpha);
    const double first = std::abs(static_cast<double>(x[0] - y[0]));
    double sq = 0.0;
    for (int i = 1; i <= d2; ++i) {
        const double c = static_cast<double>(x[i] - y[i]);
        sq += c * c;
    }
    return std::pow(first, 1.0 / s) + std::sqrt(sq);
}

Constants constants(int d1, int d2, double alpha, std::optional<double> mean_z) {
    check_dims(d1, d2);
    require(alpha > 1.0, "constants need a finite mean (alpha > 1)");
    const double m = mean_z.value_or(alpha / (alpha - 1.0));
    const double four_pi = 4.0 * 3.14159265358979323846;
    Constants c;
    c.ondiag_const = std::pow(four_pi, -0.5 * (d2 + 1)) / std::sqrt(m);
    c.green_const_paper = 0.25 * std::tgamma(0.5 * (d2 - 1.0)) * std::pow(m, 0.5 * (d2 - 2.0));
    c.green_const_derived = c.green_const_paper * std::pow(3.14159265358979323846, -0.5 * (d2 + 1));
    return c;
}

double ldp_rate_exponent(int d2, double alpha) {
    require(d2 >= 1, "dimension must be >= 1");
    if (d2 == 1) {
        require(alpha > 1.0, "rate exponent needs alpha > 1 in one dimension");
        return (alpha - 1.0) / (alpha + 1.0);
    }
    require(2.0 * alpha > d2, "rate exponent needs alpha > d2/2");
    return (2.0 * alpha - d2) / (2.0 * alpha + d2);
}

}  // namespace lcrw::theory
