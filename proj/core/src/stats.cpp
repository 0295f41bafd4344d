#include "lcrw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcrw/rng.hpp"

namespace lcrw::stats {

namespace {

struct WlsResult {
    double slope, intercept, r2;
};

// weighted least squares on prepared (lx, ly, w)
WlsResult wls(const std::vector<double>& lx, const std::vector<double>& ly, const std::vector<double>& w) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    const size_t m = lx.size();
    for (size_t i = 0; i < m; ++i) {
        sw += w[i];
        swx += w[i] * lx[i];
        swy += w[i] * ly[i];
        swxx += w[i] * lx[i] * lx[i];
        swxy += w[i] * lx[i] * ly[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    const double slope = (sw * swxy - swx * swy) / det;
    const double intercept = (swy - slope * swx) / sw;

    double ss_res = 0, ss_tot = 0;
    const double ybar = swy / sw;
    for (size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ss_res += w[i] * r * r;
        const double c = ly[i] - ybar;
        ss_tot += w[i] * c * c;
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace

ExponentFit fit_exponent(const EstimateSeries& series, int min_hits, int resamples, std::uint64_t boot_seed) {
    std::vector<double> lx, ly, se_log;
    int excluded = 0;
    for (const auto& r : series.records) {
        if (r.hits < min_hits || !(r.estimate > 0.0)) {
            ++excluded;
            continue;
        }
        lx.push_back(std::log(r.x));
        ly.push_back(std::log(r.estimate));
        se_log.push_back(r.stderr_ > 0.0 ? r.stderr_ / r.estimate : 0.0);
    }
    const size_t m = lx.size();
    if (m < 3) throw std::invalid_argument("fit: fewer than 3 usable points");

    const bool noiseless = std::all_of(se_log.begin(), se_log.end(), [](double s) { return s == 0.0; });
    std::vector<double> w(m, 1.0);
    if (!noiseless) {
        for (size_t i = 0; i < m; ++i) {
            const double s = std::max(se_log[i], 1e-12);
            w[i] = 1.0 / (s * s);
        }
    }

    const WlsResult base = wls(lx, ly, w);

    ExponentFit fit;
    fit.slope = base.slope;
    fit.intercept = base.intercept;
    fit.r_squared = base.r2;
    fit.points_used = static_cast<int>(m);
    fit.points_excluded = excluded;

    if (noiseless || resamples <= 0) {
        fit.slope_ci_lo = fit.slope_ci_hi = base.slope;
        return fit;
    }

    // log-space resampling of each point from its own sampling spread
    RngStream rng(rng::key_of(boot_seed, series.scenery_seed, static_cast<std::uint64_t>(m)));
    std::vector<double> slopes;
    slopes.reserve(static_cast<size_t>(resamples));
    std::vector<double> ly_b(m);
    for (int b = 0; b < resamples; ++b) {
        for (size_t i = 0; i < m; ++i) ly_b[i] = ly[i] + se_log[i] * rng.next_normal();
        slopes.push_back(wls(lx, ly_b, w).slope);
    }
    std::sort(slopes.begin(), slopes.end());
    const auto pick = [&](double q) {
        const double pos = q * (slopes.size() - 1);
        const size_t i = static_cast<size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < slopes.size() ? slopes[i] * (1 - frac) + slopes[i + 1] * frac : slopes[i];
    };
    fit.slope_ci_lo = pick(0.025);
    fit.slope_ci_hi = pick(0.975);
    return fit;
}

TheoryVerdict compare_to_theory(const ExponentFit& fit, double theoretical, double tolerance) {
    TheoryVerdict v;
    v.slope = fit.slope;
    v.theoretical = theoretical;
    v.tolerance = tolerance;
    v.within_tolerance = std::abs(fit.slope - theoretical) <= tolerance;
    v.theory_in_ci = fit.slope_ci_lo <= theoretical && theoretical <= fit.slope_ci_hi;
    v.pass = v.within_tolerance || v.theory_in_ci;
    return v;
}

// ---- incomplete gamma (series + continued fraction, NR style) ------------

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double stat, double dof) { return gamma_q(0.5 * dof, 0.5 * stat); }

ChiSquareResult chi_square_two_sample(const std::map<std::vector<std::int64_t>, std::int64_t>& a,
                                      const std::map<std::vector<std::int64_t>, std::int64_t>& b,
                                      std::int64_t min_cell) {
    double na = 0, nb = 0;
    for (const auto& [k, v] : a) na += static_cast<double>(v);
    for (const auto& [k, v] : b) nb += static_cast<double>(v);
    if (na == 0 || nb == 0) throw std::invalid_argument("chi2: empty sample");
    // scaling factors for unequal totals (K. Pearson two-sample form)
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);

    std::map<std::vector<std::int64_t>, std::pair<std::int64_t, std::int64_t>> cells;
    for (const auto& [k, v] : a) cells[k].first += v;
    for (const auto& [k, v] : b) cells[k].second += v;

    double stat = 0.0;
    int used = 0;
    std::int64_t pa = 0, pb = 0;  // pooled small cells
    for (const auto& [k, cv] : cells) {
        const auto [ca, cb] = cv;
        if (ca + cb < min_cell) {
            pa += ca;
            pb += cb;
            continue;
        }
        const double num = ka * ca - kb * cb;
        stat += num * num / static_cast<double>(ca + cb);
        ++used;
    }
    if (pa + pb >= min_cell) {
        const double num = ka * pa - kb * pb;
        stat += num * num / static_cast<double>(pa + pb);
        ++used;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.bins = used;
    r.dof = std::max(1, used - 1);
    r.p_value = chi_square_sf(stat, r.dof);
    return r;
}

ChiSquareResult chi_square_goodness(const std::vector<std::int64_t>& observed,
                                    const std::vector<double>& expected_probability, std::int64_t total,
                                    std::int64_t min_expected) {
    if (observed.size() != expected_probability.size()) throw std::invalid_argument("chi2: size mismatch");
    double stat = 0.0;
    int used = 0;
    double pooled_exp = 0.0;
    double pooled_obs = 0.0;
    double mass = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_probability[i] * static_cast<double>(total);
        mass += expected_probability[i];
        if (e < static_cast<double>(min_expected)) {
            pooled_exp += e;
            pooled_obs += static_cast<double>(observed[i]);
            continue;
        }
        const double d = static_cast<double>(observed[i]) - e;
        stat += d * d / e;
        ++used;
    }
    // remainder cell: everything outside the listed support
    std::int64_t listed = 0;
    for (auto o : observed) listed += o;
    pooled_exp += (1.0 - mass) * static_cast<double>(total);
    pooled_obs += static_cast<double>(total - listed);
    if (pooled_exp >= static_cast<double>(min_expected)) {
        const double d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        ++used;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.bins = used;
    r.dof = std::max(1, used - 1);
    r.p_value = chi_square_sf(stat, r.dof);
    return r;
}

KsResult ks_uniform(std::vector<double> u) {
    if (u.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(u[i] - lo, hi - u[i]));
    }
    // Kolmogorov asymptotic tail with Stephens' finite-n correction
    const double lambda = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    KsResult r;
    r.statistic = d;
    r.p_value = std::clamp(p, 0.0, 1.0);
    return r;
}

}  // namespace lcrw::stats
