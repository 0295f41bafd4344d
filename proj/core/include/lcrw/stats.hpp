#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lcrw {

// One Monte Carlo estimate on a grid of horizons (or distances).
struct EstimateRecord {
    double x = 0.0;         // t (or n for Green series)
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_samples = 0;
    std::int64_t hits = 0;  // samples with nonzero contribution
};

struct EstimateSeries {
    std::vector<EstimateRecord> records;  // x strictly increasing
    std::uint64_t scenery_seed = 0;
    std::string mode;                      // estimator label
    std::string params;                    // compact parameter description
};

// Weighted log-log slope with bootstrap confidence interval.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci_lo = 0.0;
    double slope_ci_hi = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    int points_excluded = 0;  // zero-hit / under-min-hits points dropped
};

struct TheoryVerdict {
    bool pass = false;
    bool within_tolerance = false;
    bool theory_in_ci = false;
    double slope = 0.0;
    double theoretical = 0.0;
    double tolerance = 0.0;
};

namespace stats {

// Weighted least squares of log(estimate) on log(x); weights from the
// delta-method stderr of the log.  Points with hits below min_hits are
// excluded (counted in points_excluded).  CI at 95% from `resamples`
// log-space bootstrap replications.  Throws std::invalid_argument with
// fewer than 3 usable points.
ExponentFit fit_exponent(const EstimateSeries& series, int min_hits = 25, int resamples = 10000,
                         std::uint64_t boot_seed = 0x5eedf17ull);

TheoryVerdict compare_to_theory(const ExponentFit& fit, double theoretical, double tolerance);

// regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x)
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// upper tail of the chi-square distribution with k degrees of freedom
double chi_square_sf(double stat, double dof);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    int bins = 0;
};

// Two-sample chi-square over a common support; cells with combined count
// below min_cell are pooled.  Equal-weight version (same total is not
// required; totals enter the statistic).
ChiSquareResult chi_square_two_sample(const std::map<std::vector<std::int64_t>, std::int64_t>& a,
                                      const std::map<std::vector<std::int64_t>, std::int64_t>& b,
                                      std::int64_t min_cell = 5);

// Goodness of fit of observed counts against exact probabilities; remaining
// probability mass is pooled into one cell.
ChiSquareResult chi_square_goodness(const std::vector<std::int64_t>& observed,
                                    const std::vector<double>& expected_probability, std::int64_t total,
                                    std::int64_t min_expected = 5);

// One-sample Kolmogorov-Smirnov statistic of transformed uniforms and the
// asymptotic p-value (Kolmogorov distribution).
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_uniform(std::vector<double> u);

}  // namespace stats
}  // namespace lcrw
