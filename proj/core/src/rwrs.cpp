#include "lcrw/rwrs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcrw/parallel.hpp"
#include "lcrw/theory.hpp"

namespace lcrw::rwrs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IndicatorAcc {
    std::int64_t hits = 0;
    std::int64_t second_hits = 0;  // for fused sweeps
};

EstimateRecord indicator_record(double t, std::int64_t hits, std::int64_t n) {
    EstimateRecord r;
    r.x = t;
    r.n_samples = n;
    r.hits = hits;
    r.estimate = static_cast<double>(hits) / static_cast<double>(n);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(n));
    return r;
}

void check_grid(std::span<const double> t_grid, const EstimatorOptions& opt) {
    if (t_grid.empty()) throw std::invalid_argument("estimator: empty t grid");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1])) throw std::invalid_argument("estimator: t grid must be increasing");
    if (opt.n_samples <= 0) throw std::invalid_argument("estimator: n_samples must be >= 1");
}

// one indicator estimate per grid point; Walker(rng, t) -> bool
template <class Walker>
EstimateSeries indicator_series(const SceneryField& field, std::span<const double> t_grid,
                                const EstimatorOptions& opt, Walker&& walker) {
    EstimateSeries series;
    series.scenery_seed = field.seed();
    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        auto acc = block_reduce<IndicatorAcc>(
            opt.n_samples, opt.block_size, opt.threads,
            [&](std::int64_t lo, std::int64_t hi, IndicatorAcc& a) {
                for (std::int64_t i = lo; i < hi; ++i) {
                    RngStream rng(rng::key_of(opt.run_seed, ti, static_cast<std::uint64_t>(i)));
                    if (walker(rng, t)) ++a.hits;
                }
            },
            [](IndicatorAcc& t_, const IndicatorAcc& p) { t_.hits += p.hits; });
        series.records.push_back(indicator_record(t, acc.hits, opt.n_samples));
    }
    return series;
}

bool endpoint_is_origin(const Point& p) {
    for (int i = 0; i < p.dim(); ++i)
        if (p[i] != 0) return false;
    return true;
}

}  // namespace

std::vector<double> dyadic_grid(int min_exp, int max_exp, double base) {
    if (min_exp > max_exp) throw std::invalid_argument("grid: min_exp > max_exp");
    std::vector<double> g;
    for (int k = min_exp; k <= max_exp; ++k) g.push_back(std::pow(base, k));
    return g;
}

std::vector<ClockValue> clock(const WalkPath& path, const SceneryField& field,
                              std::span<const double> checkpoints, std::optional<double> cap) {
    for (size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 0.0 || checkpoints[i] > path.horizon * (1.0 + 1e-12))
            throw std::invalid_argument("clock: checkpoint beyond horizon");
        if (i > 0 && checkpoints[i] < checkpoints[i - 1])
            throw std::invalid_argument("clock: checkpoints must be sorted");
    }
    std::vector<ClockValue> out(checkpoints.size());
    KahanSum a, am;
    size_t ci = 0;
    const auto flush_up_to = [&](double time_now, double z, double zm, double seg_start) {
        // emit checkpoints inside [seg_start, time_now) using partial segment mass
        while (ci < checkpoints.size() && checkpoints[ci] <= time_now) {
            const double dt = checkpoints[ci] - seg_start;
            ClockValue cv;
            cv.t = checkpoints[ci];
            cv.a = a.value() + z * dt;
            if (cap) cv.truncated_a = am.value() + zm * dt;
            out[ci] = cv;
            ++ci;
        }
    };
    for (std::int64_t k = 0; k < path.n_sites() && ci < checkpoints.size(); ++k) {
        const double t0 = path.interval_start(k);
        const double t1 = path.interval_end(k);
        const double z = field.z_at(path.site_point(k));
        const double zm = cap ? std::min(z, *cap) : 0.0;
        flush_up_to(t1, z, zm, t0);
        a.add(z * (t1 - t0));
        if (cap) am.add(zm * (t1 - t0));
    }
    // checkpoints exactly at the horizon
    while (ci < checkpoints.size()) {
        ClockValue cv;
        cv.t = checkpoints[ci];
        cv.a = a.value();
        if (cap) cv.truncated_a = am.value();
        out[ci] = cv;
        ++ci;
    }
    return out;
}

ReturnsDiagnostics returns_diagnostics(const WalkPath& path, const SceneryField& field, double level_threshold) {
    ReturnsDiagnostics d;
    d.threshold = level_threshold;
    d.horizon = path.horizon;
    bool inside = false;
    KahanSum lt;
    for (std::int64_t k = 0; k < path.n_sites(); ++k) {
        const bool in = field.z_at(path.site_point(k)) >= level_threshold;
        const double t0 = path.interval_start(k);
        if (in && !inside) d.returns.push_back(t0);
        if (!in && inside) d.departures.push_back(t0);
        if (in) lt.add(path.interval_end(k) - t0);
        inside = in;
    }
    if (inside) d.departures.push_back(kInf);
    d.level_local_time = lt.value();
    for (double r : d.returns)
        if (r < path.horizon) ++d.n_t;
    return d;
}

EstimateSeries tail_estimate(const SceneryField& field, double rho, TailMode mode,
                             std::span<const double> t_grid, const EstimatorOptions& opt) {
    check_grid(t_grid, opt);
    if (!(rho > 0.0)) throw std::invalid_argument("tail: rho must be > 0");
    const int d = field.dimension();

    const bool pinned = mode == TailMode::Pinned;
    EstimateSeries series = indicator_series(field, t_grid, opt, [&](RngStream& rng, double t) {
        const double threshold = std::pow(t, rho);
        KahanSum a;
        bool exceeded = false;
        const Point end = stream_walk(d, t, rng, [&](const Point& x, double t0, double t1) {
            if (exceeded) return true;
            a.add(field.z_at(x) * (t1 - t0));
            if (a.value() >= threshold) exceeded = true;
            return pinned || !exceeded;  // unpinned indicator is already decided
        });
        return exceeded && (!pinned || endpoint_is_origin(end));
    });
    series.mode = mode == TailMode::Unpinned     ? "rwrs-tail"
                  : mode == TailMode::Pinned     ? "rwrs-tail-pinned"
                                                 : "rwrs-tail-factorized";
    if (mode == TailMode::PinnedFactorized) {
        // approximate: unpinned tail times the exact return kernel
        for (auto& r : series.records) {
            const double p0 = walk::kernel(d, r.x, Point(d));
            r.estimate *= p0;
            r.stderr_ *= p0;
        }
    }
    return series;
}

EstimateSeries lower_deviation_estimate(const SceneryField& field, double eps, bool finite_mean_threshold,
                                        std::span<const double> t_grid, const EstimatorOptions& opt) {
    check_grid(t_grid, opt);
    const int d = field.dimension();
    double s = 0.0, mean = 0.0;
    if (finite_mean_threshold) {
        mean = field.mean();
        if (!std::isfinite(mean)) throw std::invalid_argument("lower deviation: law has no finite mean");
        if (!(eps > 0.0 && eps < mean)) throw std::invalid_argument("lower deviation: eps out of (0, E[z])");
    } else {
        s = theory::s_exponent(d, field.alpha());
        if (!(eps > 0.0 && eps < s)) throw std::invalid_argument("lower deviation: eps out of (0, s(d,alpha))");
    }

    EstimateSeries series = indicator_series(field, t_grid, opt, [&](RngStream& rng, double t) {
        const double threshold = finite_mean_threshold ? t * (mean - eps) : std::pow(t, s - eps);
        KahanSum a;
        bool exceeded = false;
        stream_walk(d, t, rng, [&](const Point& x, double t0, double t1) {
            a.add(field.z_at(x) * (t1 - t0));
            if (a.value() > threshold) exceeded = true;
            return !exceeded;
        });
        return !exceeded;
    });
    series.mode = finite_mean_threshold ? "rwrs-lower-mean" : "rwrs-lower";
    return series;
}

EstimateSeries hitting_estimate(const SceneryField& field, double rho, double eps,
                                std::span<const double> t_grid, const EstimatorOptions& opt) {
    check_grid(t_grid, opt);
    if (!(rho - 5.0 * eps >= 0.0)) throw std::invalid_argument("hitting: need rho - 5 eps >= 0");
    const int d = field.dimension();

    EstimateSeries series = indicator_series(field, t_grid, opt, [&](RngStream& rng, double t) {
        const double level = std::pow(t, rho - 5.0 * eps);
        bool hit = false;
        stream_walk(d, t, rng, [&](const Point& x, double, double) {
            if (field.z_at(x) >= level) hit = true;
            return !hit;
        });
        return hit;
    });
    series.mode = "hitting";
    return series;
}

std::pair<EstimateSeries, EstimateSeries> tail_and_hitting_estimate(const SceneryField& field, double rho,
                                                                    double eps, TailMode mode,
                                                                    std::span<const double> t_grid,
                                                                    const EstimatorOptions& opt) {
    check_grid(t_grid, opt);
    if (!(rho > 0.0)) throw std::invalid_argument("tail: rho must be > 0");
    if (!(rho - 5.0 * eps >= 0.0)) throw std::invalid_argument("hitting: need rho - 5 eps >= 0");
    const int d = field.dimension();
    const bool pinned = mode == TailMode::Pinned;

    EstimateSeries tail, hitting;
    tail.scenery_seed = hitting.scenery_seed = field.seed();
    tail.mode = pinned ? "rwrs-tail-pinned" : "rwrs-tail";
    hitting.mode = "hitting";

    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        const double a_threshold = std::pow(t, rho);
        const double level = std::pow(t, rho - 5.0 * eps);
        auto acc = block_reduce<IndicatorAcc>(
            opt.n_samples, opt.block_size, opt.threads,
            [&](std::int64_t lo, std::int64_t hi, IndicatorAcc& a) {
                for (std::int64_t i = lo; i < hi; ++i) {
                    RngStream rng(rng::key_of(opt.run_seed, ti, static_cast<std::uint64_t>(i)));
                    KahanSum clock_sum;
                    bool exceeded = false, hit = false;
                    const Point end = stream_walk(d, t, rng, [&](const Point& x, double t0, double t1) {
                        const double z = field.z_at(x);
                        if (!hit && z >= level) hit = true;
                        if (!exceeded) {
                            clock_sum.add(z * (t1 - t0));
                            if (clock_sum.value() >= a_threshold) exceeded = true;
                        }
                        return pinned || !(exceeded && hit);
                    });
                    if (exceeded && (!pinned || endpoint_is_origin(end))) ++a.hits;
                    if (hit) ++a.second_hits;
                }
            },
            [](IndicatorAcc& t_, const IndicatorAcc& p) {
                t_.hits += p.hits;
                t_.second_hits += p.second_hits;
            });
        tail.records.push_back(indicator_record(t, acc.hits, opt.n_samples));
        hitting.records.push_back(indicator_record(t, acc.second_hits, opt.n_samples));
    }
    return {std::move(tail), std::move(hitting)};
}

}  // namespace lcrw::rwrs
