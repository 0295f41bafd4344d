#include "lcrw/layered.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lcrw/bessel.hpp"
#include "lcrw/parallel.hpp"
#include "lcrw/theory.hpp"

namespace lcrw::layered {

namespace {

// endpoint of the first block after elapsed clock time tau: Poisson jump
// count at total rate 2 d1, uniform direction per jump
Point first_block_endpoint(int d1, double tau, RngStream& rng) {
    Point x1(d1);
    const std::int64_t jumps = rng.next_poisson(2.0 * d1 * tau);
    for (std::int64_t j = 0; j < jumps; ++j) {
        const std::uint64_t dir = rng.next_below(static_cast<std::uint64_t>(2 * d1));
        x1[static_cast<int>(dir >> 1)] += (dir & 1) ? 1 : -1;
    }
    return x1;
}

// log p_{tau}(0, x1) of the rate-1-per-direction block
double log_first_kernel(const Point& x1, double tau) {
    double lg = 0.0;
    for (int i = 0; i < x1.dim(); ++i) lg += bessel::log_ive(x1[i], 2.0 * tau);
    return lg;
}

bool is_origin(const Point& p) {
    for (int i = 0; i < p.dim(); ++i)
        if (p[i] != 0) return false;
    return true;
}

struct MeanAcc {
    KahanSum sum, sum_sq;
    std::int64_t hits = 0;
    void merge(const MeanAcc& o) {
        sum.add(o.sum);
        sum_sq.add(o.sum_sq);
        hits += o.hits;
    }
};

EstimateRecord mean_record(double t, const MeanAcc& acc, std::int64_t n) {
    EstimateRecord r;
    r.x = t;
    r.n_samples = n;
    r.hits = acc.hits;
    const double nn = static_cast<double>(n);
    r.estimate = acc.sum.value() / nn;
    const double var = std::max(0.0, acc.sum_sq.value() / nn - r.estimate * r.estimate);
    r.stderr_ = std::sqrt(var / nn);
    return r;
}

void check_target(const LayeredModel& model, const Point& x1, const Point& x2) {
    if (x1.dim() != model.d1 || x2.dim() != model.d2)
        throw std::invalid_argument("layered: target dimension mismatch");
}

}  // namespace

std::int64_t moddev_target(double t, double delta) {
    return static_cast<std::int64_t>(std::floor(std::pow(t, delta) + 1e-9));
}

std::pair<Point, Point> sample_timechange(const LayeredModel& model, double t, RngStream& rng) {
    if (!(t >= 0.0)) throw std::invalid_argument("layered: negative horizon");
    KahanSum a2;
    const Point x2 = stream_walk(model.d2, t, rng, [&](const Point& x, double t0, double t1) {
        a2.add(model.field.z_at(x) * (t1 - t0));
        return true;
    });
    return {first_block_endpoint(model.d1, a2.value(), rng), x2};
}

std::pair<Point, Point> direct_gillespie(const LayeredModel& model, double t, RngStream& rng) {
    if (!(t >= 0.0)) throw std::invalid_argument("layered: negative horizon");
    Point x1(model.d1), x2(model.d2);
    double z = model.field.z_at(x2);
    double now = 0.0;
    const double d1_pairs = 2.0 * model.d1;
    const double d2_pairs = 2.0 * model.d2;
    for (;;) {
        const double rate = d1_pairs * z + d2_pairs;
        now += rng.next_exponential(rate);
        if (now >= t) return {x1, x2};
        // one uniform decides the edge, weights z per layer edge and 1 else
        const double v = rng.next_unit() * rate;
        if (v < d1_pairs * z) {
            const int k = std::min(static_cast<int>(v / z), 2 * model.d1 - 1);
            x1[k >> 1] += (k & 1) ? 1 : -1;
        } else {
            const int k = std::min(static_cast<int>(v - d1_pairs * z), 2 * model.d2 - 1);
            x2[k >> 1] += (k & 1) ? 1 : -1;
            z = model.field.z_at(x2);
        }
    }
}

std::pair<Point, Point> csrw_timechange(const LayeredModel& model, double t, RngStream& rng) {
    if (!(t >= 0.0)) throw std::invalid_argument("layered: negative horizon");
    Point x2(model.d2);
    double a2 = 0.0, b = 0.0, now = 0.0;
    const double d2_rate = 2.0 * model.d2;
    for (;;) {
        const double z = model.field.z_at(x2);
        const double slope = 2.0 * model.d1 * z + d2_rate;  // dB/du on this interval
        const double hold = rng.next_exponential(d2_rate);
        if (b + slope * hold >= t) {
            const double du = (t - b) / slope;  // B^{-1}(t) lands inside this interval
            a2 += z * du;
            break;
        }
        b += slope * hold;
        a2 += z * hold;
        now += hold;
        const std::uint64_t dir = rng.next_below(static_cast<std::uint64_t>(2 * model.d2));
        x2[static_cast<int>(dir >> 1)] += (dir & 1) ? 1 : -1;
    }
    return {first_block_endpoint(model.d1, a2, rng), x2};
}

KernelEstimate kernel_estimate(const LayeredModel& model, double t, const Point& x1, const Point& x2,
                               KernelMode mode, const EstimatorOptions& opt) {
    check_target(model, x1, x2);
    if (opt.n_samples < 1) throw std::invalid_argument("layered: n_samples must be >= 1");

    KernelEstimate est;
    est.t = t;
    est.x1 = x1;
    est.x2 = x2;
    est.mode = mode;
    est.n = opt.n_samples;

    auto acc = block_reduce<MeanAcc>(
        opt.n_samples, opt.block_size, opt.threads,
        [&](std::int64_t lo, std::int64_t hi, MeanAcc& a) {
            for (std::int64_t i = lo; i < hi; ++i) {
                RngStream rng(rng::key_of(opt.run_seed, 0, static_cast<std::uint64_t>(i)));
                double val = 0.0;
                if (mode == KernelMode::DirectGillespie) {
                    const auto [y1, y2] = direct_gillespie(model, t, rng);
                    val = (y1 == x1 && y2 == x2) ? 1.0 : 0.0;
                } else {
                    KahanSum a2;
                    const Point end = stream_walk(model.d2, t, rng, [&](const Point& x, double t0, double t1) {
                        a2.add(model.field.z_at(x) * (t1 - t0));
                        return true;
                    });
                    if (mode == KernelMode::Factorized || end == x2)
                        val = std::exp(log_first_kernel(x1, a2.value()));
                }
                if (val != 0.0) {
                    ++a.hits;
                    a.sum.add(val);
                    a.sum_sq.add(val * val);
                }
            }
        },
        [](MeanAcc& t_, const MeanAcc& p) { t_.merge(p); });

    EstimateRecord r = mean_record(t, acc, opt.n_samples);
    if (mode == KernelMode::Factorized) {
        const double p2 = walk::kernel(model.d2, t, x2);
        r.estimate *= p2;
        r.stderr_ *= p2;
    }
    est.mean = r.estimate;
    est.stderr_ = r.stderr_;
    est.hits = r.hits;
    return est;
}

EstimateSeries kernel_series(const LayeredModel& model, std::span<const double> t_grid, const Point& x1,
                             const Point& x2, KernelMode mode, const EstimatorOptions& opt) {
    EstimateSeries series;
    series.scenery_seed = model.field.seed();
    series.mode = mode == KernelMode::RaoBlackwell     ? "rao-blackwell"
                  : mode == KernelMode::DirectGillespie ? "gillespie"
                                                        : "factorized";
    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        EstimatorOptions o = opt;
        o.run_seed = rng::key_of(opt.run_seed, 0x9d1ull, ti);
        const KernelEstimate e = kernel_estimate(model, t_grid[ti], x1, x2, mode, o);
        EstimateRecord r;
        r.x = e.t;
        r.estimate = e.mean;
        r.stderr_ = e.stderr_;
        r.n_samples = e.n;
        r.hits = e.hits;
        series.records.push_back(r);
    }
    return series;
}

std::vector<EstimateSeries> moddev_sweep(const LayeredModel& model, std::span<const double> t_grid,
                                         std::span<const double> deltas, bool pinned,
                                         const EstimatorOptions& opt) {
    if (t_grid.empty() || deltas.empty()) throw std::invalid_argument("moddev: empty grid");
    for (double d : deltas)
        if (!(d >= 0.0)) throw std::invalid_argument("moddev: delta must be >= 0");

    struct Acc {
        std::vector<MeanAcc> per_delta;
    };

    std::vector<EstimateSeries> out(deltas.size());
    for (size_t di = 0; di < deltas.size(); ++di) {
        out[di].scenery_seed = model.field.seed();
        out[di].mode = pinned ? "moddev-pinned" : "moddev";
    }

    for (size_t ti = 0; ti < t_grid.size(); ++ti) {
        const double t = t_grid[ti];
        std::vector<std::int64_t> targets(deltas.size());
        for (size_t di = 0; di < deltas.size(); ++di) targets[di] = moddev_target(t, deltas[di]);

        auto acc = block_reduce<Acc>(
            opt.n_samples, opt.block_size, opt.threads,
            [&](std::int64_t lo, std::int64_t hi, Acc& a) {
                a.per_delta.resize(deltas.size());
                for (std::int64_t i = lo; i < hi; ++i) {
                    RngStream rng(rng::key_of(opt.run_seed, ti, static_cast<std::uint64_t>(i)));
                    KahanSum a2;
                    const Point end = stream_walk(model.d2, t, rng, [&](const Point& x, double t0, double t1) {
                        a2.add(model.field.z_at(x) * (t1 - t0));
                        return true;
                    });
                    if (pinned && !is_origin(end)) continue;
                    const double tau = a2.value();
                    for (size_t di = 0; di < deltas.size(); ++di) {
                        double lg = bessel::log_ive(targets[di], 2.0 * tau);
                        lg += (model.d1 - 1) * bessel::log_ive(0, 2.0 * tau);
                        const double val = std::exp(lg);
                        auto& m = a.per_delta[di];
                        ++m.hits;
                        m.sum.add(val);
                        m.sum_sq.add(val * val);
                    }
                }
            },
            [&](Acc& t_, const Acc& p) {
                if (t_.per_delta.empty()) t_.per_delta.resize(deltas.size());
                for (size_t di = 0; di < deltas.size(); ++di) t_.per_delta[di].merge(p.per_delta[di]);
            });

        for (size_t di = 0; di < deltas.size(); ++di)
            out[di].records.push_back(mean_record(t, acc.per_delta[di], opt.n_samples));
    }
    return out;
}

EstimateSeries moddev_estimate(const LayeredModel& model, std::span<const double> t_grid, double delta,
                               bool pinned, const EstimatorOptions& opt) {
    const double ds[1] = {delta};
    return std::move(moddev_sweep(model, t_grid, ds, pinned, opt)[0]);
}

std::vector<double> default_green_grid(const LayeredModel& model, std::int64_t n_target, double eps0) {
    const double n = static_cast<double>(n_target);
    const double mean = model.field.mean();
    const double denom = std::min(std::isfinite(mean) ? 2.0 * mean : 1e300, 1.0);
    const double t_min = std::max(1.0, std::pow(n, eps0));
    const double t_max = 64.0 * n * n / denom;
    std::vector<double> grid;
    const double step = std::pow(2.0, 1.0 / 8.0);  // 8 points per octave
    for (double t = t_min; t < t_max * (1.0 + 1e-9); t *= step) grid.push_back(t);
    return grid;
}

GreenEstimate green_estimate(const LayeredModel& model, std::int64_t n_target,
                             std::span<const double> t_grid, const EstimatorOptions& opt) {
    // transience check; throws RegimeError on recurrent combinations
    theory::green_exponent(model.d1, model.d2, model.field.alpha());
    if (n_target < 1) throw std::invalid_argument("green: target distance must be >= 1");

    std::vector<double> grid(t_grid.begin(), t_grid.end());
    if (grid.empty()) grid = default_green_grid(model, n_target);
    const size_t m = grid.size();
    if (m < 3) throw std::invalid_argument("green: grid too short");

    // trapezoid in log t: int f dt = int t f dln t
    std::vector<double> w(m);
    for (size_t i = 0; i < m; ++i) {
        const double l_lo = i == 0 ? std::log(grid[0]) : std::log(grid[i - 1]);
        const double l_hi = i + 1 == m ? std::log(grid[m - 1]) : std::log(grid[i + 1]);
        w[i] = 0.5 * (l_hi - l_lo) * grid[i];
    }

    struct Acc {
        KahanSum quad_sum, quad_sq;
        std::vector<MeanAcc> per_point;
    };

    const int extra_zero_factors = model.d1 - 1;
    auto acc = block_reduce<Acc>(
        opt.n_samples, opt.block_size, opt.threads,
        [&](std::int64_t lo, std::int64_t hi, Acc& a) {
            a.per_point.resize(m);
            for (std::int64_t i = lo; i < hi; ++i) {
                RngStream rng(rng::key_of(opt.run_seed, 0x97ee, static_cast<std::uint64_t>(i)));
                KahanSum clock_sum;
                double quad = 0.0;
                size_t ci = 0;
                stream_walk(model.d2, grid.back() * (1.0 + 1e-12), rng,
                            [&](const Point& x, double t0, double t1) {
                                const double z = model.field.z_at(x);
                                while (ci < m && grid[ci] <= t1) {
                                    if (is_origin(x)) {
                                        const double tau = clock_sum.value() + z * (grid[ci] - t0);
                                        double lg = bessel::log_ive(n_target, 2.0 * tau);
                                        lg += extra_zero_factors * bessel::log_ive(0, 2.0 * tau);
                                        const double val = std::exp(lg);
                                        quad += w[ci] * val;
                                        auto& mp = a.per_point[ci];
                                        ++mp.hits;
                                        mp.sum.add(val);
                                        mp.sum_sq.add(val * val);
                                    }
                                    ++ci;
                                }
                                clock_sum.add(z * (t1 - t0));
                                return ci < m;
                            });
                a.quad_sum.add(quad);
                a.quad_sq.add(quad * quad);
            }
        },
        [&](Acc& t_, const Acc& p) {
            if (t_.per_point.empty()) t_.per_point.resize(m);
            t_.quad_sum.add(p.quad_sum);
            t_.quad_sq.add(p.quad_sq);
            for (size_t k = 0; k < m; ++k) t_.per_point[k].merge(p.per_point[k]);
        });

    GreenEstimate g;
    g.n_samples = opt.n_samples;
    const double nn = static_cast<double>(opt.n_samples);
    g.value = acc.quad_sum.value() / nn;
    const double var = std::max(0.0, acc.quad_sq.value() / nn - g.value * g.value);
    g.mc_stderr = std::sqrt(var / nn);

    g.integrand.scenery_seed = model.field.seed();
    g.integrand.mode = "green-integrand";
    for (size_t i = 0; i < m; ++i) g.integrand.records.push_back(mean_record(grid[i], acc.per_point[i], opt.n_samples));

    // power-law tail beyond the grid, fitted on the last octave; the whole
    // extrapolated mass is also charged to the error budget
    {
        std::vector<double> lx, ly;
        const double t_cut = grid.back() * 0.5;
        for (const auto& r : g.integrand.records) {
            if (r.x >= t_cut && r.hits >= 5 && r.estimate > 0.0) {
                lx.push_back(std::log(r.x));
                ly.push_back(std::log(r.estimate));
            }
        }
        const double T = grid.back();
        if (lx.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double k = static_cast<double>(lx.size());
            for (size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            const double beta = (k * sxy - sx * sy) / (k * sxx - sx * sx);
            const double logc = (sy - beta * sx) / k;
            const double f_T = std::exp(logc + beta * std::log(T));
            g.tail_mass = beta < -1.02 ? f_T * T / (-beta - 1.0) : f_T * T;
        } else if (!g.integrand.records.empty()) {
            g.tail_mass = g.integrand.records.back().estimate * T;
        }
    }

    // analytic bound on the skipped [0, t_min) piece: t_min * sup_tau p_tau(0, n e1)
    {
        double max_log = -1e300;
        const double lo = std::max(1e-3, 0.05 * n_target);
        const double hi = 10.0 * (static_cast<double>(n_target) * n_target + 1.0);
        for (int k = 0; k <= 160; ++k) {
            const double a2 = lo * std::pow(hi / lo, k / 160.0);
            double lg = bessel::log_ive(n_target, 2.0 * a2) + extra_zero_factors * bessel::log_ive(0, 2.0 * a2);
            max_log = std::max(max_log, lg);
        }
        g.small_t_bound = grid.front() * std::exp(max_log);
    }

    g.value += g.tail_mass;
    g.stderr_ = g.mc_stderr + g.tail_mass + g.small_t_bound;
    return g;
}

namespace {

// collision key of a d2-dimensional endpoint (21 bits per coordinate)
std::uint64_t endpoint_key(const Point& p) {
    std::uint64_t key = 0;
    for (int i = 0; i < p.dim(); ++i) {
        const Coord v = p[i] + (Coord(1) << 20);
        if (v < 0 || v >= (Coord(1) << 21)) throw std::invalid_argument("lclt: endpoint out of packable range");
        key |= static_cast<std::uint64_t>(v) << (21 * i);
    }
    return key;
}

struct HalfWalk {
    std::uint64_t end_key;
    double clock;
};

// one population of horizon-t/2 walks started at `start`; A accumulated in
// the shifted scenery, endpoints recorded in absolute coordinates
std::vector<HalfWalk> half_population(const LayeredModel& model, const Point& start, double half_t,
                                      std::uint64_t pop_seed, const EstimatorOptions& opt) {
    struct Acc {
        std::vector<HalfWalk> rows;
    };
    const std::int64_t n = opt.n_samples;
    auto acc = block_reduce<Acc>(
        n, opt.block_size, opt.threads,
        [&](std::int64_t lo, std::int64_t hi, Acc& a) {
            a.rows.reserve(static_cast<size_t>(hi - lo));
            for (std::int64_t i = lo; i < hi; ++i) {
                RngStream rng(rng::key_of(pop_seed, static_cast<std::uint64_t>(i)));
                KahanSum clock_sum;
                Point abs(model.d2);
                const Point rel = stream_walk(model.d2, half_t, rng, [&](const Point& x, double t0, double t1) {
                    Point site(model.d2);
                    for (int k = 0; k < model.d2; ++k) site[k] = start[k] + x[k];
                    clock_sum.add(model.field.z_at(site) * (t1 - t0));
                    return true;
                });
                for (int k = 0; k < model.d2; ++k) abs[k] = start[k] + rel[k];
                a.rows.push_back({endpoint_key(abs), clock_sum.value()});
            }
        },
        [](Acc& t_, const Acc& p) { t_.rows.insert(t_.rows.end(), p.rows.begin(), p.rows.end()); });
    return std::move(acc.rows);
}

}  // namespace

std::vector<LcltEntry> lclt_ratio(const LayeredModel& model, double t,
                                  const std::vector<std::pair<Point, Point>>& targets,
                                  const EstimatorOptions& opt) {
    const double mean = model.field.mean();
    if (!std::isfinite(mean))
        throw RegimeError("lclt: the averaged-environment kernel needs a finite mean (alpha > 1)");
    if (targets.empty()) throw std::invalid_argument("lclt: no targets");
    for (const auto& [x1, x2] : targets) check_target(model, x1, x2);

    constexpr int kBlocks = 64;
    const double half_t = 0.5 * t;

    // forward population from the origin, shared by every target
    const std::vector<HalfWalk> fwd =
        half_population(model, Point(model.d2), half_t, rng::key_of(opt.run_seed, 0xf07d), opt);
    const std::int64_t nf = static_cast<std::int64_t>(fwd.size());

    // distinct second-coordinate targets get their own reversed populations
    std::vector<Point> x2_list;
    for (const auto& [x1, x2] : targets)
        if (std::find(x2_list.begin(), x2_list.end(), x2) == x2_list.end()) x2_list.push_back(x2);

    std::vector<LcltEntry> out;
    for (const Point& x2 : x2_list) {
        const std::vector<HalfWalk> bwd = half_population(
            model, x2, half_t, rng::key_of(opt.run_seed, 0xbacd, static_cast<std::uint64_t>(out.size())), opt);
        const std::int64_t nb = static_cast<std::int64_t>(bwd.size());

        // per block: collision pairs (A_f + A_b) via an endpoint hash of the
        // forward rows; block sizes fixed by index stripes
        std::vector<std::vector<double>> block_pairs(kBlocks);
        std::vector<double> nf_b(kBlocks, 0.0), nb_b(kBlocks, 0.0);
        {
            std::unordered_multimap<std::uint64_t, double> fmap;
            for (int b = 0; b < kBlocks; ++b) {
                fmap.clear();
                for (std::int64_t i = b; i < nf; i += kBlocks) {
                    fmap.emplace(fwd[static_cast<size_t>(i)].end_key, fwd[static_cast<size_t>(i)].clock);
                    nf_b[b] += 1.0;
                }
                for (std::int64_t j = b; j < nb; j += kBlocks) {
                    nb_b[b] += 1.0;
                    auto [lo, hi] = fmap.equal_range(bwd[static_cast<size_t>(j)].end_key);
                    for (auto it = lo; it != hi; ++it)
                        block_pairs[b].push_back(it->second + bwd[static_cast<size_t>(j)].clock);
                }
            }
        }

        for (const auto& [x1, x2t] : targets) {
            if (!(x2t == x2)) continue;
            double mean_est = 0.0, sq = 0.0;
            std::int64_t collisions = 0;
            for (int b = 0; b < kBlocks; ++b) {
                double s = 0.0;
                for (double a_sum : block_pairs[b]) s += std::exp(log_first_kernel(x1, a_sum));
                const double est_b = s / (nf_b[b] * nb_b[b]);
                mean_est += est_b;
                sq += est_b * est_b;
                collisions += static_cast<std::int64_t>(block_pairs[b].size());
            }
            mean_est /= kBlocks;
            const double var_b = std::max(0.0, sq / kBlocks - mean_est * mean_est);
            const double se = std::sqrt(var_b / kBlocks);

            LcltEntry e;
            e.x1 = x1;
            e.x2 = x2;
            e.numerator = mean_est;
            e.stderr_ = se;
            e.collisions = collisions;
            e.denominator = walk::kernel(model.d1, t, x1, mean) * walk::kernel(model.d2, t, x2, 1.0);
            e.ratio = e.numerator / e.denominator;
            e.stderr_ = se / e.denominator;
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace lcrw::layered
