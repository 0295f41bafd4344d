#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lcrw/point.hpp"
#include "lcrw/rng.hpp"

namespace lcrw {

// Trajectory of the continuous-time simple random walk up to a horizon.
// sites[k] is occupied on [jump_times[k-1], jump_times[k]) with
// jump_times[-1] := 0; the final site is occupied up to the horizon.
struct WalkPath {
    int dim = 0;
    double horizon = 0.0;
    Point start;
    std::vector<double> jump_times;   // strictly increasing, in (0, horizon]
    std::vector<Coord> sites_flat;    // (jump_times.size()+1) x dim, row 0 = start

    std::int64_t n_sites() const { return static_cast<std::int64_t>(jump_times.size()) + 1; }
    std::span<const Coord> site(std::int64_t k) const {
        return {sites_flat.data() + k * dim, static_cast<size_t>(dim)};
    }
    Point site_point(std::int64_t k) const { return Point::from(site(k)); }
    Point endpoint() const { return site_point(n_sites() - 1); }

    // occupation start/end of site k, clipped to the horizon
    double interval_start(std::int64_t k) const { return k == 0 ? 0.0 : jump_times[static_cast<size_t>(k - 1)]; }
    double interval_end(std::int64_t k) const {
        return k + 1 == n_sites() ? horizon : jump_times[static_cast<size_t>(k)];
    }
};

// Per-site local times l_t(x); total mass equals the horizon.
struct OccupationMeasure {
    std::map<Point, double> local_time;
    double total = 0.0;
};

namespace walk {

// Exact sample of the rate-1-per-direction walk on Z^d: Exp(2d) holdings,
// uniform neighbor.  Reproducible: the path is a pure function of stream_id.
WalkPath simulate_path(int d, double t, std::uint64_t stream_id);

OccupationMeasure occupation(const WalkPath& path);

std::int64_t range_size(const WalkPath& path);

// Exact transition kernel p_t(0,x) of the walk whose coordinates jump at
// `rate` per direction:  prod_i e^{-2 rate t} I_{x_i}(2 rate t).
// Computed in log space; `rate` generalizes to the averaged-environment walk.
double kernel(int d, double t, const Point& x, double rate = 1.0);
double log_kernel(int d, double t, const Point& x, double rate = 1.0);

// single-coordinate factor p_t(0, n) for elapsed time tau = rate * t, as used
// by the Rao-Blackwell estimators: e^{-2 tau} I_n(2 tau)
double kernel_1d(Coord n, double tau);
double log_kernel_1d(Coord n, double tau);

}  // namespace walk

// Streaming walker: visits holding intervals in order without storing the
// path.  on_hold(site, t0, t1) is called for every holding interval, the last
// one clipped to the horizon; returning false stops the walk early (the
// return value is then the site at the stop, not the horizon endpoint).
template <class F>
Point stream_walk(int d, double horizon, RngStream& rng, F&& on_hold) {
    Point x(d);
    const double total_rate = 2.0 * d;
    double t = 0.0;
    for (;;) {
        const double hold = rng.next_exponential(total_rate);
        const double t_next = t + hold;
        if (t_next >= horizon) {
            on_hold(x, t, horizon);
            return x;
        }
        if (!on_hold(x, t, t_next)) return x;
        const std::uint64_t dir = rng.next_below(static_cast<std::uint64_t>(2 * d));
        const int axis = static_cast<int>(dir >> 1);
        x[axis] += (dir & 1) ? 1 : -1;
        t = t_next;
    }
}

}  // namespace lcrw
