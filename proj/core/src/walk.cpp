#include "lcrw/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "lcrw/bessel.hpp"

namespace lcrw::walk {

WalkPath simulate_path(int d, double t, std::uint64_t stream_id) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("walk: dimension out of range");
    if (!(t >= 0.0)) throw std::invalid_argument("walk: negative horizon");

    WalkPath path;
    path.dim = d;
    path.horizon = t;
    path.start = Point(d);
    path.sites_flat.assign(static_cast<size_t>(d), 0);

    RngStream rng(stream_id);
    Point x(d);
    double now = 0.0;
    const double total_rate = 2.0 * d;
    for (;;) {
        now += rng.next_exponential(total_rate);
        if (now >= t) break;
        const std::uint64_t dir = rng.next_below(static_cast<std::uint64_t>(2 * d));
        const int axis = static_cast<int>(dir >> 1);
        x[axis] += (dir & 1) ? 1 : -1;
        path.jump_times.push_back(now);
        for (int i = 0; i < d; ++i) path.sites_flat.push_back(x[i]);
    }
    return path;
}

OccupationMeasure occupation(const WalkPath& path) {
    OccupationMeasure occ;
    for (std::int64_t k = 0; k < path.n_sites(); ++k) {
        const double dt = path.interval_end(k) - path.interval_start(k);
        occ.local_time[path.site_point(k)] += dt;
    }
    double sum = 0.0;
    for (const auto& [p, lt] : occ.local_time) sum += lt;
    occ.total = sum;
    return occ;
}

std::int64_t range_size(const WalkPath& path) {
    std::map<Point, char> seen;
    for (std::int64_t k = 0; k < path.n_sites(); ++k) seen.emplace(path.site_point(k), 1);
    return static_cast<std::int64_t>(seen.size());
}

double log_kernel_1d(Coord n, double tau) { return bessel::log_ive(n, 2.0 * tau); }

double kernel_1d(Coord n, double tau) {
    const double lg = log_kernel_1d(n, tau);
    return std::isinf(lg) ? 0.0 : std::exp(lg);
}

double log_kernel(int d, double t, const Point& x, double rate) {
    if (x.dim() != d) throw std::invalid_argument("kernel: point dimension mismatch");
    if (!(t >= 0.0)) throw std::invalid_argument("kernel: negative time");
    if (!(rate > 0.0)) throw std::invalid_argument("kernel: rate must be > 0");
    const double z = 2.0 * rate * t;
    double lg = 0.0;
    for (int i = 0; i < d; ++i) lg += bessel::log_ive(x[i], z);
    return lg;
}

double kernel(int d, double t, const Point& x, double rate) {
    const double lg = log_kernel(d, t, x, rate);
    return std::isinf(lg) ? 0.0 : std::exp(lg);
}

}  // namespace lcrw::walk
