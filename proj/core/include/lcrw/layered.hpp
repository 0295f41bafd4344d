#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lcrw/rwrs.hpp"
#include "lcrw/scenery.hpp"
#include "lcrw/stats.hpp"
#include "lcrw/walk.hpp"

namespace lcrw {

// Variable-speed walk on Z^{d1+d2} with conductance z(x2) along the first d1
// directions and 1 elsewhere; total exit rate 2 d1 z(x2) + 2 d2.
struct LayeredModel {
    int d1 = 1;
    int d2 = 1;
    SceneryField field;  // dimension d2

    LayeredModel(int d1_, int d2_, SceneryField f) : d1(d1_), d2(d2_), field(std::move(f)) {
        if (d1 < 1 || d2 < 1 || d1 + d2 > kMaxDim) throw std::invalid_argument("layered: bad dimensions");
        if (field.dimension() != d2) throw std::invalid_argument("layered: scenery dimension must be d2");
    }

    double conductance(const Point& x2) const { return field.z_at(x2); }
    double exit_rate(const Point& x2) const { return 2.0 * d1 * field.z_at(x2) + 2.0 * d2; }
};

enum class KernelMode { RaoBlackwell, DirectGillespie, Factorized };

struct KernelEstimate {
    double t = 0.0;
    Point x1, x2;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t n = 0;
    std::int64_t hits = 0;
    KernelMode mode = KernelMode::RaoBlackwell;
};

struct GreenEstimate {
    double value = 0.0;
    double stderr_ = 0.0;      // Monte Carlo + 100% of the extrapolated mass + small-t bound
    double mc_stderr = 0.0;
    double tail_mass = 0.0;    // power-law extrapolation beyond the grid
    double small_t_bound = 0.0;
    std::int64_t n_samples = 0;
    EstimateSeries integrand;  // per-grid-point kernel estimates
};

struct LcltEntry {
    Point x1, x2;
    double ratio = 0.0;
    double stderr_ = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    std::int64_t collisions = 0;
};

namespace layered {

// exact sample of X_t = (S^1_{A^2(t)}, S^2_t): simulate the scenery walk,
// read off its clock, then run the first block for the elapsed time
std::pair<Point, Point> sample_timechange(const LayeredModel& model, double t, RngStream& rng);

// exact event-driven simulation of the conductance chain
std::pair<Point, Point> direct_gillespie(const LayeredModel& model, double t, RngStream& rng);

// constant-speed walk Y_t = X_{B^{-1}(t)}, B(t) = 2 d1 A^2(t) + 2 d2 t
std::pair<Point, Point> csrw_timechange(const LayeredModel& model, double t, RngStream& rng);

// unbiased estimate of P(X_t = (x1,x2)).  RaoBlackwell averages
// p_{A^2(t)}(0,x1) 1{S^2_t = x2}; DirectGillespie averages the endpoint
// indicator; Factorized multiplies the unpinned mean by the exact
// second-coordinate kernel (approximate, asymptotics only).
KernelEstimate kernel_estimate(const LayeredModel& model, double t, const Point& x1, const Point& x2,
                               KernelMode mode, const EstimatorOptions& opt);

// kernel_estimate across a t grid (ondiag series at target (x1,x2))
EstimateSeries kernel_series(const LayeredModel& model, std::span<const double> t_grid, const Point& x1,
                             const Point& x2, KernelMode mode, const EstimatorOptions& opt);

// E[p_{A^2(t)}(0, floor(t^delta) e1) (; S^2_t = 0)] on a t grid; several
// delta values share the same walks
std::vector<EstimateSeries> moddev_sweep(const LayeredModel& model, std::span<const double> t_grid,
                                         std::span<const double> deltas, bool pinned,
                                         const EstimatorOptions& opt);
EstimateSeries moddev_estimate(const LayeredModel& model, std::span<const double> t_grid, double delta,
                               bool pinned, const EstimatorOptions& opt);

// quadrature of the kernel estimate over t (trapezoid in log t) plus a
// power-law tail extrapolation; refuses recurrent parameter combinations
GreenEstimate green_estimate(const LayeredModel& model, std::int64_t n_target,
                             std::span<const double> t_grid, const EstimatorOptions& opt);

// default grid: 8 points per octave, t in [max(1, n^eps0), 64 n^2 / (2E[z] ^ 1)]
std::vector<double> default_green_grid(const LayeredModel& model, std::int64_t n_target, double eps0 = 0.5);

// quenched-to-averaged kernel ratios at several targets; the numerator is
// estimated by the midpoint-collision form of the Rao-Blackwell estimator
// (two independent half-walks glued by reversibility), which is unbiased and
// reaches far targets that the single-walk indicator cannot
std::vector<LcltEntry> lclt_ratio(const LayeredModel& model, double t,
                                  const std::vector<std::pair<Point, Point>>& targets,
                                  const EstimatorOptions& opt);

std::int64_t moddev_target(double t, double delta);

}  // namespace layered
}  // namespace lcrw
