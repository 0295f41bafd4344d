#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lcrw/scenery.hpp"
#include "lcrw/stats.hpp"
#include "lcrw/walk.hpp"

namespace lcrw {

// Shared Monte Carlo driver knobs.  Walker i of grid point ti draws its
// stream from key(run_seed, ti, i), so results are independent of the thread
// count and the block partition is fixed (bit-stable reductions).
struct EstimatorOptions {
    std::int64_t n_samples = 10000;
    std::uint64_t run_seed = 1;
    int threads = 0;             // 0: LCRW_THREADS env or hardware
    std::int64_t block_size = 4096;
};

struct ClockValue {
    double t = 0.0;
    double a = 0.0;                       // A(t)
    std::optional<double> truncated_a;    // A_M(t) under the cap, when requested
};

// Return/departure decomposition of a path relative to {z >= threshold}.
// R_0 = D_0 = 0; R_k/D_k alternate; a departure that never happens before the
// horizon is recorded as +infinity.  level_local_time = sum (D_k^t - R_k^t).
struct ReturnsDiagnostics {
    double threshold = 0.0;
    double horizon = 0.0;
    std::vector<double> returns;     // R_1, R_2, ...
    std::vector<double> departures;  // D_1, D_2, ...
    std::int64_t n_t = 0;            // sup{k >= 1 : R_k < horizon}
    double level_local_time = 0.0;
};

enum class TailMode {
    Unpinned,          // P(A(t) >= t^rho)
    Pinned,            // P(A(t) >= t^rho, S_t = 0), raw endpoint indicator
    PinnedFactorized,  // unpinned estimate x p_t(0,0); exact only asymptotically
};

namespace rwrs {

// A(s) at each checkpoint, exact piecewise integral over the path's holding
// intervals; optional cap M also accumulates int z^M.
std::vector<ClockValue> clock(const WalkPath& path, const SceneryField& field,
                              std::span<const double> checkpoints, std::optional<double> cap = std::nullopt);

ReturnsDiagnostics returns_diagnostics(const WalkPath& path, const SceneryField& field, double level_threshold);

EstimateSeries tail_estimate(const SceneryField& field, double rho, TailMode mode,
                             std::span<const double> t_grid, const EstimatorOptions& opt);

// P(A(t) <= t^{s(d,alpha)-eps}), or the finite-mean variant
// P(A(t) <= t (E[z]-eps)) when finite_mean_threshold is set.
EstimateSeries lower_deviation_estimate(const SceneryField& field, double eps, bool finite_mean_threshold,
                                        std::span<const double> t_grid, const EstimatorOptions& opt);

// P(walk hits {z >= t^{rho-5 eps}} before t); online hit detection.
EstimateSeries hitting_estimate(const SceneryField& field, double rho, double eps,
                                std::span<const double> t_grid, const EstimatorOptions& opt);

// One sweep, both estimates on the same walks (tail indicator + level-set
// hit); used where runtime budgets call for sharing.
std::pair<EstimateSeries, EstimateSeries> tail_and_hitting_estimate(const SceneryField& field, double rho,
                                                                    double eps, TailMode mode,
                                                                    std::span<const double> t_grid,
                                                                    const EstimatorOptions& opt);

// dyadic grid {base^k : min_exp <= k <= max_exp}
std::vector<double> dyadic_grid(int min_exp, int max_exp, double base = 2.0);

}  // namespace rwrs
}  // namespace lcrw
