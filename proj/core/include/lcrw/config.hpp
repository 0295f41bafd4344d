#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcrw/layered.hpp"
#include "lcrw/scenery.hpp"

namespace lcrw {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One reproducible experiment run.  JSON is the primary surface; CLI flags
// override individual leaves.
struct RunConfig {
    std::string experiment;  // rwrs-tail | rwrs-lower | hitting | returns | ondiag |
                             // moddev | green | lclt | oracle-prob | oracle-green |
                             // theory-table | acceptance

    // model
    int d1 = 1;
    int d2 = 1;
    double alpha = 0.5;
    SceneryLaw law = SceneryLaw::ParetoUnit;
    std::optional<double> cap;
    double constant = 1.0;
    bool shifted = false;
    std::vector<std::uint64_t> scenery_seeds = {1};

    // grids: either explicit points or {base, min_exp, max_exp}
    std::vector<double> t_points;
    double grid_base = 2.0;
    int grid_min_exp = 7;
    int grid_max_exp = 13;
    std::vector<std::int64_t> n_grid;  // green target distances

    // sampling
    std::int64_t n_samples = 10000;
    std::uint64_t run_seed = 1;
    int threads = 0;

    // per-experiment knobs
    double rho = 1.2;
    double eps = 0.01;
    std::vector<double> deltas = {0.6};
    bool pinned = false;
    bool finite_mean_threshold = false;
    std::string mode = "rao-blackwell";  // or: unpinned|pinned|factorized|gillespie
    double t_single = 1.0;               // oracle prob / lclt / returns / simulate horizon
    Coord box_radius = 20;
    std::string boundary = "absorbing";
    std::vector<Coord> target_x1, target_x2;  // oracle / kernel targets
    double level_threshold = 2.0;             // returns diagnostics
    double tolerance = 0.2;                   // verdict tolerance on slopes

    std::string output_dir = "out";

    SceneryField make_field(std::uint64_t seed) const;
    LayeredModel make_model(std::uint64_t seed) const;
    std::vector<double> t_grid() const;

    std::string canonical_json() const;           // stable field order
    std::uint64_t config_hash() const;            // FNV-1a of the canonical form
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

}  // namespace lcrw
