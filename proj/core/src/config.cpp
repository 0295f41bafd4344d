#include "lcrw/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lcrw {

using ordered_json = nlohmann::ordered_json;

SceneryField RunConfig::make_field(std::uint64_t seed) const {
    return SceneryField(seed, alpha, d2, law, cap, constant, shifted);
}

LayeredModel RunConfig::make_model(std::uint64_t seed) const { return LayeredModel(d1, d2, make_field(seed)); }

std::vector<double> RunConfig::t_grid() const {
    if (!t_points.empty()) return t_points;
    std::vector<double> g;
    for (int k = grid_min_exp; k <= grid_max_exp; ++k) g.push_back(std::pow(grid_base, k));
    return g;
}

std::string RunConfig::canonical_json() const {
    ordered_json j;
    j["experiment"] = experiment;
    j["model"] = ordered_json{{"d1", d1},
                              {"d2", d2},
                              {"scenery", ordered_json{{"alpha", alpha}, {"law", to_string(law)}}}};
    if (cap) j["model"]["scenery"]["cap"] = *cap;
    if (law == SceneryLaw::Constant) j["model"]["scenery"]["constant"] = constant;
    if (shifted) j["model"]["scenery"]["shifted"] = true;
    j["scenery_seeds"] = scenery_seeds;
    if (!t_points.empty())
        j["grid"] = ordered_json{{"points", t_points}};
    else
        j["grid"] = ordered_json{{"base", grid_base}, {"min_exp", grid_min_exp}, {"max_exp", grid_max_exp}};
    if (!n_grid.empty()) j["n_grid"] = n_grid;
    j["n_samples"] = n_samples;
    j["run_seed"] = run_seed;
    j["threads"] = threads;
    j["rho"] = rho;
    j["eps"] = eps;
    j["deltas"] = deltas;
    j["pinned"] = pinned;
    j["finite_mean_threshold"] = finite_mean_threshold;
    j["mode"] = mode;
    j["t"] = t_single;
    j["box_radius"] = box_radius;
    j["boundary"] = boundary;
    if (!target_x1.empty()) j["target_x1"] = target_x1;
    if (!target_x2.empty()) j["target_x2"] = target_x2;
    j["level_threshold"] = level_threshold;
    j["tolerance"] = tolerance;
    j["output_dir"] = output_dir;
    return j.dump();
}

std::uint64_t RunConfig::config_hash() const {
    const std::string s = canonical_json();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        c.experiment = j.at("experiment").get<std::string>();
        if (j.contains("model")) {
            const auto& m = j["model"];
            c.d1 = m.value("d1", c.d1);
            c.d2 = m.value("d2", c.d2);
            if (m.contains("scenery")) {
                const auto& s = m["scenery"];
                c.alpha = s.value("alpha", c.alpha);
                if (s.contains("law")) c.law = scenery_law_from_string(s["law"].get<std::string>());
                if (s.contains("cap")) c.cap = s["cap"].get<double>();
                c.constant = s.value("constant", c.constant);
                c.shifted = s.value("shifted", c.shifted);
                if (s.contains("seed")) c.scenery_seeds = {s["seed"].get<std::uint64_t>()};
            }
        }
        if (j.contains("scenery_seeds")) c.scenery_seeds = j["scenery_seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            if (g.contains("points")) {
                c.t_points = g["points"].get<std::vector<double>>();
            } else {
                c.grid_base = g.value("base", c.grid_base);
                c.grid_min_exp = g.value("min_exp", c.grid_min_exp);
                c.grid_max_exp = g.value("max_exp", c.grid_max_exp);
            }
        }
        if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<std::int64_t>>();
        c.n_samples = j.value("n_samples", c.n_samples);
        c.run_seed = j.value("run_seed", c.run_seed);
        c.threads = j.value("threads", c.threads);
        c.rho = j.value("rho", c.rho);
        c.eps = j.value("eps", c.eps);
        if (j.contains("delta")) c.deltas = {j["delta"].get<double>()};
        if (j.contains("deltas")) c.deltas = j["deltas"].get<std::vector<double>>();
        c.pinned = j.value("pinned", c.pinned);
        c.finite_mean_threshold = j.value("finite_mean_threshold", c.finite_mean_threshold);
        c.mode = j.value("mode", c.mode);
        c.t_single = j.value("t", c.t_single);
        c.box_radius = j.value("box_radius", c.box_radius);
        c.boundary = j.value("boundary", c.boundary);
        if (j.contains("target_x1")) c.target_x1 = j["target_x1"].get<std::vector<Coord>>();
        if (j.contains("target_x2")) c.target_x2 = j["target_x2"].get<std::vector<Coord>>();
        c.level_threshold = j.value("level_threshold", c.level_threshold);
        c.tolerance = j.value("tolerance", c.tolerance);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // validation
    if (c.scenery_seeds.empty()) throw ConfigError("config: scenery_seeds must be nonempty");
    for (size_t i = 0; i < c.scenery_seeds.size(); ++i)
        for (size_t k = i + 1; k < c.scenery_seeds.size(); ++k)
            if (c.scenery_seeds[i] == c.scenery_seeds[k]) throw ConfigError("config: seeds must be distinct");
    if (c.t_grid().empty()) throw ConfigError("config: empty grid");
    if (c.n_samples <= 0) throw ConfigError("config: n_samples must be positive");
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace lcrw
