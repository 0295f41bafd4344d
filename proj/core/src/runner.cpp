#include "lcrw/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lcrw/oracle.hpp"
#include "lcrw/rwrs.hpp"
#include "lcrw/theory.hpp"

namespace lcrw::runner {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string jsonl_record(const EstimateRecord& r, std::uint64_t seed, const std::string& mode,
                         const std::vector<Coord>& target) {
    ordered_json j;
    j["t"] = r.x;
    j["estimate"] = r.estimate;
    j["stderr"] = r.stderr_;
    j["n"] = r.n_samples;
    j["hits"] = r.hits;
    j["seed"] = seed;
    if (!mode.empty()) j["mode"] = mode;
    if (!target.empty()) j["target"] = target;
    return j.dump();
}

std::optional<double> theoretical_slope(const RunConfig& c) {
    try {
        if (c.experiment == "rwrs-tail") {
            const double base = -(c.alpha * c.rho - 1.0);
            return c.pinned ? base - 0.5 * c.d2 : base;
        }
        if (c.experiment == "hitting") return -(c.alpha * c.rho - 1.0);
        if (c.experiment == "ondiag") return -theory::ondiag_exponent(c.d1, c.d2, c.alpha);
        if (c.experiment == "moddev") {
            const double r = theory::moddev_exponent(c.d1, c.d2, c.alpha, c.deltas.at(0));
            return c.pinned ? -r : -(r - 0.5 * c.d2);
        }
        if (c.experiment == "green") return theory::green_exponent(c.d1, c.d2, c.alpha);
    } catch (const RegimeError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

namespace {

struct SeriesBundle {
    EstimateSeries series;
    std::vector<Coord> target;  // optional annotation
};

std::vector<SeriesBundle> run_series_experiment(const RunConfig& c, std::uint64_t seed) {
    EstimatorOptions opt;
    opt.n_samples = c.n_samples;
    opt.run_seed = c.run_seed;
    opt.threads = c.threads;
    const auto grid = c.t_grid();

    std::vector<SeriesBundle> out;
    if (c.experiment == "rwrs-tail") {
        const TailMode mode = c.mode == "pinned"       ? TailMode::Pinned
                              : c.mode == "factorized" ? TailMode::PinnedFactorized
                                                       : (c.pinned ? TailMode::Pinned : TailMode::Unpinned);
        const SceneryField field = c.make_field(seed);
        out.push_back({rwrs::tail_estimate(field, c.rho, mode, grid, opt), {}});
    } else if (c.experiment == "rwrs-lower") {
        const SceneryField field = c.make_field(seed);
        out.push_back({rwrs::lower_deviation_estimate(field, c.eps, c.finite_mean_threshold, grid, opt), {}});
    } else if (c.experiment == "hitting") {
        const SceneryField field = c.make_field(seed);
        out.push_back({rwrs::hitting_estimate(field, c.rho, c.eps, grid, opt), {}});
    } else if (c.experiment == "ondiag") {
        const LayeredModel model = c.make_model(seed);
        const KernelMode mode = c.mode == "gillespie" ? KernelMode::DirectGillespie
                               : c.mode == "factorized" ? KernelMode::Factorized
                                                        : KernelMode::RaoBlackwell;
        out.push_back({layered::kernel_series(model, grid, Point(c.d1), Point(c.d2), mode, opt), {}});
    } else if (c.experiment == "moddev") {
        const LayeredModel model = c.make_model(seed);
        auto all = layered::moddev_sweep(model, grid, c.deltas, c.pinned, opt);
        for (size_t i = 0; i < all.size(); ++i) {
            SeriesBundle b;
            b.series = std::move(all[i]);
            b.series.params = "delta=" + std::to_string(c.deltas[i]);
            out.push_back(std::move(b));
        }
    } else if (c.experiment == "green") {
        const LayeredModel model = c.make_model(seed);
        if (c.n_grid.empty()) throw ConfigError("green: n_grid required");
        SeriesBundle b;
        b.series.scenery_seed = seed;
        b.series.mode = "green";
        for (std::int64_t n : c.n_grid) {
            const std::vector<double> custom = c.t_points;  // optional override
            GreenEstimate ge = layered::green_estimate(model, n, custom, opt);
            EstimateRecord r;
            r.x = static_cast<double>(n);
            r.estimate = ge.value;
            r.stderr_ = ge.stderr_;
            r.n_samples = ge.n_samples;
            r.hits = ge.n_samples;
            b.series.records.push_back(r);
        }
        out.push_back(std::move(b));
    } else if (c.experiment == "lclt") {
        const LayeredModel model = c.make_model(seed);
        if (c.target_x2.empty()) throw ConfigError("lclt: target_x2 required");
        std::vector<std::pair<Point, Point>> targets;
        Point x1(c.d1), x2(c.d2);
        for (size_t i = 0; i < c.target_x1.size() && i < static_cast<size_t>(c.d1); ++i)
            x1[static_cast<int>(i)] = c.target_x1[i];
        for (size_t i = 0; i < c.target_x2.size() && i < static_cast<size_t>(c.d2); ++i)
            x2[static_cast<int>(i)] = c.target_x2[i];
        targets.push_back({x1, x2});
        auto entries = layered::lclt_ratio(model, c.t_single, targets, opt);
        SeriesBundle b;
        b.series.scenery_seed = seed;
        b.series.mode = "lclt";
        for (const auto& e : entries) {
            EstimateRecord r;
            r.x = c.t_single;
            r.estimate = e.ratio;
            r.stderr_ = e.stderr_;
            r.n_samples = opt.n_samples;
            r.hits = e.collisions;
            b.series.records.push_back(r);
        }
        out.push_back(std::move(b));
    } else {
        throw ConfigError("runner: experiment not a series type: " + c.experiment);
    }
    return out;
}

void write_file(const fs::path& p, const std::string& bytes, RunArtifacts& art) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("runner: cannot write " + p.string());
    out << bytes;
    art.files.push_back(p.string());
}

}  // namespace

RunArtifacts run(const RunConfig& c) {
    const auto t_start = std::chrono::steady_clock::now();
    RunArtifacts art;
    fs::create_directories(c.output_dir);

    ordered_json summary;
    summary["experiment"] = c.experiment;
    summary["config_hash"] = c.config_hash();
    summary["seeds"] = ordered_json::array();

    const auto theo = theoretical_slope(c);

    if (c.experiment == "oracle-prob" || c.experiment == "oracle-green") {
        const std::uint64_t seed = c.scenery_seeds.front();
        const LayeredModel model = c.make_model(seed);
        const Box box = Box::centered(c.d1 + c.d2, c.box_radius);
        const Boundary bd = c.boundary == "reflecting" ? Boundary::Reflecting : Boundary::Absorbing;
        const GeneratorBox gen = GeneratorBox::layered(model, box, bd);
        Point from(c.d1 + c.d2), to(c.d1 + c.d2);
        for (size_t i = 0; i < c.target_x1.size() && i < static_cast<size_t>(c.d1); ++i)
            to[static_cast<int>(i)] = c.target_x1[i];
        for (size_t i = 0; i < c.target_x2.size() && i < static_cast<size_t>(c.d2); ++i)
            to[c.d1 + static_cast<int>(i)] = c.target_x2[i];
        ordered_json j;
        if (c.experiment == "oracle-prob") {
            const ProbResult r = gen.exact_prob(c.t_single, from, to);
            j = ordered_json{{"value", r.value}, {"absorbed_mass", r.absorbed_mass}, {"iterations", r.iterations}};
        } else {
            const GreenResult r = gen.exact_green(from, to);
            j = ordered_json{{"value", r.value}, {"residual", r.residual}, {"iterations", r.iterations}};
        }
        write_file(fs::path(c.output_dir) / (c.experiment + ".json"), j.dump() + "\n", art);
        summary["result"] = j;
    } else {
        for (std::uint64_t seed : c.scenery_seeds) {
            auto bundles = run_series_experiment(c, seed);
            ordered_json seed_entry;
            seed_entry["seed"] = seed;
            seed_entry["series"] = ordered_json::array();
            for (size_t bi = 0; bi < bundles.size(); ++bi) {
                const auto& b = bundles[bi];
                std::string lines;
                for (const auto& r : b.series.records)
                    lines += jsonl_record(r, seed, b.series.mode, b.target) + "\n";
                const std::string name = c.experiment + (bundles.size() > 1 ? "_" + std::to_string(bi) : "") +
                                         "_seed" + std::to_string(seed) + ".jsonl";
                write_file(fs::path(c.output_dir) / name, lines, art);

                ordered_json s;
                s["file"] = name;
                s["mode"] = b.series.mode;
                if (!b.series.params.empty()) s["params"] = b.series.params;
                try {
                    const ExponentFit fit = stats::fit_exponent(b.series);
                    s["fit"] = ordered_json{{"slope", fit.slope},
                                            {"intercept", fit.intercept},
                                            {"ci", {fit.slope_ci_lo, fit.slope_ci_hi}},
                                            {"r_squared", fit.r_squared},
                                            {"points_used", fit.points_used},
                                            {"points_excluded", fit.points_excluded}};
                    if (theo) {
                        const TheoryVerdict v = stats::compare_to_theory(fit, *theo, c.tolerance);
                        s["verdict"] = ordered_json{{"pass", v.pass},
                                                    {"theoretical", v.theoretical},
                                                    {"tolerance", v.tolerance},
                                                    {"within_tolerance", v.within_tolerance},
                                                    {"theory_in_ci", v.theory_in_ci}};
                    }
                } catch (const std::invalid_argument& e) {
                    s["fit_error"] = e.what();
                }
                seed_entry["series"].push_back(s);
            }
            summary["seeds"].push_back(seed_entry);
        }
    }

    const std::string summary_text = summary.dump(2) + "\n";
    write_file(fs::path(c.output_dir) / (c.experiment + "_summary.json"), summary_text, art);
    art.summary_json = summary_text;

    // manifest last: config hash, version, wall clock, content hash per file
    ordered_json manifest;
    manifest["config"] = ordered_json::parse(c.canonical_json());
    manifest["config_hash"] = c.config_hash();
    manifest["version"] = kVersion;
    manifest["wall_clock_sec"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    manifest["files"] = ordered_json::array();
    for (const auto& f : art.files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        manifest["files"].push_back(ordered_json{{"path", f}, {"fnv1a64", fnv1a64(ss.str())}});
    }
    write_file(fs::path(c.output_dir) / "MANIFEST.json", manifest.dump(2) + "\n", art);
    return art;
}

}  // namespace lcrw::runner
