// lcrw: simulation and estimation driver for heavy-tailed scenery walks and
// the layered conductance model.  Subcommands mirror the library modules;
// complex runs come from a JSON config with flag overrides on top.
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcrw/acceptance.hpp"
#include "lcrw/config.hpp"
#include "lcrw/layered.hpp"
#include "lcrw/oracle.hpp"
#include "lcrw/runner.hpp"
#include "lcrw/rwrs.hpp"
#include "lcrw/stats.hpp"
#include "lcrw/theory.hpp"
#include "lcrw/walk.hpp"

using namespace lcrw;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> n_samples;
    std::optional<int> threads;
    std::optional<std::string> output;
    std::optional<double> alpha;
    std::optional<int> d1, d2;
    std::optional<std::string> law;
    std::optional<double> cap;
    std::optional<int> gmin, gmax;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (flags override leaves)");
    cmd->add_option("--seed", f.seed, "single scenery seed");
    cmd->add_option("--samples", f.n_samples, "walkers per grid point");
    cmd->add_option("--threads", f.threads, "worker threads (default LCRW_THREADS or hardware)");
    cmd->add_option("--out", f.output, "output directory");
    cmd->add_option("--alpha", f.alpha, "tail index");
    cmd->add_option("--d1", f.d1, "layer directions");
    cmd->add_option("--d2", f.d2, "scenery directions");
    cmd->add_option("--law", f.law, "scenery law: pareto|capped-pareto|constant|bernoulli");
    cmd->add_option("--cap", f.cap, "cap for capped-pareto");
    cmd->add_option("--tmin-exp", f.gmin, "dyadic grid lower exponent");
    cmd->add_option("--tmax-exp", f.gmax, "dyadic grid upper exponent");
}

RunConfig build_config(const std::string& experiment, const CommonFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = RunConfig::from_file(f.config_path);
    c.experiment = experiment;
    if (f.seed) c.scenery_seeds = {*f.seed};
    if (f.n_samples) c.n_samples = *f.n_samples;
    if (f.threads) c.threads = *f.threads;
    if (f.output) c.output_dir = *f.output;
    if (f.alpha) c.alpha = *f.alpha;
    if (f.d1) c.d1 = *f.d1;
    if (f.d2) c.d2 = *f.d2;
    if (f.law) c.law = scenery_law_from_string(*f.law);
    if (f.cap) c.cap = *f.cap;
    if (f.gmin) c.grid_min_exp = *f.gmin;
    if (f.gmax) c.grid_max_exp = *f.gmax;
    return c;
}

int run_and_report(const RunConfig& config) {
    const auto art = runner::run(config);
    std::cout << art.summary_json;
    return art.exit_code;
}

int fail_json(const std::string& kind, const std::string& message, int code) {
    ordered_json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return code;
}

int walk_self_check() {
    int failures = 0;
    const auto report = [&](bool ok, const std::string& name, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    };
    {
        double sum = 0.0;
        for (Coord a = -60; a <= 60; ++a)
            for (Coord b = -60; b <= 60; ++b) sum += walk::kernel(2, 3.0, Point{a, b});
        report(std::abs(sum - 1.0) <= 1e-10, "normalization", "sum-1 = " + std::to_string(sum - 1.0));
    }
    {
        const double v = walk::kernel(1, 1.0, Point{0});
        report(std::abs(v - 0.30850832255367104) < 1e-12, "return value e^-2 I0(2)", std::to_string(v));
    }
    {
        double worst = 0.0;
        for (Coord target : {0, 3}) {
            double conv = 0.0;
            for (Coord y = -40; y <= 40; ++y)
                conv += walk::kernel(1, 0.8, Point{y}) * walk::kernel(1, 1.3, Point{static_cast<Coord>(target - y)});
            worst = std::max(worst, std::abs(conv - walk::kernel(1, 2.1, Point{target})));
        }
        report(worst <= 1e-9, "chapman-kolmogorov", "max defect = " + std::to_string(worst));
    }
    {
        const double lclt = std::sqrt(1e4) * walk::kernel(1, 1e4, Point{0}) * std::sqrt(4.0 * 3.14159265358979);
        report(std::abs(lclt - 1.0) <= 0.01, "local clt", "sqrt(4 pi t) p_t(0) = " + std::to_string(lclt));
    }
    std::cout << (failures == 0 ? "walk check: all passed\n" : "walk check: FAILURES\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"layered conductance random walk toolkit"};
    app.require_subcommand(1);

    // --- scenery dump ---
    auto* scenery = app.add_subcommand("scenery", "scenery field utilities");
    auto* dump = scenery->add_subcommand("dump", "emit CSV rows x1,...,xd,z over a box");
    struct {
        std::uint64_t seed = 1;
        double alpha = 1.0;
        std::string law = "pareto";
        double cap = 10.0;
        double constant = 1.0;
        bool shifted = false;
        int dim = 1;
        Coord radius = 10;
    } sd;
    dump->add_option("--seed", sd.seed);
    dump->add_option("--alpha", sd.alpha);
    dump->add_option("--law", sd.law);
    dump->add_option("--cap", sd.cap);
    dump->add_option("--constant", sd.constant);
    dump->add_flag("--shifted", sd.shifted);
    dump->add_option("--dim", sd.dim);
    dump->add_option("--radius", sd.radius);

    // --- walk check ---
    auto* walkcmd = app.add_subcommand("walk", "walk kernel utilities");
    walkcmd->add_subcommand("check", "run the kernel self-tests");

    // --- simulate layered ---
    auto* simulate = app.add_subcommand("simulate", "draw endpoint samples");
    auto* sim_layered = simulate->add_subcommand("layered", "layered-walk endpoints as JSONL");
    struct {
        double t = 4.0;
        std::int64_t n = 1000;
        std::string sampler = "timechange";
        std::uint64_t run_seed = 1;
    } sl;
    CommonFlags sim_flags;
    add_common(sim_layered, sim_flags);
    sim_layered->add_option("--t", sl.t, "horizon");
    sim_layered->add_option("--n", sl.n, "number of samples");
    sim_layered->add_option("--sampler", sl.sampler, "timechange|gillespie|csrw");
    sim_layered->add_option("--run-seed", sl.run_seed);

    // --- estimate <experiment> ---
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimators");
    struct EstCmd {
        CLI::App* cmd = nullptr;
        std::string experiment;
        CommonFlags flags;
        std::optional<double> rho, eps, delta, t_single;
        std::optional<bool> pinned;
        std::optional<std::string> mode;
        std::vector<std::int64_t> n_grid;
        std::vector<Coord> tx1, tx2;
    };
    std::vector<EstCmd> est_cmds(7);
    {
        const char* names[] = {"rwrs-tail", "rwrs-lower", "hitting", "ondiag", "moddev", "green", "lclt"};
        for (size_t i = 0; i < 7; ++i) {
            EstCmd& e = est_cmds[i];
            e.experiment = names[i];
            e.cmd = estimate->add_subcommand(names[i]);
            add_common(e.cmd, e.flags);
            e.cmd->add_option("--rho", e.rho, "tail exponent rho");
            e.cmd->add_option("--eps", e.eps, "epsilon");
            e.cmd->add_option("--delta", e.delta, "moderate-deviation delta");
            e.cmd->add_option("--t", e.t_single, "single horizon (lclt)");
            e.cmd->add_option("--pinned", e.pinned, "pin the scenery-walk endpoint");
            e.cmd->add_option("--mode", e.mode, "estimator mode");
            e.cmd->add_option("--n-grid", e.n_grid, "green target distances");
            e.cmd->add_option("--x1", e.tx1, "first-block target");
            e.cmd->add_option("--x2", e.tx2, "second-block target");
        }
    }

    // --- diagnose returns ---
    auto* diagnose = app.add_subcommand("diagnose", "path diagnostics");
    auto* diag_returns = diagnose->add_subcommand("returns", "return/departure decomposition");
    struct {
        std::uint64_t seed = 1;
        double alpha = 0.5;
        int dim = 1;
        double t = 1024.0;
        double threshold = 0.0;  // 0: use t^{1/(2 alpha)}
        std::uint64_t walk_seed = 1;
    } dr;
    diag_returns->add_option("--seed", dr.seed);
    diag_returns->add_option("--alpha", dr.alpha);
    diag_returns->add_option("--dim", dr.dim);
    diag_returns->add_option("--t", dr.t);
    diag_returns->add_option("--threshold", dr.threshold);
    diag_returns->add_option("--walk-seed", dr.walk_seed);

    // --- oracle prob|green ---
    auto* oracle = app.add_subcommand("oracle", "exact finite-box computations");
    struct OracleCmd {
        CLI::App* cmd = nullptr;
        std::string experiment;
        CommonFlags flags;
        std::optional<double> t;
        std::optional<Coord> radius;
        std::optional<std::string> boundary;
        std::vector<Coord> tx1, tx2;
    };
    std::vector<OracleCmd> oracle_cmds(2);
    {
        const char* names[] = {"prob", "green"};
        for (size_t i = 0; i < 2; ++i) {
            OracleCmd& o = oracle_cmds[i];
            o.experiment = std::string("oracle-") + names[i];
            o.cmd = oracle->add_subcommand(names[i]);
            add_common(o.cmd, o.flags);
            o.cmd->add_option("--t", o.t, "horizon (prob)");
            o.cmd->add_option("--radius", o.radius, "box radius");
            o.cmd->add_option("--boundary", o.boundary, "absorbing|reflecting");
            o.cmd->add_option("--x1", o.tx1, "target, first block");
            o.cmd->add_option("--x2", o.tx2, "target, second block");
        }
    }

    // --- theory table|check ---
    auto* theory_cmd = app.add_subcommand("theory", "closed-form exponents");
    auto* table = theory_cmd->add_subcommand("table", "CSV of exponents over a parameter grid");
    struct {
        std::vector<int> d1s = {1};
        std::vector<int> d2s = {1, 2, 3};
        std::vector<double> alphas = {0.5, 1.5, 3.0};
        std::vector<double> deltas = {0.3, 0.6};
    } tt;
    table->add_option("--d1", tt.d1s);
    table->add_option("--d2", tt.d2s);
    table->add_option("--alpha", tt.alphas);
    table->add_option("--delta", tt.deltas);
    auto* theory_check = theory_cmd->add_subcommand("check", "replay the golden value table");

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "log-log slope of a JSONL series");
    struct {
        std::string path;
        std::optional<double> theory;
        double tolerance = 0.2;
        int min_hits = 25;
    } ft;
    fit->add_option("jsonl", ft.path)->required();
    fit->add_option("--theory", ft.theory, "theoretical slope for the verdict");
    fit->add_option("--tol", ft.tolerance);
    fit->add_option("--min-hits", ft.min_hits);

    // --- accept ---
    auto* accept = app.add_subcommand("accept", "run the acceptance criteria");
    struct {
        std::vector<int> only;
        std::optional<int> threads;
        std::vector<std::uint64_t> seeds;
    } ac;
    accept->add_option("--only", ac.only, "criterion ids to run");
    accept->add_option("--threads", ac.threads);
    accept->add_option("--seeds", ac.seeds, "scenery seeds (default 1 2 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) {
            const SceneryField f(sd.seed, sd.alpha, sd.dim, scenery_law_from_string(sd.law),
                                 sd.law == "capped-pareto" ? std::optional<double>(sd.cap) : std::nullopt,
                                 sd.constant, sd.shifted);
            Box::centered(sd.dim, sd.radius).for_each([&](const Point& p) {
                std::string row;
                for (int i = 0; i < sd.dim; ++i) row += std::to_string(p[i]) + ",";
                std::printf("%s%.17g\n", row.c_str(), f.z_at(p));
            });
            return 0;
        }
        if (walkcmd->parsed() && !walkcmd->get_subcommands().empty()) return walk_self_check();

        if (sim_layered->parsed()) {
            RunConfig c = build_config("simulate", sim_flags);
            const LayeredModel model = c.make_model(c.scenery_seeds.front());
            for (std::int64_t i = 0; i < sl.n; ++i) {
                RngStream rng(rng::key_of(sl.run_seed, static_cast<std::uint64_t>(i)));
                std::pair<Point, Point> xy;
                if (sl.sampler == "gillespie")
                    xy = layered::direct_gillespie(model, sl.t, rng);
                else if (sl.sampler == "csrw")
                    xy = layered::csrw_timechange(model, sl.t, rng);
                else
                    xy = layered::sample_timechange(model, sl.t, rng);
                ordered_json j;
                j["t"] = sl.t;
                j["x1"] = std::vector<Coord>(xy.first.coords().begin(), xy.first.coords().end());
                j["x2"] = std::vector<Coord>(xy.second.coords().begin(), xy.second.coords().end());
                j["seed"] = c.scenery_seeds.front();
                std::cout << j.dump() << "\n";
            }
            return 0;
        }

        for (auto& e : est_cmds) {
            if (!e.cmd->parsed()) continue;
            RunConfig c = build_config(e.experiment, e.flags);
            if (e.rho) c.rho = *e.rho;
            if (e.eps) c.eps = *e.eps;
            if (e.delta) c.deltas = {*e.delta};
            if (e.t_single) c.t_single = *e.t_single;
            if (e.pinned) c.pinned = *e.pinned;
            if (e.mode) c.mode = *e.mode;
            if (!e.n_grid.empty()) c.n_grid = e.n_grid;
            if (!e.tx1.empty()) c.target_x1 = e.tx1;
            if (!e.tx2.empty()) c.target_x2 = e.tx2;
            return run_and_report(c);
        }

        if (diag_returns->parsed()) {
            const SceneryField f(dr.seed, dr.alpha, dr.dim);
            const WalkPath path = walk::simulate_path(dr.dim, dr.t, dr.walk_seed);
            const double thr = dr.threshold > 0.0 ? dr.threshold : std::pow(dr.t, 1.0 / (2.0 * dr.alpha));
            const auto d = rwrs::returns_diagnostics(path, f, thr);
            ordered_json j;
            j["t"] = dr.t;
            j["threshold"] = d.threshold;
            j["n_t"] = d.n_t;
            j["level_local_time"] = d.level_local_time;
            j["returns"] = d.returns;
            ordered_json deps = ordered_json::array();
            for (double x : d.departures) deps.push_back(std::isinf(x) ? ordered_json(nullptr) : ordered_json(x));
            j["departures"] = deps;
            std::cout << j.dump() << "\n";
            return 0;
        }

        for (auto& o : oracle_cmds) {
            if (!o.cmd->parsed()) continue;
            RunConfig c = build_config(o.experiment, o.flags);
            if (o.t) c.t_single = *o.t;
            if (o.radius) c.box_radius = *o.radius;
            if (o.boundary) c.boundary = *o.boundary;
            if (!o.tx1.empty()) c.target_x1 = o.tx1;
            if (!o.tx2.empty()) c.target_x2 = o.tx2;
            return run_and_report(c);
        }

        if (table->parsed()) {
            std::printf("d1,d2,alpha,s,ondiag,spectral_dim,csrw_spectral_dim,green,delta,moddev\n");
            const auto opt_str = [](const std::function<double()>& f) -> std::string {
                try {
                    return std::to_string(f());
                } catch (const RegimeError&) {
                    return "";
                }
            };
            for (int d1 : tt.d1s)
                for (int d2 : tt.d2s)
                    for (double a : tt.alphas) {
                        const std::string s = std::to_string(theory::s_exponent(d2, a));
                        const std::string od = std::to_string(theory::ondiag_exponent(d1, d2, a));
                        const std::string sdim = std::to_string(theory::spectral_dimension(d1, d2, a));
                        const std::string cs = opt_str([&] { return theory::csrw_spectral_dimension(d1, d2, a); });
                        const std::string gr = opt_str([&] { return theory::green_exponent(d1, d2, a); });
                        for (double del : tt.deltas) {
                            const std::string md = opt_str([&] { return theory::moddev_exponent(d1, d2, a, del); });
                            std::printf("%d,%d,%g,%s,%s,%s,%s,%s,%g,%s\n", d1, d2, a, s.c_str(), od.c_str(),
                                        sdim.c_str(), cs.c_str(), gr.c_str(), del, md.c_str());
                        }
                    }
            return 0;
        }
        if (theory_check->parsed()) {
            acceptance::Options aopt;
            aopt.only = {14};
            const auto res = acceptance::run_all(aopt, std::cout);
            return acceptance::all_passed(res) ? 0 : 1;
        }

        if (fit->parsed()) {
            std::ifstream in(ft.path);
            if (!in) return fail_json("io", "cannot open " + ft.path, 2);
            EstimateSeries series;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto j = ordered_json::parse(line);
                EstimateRecord r;
                r.x = j.at("t").get<double>();
                r.estimate = j.at("estimate").get<double>();
                r.stderr_ = j.at("stderr").get<double>();
                r.n_samples = j.at("n").get<std::int64_t>();
                r.hits = j.at("hits").get<std::int64_t>();
                series.records.push_back(r);
                if (j.contains("seed")) series.scenery_seed = j["seed"].get<std::uint64_t>();
            }
            const ExponentFit f = stats::fit_exponent(series, ft.min_hits);
            ordered_json j;
            j["slope"] = f.slope;
            j["intercept"] = f.intercept;
            j["ci"] = {f.slope_ci_lo, f.slope_ci_hi};
            j["r_squared"] = f.r_squared;
            j["points_used"] = f.points_used;
            j["points_excluded"] = f.points_excluded;
            if (ft.theory) {
                const auto v = stats::compare_to_theory(f, *ft.theory, ft.tolerance);
                j["verdict"] = ordered_json{{"pass", v.pass},
                                            {"within_tolerance", v.within_tolerance},
                                            {"theory_in_ci", v.theory_in_ci}};
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (accept->parsed()) {
            acceptance::Options aopt;
            if (!ac.only.empty()) aopt.only.insert(ac.only.begin(), ac.only.end());
            if (ac.threads) aopt.threads = *ac.threads;
            if (!ac.seeds.empty()) aopt.seeds = ac.seeds;
            const auto res = acceptance::run_all(aopt, std::cout);
            return acceptance::all_passed(res) ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        return fail_json("config", e.what(), 2);
    } catch (const RegimeError& e) {
        return fail_json("regime", e.what(), 2);
    } catch (const ResourceError& e) {
        return fail_json("resource", e.what(), 3);
    } catch (const std::exception& e) {
        return fail_json("internal", e.what(), 1);
    }
    std::cerr << app.help();
    return 2;
}
