#include "lcrw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lcrw/config.hpp"
#include "lcrw/layered.hpp"
#include "lcrw/oracle.hpp"
#include "lcrw/runner.hpp"
#include "lcrw/rwrs.hpp"
#include "lcrw/stats.hpp"
#include "lcrw/theory.hpp"
#include "lcrw/walk.hpp"

namespace lcrw::acceptance {

namespace {

struct SeedOutcome {
    bool pass = false;
    std::string detail;
};

// stochastic criteria must hold for at least 2 of the 3 scenery seeds
std::string summarize(const std::vector<SeedOutcome>& outcomes, bool& pass) {
    int ok = 0;
    std::string detail;
    for (size_t i = 0; i < outcomes.size(); ++i) {
        ok += outcomes[i].pass ? 1 : 0;
        if (!detail.empty()) detail += " | ";
        detail += "seed" + std::to_string(i + 1) + (outcomes[i].pass ? " ok: " : " FAIL: ") + outcomes[i].detail;
    }
    pass = ok >= 2;
    return detail;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

ExponentFit fit_of(const EstimateSeries& s, int min_hits = 25) { return stats::fit_exponent(s, min_hits); }

EstimateSeries subset(const EstimateSeries& s, double x_lo, double x_hi) {
    EstimateSeries out = s;
    out.records.clear();
    for (const auto& r : s.records)
        if (r.x >= x_lo && r.x <= x_hi) out.records.push_back(r);
    return out;
}

// ---- criterion 1: kernel exactness ---------------------------------------
CriterionResult c1_kernel_exactness() {
    CriterionResult c{1, "kernel exactness (uniformization vs Bessel kernel)"};
    double worst = 0.0;
    for (int d : {1, 2}) {
        const GeneratorBox g = GeneratorBox::free_walk(d, 30, Boundary::Absorbing);
        for (double t : {0.5, 1.0, 2.0}) {
            std::vector<double> dist;
            g.exact_dist(t, Point(d), dist);
            for (std::int64_t i = 0; i < g.n_states(); ++i) {
                const double k = walk::kernel(d, t, g.box().point_at(i));
                worst = std::max(worst, std::abs(dist[static_cast<size_t>(i)] - k));
            }
        }
    }
    c.pass = worst <= 1e-8;
    c.detail = "max |exact - kernel| = " + fmt(worst, 3) + " (tol 1e-8)";
    return c;
}

// ---- criterion 2: Rao-Blackwell unbiasedness ------------------------------
CriterionResult c2_unbiasedness(const Options& opt) {
    CriterionResult c{2, "Rao-Blackwell estimate vs exact finite-box probability"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 1, SceneryField(seed, 0.5, 1, SceneryLaw::CappedPareto, 10.0));
        const GeneratorBox g = GeneratorBox::layered(m, Box::centered(2, 30), Boundary::Absorbing);
        EstimatorOptions eo;
        eo.n_samples = 1000000;
        eo.run_seed = rng::key_of(opt.run_seed, 2, seed);
        eo.threads = opt.threads;
        SeedOutcome so{true, ""};
        for (Coord x1 : {0, 3}) {
            const auto est = layered::kernel_estimate(m, 5.0, Point{x1}, Point{0}, KernelMode::RaoBlackwell, eo);
            const auto oracle = g.exact_prob(5.0, Point{0, 0}, Point{x1, 0});
            const double diff = std::abs(est.mean - oracle.value);
            const bool ok = diff <= 4.0 * est.stderr_ + oracle.absorbed_mass;
            so.pass = so.pass && ok;
            so.detail += "(" + std::to_string(x1) + ",0): |d|=" + fmt(diff, 2) + " 4se=" + fmt(4 * est.stderr_, 2) + " ";
        }
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 3: representation equivalence ------------------------------
CriterionResult c3_representation(const Options& opt) {
    CriterionResult c{3, "time-change vs Gillespie endpoint distributions (chi-square)"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 1, SceneryField(seed, 3.0, 1));
        const std::int64_t n = 1000000;
        std::map<std::vector<std::int64_t>, std::int64_t> ha, hb;
        for (std::int64_t i = 0; i < n; ++i) {
            RngStream ra(rng::key_of(opt.run_seed, 31, seed, static_cast<std::uint64_t>(i)));
            const auto [a1, a2] = layered::sample_timechange(m, 3.0, ra);
            ++ha[{a1[0], a2[0]}];
            RngStream rb(rng::key_of(opt.run_seed, 32, seed, static_cast<std::uint64_t>(i)));
            const auto [b1, b2] = layered::direct_gillespie(m, 3.0, rb);
            ++hb[{b1[0], b2[0]}];
        }
        const auto r = stats::chi_square_two_sample(ha, hb);
        SeedOutcome so;
        so.pass = r.p_value > 1e-3;
        so.detail = "p=" + fmt(r.p_value, 3) + " (stat " + fmt(r.statistic, 4) + ", bins " + std::to_string(r.bins) + ")";
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criteria 4-6: RWRS tail, pinned gap, hitting -------------------------
void c456_rwrs(const Options& opt, std::vector<CriterionResult>& out) {
    CriterionResult c4{4, "RWRS unpinned tail exponent"};
    CriterionResult c5{5, "pinned/unpinned slope gap"};
    CriterionResult c6{6, "level-set hitting exponent"};
    std::vector<SeedOutcome> o4, o5, o6;

    const double rho = 1.2, alpha = 1.0, eps = 0.01;
    const double slope_theory = -(alpha * rho - 1.0);  // -0.2

    for (std::uint64_t seed : opt.seeds) {
        const SceneryField field(seed, alpha, 3);
        EstimatorOptions eo;
        eo.n_samples = 10000;
        eo.run_seed = rng::key_of(opt.run_seed, 4, seed);
        eo.threads = opt.threads;
        const auto grid = rwrs::dyadic_grid(7, 13);
        const auto [tail, hit] = rwrs::tail_and_hitting_estimate(field, rho, eps, TailMode::Unpinned, grid, eo);

        const ExponentFit tf = fit_of(tail);
        SeedOutcome s4;
        s4.pass = std::abs(tf.slope - slope_theory) <= 0.1;
        s4.detail = "slope=" + fmt(tf.slope) + " want " + fmt(slope_theory) + "+-0.1";
        o4.push_back(s4);

        const ExponentFit hf = fit_of(hit);
        SeedOutcome s6;
        s6.pass = std::abs(hf.slope - slope_theory) <= 0.1;
        s6.detail = "slope=" + fmt(hf.slope) + " want " + fmt(slope_theory) + "+-0.1";
        o6.push_back(s6);

        // pinned run on the reduced grid; per-point sample size grows like the
        // inverse of the predicted pinned probability t^{-(alpha rho - 1 + d/2)}
        const auto pinned_grid = rwrs::dyadic_grid(7, 10);
        EstimateSeries pinned;
        pinned.scenery_seed = seed;
        for (size_t ti = 0; ti < pinned_grid.size(); ++ti) {
            const double t = pinned_grid[ti];
            EstimatorOptions po = eo;
            po.run_seed = rng::key_of(opt.run_seed, 5, seed);
            po.n_samples = static_cast<std::int64_t>(55.0 * std::pow(t, alpha * rho - 1.0 + 1.5));
            const std::vector<double> single = {t};
            EstimatorOptions po_t = po;
            po_t.run_seed = rng::key_of(po.run_seed, ti);
            auto s = rwrs::tail_estimate(field, rho, TailMode::Pinned, single, po_t);
            pinned.records.push_back(s.records[0]);
        }
        const ExponentFit pf = fit_of(pinned, 20);
        const ExponentFit uf_window = fit_of(subset(tail, 127.0, 1025.0));
        const double gap = pf.slope - uf_window.slope;
        SeedOutcome s5;
        s5.pass = std::abs(gap - (-1.5)) <= 0.3;
        s5.detail = "gap=" + fmt(gap) + " (pinned " + fmt(pf.slope) + ", unpinned " + fmt(uf_window.slope) +
                    ") want -1.5+-0.3";
        o5.push_back(s5);
    }
    c4.detail = summarize(o4, c4.pass);
    c5.detail = summarize(o5, c5.pass);
    c6.detail = summarize(o6, c6.pass);
    out.push_back(c4);
    out.push_back(c5);
    out.push_back(c6);
}

// ---- criterion 7: on-diagonal exponent, infinite mean ---------------------
CriterionResult c7_ondiag(const Options& opt) {
    CriterionResult c{7, "on-diagonal exponent Z^{1+1}, alpha 0.5"};
    const double theory_slope = -theory::ondiag_exponent(1, 1, 0.5);  // -1.25
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 1, SceneryField(seed, 0.5, 1));
        EstimatorOptions eo;
        eo.n_samples = 200000;
        eo.run_seed = rng::key_of(opt.run_seed, 7, seed);
        eo.threads = opt.threads;
        const auto grid = rwrs::dyadic_grid(6, 12);
        const auto series = layered::kernel_series(m, grid, Point{0}, Point{0}, KernelMode::RaoBlackwell, eo);
        const ExponentFit f = fit_of(series);
        SeedOutcome so;
        so.pass = std::abs(f.slope - theory_slope) <= 0.15;
        so.detail = "slope=" + fmt(f.slope) + " want " + fmt(theory_slope) + "+-0.15";
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 8: on-diagonal constant, finite mean ------------------------
CriterionResult c8_ondiag_constant(const Options& opt) {
    CriterionResult c{8, "on-diagonal constant Z^{1+1}, alpha 3"};
    const double target = theory::constants(1, 1, 3.0).ondiag_const;  // (4pi)^-1 / sqrt(1.5)
    std::vector<SeedOutcome> outcomes;
    const double t = 2048.0;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 1, SceneryField(seed, 3.0, 1));
        EstimatorOptions eo;
        eo.n_samples = 600000;
        eo.run_seed = rng::key_of(opt.run_seed, 8, seed);
        eo.threads = opt.threads;
        const auto est = layered::kernel_estimate(m, t, Point{0}, Point{0}, KernelMode::RaoBlackwell, eo);
        const double scaled = t * est.mean;
        SeedOutcome so;
        so.pass = std::abs(scaled - target) <= 0.15 * target;
        so.detail = "t*P=" + fmt(scaled) + " want " + fmt(target) + "+-15%";
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 9: moderate deviation exponents -----------------------------
CriterionResult c9_moddev(const Options& opt) {
    CriterionResult c{9, "moderate-deviation exponents d2=3, alpha 1 (unpinned)"};
    const std::vector<double> deltas = {0.3, 0.6};
    const double want03 = -(theory::moddev_exponent(1, 3, 1.0, 0.3) - 1.5);  // -0.5
    const double want06 = -(theory::moddev_exponent(1, 3, 1.0, 0.6) - 1.5);  // -0.8
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 3, SceneryField(seed, 1.0, 3));
        EstimatorOptions eo;
        eo.n_samples = 40000;
        eo.run_seed = rng::key_of(opt.run_seed, 9, seed);
        eo.threads = opt.threads;
        const auto grid = rwrs::dyadic_grid(10, 13);
        const auto series = layered::moddev_sweep(m, grid, deltas, false, eo);
        const ExponentFit f03 = fit_of(series[0]);
        const ExponentFit f06 = fit_of(series[1]);
        SeedOutcome so;
        const bool ok03 = std::abs(f03.slope - want03) <= 0.2;
        const bool ok06 = std::abs(f06.slope - want06) <= 0.2;
        so.pass = ok03 && ok06;
        so.detail = "slopes " + fmt(f03.slope) + "/" + fmt(f06.slope) + " want " + fmt(want03) + "/" +
                    fmt(want06) + "+-0.2";
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 10: Green exponents -----------------------------------------
CriterionResult c10_green(const Options& opt) {
    CriterionResult c{10, "Green decay exponents (d2=1 and d2=2, alpha 0.5)"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        SeedOutcome so{true, ""};
        // (a) d2=1: slope -1/3 +- 0.15
        {
            const LayeredModel m(1, 1, SceneryField(seed, 0.5, 1));
            EstimateSeries s;
            s.scenery_seed = seed;
            for (std::int64_t n : {8, 12, 16, 23, 32, 45, 64}) {
                EstimatorOptions eo;
                eo.n_samples = 20000;
                eo.run_seed = rng::key_of(opt.run_seed, 10, seed, static_cast<std::uint64_t>(n));
                eo.threads = opt.threads;
                const auto ge = layered::green_estimate(m, n, {}, eo);
                EstimateRecord r;
                r.x = static_cast<double>(n);
                r.estimate = ge.value;
                r.stderr_ = ge.stderr_;
                r.n_samples = eo.n_samples;
                r.hits = eo.n_samples;
                s.records.push_back(r);
            }
            const ExponentFit f = fit_of(s);
            const bool ok = std::abs(f.slope - (-1.0 / 3.0)) <= 0.15;
            so.pass = so.pass && ok;
            so.detail += "d2=1 slope=" + fmt(f.slope) + " want -0.333+-0.15; ";
        }
        // (b) d2=2: slope -1 +- 0.2; tighter time window, the integrand decays
        // like t^-2 past the crossing scale (see ledger note on t_max)
        {
            const LayeredModel m(1, 2, SceneryField(seed, 0.5, 2));
            EstimateSeries s;
            s.scenery_seed = seed;
            for (std::int64_t n : {4, 6, 8, 11, 16, 23, 32}) {
                EstimatorOptions eo;
                eo.n_samples = 120000;
                eo.run_seed = rng::key_of(opt.run_seed, 11, seed, static_cast<std::uint64_t>(n));
                eo.threads = opt.threads;
                std::vector<double> grid;
                const double t_max = std::max(1024.0, 128.0 * static_cast<double>(n));
                for (double t = 1.0; t < t_max * 1.0000001; t *= std::pow(2.0, 0.125)) grid.push_back(t);
                const auto ge = layered::green_estimate(m, n, grid, eo);
                EstimateRecord r;
                r.x = static_cast<double>(n);
                r.estimate = ge.value;
                r.stderr_ = ge.stderr_;
                r.n_samples = eo.n_samples;
                r.hits = eo.n_samples;
                s.records.push_back(r);
            }
            const ExponentFit f = fit_of(s);
            const bool ok = std::abs(f.slope - (-1.0)) <= 0.2;
            so.pass = so.pass && ok;
            so.detail += "d2=2 slope=" + fmt(f.slope) + " want -1+-0.2";
        }
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 11: Green small-box cross-validation -------------------------
CriterionResult c11_green_crosscheck(const Options& opt) {
    CriterionResult c{11, "Monte Carlo Green vs exact box Green (Z^{1+2})"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        const LayeredModel m(1, 2, SceneryField(seed, 0.5, 2, SceneryLaw::CappedPareto, 10.0));
        EstimatorOptions eo;
        eo.n_samples = 150000;
        eo.run_seed = rng::key_of(opt.run_seed, 12, seed);
        eo.threads = opt.threads;
        std::vector<double> grid;
        for (double t = 1.0; t < 2048.0 * 1.0000001; t *= std::pow(2.0, 0.125)) grid.push_back(t);
        const auto mc = layered::green_estimate(m, 4, grid, eo);

        const GeneratorBox g = GeneratorBox::layered(m, Box::centered(3, 12), Boundary::Absorbing);
        const auto oracle = g.exact_green(Point{0, 0, 0}, Point{4, 0, 0});
        // the absorbing box under-counts long excursions; quantify with a
        // smaller box (reported truncation channel)
        const GeneratorBox g9 = GeneratorBox::layered(m, Box::centered(3, 9), Boundary::Absorbing);
        const double box_bias = std::abs(oracle.value - g9.exact_green(Point{0, 0, 0}, Point{4, 0, 0}).value);

        const double diff = std::abs(mc.value - oracle.value);
        const double budget = 4.0 * mc.mc_stderr + mc.tail_mass + mc.small_t_bound + 2.0 * box_bias;
        SeedOutcome so;
        so.pass = diff <= budget;
        so.detail = "mc=" + fmt(mc.value) + " oracle=" + fmt(oracle.value) + " |d|=" + fmt(diff, 3) +
                    " budget=" + fmt(budget, 3);
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 12: LCLT regime split ----------------------------------------
CriterionResult c12_lclt(const Options& opt) {
    CriterionResult c{12, "local-CLT ratio: validity at alpha 3, failure at alpha 1.2"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        SeedOutcome so{true, ""};
        // (a) d2=1, alpha 3, t=2^11: axis targets |x| <= 2 sqrt(t)
        {
            const LayeredModel m(1, 1, SceneryField(seed, 3.0, 1));
            const double t = 2048.0;
            std::vector<std::pair<Point, Point>> targets;
            for (Coord k = 0; k <= 90; k += 9) {
                targets.push_back({Point{k}, Point{0}});
                if (k > 0) targets.push_back({Point{0}, Point{k}});
            }
            EstimatorOptions eo;
            eo.n_samples = 150000;
            eo.run_seed = rng::key_of(opt.run_seed, 13, seed);
            eo.threads = opt.threads;
            const auto entries = layered::lclt_ratio(m, t, targets, eo);
            double worst = 0.0;
            for (const auto& e : entries) worst = std::max(worst, std::abs(e.ratio - 1.0));
            const bool ok = worst <= 0.15;
            so.pass = so.pass && ok;
            so.detail += "max|ratio-1|=" + fmt(worst, 3) + " (tol 0.15); ";
        }
        // (b) d2=3, alpha 1.2, t=2^10: ratio at the max-z site drops below 1/2
        {
            const LayeredModel m(1, 3, SceneryField(seed, 1.2, 3));
            const double t = 1024.0;
            const Coord r = 32;  // sqrt(t)
            Point best(3);
            double best_z = -1.0;
            Box::centered(3, r).for_each([&](const Point& p) {
                const double z = m.field.z_at(p);
                if (z > best_z) {
                    best_z = z;
                    best = p;
                }
            });
            EstimatorOptions eo;
            eo.n_samples = 250000;
            eo.run_seed = rng::key_of(opt.run_seed, 14, seed);
            eo.threads = opt.threads;
            const auto entries = layered::lclt_ratio(m, t, {{Point{0}, best}}, eo);
            const bool ok = entries[0].ratio <= 0.5;
            so.pass = so.pass && ok;
            so.detail += "max-z site " + best.to_string() + " z=" + fmt(best_z, 3) +
                         " ratio=" + fmt(entries[0].ratio, 3) + " (want <= 0.5)";
        }
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 13: lower deviations ------------------------------------------
CriterionResult c13_lower(const Options& opt) {
    CriterionResult c{13, "lower-deviation smallness and monotonicity"};
    std::vector<SeedOutcome> outcomes;
    for (std::uint64_t seed : opt.seeds) {
        SeedOutcome so{true, ""};
        const auto check_series = [&](const EstimateSeries& s, const char* label) {
            const auto& recs = s.records;
            const double last = recs.back().estimate;
            bool ok = last <= 0.01;
            for (size_t i = 1; i < recs.size() && ok; ++i) {
                const double rise = recs[i].estimate - recs[i - 1].estimate;
                const double slack = 2.0 * std::sqrt(recs[i].stderr_ * recs[i].stderr_ +
                                                     recs[i - 1].stderr_ * recs[i - 1].stderr_);
                if (rise > slack) ok = false;
            }
            so.pass = so.pass && ok;
            so.detail += std::string(label) + " last=" + fmt(last, 3) + (ok ? " ok; " : " FAIL; ");
        };
        {
            const SceneryField f(seed, 0.5, 1);
            EstimatorOptions eo;
            eo.n_samples = 100000;
            eo.run_seed = rng::key_of(opt.run_seed, 15, seed);
            eo.threads = opt.threads;
            check_series(rwrs::lower_deviation_estimate(f, 0.3, false, rwrs::dyadic_grid(7, 10), eo),
                         "(1,0.5,eps .3)");
        }
        {
            const SceneryField f(seed, 3.0, 2);
            EstimatorOptions eo;
            eo.n_samples = 100000;
            eo.run_seed = rng::key_of(opt.run_seed, 16, seed);
            eo.threads = opt.threads;
            check_series(rwrs::lower_deviation_estimate(f, 0.2, true, rwrs::dyadic_grid(8, 11), eo),
                         "(2,3,mean-0.2)");
        }
        outcomes.push_back(so);
    }
    c.detail = summarize(outcomes, c.pass);
    return c;
}

// ---- criterion 14: theory golden table ----------------------------------------
CriterionResult c14_theory() {
    CriterionResult c{14, "closed-form exponent golden table"};
    const double tol = 1e-12;
    int bad = 0;
    const auto expect = [&](double got, double want) {
        if (std::abs(got - want) > tol * std::max(1.0, std::abs(want))) ++bad;
    };
    namespace th = lcrw::theory;
    expect(th::s_exponent(1, 0.5), 1.5);
    expect(th::s_exponent(2, 2.0), 1.0);
    expect(th::s_exponent(3, 0.5), 2.0);
    expect(th::ondiag_exponent(1, 1, 0.5), 1.25);
    expect(th::ondiag_exponent(1, 2, 0.5), 2.0);
    expect(th::ondiag_exponent(1, 3, 2.0), 2.0);
    expect(th::spectral_dimension(1, 1, 0.5), 2.5);
    expect(th::spectral_dimension(1, 2, 0.5), 4.0);
    expect(th::spectral_dimension(2, 1, 0.5), 4.0);
    expect(th::moddev_exponent(1, 3, 1.0, 0.3), 2.0);
    expect(th::moddev_exponent(1, 3, 1.0, 0.6), 2.3);
    expect(th::moddev_exponent(1, 3, 0.5, 1.0), 2.5);
    expect(th::green_exponent(1, 1, 0.5), -1.0 / 3.0);
    expect(th::green_exponent(1, 5, 1.0), -3.4);
    expect(th::green_exponent(1, 3, 2.0), -2.0);
    expect(th::csrw_spectral_dimension(1, 1, 0.5), 2.0);
    expect(th::csrw_spectral_dimension(2, 3, 1.0), 5.0);
    expect(th::csrw_spectral_dimension(2, 1, 3.0), 2.5);
    expect(th::intrinsic_distance(1, 0.5, Point{8, 0}, Point{0, 0}), 4.0);
    expect(th::intrinsic_distance(2, 2.0, Point{3, 4, 0}, Point{0, 0, 0}), 7.0);
    const auto k = th::constants(1, 1, 3.0);
    expect(k.ondiag_const, std::pow(4.0 * 3.14159265358979323846, -1.0) / std::sqrt(1.5));
    const auto k2 = th::constants(1, 2, 3.0);
    expect(k2.green_const_paper, 0.25 * std::tgamma(0.5));
    expect(k2.green_const_derived, 1.0 / (4.0 * 3.14159265358979323846));
    c.pass = bad == 0;
    c.detail = bad == 0 ? "23 formula evaluations exact" : std::to_string(bad) + " mismatches";
    return c;
}

// ---- criterion 15: determinism --------------------------------------------------
CriterionResult c15_determinism() {
    CriterionResult c{15, "byte-identical JSONL across reruns and thread budgets"};
    namespace fs = std::filesystem;
    const auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    RunConfig cfg = RunConfig::from_json_text(R"({
        "experiment": "rwrs-tail",
        "model": {"d1": 1, "d2": 3, "scenery": {"alpha": 1.0, "law": "pareto"}},
        "scenery_seeds": [1, 2],
        "grid": {"base": 2, "min_exp": 5, "max_exp": 8},
        "n_samples": 3000, "rho": 1.2, "run_seed": 99
    })");
    const fs::path base = fs::temp_directory_path() / "lcrw_accept_det";
    fs::remove_all(base);
    std::vector<std::string> digests;
    for (int rep = 0; rep < 3; ++rep) {
        RunConfig r = cfg;
        r.threads = rep == 2 ? 4 : 1;  // third run oversubscribes threads
        r.output_dir = (base / ("run" + std::to_string(rep))).string();
        const auto art = runner::run(r);
        std::string all;
        for (const auto& f : art.files)
            if (f.ends_with(".jsonl")) all += slurp(f);
        digests.push_back(all);
    }
    c.pass = !digests[0].empty() && digests[0] == digests[1] && digests[0] == digests[2];
    c.detail = c.pass ? "3 runs, " + std::to_string(digests[0].size()) + " JSONL bytes identical"
                      : "JSONL bytes differ between runs";
    fs::remove_all(base);
    return c;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

std::vector<CriterionResult> run_all(const Options& opt, std::ostream& log) {
    std::vector<CriterionResult> results;
    const auto want = [&](int id) { return opt.only.empty() || opt.only.count(id) > 0; };

    const auto timed = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = fn();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " ("
            << fmt(r.seconds, 3) << "s) -- " << r.detail << "\n"
            << std::flush;
        results.push_back(r);
    };

    if (want(1)) timed([&] { return c1_kernel_exactness(); });
    if (want(2)) timed([&] { return c2_unbiasedness(opt); });
    if (want(3)) timed([&] { return c3_representation(opt); });
    if (want(4) || want(5) || want(6)) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<CriterionResult> rwrs_results;
        c456_rwrs(opt, rwrs_results);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& r : rwrs_results) {
            r.seconds = secs / 3.0;
            log << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " ("
                << fmt(r.seconds, 3) << "s) -- " << r.detail << "\n"
                << std::flush;
            results.push_back(r);
        }
    }
    if (want(7)) timed([&] { return c7_ondiag(opt); });
    if (want(8)) timed([&] { return c8_ondiag_constant(opt); });
    if (want(9)) timed([&] { return c9_moddev(opt); });
    if (want(10)) timed([&] { return c10_green(opt); });
    if (want(11)) timed([&] { return c11_green_crosscheck(opt); });
    if (want(12)) timed([&] { return c12_lclt(opt); });
    if (want(13)) timed([&] { return c13_lower(opt); });
    if (want(14)) timed([&] { return c14_theory(); });
    if (want(15)) timed([&] { return c15_determinism(); });
    return results;
}

}  // namespace lcrw::acceptance
