#include "lcrw/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "lcrw/layered.hpp"

namespace lcrw {

namespace {

double poisson_log_pmf(std::int64_t k, double mu) {
    return -mu + static_cast<double>(k) * std::log(mu) - std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

void GeneratorBox::finalize(std::vector<std::vector<std::pair<std::int64_t, double>>>& adj) {
    n_ = static_cast<std::int64_t>(adj.size());
    row_ptr_.assign(static_cast<size_t>(n_) + 1, 0);
    lambda_ = 0.0;
    for (std::int64_t i = 0; i < n_; ++i) {
        row_ptr_[static_cast<size_t>(i) + 1] = row_ptr_[static_cast<size_t>(i)] +
                                               static_cast<std::int64_t>(adj[static_cast<size_t>(i)].size());
        lambda_ = std::max(lambda_, exit_rate_[static_cast<size_t>(i)]);
    }
    col_.reserve(static_cast<size_t>(row_ptr_[static_cast<size_t>(n_)]));
    val_.reserve(col_.capacity());
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        for (auto& [j, r] : row) {
            col_.push_back(j);
            val_.push_back(r);
        }
    }
}

GeneratorBox GeneratorBox::layered(const LayeredModel& model, const Box& box, Boundary boundary, bool csrw) {
    if (box.dim() != model.d1 + model.d2) throw std::invalid_argument("oracle: box dimension must be d1+d2");
    GeneratorBox g;
    g.box_ = box;
    g.boundary_ = boundary;
    const std::int64_t n = box.volume();
    std::vector<std::vector<std::pair<std::int64_t, double>>> adj(static_cast<size_t>(n));
    g.exit_rate_.assign(static_cast<size_t>(n), 0.0);

    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = box.point_at(i);
        Point x2(model.d2);
        for (int k = 0; k < model.d2; ++k) x2[k] = x[model.d1 + k];
        const double z = model.conductance(x2);
        // CSRW normalization: jump rate 1, probabilities proportional to rates
        const double norm = csrw ? 2.0 * model.d1 * z + 2.0 * model.d2 : 1.0;
        double exit = 0.0;
        for (int axis = 0; axis < box.dim(); ++axis) {
            const double w = (axis < model.d1 ? z : 1.0) / norm;
            for (int sign : {-1, +1}) {
                const Point y = x.neighbor(axis, sign);
                if (box.contains(y)) {
                    adj[static_cast<size_t>(i)].push_back({box.index_of(y), w});
                    exit += w;
                } else if (boundary == Boundary::Absorbing) {
                    exit += w;  // edge leaves the box: rate stays, mass is killed
                }
            }
        }
        g.exit_rate_[static_cast<size_t>(i)] = exit;
    }
    g.finalize(adj);
    return g;
}

GeneratorBox GeneratorBox::free_walk(int d, Coord radius, Boundary boundary, double rate) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("oracle: dimension out of range");
    if (!(rate > 0.0)) throw std::invalid_argument("oracle: rate must be > 0");
    GeneratorBox g;
    g.box_ = Box::centered(d, radius);
    g.boundary_ = boundary;
    const std::int64_t n = g.box_.volume();
    std::vector<std::vector<std::pair<std::int64_t, double>>> adj(static_cast<size_t>(n));
    g.exit_rate_.assign(static_cast<size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = g.box_.point_at(i);
        double exit = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            for (int sign : {-1, +1}) {
                const Point y = x.neighbor(axis, sign);
                if (g.box_.contains(y)) {
                    adj[static_cast<size_t>(i)].push_back({g.box_.index_of(y), rate});
                    exit += rate;
                } else if (boundary == Boundary::Absorbing) {
                    exit += rate;
                }
            }
        }
        g.exit_rate_[static_cast<size_t>(i)] = exit;
    }
    g.finalize(adj);
    return g;
}

double GeneratorBox::rate(const Point& from, const Point& to) const {
    const std::int64_t i = box_.index_of(from);
    const std::int64_t j = box_.index_of(to);
    for (std::int64_t k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k)
        if (col_[static_cast<size_t>(k)] == j) return val_[static_cast<size_t>(k)];
    return 0.0;
}

double GeneratorBox::total_exit_rate(const Point& from) const {
    return exit_rate_[static_cast<size_t>(box_.index_of(from))];
}

void GeneratorBox::matvec_uniformized(const std::vector<double>& v, std::vector<double>& out) const {
    // out = P^T v with P = I + L/Lambda; v is a distribution row, and the
    // chain is reversible w.r.t. counting measure so P^T v == P v entrywise
    for (std::int64_t i = 0; i < n_; ++i) {
        double acc = (1.0 - exit_rate_[static_cast<size_t>(i)] / lambda_) * v[static_cast<size_t>(i)];
        for (std::int64_t k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k)
            acc += val_[static_cast<size_t>(k)] / lambda_ * v[static_cast<size_t>(col_[static_cast<size_t>(k)])];
        out[static_cast<size_t>(i)] = acc;
    }
}

ProbResult GeneratorBox::exact_dist(double t, const Point& from, std::vector<double>& dist,
                                    std::int64_t max_iterations) const {
    if (!(t >= 0.0)) throw std::invalid_argument("oracle: negative time");
    if (!box_.contains(from)) throw std::invalid_argument("oracle: state outside box");

    dist.assign(static_cast<size_t>(n_), 0.0);
    std::vector<double> v(static_cast<size_t>(n_), 0.0);
    v[static_cast<size_t>(box_.index_of(from))] = 1.0;

    const double mu = lambda_ * t;
    if (mu == 0.0) {
        dist = v;
        ProbResult r;
        r.absorbed_mass = 0.0;
        return r;
    }

    // crude series-length estimate; the loop stops on mass anyway
    const double k_needed = mu + 12.0 * std::sqrt(mu) + 40.0;
    if (k_needed > static_cast<double>(max_iterations))
        throw ResourceError("oracle: uniformization series exceeds the iteration budget (Lambda*t too large)");

    std::vector<double> w(static_cast<size_t>(n_), 0.0);
    double cumulative = 0.0;
    std::int64_t iterations = 0;
    for (std::int64_t k = 0;; ++k) {
        const double wk = std::exp(poisson_log_pmf(k, mu));
        if (wk > 0.0) {
            for (std::int64_t i = 0; i < n_; ++i) dist[static_cast<size_t>(i)] += wk * v[static_cast<size_t>(i)];
            cumulative += wk;
        }
        if (static_cast<double>(k) > mu && (1.0 - cumulative) < 1e-12) break;
        if (k >= max_iterations)
            throw ResourceError("oracle: uniformization series exceeds the iteration budget");
        matvec_uniformized(v, w);
        v.swap(w);
        ++iterations;
    }

    double in_box = 0.0;
    for (double p : dist) in_box += p;
    ProbResult r;
    r.absorbed_mass = std::max(0.0, 1.0 - in_box);
    r.iterations = iterations;
    return r;
}

ProbResult GeneratorBox::exact_prob(double t, const Point& from, const Point& to,
                                    std::int64_t max_iterations) const {
    if (!box_.contains(to)) throw std::invalid_argument("oracle: state outside box");
    std::vector<double> dist;
    ProbResult r = exact_dist(t, from, dist, max_iterations);
    r.value = dist[static_cast<size_t>(box_.index_of(to))];
    return r;
}

GreenResult GeneratorBox::exact_green(const Point& from, const Point& to, std::int64_t max_iterations) const {
    if (boundary_ != Boundary::Absorbing)
        throw std::invalid_argument("oracle: Green solve needs the absorbing boundary");
    if (!box_.contains(from) || !box_.contains(to)) throw std::invalid_argument("oracle: state outside box");
    if (max_iterations <= 0) max_iterations = std::max<std::int64_t>(20 * n_, 1000);

    // solve A g = b, A = -L symmetric positive definite, Jacobi preconditioner
    const auto apply_a = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (std::int64_t i = 0; i < n_; ++i) {
            double acc = exit_rate_[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
            for (std::int64_t k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k)
                acc -= val_[static_cast<size_t>(k)] * x[static_cast<size_t>(col_[static_cast<size_t>(k)])];
            out[static_cast<size_t>(i)] = acc;
        }
    };

    const size_t n = static_cast<size_t>(n_);
    std::vector<double> g(n, 0.0), r(n, 0.0), zv(n, 0.0), p(n, 0.0), ap(n, 0.0), inv_diag(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (!(exit_rate_[i] > 0.0)) throw std::invalid_argument("oracle: state with zero exit rate");
        inv_diag[i] = 1.0 / exit_rate_[i];
    }
    r[static_cast<size_t>(box_.index_of(from))] = 1.0;
    const double b_norm = 1.0;

    for (size_t i = 0; i < n; ++i) zv[i] = inv_diag[i] * r[i];
    p = zv;
    double rz = 0.0;
    for (size_t i = 0; i < n; ++i) rz += r[i] * zv[i];

    GreenResult res;
    double r_norm = 1.0;
    std::int64_t it = 0;
    while (r_norm > 1e-10 * b_norm) {
        if (it >= max_iterations) throw ResourceError("oracle: Green solve did not converge in budget");
        apply_a(p, ap);
        double pap = 0.0;
        for (size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        const double alpha = rz / pap;
        for (size_t i = 0; i < n; ++i) {
            g[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        double rn = 0.0;
        for (size_t i = 0; i < n; ++i) rn += r[i] * r[i];
        r_norm = std::sqrt(rn);
        for (size_t i = 0; i < n; ++i) zv[i] = inv_diag[i] * r[i];
        double rz_next = 0.0;
        for (size_t i = 0; i < n; ++i) rz_next += r[i] * zv[i];
        const double beta = rz_next / rz;
        rz = rz_next;
        for (size_t i = 0; i < n; ++i) p[i] = zv[i] + beta * p[i];
        ++it;
    }
    res.value = g[static_cast<size_t>(box_.index_of(to))];
    res.residual = r_norm;
    res.iterations = it;
    return res;
}

}  // namespace lcrw
