#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lcrw/point.hpp"
#include "lcrw/scenery.hpp"

namespace lcrw {

struct LayeredModel;  // layered.hpp

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Boundary { Absorbing, Reflecting };

struct ProbResult {
    double value = 0.0;
    double absorbed_mass = 0.0;  // boundary-truncation bias channel
    std::int64_t iterations = 0;
};

struct GreenResult {
    double value = 0.0;
    double residual = 0.0;
    std::int64_t iterations = 0;
};

// Sparse rate matrix of a continuous-time chain restricted to a finite box.
// Absorbing: transitions across the boundary kill the walk (mass is
// reported); Reflecting: boundary edges carry no rate.
class GeneratorBox {
public:
    // conductance chain of the layered model on a box in Z^{d1+d2};
    // csrw row-normalizes the rates by the total site weight
    static GeneratorBox layered(const LayeredModel& model, const Box& box, Boundary boundary,
                                bool csrw = false);
    // free simple random walk at `rate` per direction
    static GeneratorBox free_walk(int d, Coord radius, Boundary boundary, double rate = 1.0);

    const Box& box() const { return box_; }
    Boundary boundary() const { return boundary_; }
    std::int64_t n_states() const { return n_; }
    double uniformization_rate() const { return lambda_; }

    // (e^{tL} delta_from)(to) by uniformization; Poisson series truncated when
    // the remaining mass is < 1e-12
    ProbResult exact_prob(double t, const Point& from, const Point& to,
                          std::int64_t max_iterations = 1000000) const;

    // full distribution row; dist[i] indexed by box().index_of
    ProbResult exact_dist(double t, const Point& from, std::vector<double>& dist,
                          std::int64_t max_iterations = 1000000) const;

    // solves -L g = delta_from (absorbing boundary only) by Jacobi-
    // preconditioned conjugate gradients to relative residual 1e-10
    GreenResult exact_green(const Point& from, const Point& to, std::int64_t max_iterations = 0) const;

    // row access for tests
    double rate(const Point& from, const Point& to) const;
    double total_exit_rate(const Point& from) const;

private:
    GeneratorBox() = default;
    void finalize(std::vector<std::vector<std::pair<std::int64_t, double>>>& adj);
    void matvec_uniformized(const std::vector<double>& v, std::vector<double>& out) const;

    Box box_;
    Boundary boundary_ = Boundary::Absorbing;
    std::int64_t n_ = 0;
    double lambda_ = 0.0;
    // CSR of off-diagonal rates plus per-state total exit rate
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int64_t> col_;
    std::vector<double> val_;
    std::vector<double> exit_rate_;
};

}  // namespace lcrw
