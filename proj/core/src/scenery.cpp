#include "lcrw/scenery.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lcrw {

std::string to_string(SceneryLaw law) {
    switch (law) {
        case SceneryLaw::ParetoUnit: return "pareto";
        case SceneryLaw::CappedPareto: return "capped-pareto";
        case SceneryLaw::Constant: return "constant";
        case SceneryLaw::BernoulliIndicator: return "bernoulli";
    }
    return "?";
}

SceneryLaw scenery_law_from_string(const std::string& s) {
    if (s == "pareto") return SceneryLaw::ParetoUnit;
    if (s == "capped-pareto") return SceneryLaw::CappedPareto;
    if (s == "constant") return SceneryLaw::Constant;
    if (s == "bernoulli") return SceneryLaw::BernoulliIndicator;
    throw std::invalid_argument("unknown scenery law: " + s);
}

SceneryField::SceneryField(std::uint64_t seed, double alpha, int dimension, SceneryLaw law,
                           std::optional<double> cap, double constant, bool shifted_law)
    : seed_(seed), alpha_(alpha), dim_(dimension), law_(law), cap_(cap), constant_(constant), shifted_(shifted_law) {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("scenery: dimension out of range");
    if (law_ != SceneryLaw::Constant && !(alpha_ > 0.0)) throw std::invalid_argument("scenery: alpha must be > 0");
    if (law_ == SceneryLaw::CappedPareto) {
        if (!cap_ || !(*cap_ >= 1.0)) throw std::invalid_argument("scenery: capped law needs cap >= 1");
    }
    if (law_ == SceneryLaw::Constant && !(constant_ >= 0.0))
        throw std::invalid_argument("scenery: constant must be >= 0");
    if (shifted_ && law_ != SceneryLaw::BernoulliIndicator)
        throw std::invalid_argument("scenery: shifted base law only applies to the bernoulli indicator");
}

double SceneryField::mean() const {
    switch (law_) {
        case SceneryLaw::Constant:
            return constant_;
        case SceneryLaw::ParetoUnit:
            // E[z] = alpha/(alpha-1) for alpha > 1, else infinite
            return alpha_ > 1.0 ? alpha_ / (alpha_ - 1.0) : std::numeric_limits<double>::infinity();
        case SceneryLaw::CappedPareto: {
            // E[z ^ cap] = int_0^M P(z > r) dr = 1 + int_1^M r^-a dr
            const double m = *cap_;
            if (alpha_ == 1.0) return 1.0 + std::log(m);
            return 1.0 + (1.0 - std::pow(m, 1.0 - alpha_)) / (alpha_ - 1.0);
        }
        case SceneryLaw::BernoulliIndicator:
            // P(z >= 1); shifted base law gives P(base > 1) = 2^-alpha
            return shifted_ ? std::pow(2.0, -alpha_) : 1.0;
    }
    return 0.0;
}

std::uint64_t SceneryField::site_key(const Point& x) const {
    check_point(x);
    return rng::key_of(seed_, x.coords());
}

void SceneryField::check_point(const Point& x) const {
    if (x.dim() != dim_) throw std::invalid_argument("scenery: point dimension mismatch");
}

double SceneryField::z_at(const Point& x) const {
    check_point(x);
    if (law_ == SceneryLaw::Constant) return constant_;
    const double u = rng::to_unit(rng::key_of(seed_, x.coords()));
    switch (law_) {
        case SceneryLaw::ParetoUnit:
            return std::pow(u, -1.0 / alpha_);
        case SceneryLaw::CappedPareto:
            return std::min(std::pow(u, -1.0 / alpha_), *cap_);
        case SceneryLaw::BernoulliIndicator: {
            if (!shifted_) return 1.0;  // 1{z >= 1} with z >= 1 a.s.
            const double base = std::pow(u, -1.0 / alpha_) - 1.0;
            return base >= 1.0 ? 1.0 : 0.0;
        }
        default:
            return constant_;
    }
}

double SceneryField::empirical_tail(const Box& box, double r) const {
    if (box.dim() != dim_) throw std::invalid_argument("scenery: box dimension mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("scenery: tail radius must be > 0");
    const std::int64_t vol = box.volume();
    if (vol == 0) throw std::invalid_argument("scenery: empty box");
    std::int64_t count = 0;
    box.for_each([&](const Point& p) {
        if (z_at(p) > r) ++count;
    });
    return static_cast<double>(count) / static_cast<double>(vol);
}

std::vector<Point> SceneryField::level_set_points(double threshold, const Box& box) const {
    if (box.dim() != dim_) throw std::invalid_argument("scenery: box dimension mismatch");
    std::vector<Point> pts;
    box.for_each([&](const Point& p) {
        if (z_at(p) >= threshold) pts.push_back(p);
    });
    return pts;  // Box::for_each is already lexicographic
}

std::vector<Point> LevelSet::enumerate() const {
    if (!box_) throw std::invalid_argument("level set: enumeration needs a box restriction");
    return field_->level_set_points(threshold_, *box_);
}

}  // namespace lcrw
