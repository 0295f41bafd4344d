#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcrw/point.hpp"
#include "lcrw/rng.hpp"

namespace lcrw {

// Site laws for the i.i.d. scenery z : Z^d -> [0, inf).
//
//   ParetoUnit          P(z > r) = r^{-alpha} on [1, inf)
//   CappedPareto        min(ParetoUnit draw, cap)
//   Constant            z == value everywhere
//   BernoulliIndicator  z in {0,1}.  Under the canonical Pareto law the
//                       indicator 1{z>=1} is identically one, so this law is
//                       only non-degenerate with the shifted base law
//                       P(z > r) = (1+r)^{-alpha} (opt-in flag; extension,
//                       not the default).
enum class SceneryLaw { ParetoUnit, CappedPareto, Constant, BernoulliIndicator };

std::string to_string(SceneryLaw law);
SceneryLaw scenery_law_from_string(const std::string& s);

// Deterministic, lazily evaluated random field.  z(x) is a pure function of
// (seed, law parameters, x): the uniform variate of a site comes from a
// counter-based keyed hash, so the field needs no storage, any lattice point
// is addressable in O(1), and concurrent readers agree bit-exactly.
class SceneryField {
public:
    SceneryField(std::uint64_t seed, double alpha, int dimension, SceneryLaw law = SceneryLaw::ParetoUnit,
                 std::optional<double> cap = std::nullopt, double constant = 1.0, bool shifted_law = false);

    std::uint64_t seed() const { return seed_; }
    double alpha() const { return alpha_; }
    int dimension() const { return dim_; }
    SceneryLaw law() const { return law_; }
    std::optional<double> cap() const { return cap_; }
    double constant_value() const { return constant_; }
    bool shifted_law() const { return shifted_; }

    // mean of z(0); +inf when the law has no first moment (alpha <= 1 Pareto)
    double mean() const;

    // the site's uniform variate in (0,1)
    double site_uniform(const Point& x) const { return rng::to_unit(site_key(x)); }
    std::uint64_t site_key(const Point& x) const;

    double z_at(const Point& x) const;

    // |{x in box : z(x) > r}| / |box|
    double empirical_tail(const Box& box, double r) const;

    // exactly the points of the box with z >= threshold, lexicographic order
    std::vector<Point> level_set_points(double threshold, const Box& box) const;

private:
    void check_point(const Point& x) const;

    std::uint64_t seed_;
    double alpha_;
    int dim_;
    SceneryLaw law_;
    std::optional<double> cap_;
    double constant_;
    bool shifted_;
};

// Point membership test for {x : z(x) >= threshold}, optionally restricted to
// a box; decidable per point in O(1) from the field.
class LevelSet {
public:
    LevelSet(const SceneryField& field, double threshold, std::optional<Box> box = std::nullopt)
        : field_(&field), threshold_(threshold), box_(box) {}

    double threshold() const { return threshold_; }

    bool contains(const Point& x) const {
        if (box_ && !box_->contains(x)) return false;
        return field_->z_at(x) >= threshold_;
    }

    // requires a box restriction
    std::vector<Point> enumerate() const;

private:
    const SceneryField* field_;
    double threshold_;
    std::optional<Box> box_;
};

}  // namespace lcrw
