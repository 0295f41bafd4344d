#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcrw {

using Coord = std::int64_t;

// Dimensions in this project are small (d1 + d2 <= 8), so lattice points are
// fixed-capacity value types that live on the stack in hot loops.
inline constexpr int kMaxDim = 8;

class Point {
public:
    Point() = default;
    explicit Point(int dim) : dim_(check_dim(dim)) { c_.fill(0); }
    Point(std::initializer_list<Coord> cs) : dim_(check_dim(static_cast<int>(cs.size()))) {
        c_.fill(0);
        int i = 0;
        for (Coord c : cs) c_[i++] = c;
    }
    static Point from(std::span<const Coord> cs) {
        Point p(static_cast<int>(cs.size()));
        for (int i = 0; i < p.dim_; ++i) p.c_[i] = cs[i];
        return p;
    }

    int dim() const { return dim_; }
    Coord operator[](int i) const { return c_[static_cast<size_t>(i)]; }
    Coord& operator[](int i) { return c_[static_cast<size_t>(i)]; }
    std::span<const Coord> coords() const { return {c_.data(), static_cast<size_t>(dim_)}; }

    bool operator==(const Point& o) const {
        if (dim_ != o.dim_) return false;
        for (int i = 0; i < dim_; ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const Point& o) const { return !(*this == o); }

    // lexicographic, used for canonical enumeration order
    bool operator<(const Point& o) const {
        for (int i = 0; i < dim_ && i < o.dim_; ++i) {
            if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
        }
        return dim_ < o.dim_;
    }

    Point neighbor(int axis, int sign) const {
        Point p = *this;
        p.c_[static_cast<size_t>(axis)] += sign;
        return p;
    }

    std::int64_t sq_norm() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
        return s;
    }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    static int check_dim(int d) {
        if (d < 0 || d > kMaxDim) throw std::invalid_argument("Point: dimension out of range");
        return d;
    }
    std::array<Coord, kMaxDim> c_{};
    int dim_ = 0;
};

// Axis-aligned box [lo_i, hi_i] per coordinate, closed on both sides.
class Box {
public:
    Box() = default;
    Box(Point lo, Point hi) : lo_(lo), hi_(hi) {
        if (lo.dim() != hi.dim()) throw std::invalid_argument("Box: dim mismatch");
        for (int i = 0; i < lo.dim(); ++i)
            if (lo[i] > hi[i]) throw std::invalid_argument("Box: lo > hi");
    }
    static Box centered(int dim, Coord radius) {
        if (radius < 0) throw std::invalid_argument("Box: negative radius");
        Point lo(dim), hi(dim);
        for (int i = 0; i < dim; ++i) {
            lo[i] = -radius;
            hi[i] = radius;
        }
        return {lo, hi};
    }

    int dim() const { return lo_.dim(); }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }

    Coord side(int i) const { return hi_[i] - lo_[i] + 1; }

    std::int64_t volume() const {
        std::int64_t v = 1;
        for (int i = 0; i < dim(); ++i) v *= side(i);
        return v;
    }

    bool contains(const Point& p) const {
        if (p.dim() != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
        return true;
    }

    // mixed-radix linear index, lexicographic in coordinates
    std::int64_t index_of(const Point& p) const {
        std::int64_t idx = 0;
        for (int i = 0; i < dim(); ++i) idx = idx * side(i) + (p[i] - lo_[i]);
        return idx;
    }
    Point point_at(std::int64_t idx) const {
        Point p(dim());
        for (int i = dim() - 1; i >= 0; --i) {
            Coord s = side(i);
            p[i] = lo_[i] + static_cast<Coord>(idx % s);
            idx /= s;
        }
        return p;
    }

    template <class F>
    void for_each(F&& f) const {
        const std::int64_t n = volume();
        for (std::int64_t i = 0; i < n; ++i) f(point_at(i));
    }

private:
    Point lo_{}, hi_{};
};

}  // namespace lcrw
