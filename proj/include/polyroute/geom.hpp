#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Points and vectors
// ---------------------------------------------------------------------------

// A point of R^d, d >= 2. Coordinates are plain doubles; all operations are
// pure and the type is freely copyable/shareable.
struct Point {
    std::vector<double> coords;

    Point() = default;
    Point(std::initializer_list<double> init) : coords(init) {}
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(double x, double y) : coords{x, y} {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
    bool operator!=(const Point& o) const { return coords != o.coords; }
};

inline Point operator+(const Point& a, const Point& b) {
    Point r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
    return r;
}

inline Point operator-(const Point& a, const Point& b) {
    Point r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
}

inline Point operator*(double s, const Point& a) {
    Point r = a;
    for (auto& c : r.coords) c *= s;
    return r;
}

inline double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) s += a.coords[i] * b.coords[i];
    return s;
}

inline bool all_finite(const Point& p) {
    for (double c : p.coords)
        if (!std::isfinite(c)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// Which norm the instance uses. Every distance in the library goes through
// norm_eval with the instance's NormSpec.
struct NormSpec {
    enum class Kind { lp, max, weighted_lp };

    Kind kind = Kind::lp;
    double p = 2.0;               // exponent, in [1, inf), for lp/weighted_lp
    std::vector<double> weights;  // strictly positive, for weighted_lp

    static NormSpec l1() { return NormSpec{Kind::lp, 1.0, {}}; }
    static NormSpec l2() { return NormSpec{Kind::lp, 2.0, {}}; }
    static NormSpec lp(double p) { return NormSpec{Kind::lp, p, {}}; }
    static NormSpec linf() { return NormSpec{Kind::max, 0.0, {}}; }
    static NormSpec weighted(double p, std::vector<double> w) {
        return NormSpec{Kind::weighted_lp, p, std::move(w)};
    }

    bool is_euclidean_like() const {
        // Quadratic closed forms apply: sum of w_i * x_i^2.
        return (kind == Kind::lp && p == 2.0) || (kind == Kind::weighted_lp && p == 2.0);
    }
    bool strictly_convex() const {
        return (kind == Kind::lp || kind == Kind::weighted_lp) && p > 1.0;
    }

    void validate(std::size_t dim) const {
        if (kind != Kind::max && !(p >= 1.0 && std::isfinite(p)))
            throw InstanceError("norm exponent p must lie in [1, inf)");
        if (kind == Kind::weighted_lp) {
            if (weights.size() != dim)
                throw InstanceError("weight vector length must equal the dimension");
            for (double w : weights)
                if (!(w > 0.0) || !std::isfinite(w))
                    throw InstanceError("norm weights must be strictly positive");
        }
    }

    // Norm of the j-th basis vector; scales axis-aligned coordinate gaps
    // into norm units.
    double axis_scale(std::size_t j) const {
        if (kind == Kind::weighted_lp) return std::pow(weights[j], 1.0 / p);
        return 1.0;
    }
};

inline double norm_eval(const std::vector<double>& v, const NormSpec& n) {
    switch (n.kind) {
        case NormSpec::Kind::max: {
            double m = 0.0;
            for (double c : v) m = std::max(m, std::abs(c));
            return m;
        }
        case NormSpec::Kind::lp: {
            if (n.p == 1.0) {
                double s = 0.0;
                for (double c : v) s += std::abs(c);
                return s;
            }
            if (n.p == 2.0) {
                double s = 0.0;
                for (double c : v) s += c * c;
                return std::sqrt(s);
            }
            // Scale by the max component for overflow robustness.
            double m = 0.0;
            for (double c : v) m = std::max(m, std::abs(c));
            if (m == 0.0) return 0.0;
            double s = 0.0;
            for (double c : v) s += std::pow(std::abs(c) / m, n.p);
            return m * std::pow(s, 1.0 / n.p);
        }
        case NormSpec::Kind::weighted_lp: {
            if (v.size() != n.weights.size())
                throw InstanceError("vector length does not match norm weight vector");
            if (n.p == 2.0) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) s += n.weights[i] * v[i] * v[i];
                return std::sqrt(s);
            }
            double m = 0.0;
            for (double c : v) m = std::max(m, std::abs(c));
            if (m == 0.0) return 0.0;
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += n.weights[i] * std::pow(std::abs(v[i]) / m, n.p);
            return m * std::pow(s, 1.0 / n.p);
        }
    }
    return 0.0;
}

inline double norm_dist(const Point& a, const Point& b, const NormSpec& n) {
    if (a.dim() != b.dim()) throw InstanceError("point dimensions differ");
    std::vector<double> v(a.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coords[i] - b.coords[i];
    return norm_eval(v, n);
}

// ---------------------------------------------------------------------------
// Segments and polylines
// ---------------------------------------------------------------------------

struct Segment {
    Point a;
    Point b;
};

// Affine interpolation z(t) = (1-t)a + t b; exact at the endpoints.
inline Point segment_point(const Segment& s, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("segment parameter outside [0,1]");
    if (t == 0.0) return s.a;
    if (t == 1.0) return s.b;
    Point r = s.a;
    for (std::size_t i = 0; i < r.coords.size(); ++i)
        r.coords[i] = (1.0 - t) * s.a.coords[i] + t * s.b.coords[i];
    return r;
}

// Ordered vertex chain. A single vertex is the degenerate point-path; every
// routing input carries at least two vertices.
struct Polyline {
    std::vector<Point> vertices;

    Polyline() = default;
    explicit Polyline(std::vector<Point> v) : vertices(std::move(v)) {}
    Polyline(std::initializer_list<Point> v) : vertices(v) {}

    std::size_t size() const { return vertices.size(); }
    std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    const Point& front() const { return vertices.front(); }
    const Point& back() const { return vertices.back(); }
    Segment edge(std::size_t e) const { return Segment{vertices[e], vertices[e + 1]}; }
};

// Drops zero-length edges (exactly coincident consecutive vertices). First
// and last vertices are preserved bitwise; idempotent.
inline Polyline normalize(const Polyline& p) {
    Polyline out;
    out.vertices.reserve(p.vertices.size());
    for (const auto& v : p.vertices) {
        if (out.vertices.empty() || !(out.vertices.back() == v)) out.vertices.push_back(v);
    }
    if (!p.vertices.empty() && out.vertices.size() > 1 && !(out.vertices.back() == p.vertices.back())) {
        // Cannot happen (back either differs or was kept), but keep the
        // endpoint contract explicit.
        out.vertices.push_back(p.vertices.back());
    }
    return out;
}

inline double polyline_length(const Polyline& p, const NormSpec& n) {
    double len = 0.0;
    for (std::size_t e = 0; e + 1 < p.vertices.size(); ++e)
        len += norm_dist(p.vertices[e], p.vertices[e + 1], n);
    return len;
}

// Samples the polyline so that consecutive samples are at norm-distance
// <= step; every vertex is included.
inline std::vector<Point> polyline_sample(const Polyline& p, double step, const NormSpec& n) {
    if (!(step > 0.0)) throw ParameterError("sampling step must be positive");
    std::vector<Point> out;
    if (p.vertices.empty()) return out;
    out.push_back(p.vertices.front());
    for (std::size_t e = 0; e + 1 < p.vertices.size(); ++e) {
        const Segment seg{p.vertices[e], p.vertices[e + 1]};
        const double len = norm_dist(seg.a, seg.b, n);
        const std::size_t pieces = std::max<std::size_t>(1, (std::size_t)std::ceil(len / step));
        for (std::size_t k = 1; k <= pieces; ++k)
            out.push_back(segment_point(seg, (double)k / (double)pieces));
    }
    return out;
}

} // namespace polyroute
