#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "schedule.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Collar widths
// ---------------------------------------------------------------------------

// Collar of one obstacle: points outside every obstacle within delta of this
// obstacle's boundary. Routes are carried on a scaled copy of the obstacle
// surface halfway into the collar band.
struct Collar {
    int obstacle_id = 0;
    double delta = 0.0;    // collar width
    double routing_radius = 0.0;  // ball: r + delta/2; box: gauge-scale surface offset
};

// delta_i = half the least separation from sibling closures and from the
// region boundary; positive whenever validate_family passes.
inline Collar collar_width(int obstacle_id, const Instance& inst) {
    const Obstacle* ob = inst.find_obstacle(obstacle_id);
    if (!ob) throw ParameterError("unknown obstacle id " + std::to_string(obstacle_id));
    double least = region_clearance(*ob, inst);
    for (const auto& other : inst.obstacles) {
        if (other.id == obstacle_id) continue;
        least = std::min(least, closure_gap(*ob, other, inst));
    }
    Collar col;
    col.obstacle_id = obstacle_id;
    col.delta = 0.5 * least;
    col.routing_radius =
        ob->shape == Obstacle::Shape::ball ? ob->radius + 0.5 * col.delta : 0.0;
    return col;
}

inline std::vector<Collar> all_collars(const Instance& inst) {
    std::vector<Collar> out;
    out.reserve(inst.obstacles.size());
    for (const auto& ob : inst.obstacles) out.push_back(collar_width(ob.id, inst));
    return out;
}

inline double min_collar_delta(const Instance& inst) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& ob : inst.obstacles) d = std::min(d, collar_width(ob.id, inst).delta);
    return d;
}

// ---------------------------------------------------------------------------
// Gauge of an obstacle
// ---------------------------------------------------------------------------

namespace detail {

// Positively homogeneous gauge whose unit level set is the obstacle
// boundary: ||v|| / r for balls, max_j |v_j| / h_j for boxes (v relative to
// the obstacle center). Routing lifts points onto a fixed super-unit level
// set and interpolates directions there.
struct ObstacleGauge {
    const Obstacle& ob;
    const Instance& inst;
    Point center;
    std::vector<double> half;   // box half-widths
    double surface_level = 1.0; // routing level set (> 1)

    ObstacleGauge(const Obstacle& o, const Instance& i, double delta) : ob(o), inst(i) {
        if (ob.shape == Obstacle::Shape::ball) {
            center = ob.center;
            surface_level = (ob.radius + 0.5 * delta) / ob.radius;
        } else {
            center.coords.resize(inst.dim);
            half.resize(inst.dim);
            for (std::size_t j = 0; j < inst.dim; ++j) {
                center[j] = 0.5 * (ob.lo[j] + ob.hi[j]);
                half[j] = 0.5 * (ob.hi[j] - ob.lo[j]);
            }
            // Offset each face so the aggregate displacement of any surface
            // point from the box stays within delta/2 in norm units.
            const double d = (double)inst.dim;
            double level = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < inst.dim; ++j) {
                const double m = 0.5 * delta / (d * inst.norm.axis_scale(j));
                level = std::min(level, (half[j] + m) / half[j]);
            }
            surface_level = level;
        }
    }

    double eval(const std::vector<double>& v) const {
        if (ob.shape == Obstacle::Shape::ball) return norm_eval(v, inst.norm) / ob.radius;
        double m = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) m = std::max(m, std::abs(v[j]) / half[j]);
        return m;
    }

    std::vector<double> direction_of(const Point& p) const {
        std::vector<double> v(inst.dim);
        for (std::size_t j = 0; j < inst.dim; ++j) v[j] = p[j] - center[j];
        const double g = eval(v);
        if (!(g > 0.0)) throw CollarError("collar route endpoint coincides with obstacle center");
        for (auto& c : v) c /= g;  // gauge-normalized: eval(v) == 1
        return v;
    }

    Point at_surface(const std::vector<double>& unit_dir) const {
        Point p = center;
        for (std::size_t j = 0; j < inst.dim; ++j) p[j] += surface_level * unit_dir[j];
        return p;
    }
};

inline std::vector<double> interpolate_dir(const std::vector<double>& u,
                                           const std::vector<double>& w, double t) {
    std::vector<double> v(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) v[j] = (1.0 - t) * u[j] + t * w[j];
    return v;
}

// Containment check of a candidate collar polyline: every dense sample stays
// within delta of the obstacle boundary, inside the region, and clear of all
// obstacle closures; every chord additionally passes the exact
// interior_overlap test (a chord can clip a polyhedral corner over a span
// narrower than the sampling step). The first and last spans may touch the
// boundary band (route endpoints sit on or next to the boundary); interior
// spans must keep a strict class_eps sample clearance.
inline bool collar_samples_ok(const Polyline& route, const Obstacle& target, double delta,
                              const Instance& inst) {
    const double step = std::max(delta / 20.0, 1e-12);
    if (route.size() < 2) return true;
    const std::size_t last_edge = route.edge_count() - 1;
    for (std::size_t e = 0; e < route.edge_count(); ++e) {
        const bool endpoint_span = (e == 0 || e == last_edge);
        const Segment seg = route.edge(e);
        const double len = norm_dist(seg.a, seg.b, inst.norm);
        const std::size_t pieces = std::max<std::size_t>(1, (std::size_t)std::ceil(len / step));
        for (std::size_t k = 0; k <= pieces; ++k) {
            const Point p = segment_point(seg, (double)k / (double)pieces);
            if (boundary_distance(p, target, inst) >= delta) return false;
            if (region_margin(p, inst) > 0.0) return false;
            for (const auto& other : inst.obstacles) {
                const double m = obstacle_margin(p, other, inst);
                const double bound = endpoint_span ? -inst.tol.class_eps : inst.tol.class_eps;
                if (m < bound) return false;
            }
        }
        for (const auto& other : inst.obstacles) {
            try {
                if (interior_overlap(seg, other, inst)) return false;
            } catch (const UMViolation&) {
                return false;
            }
        }
    }
    return true;
}

} // namespace detail

// A polygonal route between two collar points that stays inside the collar
// band of the obstacle: both endpoints are reproduced bitwise, every vertex
// and densely sampled chord point is outside all obstacle closures, within
// delta of the target boundary and inside the region. Construction: lift the
// endpoints onto a scaled copy of the obstacle surface, interpolate the
// gauge directions (with a deterministic axis waypoint when they are nearly
// opposite), and descend. The vertex count doubles until the dense check
// passes.
inline Polyline collar_route(const Point& p, const Point& q, const Collar& col,
                             const Instance& inst) {
    if (p == q) return Polyline{{p}};
    const Obstacle* ob = inst.find_obstacle(col.obstacle_id);
    if (!ob) throw ParameterError("unknown obstacle id " + std::to_string(col.obstacle_id));

    const detail::ObstacleGauge gauge(*ob, inst, col.delta);
    const std::vector<double> up = gauge.direction_of(p);
    const std::vector<double> uq = gauge.direction_of(q);

    // Waypoint directions. When the midpoint of the direction chord falls
    // near the center, interpolation degenerates; insert the coordinate axis
    // least aligned with the start direction (lowest index on ties).
    std::vector<std::vector<double>> anchors{up};
    const double mid_gauge = gauge.eval(detail::interpolate_dir(up, uq, 0.5));
    if (mid_gauge < 0.05) {
        std::size_t best = 0;
        double best_dot = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < inst.dim; ++j) {
            const double dj = std::abs(up[j]);
            if (dj < best_dot) {
                best_dot = dj;
                best = j;
            }
        }
        std::vector<double> axis(inst.dim, 0.0);
        axis[best] = 1.0;
        const double g = gauge.eval(axis);
        for (auto& c : axis) c /= g;
        anchors.push_back(axis);
    }
    anchors.push_back(uq);

    for (std::size_t k = 8; k <= (1u << 14); k *= 2) {
        Polyline route;
        route.vertices.push_back(p);
        for (std::size_t leg = 0; leg + 1 < anchors.size(); ++leg) {
            for (std::size_t s = 0; s <= k; ++s) {
                if (leg > 0 && s == 0) continue;  // shared anchor vertex
                auto dir = detail::interpolate_dir(anchors[leg], anchors[leg + 1],
                                                   (double)s / (double)k);
                const double g = gauge.eval(dir);
                if (!(g > 0.0)) throw CollarError("direction interpolation collapsed to zero");
                for (auto& c : dir) c /= g;
                route.vertices.push_back(gauge.at_surface(dir));
            }
        }
        route.vertices.push_back(q);
        route = normalize(route);
        if (detail::collar_samples_ok(route, *ob, col.delta, inst)) return route;
    }
    throw CollarError("collar route did not converge within the vertex cap; "
                      "tolerances are pathological for obstacle " +
                      std::to_string(col.obstacle_id));
}

} // namespace polyroute
