#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "obstacles.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Sampling-based route verification
// ---------------------------------------------------------------------------

struct VerifyViolation {
    Point where;
    int obstacle_id = -1;  // -1 flags a region violation
    double margin = 0.0;
};

struct VerifyReport {
    bool pass = true;
    std::vector<VerifyViolation> violations;
    std::size_t samples_checked = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

// Samples the polyline at gaps <= step and checks every sample against every
// obstacle (no Interior classification) and against the closed region. Each
// straight span is additionally checked exactly via interior_overlap, so an
// excursion narrower than the step cannot slip through.
inline VerifyReport verify_route(const Polyline& r, const Instance& inst, double step) {
    if (!(step > 0.0)) throw ParameterError("verification step must be positive");
    VerifyReport rep;
    const auto samples = polyline_sample(r, step, inst.norm);
    rep.samples_checked = samples.size();
    for (const auto& p : samples) {
        for (const auto& ob : inst.obstacles) {
            const double m = obstacle_margin(p, ob, inst);
            rep.min_margin = std::min(rep.min_margin, m);
            if (classify_margin(m, inst.tol) == Region::Interior) {
                rep.pass = false;
                rep.violations.push_back(VerifyViolation{p, ob.id, m});
            }
        }
        if (region_margin(p, inst) > 0.0) {
            rep.pass = false;
            rep.violations.push_back(VerifyViolation{p, -1, region_margin(p, inst)});
        }
    }
    for (std::size_t e = 0; e + 1 < r.vertices.size(); ++e) {
        const Segment seg{r.vertices[e], r.vertices[e + 1]};
        if (seg.a == seg.b) continue;
        for (const auto& ob : inst.obstacles) {
            try {
                if (interior_overlap(seg, ob, inst)) {
                    rep.pass = false;
                    const Point mid = segment_point(seg, 0.5);
                    rep.violations.push_back(
                        VerifyViolation{mid, ob.id, obstacle_margin(mid, ob, inst)});
                }
            } catch (const UMViolation&) {
                rep.pass = false;
                rep.violations.push_back(VerifyViolation{seg.a, ob.id, 0.0});
            }
        }
    }
    if (inst.obstacles.empty()) rep.min_margin = std::numeric_limits<double>::infinity();
    return rep;
}

// ---------------------------------------------------------------------------
// Independent 2D reference router
// ---------------------------------------------------------------------------

namespace detail {

inline double seg_point_dist2(double ax, double ay, double bx, double by, double px, double py) {
    const double ux = bx - ax, uy = by - ay;
    const double len2 = ux * ux + uy * uy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((px - ax) * ux + (py - ay) * uy) / len2, 0.0, 1.0);
    const double dx = ax + t * ux - px, dy = ay + t * uy - py;
    return dx * dx + dy * dy;
}

} // namespace detail

// From-scratch path-existence oracle for 2D Euclidean disc instances: a
// visibility graph whose nodes are the query endpoints plus 128 points per
// disc on a slightly inflated ring (inflation covers both the clearance and
// the chord sag of the discretization). Returns a safe polyline iff the
// discretized graph connects the endpoints. Only existence is meaningful;
// the paths themselves differ from the constructive router's.
inline std::optional<Polyline> reference_route_2d(const Point& x, const Point& y,
                                                  const Instance& inst) {
    if (inst.dim != 2)
        throw UnsupportedInstance("reference router requires dimension 2");
    if (!(inst.norm.kind == NormSpec::Kind::lp && inst.norm.p == 2.0))
        throw UnsupportedInstance("reference router requires the Euclidean norm");
    for (const auto& ob : inst.obstacles)
        if (ob.shape != Obstacle::Shape::ball)
            throw UnsupportedInstance("reference router requires disc obstacles");

    if (!in_region(x, inst) || !in_region(y, inst)) return std::nullopt;
    for (const auto& ob : inst.obstacles) {
        if (obstacle_margin(x, ob, inst) <= 0.0) return std::nullopt;
        if (obstacle_margin(y, ob, inst) <= 0.0) return std::nullopt;
    }
    if (x == y) return Polyline{{x}};

    constexpr int kRing = 128;  // angular resolution pi/64
    const double half_step_cos = std::cos(std::acos(-1.0) / kRing);

    std::vector<Point> nodes{x, y};
    for (const auto& ob : inst.obstacles) {
        const double ring_r = (ob.radius + inst.tol.class_eps) / half_step_cos;
        for (int k = 0; k < kRing; ++k) {
            const double a = 2.0 * std::acos(-1.0) * k / kRing;
            Point p{ob.center[0] + ring_r * std::cos(a), ob.center[1] + ring_r * std::sin(a)};
            bool ok = in_region(p, inst);
            for (const auto& other : inst.obstacles) {
                if (other.id == ob.id) continue;
                if (obstacle_margin(p, other, inst) <= inst.tol.class_eps) ok = false;
            }
            if (ok) nodes.push_back(std::move(p));
        }
    }

    auto segment_safe = [&](const Point& a, const Point& b) {
        for (const auto& ob : inst.obstacles) {
            const double d2 = detail::seg_point_dist2(a[0], a[1], b[0], b[1], ob.center[0],
                                                      ob.center[1]);
            if (d2 < ob.radius * ob.radius) return false;
        }
        return true;
    };

    // Dijkstra over the implicit complete graph restricted to safe segments.
    const std::size_t n = nodes.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(n, n);
    using QE = std::pair<double, std::size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    dist[0] = 0.0;
    pq.push({0.0, 0});
    std::vector<bool> done(n, false);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = true;
        if (u == 1) break;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v] || v == u) continue;
            const double dx = nodes[u][0] - nodes[v][0];
            const double dy = nodes[u][1] - nodes[v][1];
            const double w = std::sqrt(dx * dx + dy * dy);
            if (dist[u] + w >= dist[v]) continue;
            if (!segment_safe(nodes[u], nodes[v])) continue;
            dist[v] = dist[u] + w;
            prev[v] = u;
            pq.push({dist[v], v});
        }
    }
    if (!std::isfinite(dist[1])) return std::nullopt;

    std::vector<Point> chain;
    for (std::size_t v = 1; v != n && v != 0; v = prev[v]) chain.push_back(nodes[v]);
    chain.push_back(nodes[0]);
    std::reverse(chain.begin(), chain.end());
    return Polyline{std::move(chain)};
}

} // namespace polyroute
