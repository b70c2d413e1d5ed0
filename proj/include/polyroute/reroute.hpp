#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collar.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Route pieces and results
// ---------------------------------------------------------------------------

// How one input edge was consumed:
//   Untouched       copied verbatim;
//   Bridge*         scheduled and bridged, endpoint membership in the
//                   obstacle union as named (start/end);
//   Gamma1          only the tail past a continuation exit point survived
//                   as a straight segment;
//   Gamma2          swallowed by a continuation collar ride (or re-bridged
//                   from the exit point onward).
enum class CaseTag {
    Untouched,
    BridgeBothOut,
    BridgeInOut,
    BridgeOutIn,
    BridgeBothIn,
    Gamma1,
    Gamma2,
};

inline const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::Untouched: return "untouched";
        case CaseTag::BridgeBothOut: return "bridge_both_out";
        case CaseTag::BridgeInOut: return "bridge_in_out";
        case CaseTag::BridgeOutIn: return "bridge_out_in";
        case CaseTag::BridgeBothIn: return "bridge_both_in";
        case CaseTag::Gamma1: return "gamma1";
        case CaseTag::Gamma2: return "gamma2";
    }
    return "?";
}

struct RoutePiece {
    enum class Kind { original_edge, bridge_segment, collar_arc };

    Kind kind = Kind::original_edge;
    std::size_t edge_index = 0;  // owning edge (vertex-chain convention), 0 if none
    std::size_t event = 0;       // event rank v for collar arcs / bridge pieces
    int obstacle_id = -1;        // collar arcs only
    Polyline points;
};

inline const char* to_string(RoutePiece::Kind k) {
    switch (k) {
        case RoutePiece::Kind::original_edge: return "original_edge";
        case RoutePiece::Kind::bridge_segment: return "bridge_segment";
        case RoutePiece::Kind::collar_arc: return "collar_arc";
    }
    return "?";
}

struct RouteStats {
    std::size_t original_edges = 0;
    std::size_t bridge_segments = 0;
    std::size_t collar_arcs = 0;
    double total_length = 0.0;
};

struct RouteResult {
    Polyline path;
    std::vector<RoutePiece> pieces;
    std::map<std::size_t, CaseTag> edge_cases;  // edge index -> consumption tag
    RouteStats stats;
    bool untouched = false;  // input never met an obstacle interior
};

// ---------------------------------------------------------------------------
// Junction placement
// ---------------------------------------------------------------------------

namespace detail {

// Junction clearance target: route junctions sit strictly outside every
// closure by about this margin so sampled verification sees positive
// clearance everywhere.
inline double junction_margin(const Instance& inst) { return 10.0 * inst.tol.class_eps; }

inline double min_obstacle_margin(const Point& p, const Instance& inst) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& ob : inst.obstacles) m = std::min(m, obstacle_margin(p, ob, inst));
    return m;
}

// A point of the segment strictly between t_root and t_limit where every
// obstacle margin is positive (preferably >= the junction margin). The open
// interval is known exterior; the doubling walk just finds a comfortable
// parameter inside it.
inline std::pair<double, Point> exterior_junction(const Segment& seg, double t_root,
                                                  double t_limit, const Instance& inst) {
    const double theta = junction_margin(inst);
    const double span = std::abs(t_limit - t_root);
    const double dir = t_limit > t_root ? 1.0 : -1.0;
    double best_margin = -std::numeric_limits<double>::infinity();
    double best_t = t_root;
    for (double step = 10.0 * inst.tol.t_eps; step < 0.5 * span; step *= 2.0) {
        const double t = t_root + dir * step;
        const Point p = segment_point(seg, t);
        const double m = min_obstacle_margin(p, inst);
        if (m >= theta) return {t, p};
        if (m > best_margin) {
            best_margin = m;
            best_t = t;
        }
    }
    const double t = t_root + dir * 0.5 * span;
    const double m = min_obstacle_margin(segment_point(seg, t), inst);
    if (m > best_margin) {
        best_margin = m;
        best_t = t;
    }
    if (best_margin > 0.0) return {best_t, segment_point(seg, best_t)};
    throw EngineError("no exterior junction between t=" + std::to_string(t_root) + " and t=" +
                      std::to_string(t_limit) + "; instance is numerically degenerate");
}

// Moves a boundary point outward along the obstacle's gauge ray until its
// margin reaches the junction target.
inline Point push_off_boundary(const Point& p, const Obstacle& ob, const Instance& inst) {
    const double theta = junction_margin(inst);
    Point center;
    if (ob.shape == Obstacle::Shape::ball) {
        center = ob.center;
    } else {
        center.coords.resize(inst.dim);
        for (std::size_t j = 0; j < inst.dim; ++j) center[j] = 0.5 * (ob.lo[j] + ob.hi[j]);
    }
    for (double s = 1e-12; s <= 1.0; s *= 2.0) {
        Point q = center + ((1.0 + s) * (p - center));
        if (obstacle_margin(q, ob, inst) >= theta) return q;
    }
    throw EngineError("could not push boundary point clear of obstacle " + std::to_string(ob.id));
}

inline bool interior_on_right(const Segment& seg, const Obstacle& ob, const Instance& inst,
                              const std::vector<double>& roots, double t) {
    return enters_interior_after(seg, ob, inst, roots, t);
}

inline bool interior_on_left(const Segment& seg, const Obstacle& ob, const Instance& inst,
                             const std::vector<double>& roots, double t) {
    double prev = 0.0;
    for (double c : roots) {
        if (c < t - inst.tol.t_eps) prev = c;
        else break;
    }
    if (t - prev <= inst.tol.t_eps) return false;
    const double mid = 0.5 * (prev + t);
    return classify_point(segment_point(seg, mid), ob, inst) == Region::Interior;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Bridge materialization
// ---------------------------------------------------------------------------

// Outcome of bridging one working segment. When the landing vertex lies
// inside an obstacle the bridge stops at a point just off that obstacle's
// boundary (`handoff`), from which the continuation collar ride departs.
struct BridgeSpans {
    std::vector<RoutePiece> pieces;
    CaseTag tag = CaseTag::BridgeBothOut;
    std::optional<Point> handoff;  // set when the segment lands inside an obstacle
    int landing_obstacle = -1;
};

// Emits the bridge replacing one scheduled segment: optional lead-in, one
// collar arc per event with the proven-free gap segments between, and either
// a lead-out to the segment end (landing outside) or a handoff point on the
// landing obstacle's collar (landing inside).
inline BridgeSpans build_bridge(const EdgeSchedule& sched, const Instance& inst,
                                std::size_t edge_index = 0) {
    BridgeSpans out;
    out.tag = sched.start_inside
                  ? (sched.end_inside ? CaseTag::BridgeBothIn : CaseTag::BridgeInOut)
                  : (sched.end_inside ? CaseTag::BridgeOutIn : CaseTag::BridgeBothOut);

    const Segment& seg = sched.segment;
    const auto& events = sched.events;
    const std::size_t v0 = events.size();
    if (v0 == 0) throw EngineError("cannot bridge an empty schedule");

    auto emit_straight = [&](const Point& a, const Point& b, std::size_t event) {
        if (a == b) return;
        Segment s{a, b};
        for (const auto& ob : inst.obstacles)
            if (interior_overlap(s, ob, inst))
                throw EngineError("bridge straight span overlaps obstacle " +
                                  std::to_string(ob.id));
        RoutePiece piece;
        piece.kind = RoutePiece::Kind::bridge_segment;
        piece.edge_index = edge_index;
        piece.event = event;
        piece.points = Polyline{{a, b}};
        out.pieces.push_back(std::move(piece));
    };
    auto emit_arc = [&](const Point& a, const Point& b, int obstacle_id, std::size_t event) {
        Polyline arc;
        if (norm_dist(a, b, inst.norm) <= 100.0 * detail::junction_margin(inst)) {
            // Zero-span event (single tangential crossing): the junctions sit
            // a tolerance apart and the degenerate arc is their connector.
            for (const auto& ob : inst.obstacles)
                if (interior_overlap(Segment{a, b}, ob, inst))
                    throw EngineError("degenerate arc connector overlaps obstacle " +
                                      std::to_string(ob.id));
            arc = Polyline{{a, b}};
        } else {
            arc = collar_route(a, b, collar_width(obstacle_id, inst), inst);
        }
        if (arc.size() < 2) return;  // degenerate p == q
        RoutePiece piece;
        piece.kind = RoutePiece::Kind::collar_arc;
        piece.edge_index = edge_index;
        piece.event = event;
        piece.obstacle_id = obstacle_id;
        piece.points = std::move(arc);
        out.pieces.push_back(std::move(piece));
    };

    // Entry junction of each event (exterior side before the entry crossing,
    // degenerating to the exact segment endpoint at the ends).
    std::vector<Point> jin(v0), jout(v0);
    std::vector<double> jin_t(v0, 0.0), jout_t(v0, 1.0);
    double prev_t = 0.0;
    Point prev_pt = seg.a;
    for (std::size_t v = 0; v < v0; ++v) {
        const auto& ev = events[v];
        // Entry junction.
        if (v == 0 && sched.start_inside) {
            const Obstacle* ob = inst.find_obstacle(ev.obstacle_id);
            jin[v] = detail::push_off_boundary(ev.z_enter, *ob, inst);
            jin_t[v] = ev.t_enter;
        } else if (ev.t_enter - prev_t <= 10.0 * inst.tol.t_eps) {
            jin[v] = prev_pt;
            jin_t[v] = prev_t;
        } else {
            auto [t, p] = detail::exterior_junction(seg, ev.t_enter, prev_t, inst);
            jin[v] = p;
            jin_t[v] = t;
        }
        // Exit junction.
        const bool landing_inside_here = (v + 1 == v0) && sched.end_inside;
        const double next_limit = (v + 1 < v0) ? events[v + 1].t_enter : 1.0;
        if (landing_inside_here) {
            const Obstacle* ob = inst.find_obstacle(ev.obstacle_id);
            jout[v] = detail::push_off_boundary(ev.z_exit, *ob, inst);
            jout_t[v] = ev.t_exit;
        } else if (v + 1 == v0 && 1.0 - ev.t_exit <= 10.0 * inst.tol.t_eps) {
            // Exit hugs the segment end (a vertex sitting on the boundary):
            // the arc targets the vertex exactly and no lead-out is emitted.
            jout[v] = seg.b;
            jout_t[v] = 1.0;
        } else {
            auto [t, p] = detail::exterior_junction(seg, ev.t_exit, next_limit, inst);
            jout[v] = p;
            jout_t[v] = t;
        }
        prev_t = jout_t[v];
        prev_pt = jout[v];
    }

    // Lead-in.
    if (!sched.start_inside && !(jin[0] == seg.a)) emit_straight(seg.a, jin[0], 1);
    for (std::size_t v = 0; v < v0; ++v) {
        emit_arc(jin[v], jout[v], events[v].obstacle_id, v + 1);
        if (v + 1 < v0 && !(jout[v] == jin[v + 1])) emit_straight(jout[v], jin[v + 1], v + 2);
    }
    if (sched.end_inside) {
        out.handoff = jout[v0 - 1];
        out.landing_obstacle = sched.end_obstacle;
        if (events.back().obstacle_id != sched.end_obstacle)
            throw EngineError("landing obstacle does not close the schedule");
    } else if (!(jout[v0 - 1] == seg.b)) {
        emit_straight(jout[v0 - 1], seg.b, v0 + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Continuation past a landing obstacle
// ---------------------------------------------------------------------------

// Where a continuation collar ride rejoins the polyline: the exterior side
// of the first boundary crossing on the last edge that still meets the
// landing obstacle's boundary.
struct ContinuationExit {
    std::size_t edge = 0;  // 0-based edge whose tail the route resumes on
    Point rejoin;          // exterior junction next to the exit crossing
};

inline ContinuationExit find_continuation_exit(const Polyline& p, std::size_t from_edge,
                                               const Obstacle& landing, const Instance& inst) {
    std::optional<std::size_t> target;
    for (std::size_t e = from_edge + 1; e < p.edge_count(); ++e)
        if (!boundary_crossings(p.edge(e), landing, inst).empty()) target = e;
    if (!target)
        throw EngineError("no later edge meets the boundary of obstacle " +
                          std::to_string(landing.id) +
                          "; the polyline cannot leave it (is the final vertex inside?)");

    const Segment seg = p.edge(*target);
    const auto roots = boundary_crossings(seg, landing, inst);
    const double t_star = roots.front();

    // Resume on whichever side of the exit crossing is exterior to the
    // landing obstacle.
    const bool right_in = detail::interior_on_right(seg, landing, inst, roots, t_star);
    const bool left_in = detail::interior_on_left(seg, landing, inst, roots, t_star);
    if (right_in && left_in)
        throw EngineError("exit crossing has interior on both sides; obstacle is not convex?");

    double t_limit;
    if (right_in) {
        t_limit = 0.0;
        for (double c : roots)
            if (c < t_star - inst.tol.t_eps) t_limit = c;
    } else {
        t_limit = 1.0;
        for (double c : roots) {
            if (c > t_star + inst.tol.t_eps) {
                t_limit = c;
                break;
            }
        }
    }
    auto [t, pt] = detail::exterior_junction(seg, t_star, t_limit, inst);
    (void)t;
    return ContinuationExit{*target, pt};
}

// A bridge that lands inside an obstacle continues with a collar ride from
// the handoff point around that obstacle to the rejoin junction on the last
// later edge meeting its boundary. The walk resumes on that edge's tail.
struct ContinuationSpans {
    std::vector<RoutePiece> pieces;
    std::size_t resume_edge = 0;  // 0-based
    Point rejoin;
};

inline ContinuationSpans build_continuation(const Point& handoff, int landing_obstacle,
                                            const Polyline& p, std::size_t from_edge,
                                            const Instance& inst) {
    const Obstacle* landing = inst.find_obstacle(landing_obstacle);
    if (!landing) throw ParameterError("unknown obstacle id " + std::to_string(landing_obstacle));
    const ContinuationExit exit = find_continuation_exit(p, from_edge, *landing, inst);
    const Collar col = collar_width(landing->id, inst);

    ContinuationSpans out;
    out.resume_edge = exit.edge;
    out.rejoin = exit.rejoin;
    Polyline arc = collar_route(handoff, exit.rejoin, col, inst);
    if (arc.size() >= 2) {
        RoutePiece piece;
        piece.kind = RoutePiece::Kind::collar_arc;
        piece.edge_index = edge_to_chain_index(exit.edge);
        piece.event = 0;
        piece.obstacle_id = landing->id;
        piece.points = std::move(arc);
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Full assembly
// ---------------------------------------------------------------------------

namespace detail {

inline void append_piece(RouteResult& res, RoutePiece piece, const Instance& inst) {
    if (piece.points.size() < 2) return;
    if (!res.path.vertices.empty()) {
        if (!(res.path.vertices.back() == piece.points.front()))
            throw EngineError("assembled pieces do not share their junction vertex");
        res.path.vertices.insert(res.path.vertices.end(), piece.points.vertices.begin() + 1,
                                 piece.points.vertices.end());
    } else {
        res.path.vertices = piece.points.vertices;
    }
    switch (piece.kind) {
        case RoutePiece::Kind::original_edge: res.stats.original_edges++; break;
        case RoutePiece::Kind::bridge_segment: res.stats.bridge_segments++; break;
        case RoutePiece::Kind::collar_arc: res.stats.collar_arcs++; break;
    }
    res.stats.total_length += polyline_length(piece.points, inst.norm);
    res.pieces.push_back(std::move(piece));
}

} // namespace detail

// Replaces the polyline with one from the same endpoints that avoids every
// obstacle: untouched edges are copied, edges meeting an obstacle interior
// are bridged with collar arcs, and landings inside an obstacle continue
// around its collar to the last boundary exit further along the polyline.
inline RouteResult assemble_route(const Point& x, const Point& y, const Polyline& input,
                                  const Instance& inst) {
    if (input.vertices.empty()) throw InputError("empty polyline");
    if (!(input.front() == x) || !(input.back() == y))
        throw InputError("x and y must be the polyline endpoints");

    const ValidationReport val = validate_family(inst);
    if (!val.pass) throw ValidationError(val.summary());

    const Polyline p = normalize(input);
    for (const auto& v : p.vertices) {
        if (!all_finite(v) || v.dim() != inst.dim)
            throw InputError("polyline vertex has wrong dimension or non-finite coordinates");
        if (region_margin(v, inst) > -inst.tol.class_eps)
            throw InputError("polyline vertex lies outside (or on the boundary of) the region");
    }
    for (const Point* endpoint : {&x, &y})
        for (const auto& ob : inst.obstacles)
            if (classify_point(*endpoint, ob, inst) != Region::Exterior)
                throw InputError(
                    "route endpoints must lie strictly outside every obstacle closure "
                    "(x, y in the region minus the union of obstacles)");

    const UMReport um = check_um(p, inst);
    if (!um.pass)
        throw UMViolation("input violates the finite-crossing property: " +
                          um.violations.front().detail);

    RouteResult res;
    if (p.size() == 1) {
        res.path = p;
        res.untouched = true;
        return res;
    }

    // First case of the construction: input disjoint from every obstacle.
    bool any_overlap = false;
    for (std::size_t e = 0; e < p.edge_count() && !any_overlap; ++e)
        for (const auto& ob : inst.obstacles)
            if (interior_overlap(p.edge(e), ob, inst)) {
                any_overlap = true;
                break;
            }
    if (!any_overlap) {
        for (std::size_t e = 0; e < p.edge_count(); ++e) {
            RoutePiece piece;
            piece.kind = RoutePiece::Kind::original_edge;
            piece.edge_index = edge_to_chain_index(e);
            piece.points = Polyline{{p.vertices[e], p.vertices[e + 1]}};
            detail::append_piece(res, std::move(piece), inst);
            res.edge_cases[edge_to_chain_index(e)] = CaseTag::Untouched;
        }
        res.untouched = true;
        return res;
    }

    // Ordered edge walk with an explicit resume point.
    Point cursor = p.vertices.front();
    std::size_t e = 0;
    while (e < p.edge_count()) {
        const std::size_t j = edge_to_chain_index(e);
        const bool truncated = !(cursor == p.vertices[e]);
        const Segment work{cursor, p.vertices[e + 1]};

        bool overlap = false;
        for (const auto& ob : inst.obstacles)
            if (interior_overlap(work, ob, inst)) {
                overlap = true;
                break;
            }

        if (!overlap) {
            RoutePiece piece;
            piece.kind = truncated ? RoutePiece::Kind::bridge_segment
                                   : RoutePiece::Kind::original_edge;
            piece.edge_index = j;
            piece.points = Polyline{{work.a, work.b}};
            detail::append_piece(res, std::move(piece), inst);
            if (!truncated)
                res.edge_cases[j] = CaseTag::Untouched;
            else
                res.edge_cases[j] = CaseTag::Gamma1;
            cursor = p.vertices[e + 1];
            ++e;
            continue;
        }

        const EdgeSchedule sched = compute_edge_schedule(work, inst, j);
        if (sched.start_inside)
            throw EngineError("walk reached a working segment starting inside an obstacle");
        BridgeSpans bridge = build_bridge(sched, inst, j);
        for (auto& piece : bridge.pieces) detail::append_piece(res, std::move(piece), inst);
        if (!truncated || res.edge_cases.find(j) == res.edge_cases.end())
            res.edge_cases[j] = truncated ? CaseTag::Gamma2 : bridge.tag;

        if (!bridge.handoff) {
            cursor = p.vertices[e + 1];
            ++e;
            continue;
        }

        // Landing vertex sits inside an obstacle: ride its collar to the
        // last boundary exit further along the polyline.
        ContinuationSpans cont =
            build_continuation(*bridge.handoff, bridge.landing_obstacle, p, e, inst);
        for (auto& piece : cont.pieces) detail::append_piece(res, std::move(piece), inst);
        for (std::size_t mid = e + 1; mid <= cont.resume_edge; ++mid)
            res.edge_cases[edge_to_chain_index(mid)] = CaseTag::Gamma2;
        cursor = cont.rejoin;
        e = cont.resume_edge;
    }

    if (!(res.path.vertices.front() == x) || !(res.path.vertices.back() == y))
        throw EngineError("assembled path does not preserve the query endpoints");
    return res;
}

} // namespace polyroute
