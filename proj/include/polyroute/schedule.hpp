#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obstacles.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Edge index set J
// ---------------------------------------------------------------------------

// Edges that both cross some obstacle boundary and meet its interior.
// Edge indices use the vertex-chain convention: edge j joins vertices j-1
// and j, with vertices numbered from 1, so the first edge is j = 2.
struct EdgeIndexSetJ {
    std::vector<std::size_t> members;  // sorted ascending; the k_m enumeration
    std::size_t j0 = 0;                // max member, 0 when empty

    bool contains(std::size_t j) const {
        return std::binary_search(members.begin(), members.end(), j);
    }
};

inline std::size_t edge_to_chain_index(std::size_t e) { return e + 2; }
inline std::size_t chain_index_to_edge(std::size_t j) { return j - 2; }

inline EdgeIndexSetJ compute_J(const Polyline& p, const Instance& inst) {
    EdgeIndexSetJ J;
    for (std::size_t e = 0; e < p.edge_count(); ++e) {
        const Segment seg = p.edge(e);
        for (const auto& ob : inst.obstacles) {
            if (boundary_crossings(seg, ob, inst).empty()) continue;
            if (!interior_overlap(seg, ob, inst)) continue;
            J.members.push_back(edge_to_chain_index(e));
            break;
        }
    }
    if (!J.members.empty()) J.j0 = J.members.back();
    return J;
}

// ---------------------------------------------------------------------------
// Per-edge entry/exit schedule
// ---------------------------------------------------------------------------

// One entry/exit event: the segment first meets the obstacle boundary at
// t_enter and leaves it for good at t_exit (= max of its crossing list).
struct EdgeEvent {
    int obstacle_id = 0;
    double t_enter = 0.0;
    double t_exit = 0.0;
    Point z_enter;
    Point z_exit;
};

struct EdgeSchedule {
    Segment segment;
    std::size_t edge_index = 0;        // vertex-chain index when part of a polyline, else 0
    std::vector<int> active_ids;       // Q: obstacles with boundary + interior intersection
    std::map<int, std::vector<double>> crossings;  // L per active obstacle
    std::vector<EdgeEvent> events;     // v = 1..v0, enter times strictly increasing
    bool start_inside = false;         // segment start lies in some obstacle
    bool end_inside = false;           // segment end lies in some obstacle
    int start_obstacle = -1;
    int end_obstacle = -1;

    std::size_t v0() const { return events.size(); }
};

namespace detail {

// The right-neighbour subinterval of t in the obstacle's crossing partition
// has constant margin sign; its midpoint decides whether the segment enters
// the obstacle interior immediately after t.
inline bool enters_interior_after(const Segment& seg, const Obstacle& ob, const Instance& inst,
                                  const std::vector<double>& crossings, double t) {
    double next = 1.0;
    for (double c : crossings) {
        if (c > t + inst.tol.t_eps) {
            next = c;
            break;
        }
    }
    if (next - t <= inst.tol.t_eps) return false;
    const double mid = 0.5 * (t + next);
    return classify_point(segment_point(seg, mid), ob, inst) == Region::Interior;
}

} // namespace detail

// Computes the entry/exit sequence of the segment: the first event is the
// obstacle with the smallest first crossing; each subsequent event is the
// smallest later crossing (beyond the previous exit) of a not-yet-visited
// obstacle that immediately enters that obstacle's interior. Terminates when
// no such crossing remains.
inline EdgeSchedule compute_edge_schedule(const Segment& seg, const Instance& inst,
                                          std::size_t edge_index = 0) {
    EdgeSchedule sched;
    sched.segment = seg;
    sched.edge_index = edge_index;

    for (const auto& ob : inst.obstacles) {
        const auto roots = boundary_crossings(seg, ob, inst);
        if (roots.empty()) continue;
        if (!interior_overlap(seg, ob, inst)) continue;
        sched.active_ids.push_back(ob.id);
        sched.crossings[ob.id] = roots;
    }
    if (sched.active_ids.empty())
        throw ScheduleError("segment does not qualify for scheduling: no obstacle has both "
                            "boundary and interior intersection");

    for (const auto& ob : inst.obstacles) {
        if (classify_point(seg.a, ob, inst) == Region::Interior) {
            sched.start_inside = true;
            sched.start_obstacle = ob.id;
        }
        if (classify_point(seg.b, ob, inst) == Region::Interior) {
            sched.end_inside = true;
            sched.end_obstacle = ob.id;
        }
    }

    // Seed event: obstacle attaining the least first crossing.
    int first_id = sched.active_ids.front();
    for (int id : sched.active_ids)
        if (sched.crossings[id].front() < sched.crossings[first_id].front()) first_id = id;

    std::vector<int> visited{first_id};
    EdgeEvent ev;
    ev.obstacle_id = first_id;
    ev.t_enter = sched.crossings[first_id].front();
    ev.t_exit = sched.crossings[first_id].back();
    sched.events.push_back(ev);

    for (;;) {
        const double after = sched.events.back().t_exit;
        double best_t = 2.0;
        int best_id = -1;
        for (int id : sched.active_ids) {
            if (std::find(visited.begin(), visited.end(), id) != visited.end()) continue;
            const Obstacle* ob = inst.find_obstacle(id);
            for (double t : sched.crossings[id]) {
                if (t <= after + inst.tol.t_eps) continue;
                if (!detail::enters_interior_after(seg, *ob, inst, sched.crossings[id], t)) continue;
                if (t < best_t) {
                    best_t = t;
                    best_id = id;
                }
                break;  // crossings are sorted; the first qualifying t is minimal for this id
            }
        }
        if (best_id < 0) break;
        visited.push_back(best_id);
        EdgeEvent next;
        next.obstacle_id = best_id;
        next.t_enter = best_t;
        next.t_exit = sched.crossings[best_id].back();
        sched.events.push_back(next);
        if (sched.events.size() > sched.active_ids.size())
            throw ScheduleError("event count exceeded active obstacle count");
    }

    for (auto& e : sched.events) {
        e.z_enter = segment_point(seg, e.t_enter);
        e.z_exit = segment_point(seg, e.t_exit);
    }

    // Invariants: strictly increasing enter times, exits not before enters,
    // exits before the next enter, distinct obstacles.
    for (std::size_t v = 0; v < sched.events.size(); ++v) {
        const auto& e = sched.events[v];
        if (e.t_exit + 1e-15 < e.t_enter)
            throw ScheduleError("event exit precedes its entry");
        if (v + 1 < sched.events.size()) {
            const auto& f = sched.events[v + 1];
            if (!(f.t_enter > e.t_enter) || !(f.t_enter > e.t_exit))
                throw ScheduleError("event times do not increase strictly");
        }
    }

    // When the segment starts inside an obstacle, that obstacle opens the
    // schedule.
    if (sched.start_inside && sched.events.front().obstacle_id != sched.start_obstacle)
        throw ScheduleError("segment starts inside obstacle " +
                            std::to_string(sched.start_obstacle) +
                            " but the schedule opens elsewhere");

    return sched;
}

// The straight pieces of the bridge that stay in the free space: the lead-in
// before the first event (when the start lies outside every obstacle), the
// inter-event gaps, and the lead-out after the last event (when the end lies
// outside). Every returned segment is checked obstacle-free.
inline std::vector<Segment> bridge_gap_segments(const EdgeSchedule& sched, const Instance& inst) {
    std::vector<Segment> out;
    auto push_checked = [&](const Point& a, const Point& b) {
        if (a == b) return;
        if (norm_dist(a, b, inst.norm) <= inst.tol.t_eps) return;
        Segment s{a, b};
        for (const auto& ob : inst.obstacles)
            if (interior_overlap(s, ob, inst))
                throw ScheduleError("bridge segment overlaps obstacle " + std::to_string(ob.id) +
                                    " interior; schedule is inconsistent");
        out.push_back(std::move(s));
    };

    if (!sched.start_inside) push_checked(sched.segment.a, sched.events.front().z_enter);
    for (std::size_t v = 0; v + 1 < sched.events.size(); ++v)
        push_checked(sched.events[v].z_exit, sched.events[v + 1].z_enter);
    if (!sched.end_inside) push_checked(sched.events.back().z_exit, sched.segment.b);
    return out;
}

} // namespace polyroute
