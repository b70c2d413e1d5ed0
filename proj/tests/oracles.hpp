#pragma once

// Test-side oracles, kept independent of the implementation paths they
// check: crossings are recovered by dense sign scanning plus bisection on the
// raw margin function, and schedules by scanning interior runs. Nothing here
// calls boundary_crossings or compute_edge_schedule.

#include <algorithm>
#include <cmath>
#include <vector>

#include <polyroute/instances.hpp>
#include <polyroute/obstacles.hpp>

namespace oracles {

using namespace polyroute;

inline double margin_at(const Segment& seg, const Obstacle& ob, const Instance& inst, double t) {
    return obstacle_margin(segment_point(seg, t), ob, inst);
}

// Dense sign scan at the given resolution: roots from strict sign changes
// (refined by bisection), plus tangential band touches located by minimizing
// the margin over each in-band grid run (the margin is convex along a line
// for the supported shapes).
inline std::vector<double> scan_crossings(const Segment& seg, const Obstacle& ob,
                                          const Instance& inst, double resolution = 1e-5) {
    const std::size_t n = (std::size_t)std::ceil(1.0 / resolution);
    std::vector<double> roots;

    double t_prev = 0.0;
    double g_prev = margin_at(seg, ob, inst, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = std::min(1.0, (double)i * resolution);
        const double g = margin_at(seg, ob, inst, t);
        if ((g_prev < 0.0 && g > 0.0) || (g_prev > 0.0 && g < 0.0)) {
            double lo = t_prev, hi = t, glo = g_prev;
            while (hi - lo > 1e-13) {
                const double mid = 0.5 * (lo + hi);
                const double gm = margin_at(seg, ob, inst, mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        t_prev = t;
        g_prev = g;
    }

    // In-band runs not already explained by a sign change: either a crossing
    // that hit a grid point exactly (flanks of opposite sign: bisect) or a
    // tangential touch (minimize the convex margin over the run).
    std::ptrdiff_t run_start = -1;
    auto flush_run = [&](std::ptrdiff_t first, std::ptrdiff_t last) {
        double lo = std::max(0.0, (double)first * resolution - resolution);
        double hi = std::min(1.0, (double)last * resolution + resolution);
        for (double r : roots)
            if (r >= lo - resolution && r <= hi + resolution) return;
        const double glo = margin_at(seg, ob, inst, lo);
        const double ghi = margin_at(seg, ob, inst, hi);
        if ((glo < 0.0 && ghi > 0.0) || (glo > 0.0 && ghi < 0.0)) {
            double a = lo, b = hi, ga = glo;
            while (b - a > 1e-13) {
                const double mid = 0.5 * (a + b);
                const double gm = margin_at(seg, ob, inst, mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
            return;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (margin_at(seg, ob, inst, m1) <= margin_at(seg, ob, inst, m2))
                hi = m2;
            else
                lo = m1;
        }
        roots.push_back(0.5 * (lo + hi));
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(1.0, (double)i * resolution);
        const bool in_band = std::abs(margin_at(seg, ob, inst, t)) <= inst.tol.class_eps;
        if (in_band && run_start < 0) run_start = (std::ptrdiff_t)i;
        if ((!in_band || i == n) && run_start >= 0) {
            flush_run(run_start, in_band ? (std::ptrdiff_t)i : (std::ptrdiff_t)i - 1);
            run_start = -1;
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() && r - merged.back() <= 2.0 * resolution)
            merged.back() = 0.5 * (merged.back() + r);
        else
            merged.push_back(r);
    }
    return merged;
}

// Schedule recovered by scanning interior runs: the first event is the
// obstacle whose first boundary touch comes earliest; each later event is the
// earliest boundary touch (after the previous exit) of an unvisited obstacle
// that opens one of its interior runs. Enter/exit parameters carry the scan
// resolution.
struct ScanEvent {
    int obstacle_id;
    double t_enter;
    double t_exit;
};

inline std::vector<ScanEvent> scan_schedule(const Segment& seg, const Instance& inst,
                                            double resolution = 1e-5) {
    struct Info {
        int id;
        std::vector<double> touches;
        std::vector<std::pair<double, double>> interior_runs;
    };
    std::vector<Info> infos;
    for (const auto& ob : inst.obstacles) {
        Info info;
        info.id = ob.id;
        info.touches = scan_crossings(seg, ob, inst, resolution);
        const std::size_t n = (std::size_t)std::ceil(1.0 / resolution);
        bool in_run = false;
        double run_start = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = std::min(1.0, (double)i * resolution);
            const bool interior = margin_at(seg, ob, inst, t) < -inst.tol.class_eps;
            if (interior && !in_run) {
                in_run = true;
                run_start = t;
            }
            if ((!interior || i == n) && in_run) {
                info.interior_runs.emplace_back(run_start, t);
                in_run = false;
            }
        }
        if (!info.touches.empty() && !info.interior_runs.empty()) infos.push_back(std::move(info));
    }
    std::vector<ScanEvent> events;
    std::vector<int> visited;
    if (infos.empty()) return events;

    const Info* first = &infos.front();
    for (const auto& info : infos)
        if (info.touches.front() < first->touches.front()) first = &info;
    events.push_back(ScanEvent{first->id, first->touches.front(), first->touches.back()});
    visited.push_back(first->id);

    for (;;) {
        const double after = events.back().t_exit;
        const Info* best = nullptr;
        double best_t = 2.0;
        for (const auto& info : infos) {
            if (std::find(visited.begin(), visited.end(), info.id) != visited.end()) continue;
            for (double t : info.touches) {
                if (t <= after + resolution) continue;
                // The touch must open an interior run of the same obstacle.
                bool opens = false;
                for (const auto& [lo, hi] : info.interior_runs)
                    if (lo >= t - 2.0 * resolution && lo <= t + 2.0 * resolution) opens = true;
                if (!opens) continue;
                if (t < best_t) {
                    best_t = t;
                    best = &info;
                }
                break;
            }
        }
        if (!best) break;
        events.push_back(ScanEvent{best->id, best_t, best->touches.back()});
        visited.push_back(best->id);
    }
    return events;
}

// Convenience fixture: 2D Euclidean instance on [-10,10]^2.
inline Instance disc_instance(std::vector<Obstacle> obstacles, NormSpec norm = NormSpec::l2()) {
    Instance inst;
    inst.dim = 2;
    inst.norm = std::move(norm);
    inst.region = BoxRegion{Point{-10.0, -10.0}, Point{10.0, 10.0}};
    inst.obstacles = std::move(obstacles);
    return inst;
}

} // namespace oracles
