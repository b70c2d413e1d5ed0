#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "geom.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Obstacles and instances
// ---------------------------------------------------------------------------

// Classification of a point against a set at a fixed tolerance.
enum class Region { Interior, Boundary, Exterior };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::Interior: return "interior";
        case Region::Boundary: return "boundary";
        case Region::Exterior: return "exterior";
    }
    return "?";
}

// An open obstacle: a norm ball (under the instance norm) or an open
// axis-aligned box. Membership excludes the boundary.
struct Obstacle {
    enum class Shape { ball, box };

    Shape shape = Shape::ball;
    int id = 0;
    // ball
    Point center;
    double radius = 0.0;
    // box
    Point lo;
    Point hi;

    static Obstacle make_ball(int id, Point center, double radius) {
        Obstacle o;
        o.shape = Shape::ball;
        o.id = id;
        o.center = std::move(center);
        o.radius = radius;
        return o;
    }
    static Obstacle make_box(int id, Point lo, Point hi) {
        Obstacle o;
        o.shape = Shape::box;
        o.id = id;
        o.lo = std::move(lo);
        o.hi = std::move(hi);
        return o;
    }

    std::size_t dim() const { return shape == Shape::ball ? center.dim() : lo.dim(); }
};

// Classification band widths. The ordering 0 < t_eps < class_eps < sep keeps
// the parameter-merge, boundary and separation scales apart.
struct TolerancePolicy {
    double class_eps = 1e-9;  // boundary-band half-width for classification
    double t_eps = 1e-10;     // crossing-parameter merge tolerance
    double sep = 1e-6;        // required closure separation / region clearance

    void validate() const {
        if (!(0.0 < t_eps && t_eps < class_eps && class_eps < sep))
            throw InstanceError("tolerances must satisfy 0 < t_eps < class_eps < sep");
    }
};

// Axis-aligned open box region.
struct BoxRegion {
    Point lo;
    Point hi;
};

struct Instance {
    std::size_t dim = 2;
    NormSpec norm;
    BoxRegion region;
    std::vector<Obstacle> obstacles;
    TolerancePolicy tol;

    const Obstacle* find_obstacle(int id) const {
        for (const auto& o : obstacles)
            if (o.id == id) return &o;
        return nullptr;
    }

    void validate_basic() const {
        if (dim < 2)
            throw InstanceError("dimension must be at least 2: removing an open set from the "
                                "line disconnects it and no collar can be polygonally connected");
        norm.validate(dim);
        tol.validate();
        if (region.lo.dim() != dim || region.hi.dim() != dim)
            throw InstanceError("region dimension mismatch");
        for (std::size_t j = 0; j < dim; ++j)
            if (!(region.lo[j] < region.hi[j]))
                throw InstanceError("region must satisfy lo < hi componentwise");
        for (const auto& o : obstacles) {
            if (o.dim() != dim) throw InstanceError("obstacle dimension mismatch");
            if (o.shape == Obstacle::Shape::ball) {
                if (!(o.radius > 0.0)) throw InstanceError("ball radius must be positive");
                if (!all_finite(o.center)) throw InstanceError("ball center must be finite");
            } else {
                for (std::size_t j = 0; j < dim; ++j)
                    if (!(o.lo[j] < o.hi[j]))
                        throw InstanceError("box obstacle must satisfy lo < hi componentwise");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Signed margins and classification
// ---------------------------------------------------------------------------

// Signed margin of p against the obstacle: negative inside, zero on the
// boundary, positive outside. For balls this is the exact signed norm
// distance to the boundary; for boxes it is the convex max-of-linear face
// margin (axis gaps in norm units), which vanishes exactly on the boundary.
inline double obstacle_margin(const Point& p, const Obstacle& ob, const Instance& inst) {
    if (ob.shape == Obstacle::Shape::ball)
        return norm_dist(p, ob.center, inst.norm) - ob.radius;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.dim; ++j) {
        const double w = inst.norm.axis_scale(j);
        m = std::max(m, (ob.lo[j] - p[j]) * w);
        m = std::max(m, (p[j] - ob.hi[j]) * w);
    }
    return m;
}

// Exact norm distance from p to the obstacle boundary (both sides). For a
// box the nearest boundary point is the componentwise clamp (outside) or the
// nearest face (inside); both are exact for monotone norms.
inline double boundary_distance(const Point& p, const Obstacle& ob, const Instance& inst) {
    if (ob.shape == Obstacle::Shape::ball)
        return std::abs(norm_dist(p, ob.center, inst.norm) - ob.radius);
    bool inside = true;
    std::vector<double> excess(inst.dim, 0.0);
    double nearest_face = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.dim; ++j) {
        const double w = inst.norm.axis_scale(j);
        if (p[j] < ob.lo[j]) {
            inside = false;
            excess[j] = ob.lo[j] - p[j];
        } else if (p[j] > ob.hi[j]) {
            inside = false;
            excess[j] = p[j] - ob.hi[j];
        } else {
            nearest_face = std::min(nearest_face, std::min(p[j] - ob.lo[j], ob.hi[j] - p[j]) * w);
        }
    }
    if (!inside) return norm_eval(excess, inst.norm);
    return nearest_face;
}

// Exact norm distance from p to the obstacle closure; zero inside.
inline double closure_distance(const Point& p, const Obstacle& ob, const Instance& inst) {
    const double m = obstacle_margin(p, ob, inst);
    if (m <= 0.0) return 0.0;
    if (ob.shape == Obstacle::Shape::ball) return m;
    return boundary_distance(p, ob, inst);
}

inline Region classify_margin(double margin, const TolerancePolicy& tol) {
    if (margin < -tol.class_eps) return Region::Interior;
    if (margin <= tol.class_eps) return Region::Boundary;
    return Region::Exterior;
}

// Interior / Boundary / Exterior trichotomy at the instance tolerance.
inline Region classify_point(const Point& p, const Obstacle& ob, const Instance& inst) {
    return classify_margin(obstacle_margin(p, ob, inst), inst.tol);
}

// Margin of p against the region box: negative strictly inside.
inline double region_margin(const Point& p, const Instance& inst) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.dim; ++j) {
        const double w = inst.norm.axis_scale(j);
        m = std::max(m, (inst.region.lo[j] - p[j]) * w);
        m = std::max(m, (p[j] - inst.region.hi[j]) * w);
    }
    return m;
}

inline bool in_region(const Point& p, const Instance& inst) {
    return region_margin(p, inst) <= 0.0;
}

// ---------------------------------------------------------------------------
// Segment / boundary crossing enumeration
// ---------------------------------------------------------------------------

namespace detail {

// Margin along the segment; convex in t for both shapes (norm of an affine
// map, or max of affine maps).
struct MarginFn {
    const Segment& seg;
    const Obstacle& ob;
    const Instance& inst;

    double operator()(double t) const {
        return obstacle_margin(segment_point(seg, t), ob, inst);
    }
};

inline double bisect_root(const MarginFn& g, double lo, double hi, double glo) {
    // Sign change guaranteed by the caller; converge to 1e-12 in t.
    for (int it = 0; it < 64 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Minimizer of a convex function on [lo, hi] by ternary search.
inline double convex_argmin(const MarginFn& g, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (g(m1) <= g(m2))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

inline void merge_push(std::vector<double>& roots, double t, double t_eps) {
    t = std::clamp(t, 0.0, 1.0);
    if (!roots.empty() && std::abs(roots.back() - t) <= t_eps) {
        roots.back() = 0.5 * (roots.back() + t);
        return;
    }
    roots.push_back(t);
}

// Quadratic crossings for (weighted) Euclidean balls:
//   sum_j w_j (a_j + t u_j)^2 = r^2.
inline std::vector<double> quadratic_crossings(const Segment& seg, const Obstacle& ob,
                                               const Instance& inst) {
    const std::size_t d = inst.dim;
    double A = 0.0, B = 0.0, C = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double w = inst.norm.kind == NormSpec::Kind::weighted_lp ? inst.norm.weights[j] : 1.0;
        const double aj = seg.a[j] - ob.center[j];
        const double uj = seg.b[j] - seg.a[j];
        A += w * uj * uj;
        B += 2.0 * w * aj * uj;
        C += w * aj * aj;
    }
    C -= ob.radius * ob.radius;
    std::vector<double> roots;
    if (A == 0.0) return roots;  // zero-length segments are rejected upstream
    const double disc = B * B - 4.0 * A * C;
    // Tangency band: when the dip between the would-be root pair stays
    // within class_eps of the boundary (depth ~ disc / (8 A r)), the contact
    // counts as a single boundary touch. A slightly negative discriminant at
    // rounding scale is the same situation from below.
    const double tangent_band = 8.0 * A * ob.radius * inst.tol.class_eps;
    if (disc <= tangent_band) {
        const double disc_scale = std::max(B * B, std::abs(4.0 * A * C));
        if (disc >= -std::max(tangent_band, 1e-24 * disc_scale)) {
            const double t = -B / (2.0 * A);
            if (t >= -inst.tol.t_eps && t <= 1.0 + inst.tol.t_eps)
                merge_push(roots, t, inst.tol.t_eps);
        }
        return roots;
    }
    const double sq = std::sqrt(disc);
    // Numerically stable pair.
    const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    double t1 = q / A;
    double t2 = (q != 0.0) ? C / q : t1;
    if (t1 > t2) std::swap(t1, t2);
    for (double t : {t1, t2})
        if (t >= -inst.tol.t_eps && t <= 1.0 + inst.tol.t_eps) merge_push(roots, t, inst.tol.t_eps);
    return roots;
}

} // namespace detail

// All parameters t in [0,1] where the segment meets the obstacle boundary,
// strictly increasing, duplicates merged within t_eps. Throws UMViolation
// when the segment runs inside the boundary band over an interval (flat-face
// coincidence), which makes the crossing set infinite.
inline std::vector<double> boundary_crossings(const Segment& seg, const Obstacle& ob,
                                              const Instance& inst) {
    const TolerancePolicy& tol = inst.tol;
    if (ob.shape == Obstacle::Shape::ball && inst.norm.is_euclidean_like())
        return detail::quadratic_crossings(seg, ob, inst);

    const detail::MarginFn g{seg, ob, inst};

    // Seed grid; 64 gaps exceed any sign-change count a convex margin can
    // produce, and expose flat runs.
    constexpr int kSeeds = 64;
    std::vector<double> ts(kSeeds + 1), gs(kSeeds + 1);
    for (int i = 0; i <= kSeeds; ++i) {
        ts[i] = (double)i / kSeeds;
        gs[i] = g(ts[i]);
    }

    // Flat-face coincidence: a run of consecutive in-band seeds whose margin
    // magnitude is at rounding level (a genuine zero stretch). A smooth
    // tangency dips through the band but its magnitude reaches class_eps
    // within the run, so it never fires this test.
    {
        int run_start = -1;
        for (int i = 0; i <= kSeeds + 0; ++i) {
            const bool in_band = i <= kSeeds && std::abs(gs[i]) <= tol.class_eps;
            if (in_band && run_start < 0) run_start = i;
            if ((!in_band || i == kSeeds) && run_start >= 0) {
                const int run_end = in_band ? i : i - 1;
                if (run_end > run_start) {
                    const double lo = ts[run_start], hi = ts[run_end];
                    bool flat = hi - lo > 10.0 * tol.t_eps;
                    for (int k = 0; k <= 16 && flat; ++k) {
                        const double t = lo + (hi - lo) * (double)k / 16.0;
                        if (std::abs(g(t)) > 1e-3 * tol.class_eps) flat = false;
                    }
                    if (flat)
                        throw UMViolation("segment coincides with obstacle " + std::to_string(ob.id) +
                                          " boundary over t in [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]: crossing set is not finite");
                }
                run_start = -1;
            }
        }
    }

    std::vector<double> roots;

    // Strict sign changes between seeds.
    int prev_sign_idx = 0;
    auto sign_of = [&](double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); };
    for (int i = 1; i <= kSeeds; ++i) {
        if (sign_of(gs[i]) == 0) continue;
        if (sign_of(gs[prev_sign_idx]) != 0 && sign_of(gs[i]) != sign_of(gs[prev_sign_idx])) {
            const double r = detail::bisect_root(g, ts[prev_sign_idx], ts[i], gs[prev_sign_idx]);
            detail::merge_push(roots, r, tol.t_eps);
        }
        prev_sign_idx = i;
    }

    // The convex minimum can hide a tangency or a root pair inside one
    // same-sign gap; inspect it explicitly.
    const double tmin = detail::convex_argmin(g, 0.0, 1.0);
    const double gmin = g(tmin);
    if (std::abs(gmin) <= tol.class_eps) {
        bool covered = false;
        for (double r : roots)
            if (std::abs(r - tmin) <= 1e-6) covered = true;
        if (!covered) detail::merge_push(roots, tmin, tol.t_eps);
    } else if (gmin < 0.0) {
        // Margin dips negative: exactly two crossings bracket the minimum.
        if (g(0.0) > 0.0) {
            const double r = detail::bisect_root(g, 0.0, tmin, g(0.0));
            detail::merge_push(roots, r, tol.t_eps);
        }
        if (g(1.0) > 0.0) {
            const double r = detail::bisect_root(g, tmin, 1.0, gmin);
            detail::merge_push(roots, r, tol.t_eps);
        }
    }

    // In-band segment endpoints are boundary points.
    if (std::abs(gs[0]) <= tol.class_eps) detail::merge_push(roots, 0.0, tol.t_eps);
    if (std::abs(gs[kSeeds]) <= tol.class_eps) detail::merge_push(roots, 1.0, tol.t_eps);

    // Convexity: {g <= 0} is a single interval. When the dip between the
    // extreme roots never leaves the boundary band, every root describes the
    // same tolerance-level contact; collapse to the minimizer.
    if (roots.size() >= 2 && gmin >= -tol.class_eps) {
        roots.clear();
        roots.push_back(std::clamp(tmin, 0.0, 1.0));
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) detail::merge_push(merged, r, tol.t_eps);
    return merged;
}

// True iff some point of the segment classifies Interior. Exact for our
// shapes: between consecutive crossings the margin has constant sign, so the
// midpoints of the crossing partition decide.
inline bool interior_overlap(const Segment& seg, const Obstacle& ob, const Instance& inst) {
    const std::vector<double> roots = boundary_crossings(seg, ob, inst);
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double r : roots) cuts.push_back(r);
    cuts.push_back(1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= inst.tol.t_eps) continue;
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (classify_point(segment_point(seg, mid), ob, inst) == Region::Interior) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// U-M checking
// ---------------------------------------------------------------------------

struct UMEntry {
    std::size_t edge = 0;  // edge index j (edge j joins vertices j-1, j; first edge is 2)
    int obstacle_id = 0;
    std::string detail;
};

struct UMReport {
    bool pass = true;
    std::vector<std::size_t> edge_crossing_counts;  // per edge, summed over obstacles
    std::vector<UMEntry> violations;
};

// Checks the finite-crossing property of every edge against every obstacle
// boundary. Violations are report entries, not exceptions.
inline UMReport check_um(const Polyline& p, const Instance& inst) {
    UMReport rep;
    rep.edge_crossing_counts.assign(p.edge_count(), 0);
    for (std::size_t e = 0; e < p.edge_count(); ++e) {
        for (const auto& ob : inst.obstacles) {
            try {
                rep.edge_crossing_counts[e] += boundary_crossings(p.edge(e), ob, inst).size();
            } catch (const UMViolation& v) {
                rep.pass = false;
                rep.violations.push_back(UMEntry{e + 2, ob.id, v.what()});
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Family validation
// ---------------------------------------------------------------------------

// Exact distance between the closures of two obstacles under the instance
// norm (balls and axis-aligned boxes admit closed forms).
inline double closure_gap(const Obstacle& a, const Obstacle& b, const Instance& inst) {
    using Shape = Obstacle::Shape;
    if (a.shape == Shape::ball && b.shape == Shape::ball)
        return norm_dist(a.center, b.center, inst.norm) - a.radius - b.radius;
    if (a.shape == Shape::box && b.shape == Shape::box) {
        std::vector<double> gap(inst.dim, 0.0);
        for (std::size_t j = 0; j < inst.dim; ++j)
            gap[j] = std::max({0.0, a.lo[j] - b.hi[j], b.lo[j] - a.hi[j]});
        return norm_eval(gap, inst.norm);
    }
    const Obstacle& ball = a.shape == Shape::ball ? a : b;
    const Obstacle& box = a.shape == Shape::ball ? b : a;
    std::vector<double> gap(inst.dim, 0.0);
    for (std::size_t j = 0; j < inst.dim; ++j) {
        const double c = ball.center[j];
        gap[j] = c < box.lo[j] ? box.lo[j] - c : (c > box.hi[j] ? c - box.hi[j] : 0.0);
    }
    return norm_eval(gap, inst.norm) - ball.radius;
}

// Exact distance from an obstacle closure to the region boundary, assuming
// the obstacle sits inside the region (negative or zero otherwise).
inline double region_clearance(const Obstacle& ob, const Instance& inst) {
    double clear = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.dim; ++j) {
        const double w = inst.norm.axis_scale(j);
        double lo_gap, hi_gap;
        if (ob.shape == Obstacle::Shape::ball) {
            lo_gap = (ob.center[j] - inst.region.lo[j]) * w - ob.radius;
            hi_gap = (inst.region.hi[j] - ob.center[j]) * w - ob.radius;
        } else {
            lo_gap = (ob.lo[j] - inst.region.lo[j]) * w;
            hi_gap = (inst.region.hi[j] - ob.hi[j]) * w;
        }
        clear = std::min(clear, std::min(lo_gap, hi_gap));
    }
    return clear;
}

struct ValidationFailure {
    std::string hypothesis;  // "(ii)" or "(iii)" or "(pre)"
    std::string detail;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationFailure> failures;
    // Collar width per obstacle id (half the least gap to siblings and to
    // the region boundary); meaningful only when pass is true.
    std::vector<std::pair<int, double>> deltas;

    std::string summary() const {
        if (pass) return "all hypotheses hold";
        std::string s;
        for (const auto& f : failures) {
            if (!s.empty()) s += "; ";
            s += "hypothesis " + f.hypothesis + " violated: " + f.detail;
        }
        return s;
    }
};

// Checks hypothesis (ii) (open obstacles with pairwise disjoint closures,
// strictly inside the region) and computes the collar widths certifying
// hypothesis (iii). Hypothesis (i) is polyline-specific; see check_um.
inline ValidationReport validate_family(const Instance& inst) {
    ValidationReport rep;
    auto fail = [&](const std::string& hyp, const std::string& detail) {
        rep.pass = false;
        rep.failures.push_back(ValidationFailure{hyp, detail});
    };

    try {
        inst.validate_basic();
    } catch (const InstanceError& e) {
        fail("(pre)", e.what());
        return rep;
    }

    const std::size_t n = inst.obstacles.size();
    std::vector<double> least_gap(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = closure_gap(inst.obstacles[i], inst.obstacles[j], inst);
            least_gap[i] = std::min(least_gap[i], gap);
            least_gap[j] = std::min(least_gap[j], gap);
            if (!(gap > inst.tol.sep))
                fail("(ii)", "closures of obstacles " + std::to_string(inst.obstacles[i].id) +
                                 " and " + std::to_string(inst.obstacles[j].id) +
                                 " are not separated (gap " + std::to_string(gap) + " <= sep)");
        }
        const double clear = region_clearance(inst.obstacles[i], inst);
        least_gap[i] = std::min(least_gap[i], clear);
        if (!(clear > inst.tol.sep))
            fail("(ii)", "closure of obstacle " + std::to_string(inst.obstacles[i].id) +
                             " is not strictly inside the region (clearance " +
                             std::to_string(clear) + " <= sep)");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = 0.5 * least_gap[i];
        rep.deltas.emplace_back(inst.obstacles[i].id, delta);
        if (rep.pass && !(delta > 0.0))
            fail("(iii)", "collar width of obstacle " + std::to_string(inst.obstacles[i].id) +
                              " is not positive");
    }
    return rep;
}

} // namespace polyroute
