#include <doctest.h>

#include <cmath>

#include <polyroute/obstacles.hpp>

#include "oracles.hpp"

using namespace polyroute;

namespace {

Instance one_ball(NormSpec norm = NormSpec::l2(), double r = 1.0) {
    return oracles::disc_instance({Obstacle::make_ball(0, Point{0.0, 0.0}, r)}, std::move(norm));
}

} // namespace

TEST_CASE("classify_point trichotomy on the unit disc") {
    const Instance inst = one_ball();
    const Obstacle& ob = inst.obstacles[0];
    CHECK(classify_point(Point{0.0, 0.0}, ob, inst) == Region::Interior);
    CHECK(classify_point(Point{1.0, 0.0}, ob, inst) == Region::Boundary);
    CHECK(classify_point(Point{2.0, 0.0}, ob, inst) == Region::Exterior);

    // Exactly one region per query; Interior/Exterior stable under small
    // perturbations relative to the remaining margin.
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const Point p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Region r = classify_point(p, ob, inst);
        const double m = obstacle_margin(p, ob, inst);
        int matches = 0;
        matches += (r == Region::Interior);
        matches += (r == Region::Boundary);
        matches += (r == Region::Exterior);
        CHECK(matches == 1);
        if (r != Region::Boundary) {
            const double room = std::abs(m) - inst.tol.class_eps;
            const Point q{p[0] + 0.5 * room / 2.0, p[1]};
            CHECK(classify_point(q, ob, inst) != (r == Region::Interior ? Region::Exterior
                                                                        : Region::Interior));
        }
    }
}

TEST_CASE("boundary_crossings: diameter chord of the unit disc") {
    const Instance inst = one_ball();
    const Segment seg{Point{-2.0, 0.0}, Point{2.0, 0.0}};
    const auto roots = boundary_crossings(seg, inst.obstacles[0], inst);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(0.75).epsilon(1e-9));

    const auto scanned = oracles::scan_crossings(seg, inst.obstacles[0], inst);
    REQUIRE(scanned.size() == 2);
    CHECK(std::abs(scanned[0] - roots[0]) < 1e-6);
    CHECK(std::abs(scanned[1] - roots[1]) < 1e-6);
}

TEST_CASE("boundary_crossings: exterior segment misses") {
    const Instance inst = one_ball();
    const Segment seg{Point{2.0, 2.0}, Point{3.0, 3.0}};
    CHECK(boundary_crossings(seg, inst.obstacles[0], inst).empty());
}

TEST_CASE("boundary_crossings: tangent chord yields a single merged root") {
    const Instance inst = one_ball();
    const Segment seg{Point{-2.0, 1.0}, Point{2.0, 1.0}};
    const auto roots = boundary_crossings(seg, inst.obstacles[0], inst);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_FALSE(interior_overlap(seg, inst.obstacles[0], inst));
}

TEST_CASE("flat-face coincidence raises UMViolation; perturbation clears it") {
    const Instance inst = one_ball(NormSpec::linf());
    const Segment on_face{Point{-2.0, 1.0}, Point{2.0, 1.0}};
    CHECK_THROWS_AS(boundary_crossings(on_face, inst.obstacles[0], inst), UMViolation);

    const double off = 10.0 * inst.tol.class_eps;
    const Segment shifted{Point{-2.0, 1.0 + off}, Point{2.0, 1.0 + off}};
    CHECK(boundary_crossings(shifted, inst.obstacles[0], inst).empty());
}

TEST_CASE("boundary_crossings under non-Euclidean norms and boxes") {
    SUBCASE("l1 diamond") {
        const Instance inst = one_ball(NormSpec::l1());
        const Segment seg{Point{-2.0, 0.0}, Point{2.0, 0.0}};
        const auto roots = boundary_crossings(seg, inst.obstacles[0], inst);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(roots[1] == doctest::Approx(0.75).epsilon(1e-8));
    }
    SUBCASE("box obstacle") {
        Instance inst = oracles::disc_instance({Obstacle::make_box(0, Point{-1.0, -1.0},
                                                                   Point{1.0, 1.0})});
        const Segment seg{Point{-2.0, 0.5}, Point{2.0, 0.5}};
        const auto roots = boundary_crossings(seg, inst.obstacles[0], inst);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(roots[1] == doctest::Approx(0.75).epsilon(1e-8));
        CHECK(interior_overlap(seg, inst.obstacles[0], inst));

        const Segment along_face{Point{-2.0, 1.0}, Point{2.0, 1.0}};
        CHECK_THROWS_AS(boundary_crossings(along_face, inst.obstacles[0], inst), UMViolation);
    }
    SUBCASE("weighted Euclidean ball uses the quadratic path") {
        const Instance inst = one_ball(NormSpec::weighted(2.0, {4.0, 1.0}));
        // Ellipse x^2/0.25 + y^2 = 1: crossings of the x axis at +-0.5.
        const Segment seg{Point{-2.0, 0.0}, Point{2.0, 0.0}};
        const auto roots = boundary_crossings(seg, inst.obstacles[0], inst);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == doctest::Approx(0.375).epsilon(1e-9));
        CHECK(roots[1] == doctest::Approx(0.625).epsilon(1e-9));
    }
}

TEST_CASE("interior_overlap basics") {
    const Instance inst = one_ball();
    CHECK(interior_overlap(Segment{Point{-2.0, 0.0}, Point{2.0, 0.0}}, inst.obstacles[0], inst));
    CHECK_FALSE(interior_overlap(Segment{Point{-2.0, 2.0}, Point{2.0, 2.0}}, inst.obstacles[0],
                                 inst));
    // Segment fully inside.
    CHECK(interior_overlap(Segment{Point{-0.5, 0.0}, Point{0.5, 0.0}}, inst.obstacles[0], inst));
}

TEST_CASE("crossing existence for interior/exterior endpoint pairs") {
    Rng rng(20240702);
    const std::vector<NormSpec> norms = {NormSpec::lp(1.5), NormSpec::l2(), NormSpec::lp(3.0),
                                         NormSpec::linf()};
    for (const auto& n : norms) {
        const Instance inst = one_ball(n, 1.3);
        const Obstacle& ob = inst.obstacles[0];
        int done = 0;
        while (done < 100) {
            const Point in{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const Point out{rng.uniform(-6, 6), rng.uniform(-6, 6)};
            if (classify_point(in, ob, inst) != Region::Interior) continue;
            if (classify_point(out, ob, inst) != Region::Exterior) continue;
            CHECK_FALSE(boundary_crossings(Segment{in, out}, ob, inst).empty());
            ++done;
        }
    }
}

TEST_CASE("at most two crossings under strictly convex norms") {
    Rng rng(20240703);
    for (const double p : {1.5, 2.0, 3.0}) {
        const Instance inst = one_ball(NormSpec::lp(p), 1.1);
        for (int i = 0; i < 200; ++i) {
            const Segment seg{Point{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                              Point{rng.uniform(-4, 4), rng.uniform(-4, 4)}};
            if (seg.a == seg.b) continue;
            CHECK(boundary_crossings(seg, inst.obstacles[0], inst).size() <= 2);
        }
    }
}

TEST_CASE("analytic crossings match the dense sign scan") {
    Rng rng(20240704);
    const std::vector<NormSpec> norms = {NormSpec::lp(1.5), NormSpec::l2(), NormSpec::lp(3.0),
                                         NormSpec::linf()};
    for (const auto& n : norms) {
        const Instance inst = one_ball(n, 1.2);
        const Obstacle& ob = inst.obstacles[0];
        for (int i = 0; i < 200; ++i) {
            const Segment seg{Point{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                              Point{rng.uniform(-4, 4), rng.uniform(-4, 4)}};
            if (norm_dist(seg.a, seg.b, inst.norm) < 1e-3) continue;
            const auto got = boundary_crossings(seg, ob, inst);
            const auto want = oracles::scan_crossings(seg, ob, inst);
            REQUIRE(got.size() == want.size());
            for (std::size_t k = 0; k < got.size(); ++k)
                CHECK(std::abs(got[k] - want[k]) < 1e-6);
        }
    }
}

TEST_CASE("check_um report entries") {
    Instance inst = one_ball();
    SUBCASE("fully exterior polyline passes with zero counts") {
        const Polyline p{{Point{-5.0, 5.0}, Point{5.0, 5.0}, Point{5.0, 8.0}}};
        const UMReport rep = check_um(p, inst);
        CHECK(rep.pass);
        for (auto c : rep.edge_crossing_counts) CHECK(c == 0);
    }
    SUBCASE("diameter edge counts two crossings") {
        const Polyline p{{Point{-2.0, 0.0}, Point{2.0, 0.0}}};
        const UMReport rep = check_um(p, inst);
        CHECK(rep.pass);
        REQUIRE(rep.edge_crossing_counts.size() == 1);
        CHECK(rep.edge_crossing_counts[0] == 2);
    }
    SUBCASE("face-hugging edge fails with a named violation") {
        Instance box_inst = one_ball(NormSpec::linf());
        const Polyline p{{Point{-2.0, 1.0}, Point{2.0, 1.0}}};
        const UMReport rep = check_um(p, box_inst);
        CHECK_FALSE(rep.pass);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].edge == 2);
        CHECK(rep.violations[0].obstacle_id == 0);
    }
}

TEST_CASE("validate_family") {
    SUBCASE("two separated unit discs pass with gap 1") {
        Instance inst = oracles::disc_instance({Obstacle::make_ball(0, Point{0.0, 0.0}, 1.0),
                                                Obstacle::make_ball(1, Point{3.0, 0.0}, 1.0)});
        const ValidationReport rep = validate_family(inst);
        CHECK(rep.pass);
        CHECK(closure_gap(inst.obstacles[0], inst.obstacles[1], inst) == doctest::Approx(1.0));
        REQUIRE(rep.deltas.size() == 2);
        CHECK(rep.deltas[0].second == doctest::Approx(0.5));
        CHECK(rep.deltas[1].second == doctest::Approx(0.5));
    }
    SUBCASE("touching closures fail hypothesis (ii)") {
        Instance inst = oracles::disc_instance({Obstacle::make_ball(0, Point{0.0, 0.0}, 1.0),
                                                Obstacle::make_ball(1, Point{2.0, 0.0}, 1.0)});
        const ValidationReport rep = validate_family(inst);
        CHECK_FALSE(rep.pass);
        REQUIRE_FALSE(rep.failures.empty());
        CHECK(rep.failures[0].hypothesis == "(ii)");
    }
    SUBCASE("ball centered on the region boundary fails") {
        Instance inst = oracles::disc_instance({Obstacle::make_ball(0, Point{10.0, 0.0}, 1.0)});
        const ValidationReport rep = validate_family(inst);
        CHECK_FALSE(rep.pass);
        CHECK(rep.failures[0].hypothesis == "(ii)");
    }
    SUBCASE("dimension 1 is rejected") {
        Instance inst;
        inst.dim = 1;
        inst.region = BoxRegion{Point{std::vector<double>{0.0}}, Point{std::vector<double>{1.0}}};
        const ValidationReport rep = validate_family(inst);
        CHECK_FALSE(rep.pass);
        CHECK(rep.failures[0].hypothesis == "(pre)");
    }
    SUBCASE("bad tolerance ordering is rejected") {
        Instance inst = one_ball();
        inst.tol.t_eps = 1.0;
        const ValidationReport rep = validate_family(inst);
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("box obstacle clearances use exact distances") {
        Instance inst = oracles::disc_instance({Obstacle::make_box(0, Point{-1.0, -1.0},
                                                                   Point{1.0, 1.0}),
                                                Obstacle::make_ball(1, Point{4.0, 0.0}, 1.0)});
        CHECK(validate_family(inst).pass);
        CHECK(closure_gap(inst.obstacles[0], inst.obstacles[1], inst) == doctest::Approx(2.0));
    }
}

TEST_CASE("safe polylines never trip check_um") {
    Rng rng(20240705);
    const Instance inst = oracles::disc_instance({Obstacle::make_ball(0, Point{0.0, 0.0}, 1.0),
                                                  Obstacle::make_ball(1, Point{4.0, 1.0}, 0.7)});
    int built = 0;
    while (built < 50) {
        Polyline p;
        bool clear = true;
        for (int v = 0; v < 4; ++v) {
            const Point pt{rng.uniform(-9, 9), rng.uniform(-9, 9)};
            for (const auto& ob : inst.obstacles)
                if (obstacle_margin(pt, ob, inst) < 0.05) clear = false;
            p.vertices.push_back(pt);
        }
        if (!clear) continue;
        ++built;
        CHECK(check_um(p, inst).pass);
    }
}
