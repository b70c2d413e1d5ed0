#include <doctest.h>

#include <cmath>

#include <polyroute/geom.hpp>
#include <polyroute/instances.hpp>

using namespace polyroute;

TEST_CASE("norm_eval on known vectors") {
    CHECK(norm_eval({3.0, 4.0}, NormSpec::l2()) == doctest::Approx(5.0));
    CHECK(norm_eval({3.0, -4.0}, NormSpec::linf()) == doctest::Approx(4.0));
    CHECK(norm_eval({3.0, -4.0}, NormSpec::l1()) == doctest::Approx(7.0));
    CHECK(norm_eval({0.0, 0.0}, NormSpec::lp(3.0)) == 0.0);
    CHECK(norm_eval({3.0, 4.0}, NormSpec::weighted(2.0, {4.0, 1.0})) == doctest::Approx(std::sqrt(52.0)));
}

TEST_CASE("weighted norm validation") {
    CHECK_THROWS_AS(NormSpec::weighted(2.0, {1.0, -1.0}).validate(2), InstanceError);
    CHECK_THROWS_AS(NormSpec::weighted(2.0, {1.0}).validate(2), InstanceError);
    CHECK_THROWS_AS(NormSpec::lp(0.5).validate(2), InstanceError);
    CHECK_THROWS_AS(norm_eval({1.0}, NormSpec::weighted(2.0, {1.0, 1.0})), InstanceError);
}

TEST_CASE("norm axioms hold on random vectors") {
    Rng rng(20240701);
    const std::vector<NormSpec> norms = {NormSpec::l1(), NormSpec::lp(1.5), NormSpec::l2(),
                                         NormSpec::lp(3.0), NormSpec::linf(),
                                         NormSpec::weighted(2.0, {0.5, 2.0, 1.0})};
    for (const auto& n : norms) {
        for (int i = 0; i < 200; ++i) {
            std::vector<double> u(3), v(3);
            for (auto& c : u) c = rng.uniform(-5.0, 5.0);
            for (auto& c : v) c = rng.uniform(-5.0, 5.0);
            const double lambda = rng.uniform(-3.0, 3.0);

            std::vector<double> lu(3), uv(3);
            for (int j = 0; j < 3; ++j) {
                lu[j] = lambda * u[j];
                uv[j] = u[j] + v[j];
            }
            const double lhs = norm_eval(lu, n);
            const double rhs = std::abs(lambda) * norm_eval(u, n);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            CHECK(norm_eval(uv, n) <= norm_eval(u, n) + norm_eval(v, n) + 1e-12);
        }
    }
}

TEST_CASE("segment_point interpolation") {
    const Segment s1{Point{0.0, 0.0}, Point{2.0, 0.0}};
    CHECK(segment_point(s1, 0.5) == Point{1.0, 0.0});

    const Segment s2{Point{-2.0, 0.0}, Point{2.0, 0.0}};
    CHECK(segment_point(s2, 0.0) == s2.a);
    CHECK(segment_point(s2, 1.0) == s2.b);

    // Direct affine evaluation, cross-checked by dense-scan parameter
    // recovery of the closest sample.
    const Segment s3{Point{-3.0, 0.0}, Point{3.0, 0.0}};
    const Point expect{-2.0, 0.0};
    const Point got = segment_point(s3, 1.0 / 6.0);
    CHECK(got.coords[0] == doctest::Approx(expect.coords[0]).epsilon(1e-15));
    CHECK(got.coords[1] == doctest::Approx(expect.coords[1]).epsilon(1e-15));
    double best_t = -1.0, best_d = 1e300;
    for (int i = 0; i <= 600000; ++i) {
        const double t = i / 600000.0;
        const Point p = segment_point(s3, t);
        const double d = std::abs(p[0] - expect[0]) + std::abs(p[1] - expect[1]);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    CHECK(best_t == doctest::Approx(1.0 / 6.0).epsilon(1e-5));

    CHECK_THROWS_AS(segment_point(s1, -0.1), ParameterError);
    CHECK_THROWS_AS(segment_point(s1, 1.1), ParameterError);
}

TEST_CASE("segment_point is affine coordinatewise") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        Segment s{Point{rng.uniform(-5, 5), rng.uniform(-5, 5)},
                  Point{rng.uniform(-5, 5), rng.uniform(-5, 5)}};
        const double t = rng.uniform01();
        const Point p = segment_point(s, t);
        for (int j = 0; j < 2; ++j)
            CHECK(p[j] == (1.0 - t) * s.a[j] + t * s.b[j]);
    }
}

TEST_CASE("polyline_sample contract") {
    const NormSpec n = NormSpec::l2();
    const Polyline single{{Point{0.0, 0.0}, Point{1.0, 0.0}}};

    auto samples = polyline_sample(single, 0.5, n);
    CHECK(samples.size() >= 3);
    CHECK(samples.front() == single.front());
    CHECK(samples.back() == single.back());

    // Step larger than total length still yields all vertices.
    const Polyline tri{{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}}};
    samples = polyline_sample(tri, 100.0, n);
    CHECK(samples.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(samples[i] == tri.vertices[i]);

    // All gaps bounded by the step.
    samples = polyline_sample(single, 0.3, n);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        CHECK(norm_dist(samples[i], samples[i + 1], n) <= 0.3 + 1e-12);

    CHECK_THROWS_AS(polyline_sample(single, 0.0, n), ParameterError);
}

TEST_CASE("normalize drops duplicates, keeps endpoints, is idempotent") {
    const Point a{0.0, 0.0}, b{1.0, 0.0}, c{2.0, 3.0};
    Polyline p{{a, a, b, b, b, c}};
    const Polyline n1 = normalize(p);
    CHECK(n1.size() == 3);
    CHECK(n1.front() == a);
    CHECK(n1.back() == c);
    const Polyline n2 = normalize(n1);
    CHECK(n2.vertices == n1.vertices);

    Rng rng(99);
    for (int i = 0; i < 50; ++i) {
        Polyline q;
        const int verts = 2 + (int)rng.index(6);
        for (int v = 0; v < verts; ++v) {
            Point pt{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            q.vertices.push_back(pt);
            if (rng.uniform01() < 0.3) q.vertices.push_back(pt);  // duplicate
        }
        const Polyline r = normalize(q);
        CHECK(r.front() == q.front());
        CHECK(r.back() == q.back());
        CHECK(normalize(r).vertices == r.vertices);
        for (std::size_t e = 0; e + 1 < r.vertices.size(); ++e)
            CHECK(norm_dist(r.vertices[e], r.vertices[e + 1], NormSpec::l2()) > 0.0);
    }
}
