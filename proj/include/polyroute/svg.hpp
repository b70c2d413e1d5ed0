#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "reroute.hpp"

namespace polyroute {

namespace detail {

// Locale-independent fixed-precision number formatting; byte-identical
// output across runs is part of the plot contract.
inline std::string fmt_num(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

} // namespace detail

// Deterministic SVG 1.1 rendering of a 2D instance, optionally with the
// input polyline and a rerouted result (pieces colored by kind: original
// blue, bridge green, collar arcs red).
inline std::string render_svg(const Instance& inst, const std::optional<Polyline>& input,
                              const RouteResult* route) {
    if (inst.dim != 2) throw UnsupportedInstance("plotting requires dimension 2");

    const double lox = inst.region.lo[0], loy = inst.region.lo[1];
    const double hix = inst.region.hi[0], hiy = inst.region.hi[1];
    const double pad = 0.05 * std::max(hix - lox, hiy - loy);
    // Flip y so the vertical axis points up.
    auto X = [&](double x) { return detail::fmt_num(x); };
    auto Y = [&](double y) { return detail::fmt_num(hiy + loy - y); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         detail::fmt_num(lox - pad) + " " + detail::fmt_num(loy - pad) + " " +
         detail::fmt_num(hix - lox + 2 * pad) + " " + detail::fmt_num(hiy - loy + 2 * pad) +
         "\" width=\"800\" height=\"800\">\n";
    s += "  <rect x=\"" + X(lox) + "\" y=\"" + Y(hiy) + "\" width=\"" + detail::fmt_num(hix - lox) +
         "\" height=\"" + detail::fmt_num(hiy - loy) +
         "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.05\"/>\n";

    const bool euclidean = inst.norm.kind == NormSpec::Kind::lp && inst.norm.p == 2.0;
    for (const auto& ob : inst.obstacles) {
        if (ob.shape == Obstacle::Shape::box) {
            s += "  <rect x=\"" + X(ob.lo[0]) + "\" y=\"" + Y(ob.hi[1]) + "\" width=\"" +
                 detail::fmt_num(ob.hi[0] - ob.lo[0]) + "\" height=\"" +
                 detail::fmt_num(ob.hi[1] - ob.lo[1]) +
                 "\" fill=\"#d9d9ef\" stroke=\"#444444\" stroke-width=\"0.04\"/>\n";
        } else if (euclidean) {
            s += "  <circle cx=\"" + X(ob.center[0]) + "\" cy=\"" + Y(ob.center[1]) + "\" r=\"" +
                 detail::fmt_num(ob.radius) +
                 "\" fill=\"#d9d9ef\" stroke=\"#444444\" stroke-width=\"0.04\"/>\n";
        } else {
            // General norm ball: sample the unit sphere of the norm.
            s += "  <polygon points=\"";
            for (int k = 0; k < 128; ++k) {
                const double a = 2.0 * std::acos(-1.0) * k / 128;
                std::vector<double> dir{std::cos(a), std::sin(a)};
                const double g = norm_eval(dir, inst.norm);
                const double px = ob.center[0] + ob.radius * dir[0] / g;
                const double py = ob.center[1] + ob.radius * dir[1] / g;
                if (k) s += " ";
                s += X(px) + "," + Y(py);
            }
            s += "\" fill=\"#d9d9ef\" stroke=\"#444444\" stroke-width=\"0.04\"/>\n";
        }
    }

    auto polyline_points = [&](const Polyline& p) {
        std::string pts;
        for (std::size_t i = 0; i < p.vertices.size(); ++i) {
            if (i) pts += " ";
            pts += X(p.vertices[i][0]) + "," + Y(p.vertices[i][1]);
        }
        return pts;
    };

    if (input && input->size() >= 2) {
        s += "  <polyline points=\"" + polyline_points(*input) +
             "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.05\" "
             "stroke-dasharray=\"0.2,0.2\"/>\n";
    }
    if (route) {
        for (const auto& piece : route->pieces) {
            const char* color = "#1f77b4";
            if (piece.kind == RoutePiece::Kind::bridge_segment) color = "#2ca02c";
            if (piece.kind == RoutePiece::Kind::collar_arc) color = "#d62728";
            s += "  <polyline points=\"" + polyline_points(piece.points) +
                 "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"0.07\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

} // namespace polyroute
