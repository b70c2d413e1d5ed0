// Command-line front end: generate instances, validate the obstacle family,
// check the finite-crossing property, reroute polylines, verify routes and
// render 2D scenes to SVG.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <polyroute/polyroute.hpp>

namespace {

using namespace polyroute;
using nlohmann::json;

// Exit codes (documented in README and --help):
//   0 success                 6 bad query endpoints
//   1 usage error             7 schedule failure
//   2 file parse error        8 engine/collar failure
//   3 instance semantics      9 verification failure
//   4 hypothesis validation  10 unsupported instance
//   5 finite-crossing (U-M)  11 generation failure
enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kInstance = 3,
    kValidation = 4,
    kUM = 5,
    kInput = 6,
    kSchedule = 7,
    kEngine = 8,
    kVerifyFail = 9,
    kUnsupported = 10,
    kGeneration = 11,
};

int code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kParse;
    if (dynamic_cast<const InstanceError*>(&e)) return kInstance;
    if (dynamic_cast<const ValidationError*>(&e)) return kValidation;
    if (dynamic_cast<const UMViolation*>(&e)) return kUM;
    if (dynamic_cast<const InputError*>(&e)) return kInput;
    if (dynamic_cast<const ScheduleError*>(&e)) return kSchedule;
    if (dynamic_cast<const CollarError*>(&e)) return kEngine;
    if (dynamic_cast<const EngineError*>(&e)) return kEngine;
    if (dynamic_cast<const UnsupportedInstance*>(&e)) return kUnsupported;
    if (dynamic_cast<const GenerationError*>(&e)) return kGeneration;
    if (dynamic_cast<const ParameterError*>(&e)) return kUsage;
    return kEngine;
}

struct ToleranceFlags {
    double class_eps = -1.0, t_eps = -1.0, sep = -1.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--tol-class", class_eps, "override boundary-band half-width");
        cmd->add_option("--tol-t", t_eps, "override crossing-parameter merge tolerance");
        cmd->add_option("--tol-sep", sep, "override required closure separation");
    }
    void apply(Instance& inst) const {
        if (class_eps > 0.0) inst.tol.class_eps = class_eps;
        if (t_eps > 0.0) inst.tol.t_eps = t_eps;
        if (sep > 0.0) inst.tol.sep = sep;
        inst.tol.validate();
    }
};

// "x,y;x,y;..." -> polyline
Polyline parse_polyline_arg(const std::string& text, std::size_t dim) {
    Polyline p;
    std::stringstream points(text);
    std::string pt;
    while (std::getline(points, pt, ';')) {
        std::stringstream coords(pt);
        std::string c;
        Point v;
        while (std::getline(coords, c, ',')) v.coords.push_back(std::stod(c));
        if (v.dim() != dim)
            throw InputError("query point \"" + pt + "\" does not have dimension " +
                             std::to_string(dim));
        p.vertices.push_back(std::move(v));
    }
    if (p.size() < 2) throw InputError("query polyline needs at least two points");
    return p;
}

Polyline query_for(const LoadedInstance& li, const std::string& polyline_flag) {
    if (!polyline_flag.empty()) return parse_polyline_arg(polyline_flag, li.inst.dim);
    if (li.query) return *li.query;
    throw InputError("no query polyline: provide --polyline or a \"query\" block in the file");
}

json point_json(const Point& p) {
    json a = json::array();
    for (double c : p.coords) a.push_back(c);
    return a;
}

json route_json(const RouteResult& res, const VerifyReport& ver, const Instance& inst) {
    json doc;
    doc["version"] = 1;
    json path = json::array();
    for (const auto& v : res.path.vertices) path.push_back(point_json(v));
    doc["path"] = std::move(path);
    json pieces = json::array();
    for (const auto& piece : res.pieces) {
        json pj;
        pj["kind"] = to_string(piece.kind);
        pj["edge"] = piece.edge_index;
        if (piece.kind == RoutePiece::Kind::collar_arc) {
            pj["obstacle"] = piece.obstacle_id;
            pj["event"] = piece.event;
        }
        json pts = json::array();
        for (const auto& v : piece.points.vertices) pts.push_back(point_json(v));
        pj["points"] = std::move(pts);
        pieces.push_back(std::move(pj));
    }
    doc["pieces"] = std::move(pieces);
    json cases;
    for (const auto& [edge, tag] : res.edge_cases) cases[std::to_string(edge)] = to_string(tag);
    doc["edge_cases"] = std::move(cases);
    doc["stats"] = {{"original_edges", res.stats.original_edges},
                    {"bridge_segments", res.stats.bridge_segments},
                    {"collar_arcs", res.stats.collar_arcs},
                    {"total_length", res.stats.total_length},
                    {"untouched", res.untouched}};
    doc["verify"] = {{"pass", ver.pass},
                     {"min_margin", ver.min_margin},
                     {"samples", ver.samples_checked}};
    (void)inst;
    return doc;
}

Polyline path_from_route_file(const std::string& path, std::size_t dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open route file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid route JSON: ") + e.what());
    }
    if (!doc.contains("path") || !doc["path"].is_array())
        throw ParseError("route file must contain a \"path\" array");
    Polyline p;
    for (const auto& v : doc["path"]) {
        Point pt;
        for (const auto& c : v) pt.coords.push_back(c.get<double>());
        if (pt.dim() != dim) throw ParseError("route point dimension mismatch");
        p.vertices.push_back(std::move(pt));
    }
    return p;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

RouteResult pieces_from_route_file(const std::string& path, std::size_t dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open route file: " + path);
    json doc = json::parse(in, nullptr, true);
    RouteResult res;
    if (doc.contains("pieces")) {
        for (const auto& pj : doc["pieces"]) {
            RoutePiece piece;
            const std::string kind = pj.value("kind", "original_edge");
            if (kind == "bridge_segment") piece.kind = RoutePiece::Kind::bridge_segment;
            else if (kind == "collar_arc") piece.kind = RoutePiece::Kind::collar_arc;
            for (const auto& v : pj["points"]) {
                Point pt;
                for (const auto& c : v) pt.coords.push_back(c.get<double>());
                if (pt.dim() != dim) throw ParseError("route point dimension mismatch");
                piece.points.vertices.push_back(std::move(pt));
            }
            res.pieces.push_back(std::move(piece));
        }
    }
    return res;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "polyroute: reroute polygonal paths around open obstacles in normed spaces.\n"
        "Exit codes: 0 ok, 1 usage, 2 parse, 3 instance, 4 hypothesis validation,\n"
        "5 finite-crossing violation, 6 bad endpoints, 7 schedule, 8 engine,\n"
        "9 verification failure, 10 unsupported, 11 generation."};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate a random disc instance");
    std::uint64_t seed = 1;
    GenParams params;
    std::string gen_out = "instance.json";
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--count", params.count, "number of disc obstacles");
    gen->add_option("--dim", params.dim, "dimension (>= 2)");
    gen->add_option("--rmin", params.radius_min, "minimum radius");
    gen->add_option("--rmax", params.radius_max, "maximum radius");
    gen->add_option("--min-gap", params.min_gap, "required closure separation");
    double gen_lo = -10.0, gen_hi = 10.0;
    gen->add_option("--lo", gen_lo, "region lower bound (all axes)");
    gen->add_option("--hi", gen_hi, "region upper bound (all axes)");
    gen->add_option("-o,--out", gen_out, "output instance file");

    // --- validate ---
    auto* validate = app.add_subcommand("validate", "check the obstacle-family hypotheses");
    std::string val_path;
    ToleranceFlags val_tol;
    validate->add_option("instance", val_path, "instance file")->required();
    val_tol.add_to(validate);

    // --- check-um ---
    auto* check = app.add_subcommand("check-um", "check the finite-crossing property");
    std::string chk_path, chk_poly;
    ToleranceFlags chk_tol;
    check->add_option("instance", chk_path, "instance file")->required();
    check->add_option("--polyline", chk_poly, "query polyline \"x,y;x,y;...\"");
    chk_tol.add_to(check);

    // --- route ---
    auto* route = app.add_subcommand("route", "reroute a polyline around the obstacles");
    std::string rt_path, rt_poly, rt_out = "route.json", rt_svg;
    double rt_step = 0.0;
    ToleranceFlags rt_tol;
    route->add_option("instance", rt_path, "instance file")->required();
    route->add_option("--polyline", rt_poly, "query polyline \"x,y;x,y;...\"");
    route->add_option("-o,--out", rt_out, "output route file");
    route->add_option("--svg", rt_svg, "also render the scene to this SVG file");
    route->add_option("--step", rt_step, "verification sampling step (default min delta/20)");
    rt_tol.add_to(route);

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "verify a route file against an instance");
    std::string vf_inst, vf_route;
    double vf_step = 0.0;
    ToleranceFlags vf_tol;
    verify->add_option("instance", vf_inst, "instance file")->required();
    verify->add_option("route", vf_route, "route file")->required();
    verify->add_option("--step", vf_step, "sampling step (default min delta/20)");
    vf_tol.add_to(verify);

    // --- plot ---
    auto* plot = app.add_subcommand("plot", "render a 2D instance (and optional route) to SVG");
    std::string pl_inst, pl_route, pl_out = "scene.svg";
    plot->add_option("instance", pl_inst, "instance file")->required();
    plot->add_option("--route", pl_route, "route file to overlay");
    plot->add_option("-o,--out", pl_out, "output SVG file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            params.region = BoxRegion{Point{std::vector<double>(params.dim, gen_lo)},
                                      Point{std::vector<double>(params.dim, gen_hi)}};
            LoadedInstance li;
            li.inst = generate(seed, params);
            save_instance_file(li, gen_out);
            std::cout << "wrote " << gen_out << " (" << li.inst.obstacles.size()
                      << " obstacles)\n";
            return kOk;
        }

        if (*validate) {
            LoadedInstance li = load_instance_file(val_path);
            val_tol.apply(li.inst);
            const ValidationReport rep = validate_family(li.inst);
            for (const auto& [id, delta] : rep.deltas)
                std::cout << "obstacle " << id << ": collar width " << delta << "\n";
            std::cout << (rep.pass ? "valid: " : "invalid: ") << rep.summary() << "\n";
            return rep.pass ? kOk : kValidation;
        }

        if (*check) {
            LoadedInstance li = load_instance_file(chk_path);
            chk_tol.apply(li.inst);
            const Polyline p = normalize(query_for(li, chk_poly));
            const UMReport rep = check_um(p, li.inst);
            for (std::size_t e = 0; e < rep.edge_crossing_counts.size(); ++e)
                std::cout << "edge " << e + 2 << ": " << rep.edge_crossing_counts[e]
                          << " boundary crossings\n";
            for (const auto& v : rep.violations)
                std::cout << "violation on edge " << v.edge << " vs obstacle " << v.obstacle_id
                          << ": " << v.detail << "\n";
            std::cout << (rep.pass ? "finite-crossing property holds\n"
                                   : "finite-crossing property fails\n");
            return rep.pass ? kOk : kUM;
        }

        if (*route) {
            LoadedInstance li = load_instance_file(rt_path);
            rt_tol.apply(li.inst);
            const Polyline p = normalize(query_for(li, rt_poly));

            const ValidationReport val = validate_family(li.inst);
            if (!val.pass) {
                std::cerr << "instance invalid: " << val.summary() << "\n";
                return kValidation;
            }
            const UMReport um = check_um(p, li.inst);
            if (!um.pass) {
                std::cerr << "finite-crossing property fails: " << um.violations.front().detail
                          << "\n";
                return kUM;
            }
            const RouteResult res = assemble_route(p.front(), p.back(), p, li.inst);
            const double delta = li.inst.obstacles.empty() ? 1.0 : min_collar_delta(li.inst);
            const double step = rt_step > 0.0 ? rt_step : delta / 20.0;
            const VerifyReport ver = verify_route(res.path, li.inst, step);
            write_text_file(rt_out, route_json(res, ver, li.inst).dump(2) + "\n");
            if (!rt_svg.empty()) {
                RouteResult copy = res;
                write_text_file(rt_svg, render_svg(li.inst, p, &copy));
            }
            if (!ver.pass) {
                std::cerr << "verification failed: " << ver.violations.size()
                          << " violations, min margin " << ver.min_margin << "\n";
                return kVerifyFail;
            }
            std::cout << "wrote " << rt_out << ": " << res.pieces.size() << " pieces, length "
                      << res.stats.total_length << ", min margin " << ver.min_margin << "\n";
            return kOk;
        }

        if (*verify) {
            LoadedInstance li = load_instance_file(vf_inst);
            vf_tol.apply(li.inst);
            const Polyline p = path_from_route_file(vf_route, li.inst.dim);
            const double delta = li.inst.obstacles.empty() ? 1.0 : min_collar_delta(li.inst);
            const double step = vf_step > 0.0 ? vf_step : delta / 20.0;
            const VerifyReport rep = verify_route(p, li.inst, step);
            std::cout << "samples " << rep.samples_checked << ", min margin " << rep.min_margin
                      << ", violations " << rep.violations.size() << "\n";
            return rep.pass ? kOk : kVerifyFail;
        }

        if (*plot) {
            LoadedInstance li = load_instance_file(pl_inst);
            std::optional<RouteResult> res;
            if (!pl_route.empty()) res = pieces_from_route_file(pl_route, li.inst.dim);
            write_text_file(pl_out,
                            render_svg(li.inst, li.query, res ? &*res : nullptr));
            std::cout << "wrote " << pl_out << "\n";
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        const auto* err = dynamic_cast<const Error*>(&e);
        return err ? code_for(e) : kEngine;
    }
    return kUsage;
}
