#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "obstacles.hpp"

namespace polyroute {

// ---------------------------------------------------------------------------
// Deterministic random numbers
// ---------------------------------------------------------------------------

// mt19937_64 with explicit uniform mappings; std::uniform_*_distribution is
// implementation-defined and would break cross-platform determinism.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t bits() { return eng_(); }
    std::size_t index(std::size_t n) { return (std::size_t)(uniform01() * (double)n) % n; }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Instance file format (JSON)
// ---------------------------------------------------------------------------

struct LoadedInstance {
    Instance inst;
    std::optional<Polyline> query;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok)
            throw ParseError("unknown field \"" + item.key() + "\" in " + where);
    }
}

inline Point parse_point(const json& arr, std::size_t dim, const std::string& where) {
    if (!arr.is_array() || arr.size() != dim)
        throw ParseError(where + " must be an array of " + std::to_string(dim) + " numbers");
    Point p;
    p.coords.reserve(dim);
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError(where + " must contain numbers only");
        p.coords.push_back(v.get<double>());
    }
    if (!all_finite(p)) throw ParseError(where + " must contain finite numbers");
    return p;
}

inline json dump_point(const Point& p) {
    json arr = json::array();
    for (double c : p.coords) arr.push_back(c);
    return arr;
}

} // namespace detail

inline LoadedInstance load_instance(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance file must be a JSON object");
    detail::reject_unknown_keys(
        doc, {"version", "dim", "norm", "region", "obstacles", "tolerances", "query"}, "instance");

    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != 1)
        throw ParseError("field \"version\" must be the integer 1");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ParseError("field \"dim\" must be an integer");

    LoadedInstance out;
    Instance& inst = out.inst;
    const long long dim_raw = doc["dim"].get<long long>();
    if (dim_raw < 2)
        throw InstanceError("dimension must be at least 2 (one-dimensional instances are "
                            "rejected: a removed interval disconnects the line)");
    inst.dim = (std::size_t)dim_raw;

    if (!doc.contains("norm") || !doc["norm"].is_object())
        throw ParseError("field \"norm\" must be an object");
    {
        const json& n = doc["norm"];
        detail::reject_unknown_keys(n, {"kind", "p", "weights"}, "norm");
        const std::string kind = n.value("kind", "");
        if (kind == "lp") {
            inst.norm = NormSpec::lp(n.value("p", 2.0));
        } else if (kind == "max") {
            inst.norm = NormSpec::linf();
        } else if (kind == "weighted_lp") {
            if (!n.contains("weights")) throw ParseError("weighted_lp norm requires \"weights\"");
            std::vector<double> w;
            for (const auto& v : n["weights"]) w.push_back(v.get<double>());
            inst.norm = NormSpec::weighted(n.value("p", 2.0), std::move(w));
        } else {
            throw ParseError("norm kind must be one of \"lp\", \"max\", \"weighted_lp\"");
        }
    }

    if (!doc.contains("region") || !doc["region"].is_object())
        throw ParseError("field \"region\" must be an object");
    detail::reject_unknown_keys(doc["region"], {"lo", "hi"}, "region");
    inst.region.lo = detail::parse_point(doc["region"]["lo"], inst.dim, "region.lo");
    inst.region.hi = detail::parse_point(doc["region"]["hi"], inst.dim, "region.hi");

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        detail::reject_unknown_keys(t, {"class_eps", "t_eps", "sep"}, "tolerances");
        inst.tol.class_eps = t.value("class_eps", inst.tol.class_eps);
        inst.tol.t_eps = t.value("t_eps", inst.tol.t_eps);
        inst.tol.sep = t.value("sep", inst.tol.sep);
    }

    if (!doc.contains("obstacles") || !doc["obstacles"].is_array())
        throw ParseError("field \"obstacles\" must be an array");
    for (std::size_t i = 0; i < doc["obstacles"].size(); ++i) {
        const json& o = doc["obstacles"][i];
        const std::string where = "obstacles[" + std::to_string(i) + "]";
        if (!o.is_object()) throw ParseError(where + " must be an object");
        detail::reject_unknown_keys(o, {"id", "shape", "center", "radius", "lo", "hi"}, where);
        const int id = o.value("id", (int)i);
        const std::string shape = o.value("shape", "");
        if (shape == "ball") {
            if (!o.contains("center") || !o.contains("radius"))
                throw ParseError(where + ": ball requires \"center\" and \"radius\"");
            inst.obstacles.push_back(Obstacle::make_ball(
                id, detail::parse_point(o["center"], inst.dim, where + ".center"),
                o["radius"].get<double>()));
        } else if (shape == "box") {
            if (!o.contains("lo") || !o.contains("hi"))
                throw ParseError(where + ": box requires \"lo\" and \"hi\"");
            inst.obstacles.push_back(
                Obstacle::make_box(id, detail::parse_point(o["lo"], inst.dim, where + ".lo"),
                                   detail::parse_point(o["hi"], inst.dim, where + ".hi")));
        } else {
            throw ParseError(where + ": shape must be \"ball\" or \"box\"");
        }
    }

    if (doc.contains("query")) {
        const json& q = doc["query"];
        detail::reject_unknown_keys(q, {"polyline"}, "query");
        if (!q.contains("polyline") || !q["polyline"].is_array() || q["polyline"].size() < 2)
            throw ParseError("query.polyline must be an array of at least two points");
        Polyline p;
        for (std::size_t i = 0; i < q["polyline"].size(); ++i)
            p.vertices.push_back(detail::parse_point(
                q["polyline"][i], inst.dim, "query.polyline[" + std::to_string(i) + "]"));
        out.query = std::move(p);
    }

    inst.validate_basic();
    return out;
}

inline std::string save_instance(const LoadedInstance& li) {
    using detail::json;
    const Instance& inst = li.inst;
    json doc;
    doc["version"] = 1;
    doc["dim"] = inst.dim;
    switch (inst.norm.kind) {
        case NormSpec::Kind::lp:
            doc["norm"] = {{"kind", "lp"}, {"p", inst.norm.p}};
            break;
        case NormSpec::Kind::max:
            doc["norm"] = {{"kind", "max"}};
            break;
        case NormSpec::Kind::weighted_lp:
            doc["norm"] = {{"kind", "weighted_lp"}, {"p", inst.norm.p},
                           {"weights", inst.norm.weights}};
            break;
    }
    doc["region"] = {{"lo", detail::dump_point(inst.region.lo)},
                     {"hi", detail::dump_point(inst.region.hi)}};
    doc["tolerances"] = {{"class_eps", inst.tol.class_eps},
                         {"t_eps", inst.tol.t_eps},
                         {"sep", inst.tol.sep}};
    doc["obstacles"] = json::array();
    for (const auto& ob : inst.obstacles) {
        json o;
        o["id"] = ob.id;
        if (ob.shape == Obstacle::Shape::ball) {
            o["shape"] = "ball";
            o["center"] = detail::dump_point(ob.center);
            o["radius"] = ob.radius;
        } else {
            o["shape"] = "box";
            o["lo"] = detail::dump_point(ob.lo);
            o["hi"] = detail::dump_point(ob.hi);
        }
        doc["obstacles"].push_back(std::move(o));
    }
    if (li.query) {
        json pts = json::array();
        for (const auto& v : li.query->vertices) pts.push_back(detail::dump_point(v));
        doc["query"] = {{"polyline", std::move(pts)}};
    }
    return doc.dump(2) + "\n";
}

inline LoadedInstance load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_instance(ss.str());
}

inline void save_instance_file(const LoadedInstance& li, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write instance file: " + path);
    out << save_instance(li);
}

// ---------------------------------------------------------------------------
// Seeded generation
// ---------------------------------------------------------------------------

struct GenParams {
    std::size_t dim = 2;
    std::size_t count = 5;
    NormSpec norm = NormSpec::l2();
    double radius_min = 0.3;
    double radius_max = 1.2;
    BoxRegion region{Point{-10.0, -10.0}, Point{10.0, 10.0}};
    double min_gap = 0.1;  // closure separation enforced between samples
    TolerancePolicy tol;
};

// Rejection-samples disc obstacles until closures are pairwise separated and
// clear of the region boundary; bit-identical across runs for a fixed seed.
inline Instance generate(std::uint64_t seed, const GenParams& params) {
    if (params.dim < 2) throw InstanceError("dimension must be at least 2");
    if (!(params.radius_min > 0.0 && params.radius_max >= params.radius_min))
        throw GenerationError("radius range must satisfy 0 < min <= max");
    if (params.min_gap < 4.0 * params.tol.sep)
        throw GenerationError("min_gap must be at least 4*sep");

    // Feasibility heuristic: the bounding boxes of the requested obstacles
    // must not exceed ~30% of the region volume.
    double region_vol = 1.0, ob_vol = 1.0;
    for (std::size_t j = 0; j < params.dim; ++j)
        region_vol *= params.region.hi[j] - params.region.lo[j];
    for (std::size_t j = 0; j < params.dim; ++j) ob_vol *= 2.0 * params.radius_max;
    if ((double)params.count * ob_vol > 0.3 * region_vol)
        throw GenerationError("requested obstacle density exceeds the 30% area heuristic");

    Instance inst;
    inst.dim = params.dim;
    inst.norm = params.norm;
    inst.region = params.region;
    inst.tol = params.tol;

    Rng rng(seed);
    std::size_t rejections = 0;
    while (inst.obstacles.size() < params.count) {
        const double r = rng.uniform(params.radius_min, params.radius_max);
        Point c;
        c.coords.resize(params.dim);
        bool ok = true;
        for (std::size_t j = 0; j < params.dim; ++j) {
            const double margin = (r + params.min_gap) / inst.norm.axis_scale(j);
            const double lo = params.region.lo[j] + margin;
            const double hi = params.region.hi[j] - margin;
            if (!(lo < hi)) {
                ok = false;
                break;
            }
            c[j] = rng.uniform(lo, hi);
        }
        Obstacle cand = Obstacle::make_ball((int)inst.obstacles.size(), std::move(c), r);
        if (ok)
            for (const auto& prev : inst.obstacles)
                if (closure_gap(cand, prev, inst) < params.min_gap) {
                    ok = false;
                    break;
                }
        if (ok) {
            inst.obstacles.push_back(std::move(cand));
        } else if (++rejections >= 10000) {
            throw GenerationError("gave up after 10000 rejected samples; lower the density");
        }
    }
    return inst;
}

// A seeded query polyline whose endpoints keep the requested clearance from
// every obstacle closure; intermediate vertices roam freely (they may land
// inside obstacles).
inline Polyline random_query(std::uint64_t seed, const Instance& inst, std::size_t n_vertices,
                             double endpoint_clearance) {
    if (n_vertices < 2) throw ParameterError("a query polyline needs at least two vertices");
    Rng rng(seed);
    const double pad = 1e-3;
    auto sample_point = [&](bool clear) {
        for (int tries = 0; tries < 10000; ++tries) {
            Point p;
            p.coords.resize(inst.dim);
            for (std::size_t j = 0; j < inst.dim; ++j) {
                const double w = (inst.region.hi[j] - inst.region.lo[j]) * pad;
                p[j] = rng.uniform(inst.region.lo[j] + w, inst.region.hi[j] - w);
            }
            if (!clear) return p;
            bool ok = true;
            for (const auto& ob : inst.obstacles)
                if (obstacle_margin(p, ob, inst) < endpoint_clearance) ok = false;
            if (ok) return p;
        }
        throw GenerationError("could not sample a clear query endpoint");
    };
    Polyline p;
    p.vertices.push_back(sample_point(true));
    for (std::size_t i = 0; i + 2 < n_vertices; ++i) p.vertices.push_back(sample_point(false));
    p.vertices.push_back(sample_point(true));
    return p;
}

} // namespace polyroute
