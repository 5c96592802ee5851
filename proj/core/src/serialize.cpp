#include "nk/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nk {

using nlohmann::json;

json symbol_to_json(const BernsteinSymbol& sym) {
    switch (sym.kind()) {
        case SymbolKind::Stable:
            return {{"kind", "stable"}, {"alpha", sym.alpha()}};
        case SymbolKind::Gamma:
            return {{"kind", "gamma"}, {"a", sym.param1()}, {"b", sym.param2()}};
        case SymbolKind::CaputoFabrizio:
            return {{"kind", "caputo_fabrizio"}, {"alpha", sym.alpha()}};
        case SymbolKind::DriftedCF:
            return {{"kind", "drifted_cf"}, {"c", sym.param2()}, {"alpha", sym.alpha()}};
        case SymbolKind::TelegraphSum:
            return {{"kind", "telegraph_sum"}, {"alpha", sym.alpha()}};
        case SymbolKind::Tempered:
            return {{"kind", "tempered"}, {"mu", sym.param1()}};
        case SymbolKind::CompoundPoisson: {
            const auto& law = sym.jump_law();
            json jl;
            if (law.name() == "exponential")
                jl = {{"law", "exponential"}, {"rate", law.param(0)}};
            else if (law.name() == "mittag_leffler")
                jl = {{"law", "mittag_leffler"}, {"alpha", law.param(0)}, {"r", law.param(1)}};
            else if (law.name() == "point_mass")
                jl = {{"law", "point_mass"}, {"y", law.param(0)}};
            else if (law.name() == "pareto")
                jl = {{"law", "pareto"}, {"alpha", law.param(0)}, {"min", law.param(1)}};
            else
                throw std::invalid_argument(
                    "symbol_to_json: custom jump laws are not serializable");
            return {{"kind", "compound_poisson"}, {"rate", sym.param1()}, {"jump", jl}};
        }
        case SymbolKind::Linear:
            return {{"kind", "linear"}};
    }
    throw std::logic_error("symbol_to_json: unreachable");
}

JumpLaw jump_law_from_json(const json& j) {
    const std::string law = j.at("law").get<std::string>();
    if (law == "exponential") return JumpLaw::exponential(j.at("rate").get<double>());
    if (law == "mittag_leffler")
        return JumpLaw::mittag_leffler(j.at("alpha").get<double>(),
                                       j.at("r").get<double>());
    if (law == "point_mass") return JumpLaw::point_mass(j.at("y").get<double>());
    if (law == "pareto")
        return JumpLaw::pareto(j.at("alpha").get<double>(), j.at("min").get<double>());
    throw std::invalid_argument("jump_law_from_json: unknown law '" + law + "'");
}

BernsteinSymbol symbol_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "stable") return BernsteinSymbol::stable(j.at("alpha").get<double>());
    if (kind == "gamma")
        return BernsteinSymbol::gamma(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "caputo_fabrizio")
        return BernsteinSymbol::caputo_fabrizio(j.at("alpha").get<double>());
    if (kind == "drifted_cf")
        return BernsteinSymbol::drifted_cf(j.at("c").get<double>(),
                                           j.at("alpha").get<double>());
    if (kind == "telegraph_sum")
        return BernsteinSymbol::telegraph_sum(j.at("alpha").get<double>());
    if (kind == "tempered") return BernsteinSymbol::tempered(j.at("mu").get<double>());
    if (kind == "compound_poisson")
        return BernsteinSymbol::compound_poisson(j.at("rate").get<double>(),
                                                 jump_law_from_json(j.at("jump")));
    if (kind == "linear") return BernsteinSymbol::linear();
    throw std::invalid_argument("symbol_from_json: unknown kind '" + kind + "'");
}

json domain_to_json(const PrefractalDomain& dom) {
    json vertices = json::array();
    for (const auto& v : dom.boundary) vertices.push_back({v.x, v.y});
    json walls = json::array();
    for (const auto& w : dom.walls)
        walls.push_back({{w.a.x, w.a.y}, {w.b.x, w.b.y}});
    return {{"type", "prefractal_domain"},
            {"vertices", vertices},
            {"walls", walls},
            {"polygon_sides", dom.polygon_sides},
            {"level", dom.level},
            {"orientation",
             dom.orientation == CurveOrientation::Outward ? "outward" : "inward"},
            {"ells", dom.ells},
            {"sigma", dom.sigma_weight}};
}

PrefractalDomain domain_from_json(const json& j) {
    if (j.at("type").get<std::string>() != "prefractal_domain")
        throw std::invalid_argument("domain_from_json: wrong descriptor type");
    PrefractalDomain dom;
    for (const auto& v : j.at("vertices"))
        dom.boundary.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    for (const auto& w : j.value("walls", json::array()))
        dom.walls.push_back({{w.at(0).at(0).get<double>(), w.at(0).at(1).get<double>()},
                             {w.at(1).at(0).get<double>(), w.at(1).at(1).get<double>()},
                             1});
    dom.polygon_sides = j.value("polygon_sides", 0);
    dom.level = j.value("level", 0);
    dom.orientation = j.value("orientation", std::string("outward")) == "outward"
                          ? CurveOrientation::Outward
                          : CurveOrientation::Inward;
    if (j.contains("ells")) dom.ells = j.at("ells").get<std::vector<double>>();
    dom.sigma_weight = j.value("sigma", 1.0);
    if (dom.boundary.size() < 3)
        throw std::invalid_argument("domain_from_json: too few vertices");
    return dom;
}

namespace {

struct SvgFrame {
    double xmin, ymin, w, h;
};

SvgFrame frame_of(const std::vector<Vec2>& pts) {
    AABB box{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) box.grow(p);
    const double pad = 0.05 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    return {box.xmin - pad, box.ymin - pad, box.xmax - box.xmin + 2 * pad,
            box.ymax - box.ymin + 2 * pad};
}

void svg_open(std::ostringstream& os, const SvgFrame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << f.xmin << " "
       << -(f.ymin + f.h) << " " << f.w << " " << f.h << "\">\n";
}

void svg_polyline(std::ostringstream& os, const std::vector<Vec2>& pts,
                  const char* stroke, double width, bool close) {
    os << "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << (i == 0 ? 'M' : 'L') << pts[i].x << ' ' << -pts[i].y << ' ';
    if (close) os << 'Z';
    os << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
       << "\"/>\n";
}

}  // namespace

std::string domain_to_svg(const PrefractalDomain& dom) {
    std::ostringstream os;
    auto f = frame_of(dom.boundary);
    svg_open(os, f);
    svg_polyline(os, dom.boundary, "black", 0.002 * std::max(f.w, f.h) * 2, true);
    for (const auto& w : dom.walls)
        svg_polyline(os, {w.a, w.b}, "crimson", 0.003 * std::max(f.w, f.h) * 2,
                     false);
    os << "</svg>\n";
    return os.str();
}

std::string curve_to_svg(const std::vector<Vec2>& points) {
    std::ostringstream os;
    auto f = frame_of(points);
    svg_open(os, f);
    svg_polyline(os, points, "black", 0.002 * std::max(f.w, f.h) * 2, false);
    os << "</svg>\n";
    return os.str();
}

std::string paths_to_svg(const std::vector<std::vector<Vec2>>& traces,
                         const std::vector<Vec2>& boundary,
                         const std::vector<Segment>& walls) {
    std::ostringstream os;
    auto f = frame_of(boundary);
    svg_open(os, f);
    svg_polyline(os, boundary, "black", 0.002 * std::max(f.w, f.h) * 2, true);
    for (const auto& w : walls)
        svg_polyline(os, {w.a, w.b}, "crimson", 0.003 * std::max(f.w, f.h) * 2,
                     false);
    const char* palette[] = {"steelblue", "darkorange", "seagreen", "purple"};
    for (std::size_t i = 0; i < traces.size(); ++i)
        svg_polyline(os, traces[i], palette[i % 4],
                     0.0012 * std::max(f.w, f.h) * 2, false);
    os << "</svg>\n";
    return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string csv_provenance_line(std::uint64_t config_hash) {
    std::ostringstream os;
    os << "# tool=" << kToolName << " version=" << kToolVersion << " config="
       << std::hex << config_hash;
    return os.str();
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace nk
