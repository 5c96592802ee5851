#include <cmath>

#include "doctest.h"
#include "nk/serialize.hpp"

using namespace nk;
using nlohmann::json;

TEST_CASE("symbol JSON round trip") {
    // property-style sweep: every serializable kind round-trips through JSON
    // with identical evaluations
    std::vector<BernsteinSymbol> syms = {
        BernsteinSymbol::stable(0.37),
        BernsteinSymbol::gamma(1.5, 2.5),
        BernsteinSymbol::caputo_fabrizio(0.8),
        BernsteinSymbol::drifted_cf(0.7, 0.6),
        BernsteinSymbol::telegraph_sum(0.2),
        BernsteinSymbol::tempered(0.9),
        BernsteinSymbol::compound_poisson(2.0, JumpLaw::exponential(1.5)),
        BernsteinSymbol::compound_poisson(1.0, JumpLaw::mittag_leffler(0.5, 2.0)),
        BernsteinSymbol::compound_poisson(1.0, JumpLaw::point_mass(0.75)),
        BernsteinSymbol::compound_poisson(1.0, JumpLaw::pareto(1.5, 0.1)),
        BernsteinSymbol::linear()};
    for (const auto& sym : syms) {
        auto j = symbol_to_json(sym);
        auto back = symbol_from_json(j);
        CHECK(back.kind() == sym.kind());
        for (double lam : {0.3, 1.0, 4.7})
            CHECK(back.phi(lam) == doctest::Approx(sym.phi(lam)).epsilon(1e-12));
    }
}

TEST_CASE("symbol JSON schema errors") {
    CHECK_THROWS_AS(symbol_from_json(json{{"kind", "unknown"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_json(json{{"kind", "stable"}, {"alpha", 1.5}}),
                    std::domain_error);
    CHECK_THROWS(symbol_from_json(json{{"kind", "gamma"}, {"a", 1.0}}));
}

TEST_CASE("domain descriptor round trip") {
    auto env = EnvironmentSequence::constant(3.0);
    auto dom = build_trapped_domain(4, env, 2, CurveOrientation::Outward,
                                    [](int) { return 0.5; });
    auto j = domain_to_json(dom);
    auto back = domain_from_json(j);
    REQUIRE(back.boundary.size() == dom.boundary.size());
    REQUIRE(back.walls.size() == dom.walls.size());
    for (std::size_t i = 0; i < dom.boundary.size(); ++i) {
        CHECK(back.boundary[i].x == dom.boundary[i].x);
        CHECK(back.boundary[i].y == dom.boundary[i].y);
    }
    CHECK(back.level == 2);
    CHECK(back.sigma_weight == doctest::Approx(dom.sigma_weight));
    CHECK(back.orientation == CurveOrientation::Outward);
}

TEST_CASE("SVG export") {
    auto env = EnvironmentSequence::constant(3.0);
    auto curve = generate_curve(env, 2);
    auto svg = curve_to_svg(curve.points);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("viewBox") != std::string::npos);
    auto dom = build_trapped_domain(4, env, 1, CurveOrientation::Outward,
                                    [](int) { return 0.5; });
    auto dsvg = domain_to_svg(dom);
    CHECK(dsvg.find("crimson") != std::string::npos);  // walls styled apart
}

TEST_CASE("provenance helpers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    auto line = csv_provenance_line(fnv1a64("{}"));
    CHECK(line.rfind("# tool=nonlocal-koch", 0) == 0);
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    double v = 1.0 / 3.0;
    CHECK(std::stod(format_double(v)) == v);  // round trip
}
