#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nk/walker.hpp"

using namespace nk;

namespace {

WalkSpec1D killed_unit_interval(double x0, double dt = 1e-4) {
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.right = 1.0;
    spec.x0 = x0;
    spec.dt = dt;
    spec.mode = BoundaryMode::Kill;
    return spec;
}

// one-sample Kolmogorov-Smirnov distance against a CDF
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double c = cdf(xs[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

}  // namespace

TEST_CASE("killed interval mean exit time") {
    auto spec = killed_unit_interval(0.5);
    MCOptions opt;
    opt.paths = 20000;
    opt.seed = 42;
    auto est = mean_exit_time(spec, TimeChangeTag::None, nullptr, opt);
    CHECK(est.censored == 0);
    CHECK(std::abs(est.stat.mean - 0.125) < 3.0 * est.stat.se);
    // off-center start
    spec.x0 = 0.25;
    auto est2 = mean_exit_time(spec, TimeChangeTag::None, nullptr, opt);
    CHECK(std::abs(est2.stat.mean - 0.25 * 0.75 / 2.0) < 3.0 * est2.stat.se);
}

TEST_CASE("start validation") {
    auto spec = killed_unit_interval(1.5);
    CHECK_THROWS_AS(simulate_base_path(spec, 1.0, 7), std::domain_error);
}

TEST_CASE("local time accumulates at the calibrated rate") {
    // reflected walk on [0, inf) started at the boundary: E[gamma_t] should
    // track E|X_t| = 2 sqrt(t/pi) for the generator Laplacian
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.half_line = true;
    spec.x0 = 0.0;
    spec.dt = 1e-4;
    spec.mode = BoundaryMode::Reflect;
    const double t = 1.0;
    const int n = 4000;
    std::vector<double> g(n);
    parallel_for(n, 0, [&](std::size_t i) {
        auto rec = simulate_base_path(spec, t, path_seed(99, i));
        g[i] = rec.local_time(t);
    });
    auto m = mean_se(g);
    const double expect = 2.0 * std::sqrt(t / std::numbers::pi);
    CHECK(std::abs(m.mean - expect) / expect < 0.10);
}

TEST_CASE("elastic weight equals the resampled kill oracle") {
    // survival with weight e^{-kappa gamma_t} versus brute-force killing at an
    // independent exponential local-time threshold
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.right = 1.0;
    spec.x0 = 0.5;
    spec.dt = 1e-4;
    spec.mode = BoundaryMode::Elastic;
    spec.c = 1.0;
    spec.sigma = 1.0;
    const double t = 0.5;
    const int n = 6000;
    std::vector<double> weights(n), kills(n);
    parallel_for(n, 0, [&](std::size_t i) {
        auto rec = simulate_base_path(spec, t, path_seed(7, i));
        weights[i] = std::exp(-rec.local_time(t));
        Rng th(path_seed(1234567, i));
        kills[i] = rec.local_time(t) < th.exponential(1.0) ? 1.0 : 0.0;
    });
    auto a = mean_se(weights);
    auto b = mean_se(kills);
    CHECK(agree_within_se(a, b, 3.0));
}

TEST_CASE("linear clock changes nothing") {
    auto spec = killed_unit_interval(0.5);
    auto lin = BernsteinSymbol::linear();
    auto s1 = time_change_L(spec, lin, 0.05, 31);
    auto rec = simulate_base_path(spec, 0.05, path_seed(31, 11));
    CHECK(s1.position == doctest::Approx(rec.position(0.05)));
    CHECK(s1.alive == rec.alive_at(0.05));
}

TEST_CASE("coupled-resolution pair shares its randomness") {
    auto spec = killed_unit_interval(0.5, 2e-4);
    auto [fine, coarse] = simulate_coupled_pair(spec, 0.25, 77);
    // the coarse path is the fine path observed on the doubled grid as long
    // as neither died; with dt this small both die at nearly the same time
    if (fine.killed() && coarse.killed())
        CHECK(std::abs(fine.lifetime - coarse.lifetime) < 0.05);
    REQUIRE(coarse.pos.size() > 4);
    // positions agree exactly while both paths are interior
    bool agreed = true;
    for (std::size_t k = 0; k < std::min<std::size_t>(coarse.pos.size(), 32); ++k)
        if (2 * k < fine.pos.size() &&
            std::abs(coarse.pos[k] - fine.pos[2 * k]) > 1e-12)
            agreed = false;
    CHECK(agreed);
}

TEST_CASE("sticky boundary produces plateaus, eta=0 does not") {
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.right = 1.0;
    spec.x0 = 0.3;
    spec.dt = 5e-4;
    spec.mode = BoundaryMode::StickyNonlocal;
    spec.eta = 1.0;
    spec.sigma = 1.0;
    spec.c = 0.0;
    spec.time_symbol = BernsteinSymbol::linear();  // alpha = 1: sticky BM
    const double t = 0.5;
    const int n = 3000;
    int stuck = 0;
    for (int i = 0; i < n; ++i) {
        auto s = sticky_elastic_path(spec, t, path_seed(5, i));
        if (s.at_boundary) ++stuck;
    }
    double frac = static_cast<double>(stuck) / n;
    CHECK(frac > 0.05);

    spec.eta = 0.0;
    spec.time_symbol.reset();
    int stuck0 = 0;
    for (int i = 0; i < n; ++i) {
        auto s = sticky_elastic_path(spec, t, path_seed(5, i));
        if (s.at_boundary) ++stuck0;
    }
    CHECK(static_cast<double>(stuck0) / n < 0.01);
}

TEST_CASE("eta=0 sticky reduces to the elastic walk") {
    WalkSpec1D sticky;
    sticky.left = 0.0;
    sticky.right = 1.0;
    sticky.x0 = 0.4;
    sticky.dt = 5e-4;
    sticky.mode = BoundaryMode::StickyNonlocal;
    sticky.eta = 0.0;
    sticky.sigma = 1.0;
    sticky.c = 1.0;
    const double t = 0.4;
    const int n = 4000;
    auto f = [](const TerminalSample& s) {
        return s.weight * std::cos(std::numbers::pi * s.position);
    };
    auto a = mc_mean_custom(n, 400, 0,
                            [&](std::uint64_t ps) { return sticky_elastic_path(sticky, t, ps); },
                            f);
    WalkSpec1D elastic = sticky;
    elastic.mode = BoundaryMode::Elastic;
    auto b = mc_mean(elastic, TimeChangeTag::None, nullptr, t, f, {n, 500, 0, 2.0});
    CHECK(agree_within_se(a.stat, b.stat, 3.0));
}

TEST_CASE("hat process and sticky-elastic representations agree") {
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.right = 1.0;
    spec.x0 = 0.5;
    spec.dt = 5e-4;
    spec.mode = BoundaryMode::StickyNonlocal;
    spec.eta = 1.0;
    spec.sigma = 1.0;
    spec.c = 0.0;
    spec.time_symbol = BernsteinSymbol::stable(0.5);
    const double t = 0.5;
    const int n = 4000;
    auto f = [](const TerminalSample& s) {
        return s.weight * std::cos(std::numbers::pi * s.position);
    };
    auto rep2 = mc_mean_custom(
        n, 61, 0, [&](std::uint64_t ps) { return sticky_elastic_path(spec, t, ps); }, f);
    auto rep1 = mc_mean_custom(
        n, 62, 0, [&](std::uint64_t ps) { return hat_process_path(spec, t, ps); }, f);
    CHECK(agree_within_se(rep1.stat, rep2.stat, 3.0));
}

TEST_CASE("jump-and-stop boundary behavior") {
    WalkSpec1D spec;
    spec.left = 0.0;
    spec.half_line = true;
    spec.x0 = 0.2;
    spec.dt = 5e-4;
    spec.mode = BoundaryMode::JumpAndStop;
    spec.eta = 1.0;
    spec.sigma = 1.0;
    spec.time_symbol = BernsteinSymbol::stable(0.5);

    SUBCASE("linear space symbol reduces to the sticky construction") {
        spec.space_symbol = BernsteinSymbol::linear();
        auto s = jump_and_stop_path(spec, 0.3, 17);
        CHECK(s.position >= 0.0);
        // no ladder jumps ever fire
        std::vector<double> jumps;
        for (int i = 0; i < 200; ++i)
            jump_and_stop_path(spec, 0.3, path_seed(3, i), &jumps);
        CHECK(jumps.empty());
    }
    SUBCASE("Caputo-Fabrizio space symbol: exponential jump law") {
        spec.space_symbol = BernsteinSymbol::caputo_fabrizio(0.5);  // theta = 1
        std::vector<double> jumps;
        for (int i = 0; i < 3000 && jumps.size() < 2000; ++i)
            jump_and_stop_path(spec, 0.3, path_seed(23, i), &jumps);
        REQUIRE(jumps.size() >= 500);
        jumps.resize(500);
        double d = ks_distance(jumps, [](double x) { return 1.0 - std::exp(-x); });
        // 5% critical value for n=500
        CHECK(d < 1.36 / std::sqrt(500.0));
        // composite position never touches the boundary after a jump
        auto s = jump_and_stop_path(spec, 0.3, 4242);
        CHECK(s.position >= 0.0);
    }
    SUBCASE("truncated power-law jumps: count scales with the threshold") {
        auto count_jumps = [&](double threshold, std::uint64_t seed) {
            WalkSpec1D s2 = spec;
            s2.space_symbol = BernsteinSymbol::compound_poisson(
                std::pow(threshold, -0.5) * 0.5 * 2.0,
                JumpLaw::pareto(0.5, threshold));
            std::vector<double> jumps;
            for (int i = 0; i < 300; ++i)
                jump_and_stop_path(s2, 0.3, path_seed(seed, i), &jumps);
            return static_cast<double>(jumps.size());
        };
        double n1 = count_jumps(0.01, 1000);
        double n2 = count_jumps(0.0025, 2000);
        // rate quadruples the arrival intensity^(1/2): expect roughly 2x jumps
        CHECK(n2 / n1 > 1.4);
        CHECK(n2 / n1 < 2.8);
    }
}

TEST_CASE("classification of time-changed lifetimes") {
    auto spec = killed_unit_interval(0.5, 2e-4);
    MCOptions opt;
    opt.paths = 8000;
    opt.seed = 9;
    SUBCASE("linear is neutral") {
        auto r = classify_delay(spec, BernsteinSymbol::linear(),
                                TimeChangeTag::InverseL, opt);
        CHECK(r.verdict == DelayVerdict::Neutral);
    }
    SUBCASE("stable inverse is flagged infinite-mean without simulation") {
        auto r = classify_delay(spec, BernsteinSymbol::stable(0.5),
                                TimeChangeTag::InverseL, opt);
        CHECK(r.verdict == DelayVerdict::InfiniteMean);
    }
    SUBCASE("gamma inverse rushes the interval walk") {
        auto r = classify_delay(spec, BernsteinSymbol::gamma(1.0, 2.0),
                                TimeChangeTag::InverseL, opt);
        CHECK(r.verdict == DelayVerdict::Rushed);
        CHECK(std::abs(r.changed.mean - 0.5 * r.base.mean) <
              3.0 * combined_se(r.base, r.changed));
    }
    SUBCASE("caputo-fabrizio inverse delays it") {
        auto r = classify_delay(spec, BernsteinSymbol::caputo_fabrizio(0.5),
                                TimeChangeTag::InverseL, opt);
        CHECK(r.verdict == DelayVerdict::Delayed);
    }
}

TEST_CASE("reproducibility across thread counts") {
    auto spec = killed_unit_interval(0.5, 2e-4);
    MCOptions a;
    a.paths = 2000;
    a.seed = 77;
    a.threads = 1;
    MCOptions b = a;
    b.threads = 8;
    auto ra = mean_exit_time(spec, TimeChangeTag::None, nullptr, a);
    auto rb = mean_exit_time(spec, TimeChangeTag::None, nullptr, b);
    CHECK(ra.stat.mean == rb.stat.mean);
    CHECK(ra.stat.se == rb.stat.se);
}

TEST_CASE("planar worlds") {
    SUBCASE("containment and area sanity") {
        auto world = World2D::rectangle(1.0, 1.0, std::nullopt, false);
        CHECK(world.contains({0.5, 0.5}));
        CHECK_FALSE(world.contains({1.5, 0.5}));
    }
    SUBCASE("ball at the start is absorbed immediately") {
        auto world = World2D::rectangle(1.0, 1.0, Circle{{0.5, 0.5}, 0.25}, false);
        auto r = walk_until_absorbed(world, {0.5, 0.6}, {}, 3);
        CHECK(r.absorbed);
        CHECK(r.time == 0.0);
    }
    SUBCASE("hitting a centered ball from a corner start") {
        auto world = World2D::rectangle(1.0, 1.0, Circle{{0.5, 0.5}, 0.1}, false);
        Walk2DOptions opt;
        opt.dt = 2e-4;
        std::vector<double> times(300);
        parallel_for(times.size(), 0, [&](std::size_t i) {
            auto r = walk_until_absorbed(world, {0.05, 0.05}, opt, path_seed(8, i));
            REQUIRE(r.absorbed);
            times[i] = r.time;
        });
        auto m = mean_se(times);
        CHECK(m.mean > 0.05);
        CHECK(m.mean < 1.0);
    }
    SUBCASE("occupancy of the reflected walk is uniform") {
        auto world = World2D::rectangle(1.0, 1.0, std::nullopt, false);
        auto counts = reflected_occupancy(world, {0.3, 0.3}, 2e-4, 1.0, 801.0,
                                          0.25, 4, 4, 12345);
        double total = 0.0;
        for (auto c : counts) total += static_cast<double>(c);
        const double expect = total / 16.0;
        double chi2 = 0.0;
        for (auto c : counts) {
            double d = static_cast<double>(c) - expect;
            chi2 += d * d / expect;
        }
        // chi-square 5% critical value at 15 dof
        CHECK(chi2 < 24.996);
    }
    SUBCASE("trap scan on the unit square") {
        auto world = World2D::rectangle(1.0, 1.0, Circle{{0.5, 0.5}, 0.1}, false);
        std::vector<Vec2> starts{{0.1, 0.1}, {0.9, 0.9}, {0.1, 0.9}};
        Walk2DOptions opt;
        opt.dt = 5e-4;
        auto scan = trap_scan(world, starts, 200, opt, 55);
        for (const auto& row : scan.rows) {
            CHECK(row.censored == 0);
            CHECK(row.hitting_time.mean > 0.0);
            CHECK(row.hitting_time.mean < 2.0);
        }
        CHECK(scan.sup_estimate.mean >=
              scan.rows.front().hitting_time.mean - 1e-12);
    }
}

TEST_CASE("koch domain world with walls") {
    auto env = EnvironmentSequence::constant(3.0);
    auto dom = build_trapped_domain(4, env, 1, CurveOrientation::Outward,
                                    [](int) { return 0.5; });
    auto world = World2D::from_domain(dom, Circle{{0.5, 0.5}, 0.1}, false);
    CHECK(world.contains({0.5, 0.5}));
    Walk2DOptions opt;
    opt.dt = 2e-4;
    opt.adaptive = true;
    // start inside a bump, behind a wall
    Vec2 deep{0.5, -std::sqrt(1.0 / 12.0) * 0.8};
    REQUIRE(world.contains(deep));
    auto r = walk_until_absorbed(world, deep, opt, 99);
    CHECK(r.absorbed);
    CHECK(r.time > 0.0);
}
