#include "nk/koch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace nk {

namespace {

using cd = std::complex<double>;

void check_close(cd a, cd b, const char* what) {
    if (std::abs(a - b) > 1e-12)
        throw std::logic_error(std::string("build_family: chaining failed at ") + what);
}

}  // namespace

SimilitudeFamily build_family(double ell) {
    if (!(ell > 2.0 && ell < 4.0))
        throw std::domain_error("build_family: ell must be in (2,4)");
    SimilitudeFamily fam;
    fam.ell = ell;
    fam.theta = std::asin(std::sqrt(ell * (4.0 - ell)) / 2.0);
    const double h = std::sqrt(1.0 / ell - 0.25);
    const cd rot_pos = std::polar(1.0 / ell, fam.theta);
    // psi_3 must rotate by -theta for the pieces to chain end to end
    const cd rot_neg = std::polar(1.0 / ell, -fam.theta);
    fam.coeff[0] = 1.0 / ell;
    fam.shift[0] = 0.0;
    fam.coeff[1] = rot_pos;
    fam.shift[1] = 1.0 / ell;
    fam.coeff[2] = rot_neg;
    fam.shift[2] = cd(0.5, h);
    fam.coeff[3] = 1.0 / ell;
    fam.shift[3] = 1.0 - 1.0 / ell;

    const cd p1 = 0.0, p2 = 1.0;
    check_close(fam.apply(0, p1), p1, "psi1(P1)=P1");
    check_close(fam.apply(0, p2), fam.apply(1, p1), "psi1(P2)=psi2(P1)");
    check_close(fam.apply(1, p2), fam.apply(2, p1), "psi2(P2)=psi3(P1)");
    check_close(fam.apply(2, p2), fam.apply(3, p1), "psi3(P2)=psi4(P1)");
    check_close(fam.apply(3, p2), p2, "psi4(P2)=P2");
    return fam;
}

EnvironmentSequence EnvironmentSequence::deterministic(std::vector<double> ells) {
    if (ells.empty())
        throw std::invalid_argument("EnvironmentSequence: empty factor list");
    EnvironmentSequence env;
    env.fixed_ = std::move(ells);
    std::unordered_set<double> uniq(env.fixed_.begin(), env.fixed_.end());
    env.ells_.assign(uniq.begin(), uniq.end());
    std::sort(env.ells_.begin(), env.ells_.end());
    env.probs_.assign(env.ells_.size(), 0.0);
    for (double e : env.fixed_)
        for (std::size_t i = 0; i < env.ells_.size(); ++i)
            if (env.ells_[i] == e)
                env.probs_[i] += 1.0 / static_cast<double>(env.fixed_.size());
    return env;
}

EnvironmentSequence EnvironmentSequence::constant(double ell) {
    EnvironmentSequence env;
    env.ells_ = {ell};
    env.probs_ = {1.0};
    env.random_ = false;
    env.fixed_.clear();
    return env;
}

EnvironmentSequence EnvironmentSequence::iid(std::vector<double> ells,
                                             std::vector<double> probabilities,
                                             std::uint64_t seed) {
    if (ells.empty() || ells.size() != probabilities.size())
        throw std::invalid_argument("EnvironmentSequence: bad alphabet");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw std::invalid_argument("EnvironmentSequence: negative mass");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("EnvironmentSequence: probabilities must sum to 1");
    EnvironmentSequence env;
    env.ells_ = std::move(ells);
    env.probs_ = std::move(probabilities);
    env.random_ = true;
    env.seed_ = seed;
    return env;
}

std::vector<double> EnvironmentSequence::realize(int n) const {
    if (n < 0) throw std::invalid_argument("EnvironmentSequence::realize: n < 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (random_) {
        Rng rng = Rng::stream(seed_, 0xE11);
        for (int i = 0; i < n; ++i) {
            double u = rng.uniform();
            double acc = 0.0;
            double pick = ells_.back();
            for (std::size_t k = 0; k < ells_.size(); ++k) {
                acc += probs_[k];
                if (u <= acc) {
                    pick = ells_[k];
                    break;
                }
            }
            out.push_back(pick);
        }
        return out;
    }
    if (!fixed_.empty()) {
        if (static_cast<std::size_t>(n) > fixed_.size())
            throw std::invalid_argument(
                "EnvironmentSequence::realize: fixed list exhausted");
        out.assign(fixed_.begin(), fixed_.begin() + n);
        return out;
    }
    out.assign(static_cast<std::size_t>(n), ells_[0]);
    return out;
}

double EnvironmentSequence::mean_ell() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < ells_.size(); ++i) acc += probs_[i] * ells_[i];
    return acc;
}

double EnvironmentSequence::mean_log_ell() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < ells_.size(); ++i)
        acc += probs_[i] * std::log(ells_[i]);
    return acc;
}

namespace {

// One refinement sweep: each directed segment becomes the four generator
// segments; optionally records the triangle-mouth wall with an opening.
void refine(std::vector<Vec2>& pts, double ell, double opening,
            std::vector<Segment>* walls) {
    const double h = std::sqrt(1.0 / ell - 0.25);
    std::vector<Vec2> next;
    next.reserve((pts.size() - 1) * 4 + 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 a = pts[i];
        const Vec2 b = pts[i + 1];
        const Vec2 u = b - a;
        const Vec2 iu{-u.y, u.x};  // +i direction in the segment frame
        const Vec2 v1 = a + u * (1.0 / ell);
        const Vec2 v2 = a + u * 0.5 + iu * h;
        const Vec2 v3 = a + u * (1.0 - 1.0 / ell);
        next.push_back(a);
        next.push_back(v1);
        next.push_back(v2);
        next.push_back(v3);
        if (walls && opening < 1.0) {
            const Vec2 m = v3 - v1;
            const double lo = 0.5 - 0.5 * opening;
            const double hi = 0.5 + 0.5 * opening;
            walls->push_back({v1, v1 + m * lo, 1});
            walls->push_back({v1 + m * hi, v3, 1});
        }
    }
    next.push_back(pts.back());
    pts = std::move(next);
}

std::vector<Vec2> curve_points(const std::vector<double>& ells,
                               std::vector<Segment>* walls,
                               const OpeningSchedule* schedule) {
    std::vector<Vec2> pts{{0.0, 0.0}, {1.0, 0.0}};
    for (std::size_t k = 0; k < ells.size(); ++k) {
        double opening = 1.0;
        if (schedule) {
            opening = (*schedule)(static_cast<int>(k) + 1);
            if (!(opening > 0.0))
                throw std::domain_error("opening schedule: fraction must be > 0");
            opening = std::min(opening, 1.0);
        }
        refine(pts, ells[k], opening, walls);
    }
    return pts;
}

}  // namespace

PrefractalCurve generate_curve(const EnvironmentSequence& env, int level) {
    PrefractalCurve curve;
    curve.level = level;
    curve.ells = env.realize(level);
    curve.points = curve_points(curve.ells, nullptr, nullptr);
    return curve;
}

double PrefractalCurve::total_length() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        acc += (points[i + 1] - points[i]).norm();
    return acc;
}

double PrefractalDomain::boundary_length() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < boundary.size(); ++i)
        acc += (boundary[(i + 1) % boundary.size()] - boundary[i]).norm();
    return acc;
}

namespace {

// Affine image of the unit-segment curve onto the directed side a -> b.
// The outward variant is the mirror image: traverse the curve backwards and
// negate the bump direction, so bumps point right of travel (exterior).
Vec2 side_point(Vec2 a, Vec2 b, Vec2 p, bool mirror) {
    const Vec2 u = b - a;
    const Vec2 iu{-u.y, u.x};
    const double px = mirror ? 1.0 - p.x : p.x;
    const double sign = mirror ? -1.0 : 1.0;
    return a + u * px + iu * (sign * p.y);
}

void map_side(const std::vector<Vec2>& unit_curve, Vec2 a, Vec2 b, bool mirror,
              std::vector<Vec2>& out) {
    const std::size_t n = unit_curve.size();
    // skip the final point; consecutive sides share corners
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Vec2 p = mirror ? unit_curve[n - 1 - k] : unit_curve[k];
        out.push_back(side_point(a, b, p, mirror));
    }
}

std::vector<Vec2> regular_polygon(int m) {
    // walk with unit sides and exterior angle 2 pi / m; CCW, first side on +x
    std::vector<Vec2> v;
    Vec2 p{0.0, 0.0};
    double heading = 0.0;
    for (int i = 0; i < m; ++i) {
        v.push_back(p);
        p = p + Vec2{std::cos(heading), std::sin(heading)};
        heading += 2.0 * std::numbers::pi / m;
    }
    return v;
}

PrefractalDomain build_domain_impl(int m, const EnvironmentSequence& env, int level,
                                   CurveOrientation orientation,
                                   const OpeningSchedule* schedule) {
    if (m < 3) throw std::domain_error("build_domain: need at least 3 sides");
    if (level < 0) throw std::domain_error("build_domain: negative level");
    PrefractalDomain dom;
    dom.polygon_sides = m;
    dom.level = level;
    dom.orientation = orientation;
    dom.ells = env.realize(level);
    double prod = 1.0;
    for (double e : dom.ells) prod *= e;
    dom.sigma_weight = prod / std::pow(4.0, level);

    std::vector<Segment> unit_walls;
    auto unit_curve =
        curve_points(dom.ells, schedule ? &unit_walls : nullptr, schedule);

    const bool reverse = (orientation == CurveOrientation::Outward);
    auto corners = regular_polygon(m);
    for (int s = 0; s < m; ++s) {
        Vec2 a = corners[static_cast<std::size_t>(s)];
        Vec2 b = corners[static_cast<std::size_t>((s + 1) % m)];
        map_side(unit_curve, a, b, reverse, dom.boundary);
        // walls live in the same side frame
        for (const auto& w : unit_walls)
            dom.walls.push_back(
                {side_point(a, b, w.a, reverse), side_point(a, b, w.b, reverse), 1});
    }

    if (!polyline_is_simple(dom.boundary, true))
        throw std::runtime_error("build_domain: boundary self-intersects");
    if (polygon_area(dom.boundary) <= 0.0)
        throw std::runtime_error("build_domain: boundary must stay CCW");
    if (!dom.walls.empty()) {
        // walls may touch boundary vertices but never cross edges
        std::vector<Segment> bsegs;
        for (std::size_t i = 0; i < dom.boundary.size(); ++i)
            bsegs.push_back({dom.boundary[i],
                             dom.boundary[(i + 1) % dom.boundary.size()], 0});
        SegmentGrid grid(bsegs);
        std::vector<std::size_t> cand;
        for (const auto& w : dom.walls) {
            Vec2 d = w.b - w.a;
            double len = d.norm();
            if (len == 0.0) continue;
            // shrink slightly so shared endpoints do not register
            Vec2 a2 = w.a + d * (1e-9 / len);
            Vec2 d2 = d * (1.0 - 2e-9 / len);
            if (grid.first_hit(a2, d2))
                throw std::runtime_error("build_trapped_domain: wall crosses boundary");
        }
    }
    return dom;
}

}  // namespace

PrefractalDomain build_domain(int polygon_sides, const EnvironmentSequence& env,
                              int level, CurveOrientation orientation) {
    return build_domain_impl(polygon_sides, env, level, orientation, nullptr);
}

PrefractalDomain build_trapped_domain(int polygon_sides,
                                      const EnvironmentSequence& env, int level,
                                      CurveOrientation orientation,
                                      const OpeningSchedule& schedule) {
    if (!schedule) throw std::invalid_argument("build_trapped_domain: null schedule");
    return build_domain_impl(polygon_sides, env, level, orientation, &schedule);
}

double dimension_estimate(const std::vector<double>& ells) {
    if (ells.empty()) throw std::invalid_argument("dimension_estimate: empty");
    double acc = 0.0;
    for (double e : ells) acc += std::log(e);
    return std::log(4.0) * static_cast<double>(ells.size()) / acc;
}

double dimension_limit(const EnvironmentSequence& env) {
    return std::log(4.0) / env.mean_log_ell();
}

CellMeasure volume_measure_weight(const PrefractalCurve& curve,
                                  const std::vector<int>& word) {
    if (static_cast<int>(word.size()) != curve.level)
        throw std::invalid_argument("volume_measure_weight: word length != level");
    std::size_t idx = 0;
    for (int w : word) {
        if (w < 1 || w > 4)
            throw std::invalid_argument("volume_measure_weight: word symbols are 1..4");
        idx = idx * 4 + static_cast<std::size_t>(w - 1);
    }
    return CellMeasure{std::pow(0.25, curve.level), curve.points[idx],
                       curve.points[idx + 1]};
}

std::size_t box_count(const std::vector<Vec2>& points, double r) {
    if (!(r > 0.0)) throw std::domain_error("box_count: r must be > 0");
    std::unordered_set<std::uint64_t> boxes;
    auto mark = [&](Vec2 p) {
        auto ix = static_cast<std::int64_t>(std::floor(p.x / r));
        auto iy = static_cast<std::int64_t>(std::floor(p.y / r));
        boxes.insert((static_cast<std::uint64_t>(ix) << 32) ^
                     (static_cast<std::uint64_t>(iy) & 0xffffffffULL));
    };
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Vec2 a = points[i], b = points[i + 1];
        const double len = (b - a).norm();
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (0.25 * r))));
        for (int s = 0; s <= steps; ++s)
            mark(a + (b - a) * (static_cast<double>(s) / steps));
    }
    return boxes.size();
}

double box_dimension(const std::vector<Vec2>& points,
                     const std::vector<double>& scales) {
    if (scales.size() < 2)
        throw std::invalid_argument("box_dimension: need at least two scales");
    // least squares of log N against log(1/r)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double r : scales) {
        double x = std::log(1.0 / r);
        double y = std::log(static_cast<double>(box_count(points, r)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(scales.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nk
