#include "nk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nk {

double Vec2::norm() const { return std::sqrt(norm2()); }

void AABB::grow(Vec2 p) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
}

bool AABB::overlaps(const AABB& o) const {
    return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
}

std::optional<double> segment_hit_param(Vec2 p, Vec2 d, const Segment& s) {
    const Vec2 e = s.b - s.a;
    const double denom = d.cross(e);
    if (denom == 0.0) return std::nullopt;  // parallel
    const Vec2 w = s.a - p;
    const double t = w.cross(e) / denom;
    const double u = w.cross(d) / denom;
    if (t <= 1e-12 || t > 1.0) return std::nullopt;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

double point_segment_distance(Vec2 p, const Segment& s) {
    const Vec2 e = s.b - s.a;
    const double len2 = e.norm2();
    double t = len2 > 0.0 ? std::clamp((p - s.a).dot(e) / len2, 0.0, 1.0) : 0.0;
    return (p - (s.a + e * t)).norm();
}

SegmentGrid::SegmentGrid(const std::vector<Segment>& segments)
    : segments_(segments) {
    if (segments_.empty()) throw std::invalid_argument("SegmentGrid: no segments");
    bounds_ = {segments_[0].a.x, segments_[0].a.y, segments_[0].a.x, segments_[0].a.y};
    double total_len = 0.0;
    for (const auto& s : segments_) {
        bounds_.grow(s.a);
        bounds_.grow(s.b);
        total_len += (s.b - s.a).norm();
        vertices_.push_back(s.a);
        vertices_.push_back(s.b);
    }
    const double w = std::max(bounds_.xmax - bounds_.xmin, 1e-12);
    const double h = std::max(bounds_.ymax - bounds_.ymin, 1e-12);
    // aim for a few segments per cell
    const double mean_len = total_len / static_cast<double>(segments_.size());
    cell_ = std::clamp(2.0 * mean_len, 1e-6, std::max(w, h));
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
    // cap the table size
    while (static_cast<long long>(nx_) * ny_ > 4'000'000) {
        cell_ *= 2.0;
        nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
        ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
    }
    cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        AABB box{std::min(segments_[i].a.x, segments_[i].b.x),
                 std::min(segments_[i].a.y, segments_[i].b.y),
                 std::max(segments_[i].a.x, segments_[i].b.x),
                 std::max(segments_[i].a.y, segments_[i].b.y)};
        int i0, j0, i1, j1;
        cell_range(box, i0, j0, i1, j1);
        for (int jy = j0; jy <= j1; ++jy)
            for (int jx = i0; jx <= i1; ++jx)
                cells_[static_cast<std::size_t>(jy) * nx_ + jx].push_back(i);
    }
}

void SegmentGrid::cell_range(const AABB& box, int& i0, int& j0, int& i1,
                             int& j1) const {
    i0 = std::clamp(static_cast<int>((box.xmin - bounds_.xmin) / cell_), 0, nx_ - 1);
    j0 = std::clamp(static_cast<int>((box.ymin - bounds_.ymin) / cell_), 0, ny_ - 1);
    i1 = std::clamp(static_cast<int>((box.xmax - bounds_.xmin) / cell_), 0, nx_ - 1);
    j1 = std::clamp(static_cast<int>((box.ymax - bounds_.ymin) / cell_), 0, ny_ - 1);
}

void SegmentGrid::query(Vec2 p, Vec2 q, std::vector<std::size_t>& out) const {
    out.clear();
    AABB box{std::min(p.x, q.x), std::min(p.y, q.y), std::max(p.x, q.x),
             std::max(p.y, q.y)};
    int i0, j0, i1, j1;
    cell_range(box, i0, j0, i1, j1);
    for (int jy = j0; jy <= j1; ++jy)
        for (int jx = i0; jx <= i1; ++jx)
            for (std::size_t idx : cells_[static_cast<std::size_t>(jy) * nx_ + jx])
                out.push_back(idx);
    if ((i1 - i0 + 1) * (j1 - j0 + 1) > 1) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
}

std::optional<HitRecord> SegmentGrid::first_hit(Vec2 p, Vec2 d) const {
    query(p, p + d, scratch_);
    std::optional<HitRecord> best;
    for (std::size_t idx : scratch_) {
        auto t = segment_hit_param(p, d, segments_[idx]);
        if (!t) continue;
        if (!best || *t < best->t) {
            const Segment& s = segments_[idx];
            Vec2 e = s.b - s.a;
            Vec2 n{-e.y, e.x};
            double nn = n.norm();
            n = n * (1.0 / nn);
            if (n.dot(d) > 0.0) n = n * -1.0;  // face the incoming direction
            best = HitRecord{*t, p + d * (*t), n, idx};
        }
    }
    return best;
}

bool SegmentGrid::contains(Vec2 p) const {
    // parity of crossings along +x ray against boundary-class segments
    int parity = 0;
    for (const auto& s : segments_) {
        if (s.edge_class != 0) continue;
        const Vec2 a = s.a, b = s.b;
        if ((a.y > p.y) == (b.y > p.y)) continue;
        double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (xint > p.x) parity ^= 1;
    }
    return parity == 1;
}

double SegmentGrid::nearest_vertex_distance(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices_) best = std::min(best, (p - v).norm2());
    return std::sqrt(best);
}

FeatureDistanceField::FeatureDistanceField(const std::vector<Vec2>& features,
                                           const AABB& bounds, int resolution)
    : bounds_(bounds) {
    if (features.empty()) throw std::invalid_argument("FeatureDistanceField: empty");
    nx_ = resolution;
    ny_ = resolution;
    dx_ = std::max(bounds_.xmax - bounds_.xmin, 1e-12) / nx_;
    dy_ = std::max(bounds_.ymax - bounds_.ymin, 1e-12) / ny_;
    const double half_diag = 0.5 * std::hypot(dx_, dy_);
    values_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            Vec2 c{bounds_.xmin + (i + 0.5) * dx_, bounds_.ymin + (j + 0.5) * dy_};
            double best = std::numeric_limits<double>::infinity();
            for (const auto& f : features) best = std::min(best, (c - f).norm2());
            values_[static_cast<std::size_t>(j) * nx_ + i] =
                std::max(0.0, std::sqrt(best) - half_diag);
        }
    }
}

double FeatureDistanceField::lower_bound(Vec2 p) const {
    if (values_.empty()) return 0.0;
    int i = std::clamp(static_cast<int>((p.x - bounds_.xmin) / dx_), 0, nx_ - 1);
    int j = std::clamp(static_cast<int>((p.y - bounds_.ymin) / dy_), 0, ny_ - 1);
    return values_[static_cast<std::size_t>(j) * nx_ + i];
}

bool polyline_is_simple(const std::vector<Vec2>& pts, bool closed) {
    const std::size_t n = pts.size();
    if (n < 3) return true;
    std::vector<Segment> segs;
    const std::size_t m = closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i)
        segs.push_back({pts[i], pts[(i + 1) % n], 0});
    SegmentGrid grid(segs);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        grid.query(segs[i].a, segs[i].b, cand);
        for (std::size_t j : cand) {
            if (j <= i) continue;
            bool adjacent = (j == i + 1) || (i == 0 && j == segs.size() - 1 && closed);
            Vec2 d = segs[i].b - segs[i].a;
            auto t = segment_hit_param(segs[i].a, d, segs[j]);
            if (!t) continue;
            if (adjacent) {
                // only the shared endpoint may touch
                if (*t < 1.0 - 1e-9) return false;
            } else {
                return false;
            }
        }
    }
    return true;
}

double polygon_area(const std::vector<Vec2>& pts) {
    double acc = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        acc += a.cross(b);
    }
    return 0.5 * acc;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& pts) {
    int parity = 0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        if ((a.y > p.y) == (b.y > p.y)) continue;
        double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (xint > p.x) parity ^= 1;
    }
    return parity == 1;
}

}  // namespace nk
