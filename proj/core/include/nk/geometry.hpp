#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace nk {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const;
};

struct Segment {
    Vec2 a;
    Vec2 b;
    // 0 = domain boundary, 1 = interior wall; walls reflect on both sides
    int edge_class = 0;
};

struct AABB {
    double xmin, ymin, xmax, ymax;
    void grow(Vec2 p);
    bool overlaps(const AABB& o) const;
};

struct HitRecord {
    double t;        // fraction along the step in (0, 1]
    Vec2 point;
    Vec2 normal;     // unit, oriented against the incoming direction
    std::size_t segment;
};

// First crossing of segment p -> p+d with segment s, if any.
std::optional<double> segment_hit_param(Vec2 p, Vec2 d, const Segment& s);

// Strict transversal crossing of two segments: both pairs of endpoints lie
// strictly on opposite sides. Robust for collinear or endpoint-touching
// configurations (which do not count as crossings).
bool segments_cross(const Segment& s1, const Segment& s2, double eps = 1e-12);

double point_segment_distance(Vec2 p, const Segment& s);

// Uniform spatial hash over segments; queries return candidate indices for a
// step's bounding box.
class SegmentGrid {
public:
    SegmentGrid() = default;
    explicit SegmentGrid(const std::vector<Segment>& segments);

    void query(Vec2 p, Vec2 q, std::vector<std::size_t>& out) const;
    const std::vector<Segment>& segments() const { return segments_; }
    const AABB& bounds() const { return bounds_; }

    // first hit along p -> p+d among all segments
    std::optional<HitRecord> first_hit(Vec2 p, Vec2 d) const;

    bool contains(Vec2 p) const;  // ray-cast parity against class-0 segments
    double nearest_vertex_distance(Vec2 p) const;

private:
    void cell_range(const AABB& box, int& i0, int& j0, int& i1, int& j1) const;

    std::vector<Segment> segments_;
    std::vector<Vec2> vertices_;
    AABB bounds_{0, 0, 1, 1};
    double cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
    mutable std::vector<std::size_t> scratch_;
};

// Conservative lower bound on the distance to a fixed set of feature points,
// tabulated on a coarse grid so per-step lookups are O(1). Used by adaptive
// time stepping near wall openings and corners.
class FeatureDistanceField {
public:
    FeatureDistanceField() = default;
    FeatureDistanceField(const std::vector<Vec2>& features, const AABB& bounds,
                         int resolution = 192);

    double lower_bound(Vec2 p) const;

private:
    AABB bounds_{0, 0, 1, 1};
    double dx_ = 1.0, dy_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<double> values_;
};

// true when the closed polyline (first == last not required) is simple;
// shared endpoints of consecutive edges are allowed
bool polyline_is_simple(const std::vector<Vec2>& pts, bool closed);

double polygon_area(const std::vector<Vec2>& pts);  // signed, CCW positive

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& pts);

}  // namespace nk
