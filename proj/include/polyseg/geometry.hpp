// Polygon primitives and segment-pair analysis for explicit boundary curves.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyseg {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Point& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Point& a) { return std::sqrt(norm2(a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

// Minimum admissible edge length in pixels.
inline constexpr double kMinEdgeLength = 1e-9;
// Relative coefficient for the parallel-switch threshold on |Delta|;
// Delta scales quadratically with coordinates, so the effective threshold
// is this times max(segment length)^2.
inline constexpr double kTauParallelRel = 1e-8;

enum class IntersectKind { Unique, ParallelOrDegenerate };

// Solution of A + lambda (B-A) = A2 + mu (B2-A2). mu/lambda are only
// meaningful when kind == Unique.
struct IntersectionParams {
    double delta = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
    IntersectKind kind = IntersectKind::ParallelOrDegenerate;
};

inline double default_tau_parallel(const Point& a, const Point& b,
                                   const Point& a2, const Point& b2) {
    const double s = std::max(norm(b - a), norm(b2 - a2));
    return kTauParallelRel * s * s;
}

inline IntersectionParams segment_intersection_params(const Point& a, const Point& b,
                                                      const Point& a2, const Point& b2,
                                                      double tau_parallel) {
    if (distance(a, b) < kMinEdgeLength || distance(a2, b2) < kMinEdgeLength) {
        throw std::invalid_argument("segment_intersection_params: degenerate segment (coincident endpoints)");
    }
    const double x1 = a.x, y1 = a.y, x2 = b.x, y2 = b.y;
    const double x3 = a2.x, y3 = a2.y, x4 = b2.x, y4 = b2.y;

    IntersectionParams p;
    p.delta = (x4 - x3) * (y1 - y2) - (x1 - x2) * (y4 - y3);
    if (std::abs(p.delta) > tau_parallel) {
        p.kind = IntersectKind::Unique;
        p.mu = ((y1 - y2) * (x1 - x3) + (x2 - x1) * (y1 - y3)) / p.delta;
        p.lambda = ((y3 - y4) * (x1 - x3) + (x4 - x3) * (y1 - y3)) / p.delta;
    } else {
        p.kind = IntersectKind::ParallelOrDegenerate;
    }
    return p;
}

inline bool segments_properly_intersect(const IntersectionParams& p) {
    return p.kind == IntersectKind::Unique &&
           p.mu >= 0.0 && p.mu <= 1.0 && p.lambda >= 0.0 && p.lambda <= 1.0;
}

enum class Orientation { CCW, CW };

// Closed polygonal boundary curve. Edge i joins vertex i to vertex (i+1) mod n.
// Orientation is fixed at construction and kept through evolution, so the
// outward side stays well defined even if the curve momentarily twists.
class Polygon {
  public:
    explicit Polygon(std::vector<Point> vertices)
        : verts_(std::move(vertices)) {
        validate();
        orient_ = signed_area() > 0.0 ? Orientation::CCW : Orientation::CW;
    }

    Polygon(std::vector<Point> vertices, Orientation orient)
        : verts_(std::move(vertices)), orient_(orient) {
        validate();
    }

    std::size_t size() const { return verts_.size(); }
    const Point& operator[](std::size_t i) const { return verts_[i]; }
    const std::vector<Point>& vertices() const { return verts_; }
    Orientation orientation() const { return orient_; }

    std::size_t next(std::size_t i) const { return (i + 1) % verts_.size(); }
    std::size_t prev(std::size_t i) const { return (i + verts_.size() - 1) % verts_.size(); }

    Point edge_vector(std::size_t i) const { return verts_[next(i)] - verts_[i]; }
    double edge_length(std::size_t i) const { return norm(edge_vector(i)); }

    double signed_area() const {
        double s = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            const Point& p = verts_[i];
            const Point& q = verts_[next(i)];
            s += p.x * q.y - q.x * p.y;
        }
        return 0.5 * s;
    }

    double perimeter() const {
        double s = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i) s += edge_length(i);
        return s;
    }

    Point centroid() const {
        Point c;
        for (const Point& p : verts_) c += p;
        return c * (1.0 / static_cast<double>(verts_.size()));
    }

  private:
    void validate() const {
        if (verts_.size() < 3) throw std::invalid_argument("Polygon: needs at least 3 vertices");
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            const Point& p = verts_[i];
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw std::invalid_argument("Polygon: non-finite coordinate at vertex " + std::to_string(i));
            }
            const Point& q = verts_[(i + 1) % verts_.size()];
            if (distance(p, q) <= kMinEdgeLength) {
                throw std::invalid_argument("Polygon: edge " + std::to_string(i) + " shorter than minimum length");
            }
        }
    }

    std::vector<Point> verts_;
    Orientation orient_;
};

struct CurveSet {
    std::vector<Polygon> curves;

    explicit CurveSet(std::vector<Polygon> cs) : curves(std::move(cs)) {
        if (curves.empty()) throw std::invalid_argument("CurveSet: empty");
    }

    std::size_t total_vertices() const {
        std::size_t n = 0;
        for (const auto& c : curves) n += c.size();
        return n;
    }
};

struct EdgeRef {
    int curve = 0;
    int edge = 0;
    auto operator<=>(const EdgeRef&) const = default;
};

// Outward unit normal at vertex i: normalized sum of the two incident edges'
// outward normals. Falls back to the longer edge's normal when the two cancel
// (a zero-angle spike).
inline Point vertex_normal(const Polygon& poly, std::size_t i) {
    const Point dp = poly[i] - poly[poly.prev(i)];
    const Point dn = poly[poly.next(i)] - poly[i];
    const double sign = poly.orientation() == Orientation::CCW ? 1.0 : -1.0;
    auto outward = [sign](const Point& d) {
        const double len = norm(d);
        return Point{sign * d.y / len, -sign * d.x / len};
    };
    const Point np = outward(dp);
    const Point nn = outward(dn);
    Point sum = np + nn;
    const double len = norm(sum);
    if (len < 1e-12) {
        return norm(dp) >= norm(dn) ? np : nn;
    }
    return sum * (1.0 / len);
}

// Signed discrete curvature: turning angle over the mean incident edge
// length, positive where the curve is locally convex w.r.t. the outward side.
inline double vertex_curvature(const Polygon& poly, std::size_t i) {
    const Point dp = poly[i] - poly[poly.prev(i)];
    const Point dn = poly[poly.next(i)] - poly[i];
    const double turn = std::atan2(cross(dp, dn), dot(dp, dn));
    const double mean_len = 0.5 * (norm(dp) + norm(dn));
    const double sign = poly.orientation() == Orientation::CCW ? 1.0 : -1.0;
    return sign * turn / mean_len;
}

// Candidate edge pairs for repulsion around vertex (c, i).
//
// The neighborhood ball has radius h = max incident edge length. Candidate
// edges are those touching any vertex inside the ball, minus the incident
// edges and minus edges sharing a vertex with an incident edge. The result
// pairs each incident edge with each candidate.
inline std::vector<std::pair<EdgeRef, EdgeRef>>
h_neighborhood_pairs(const CurveSet& cs, std::size_t c, std::size_t i) {
    const Polygon& poly = cs.curves.at(c);
    const std::size_t n = poly.size();
    if (i >= n) throw std::out_of_range("h_neighborhood_pairs: vertex index");

    const int ci = static_cast<int>(c);
    const EdgeRef inc0{ci, static_cast<int>(poly.prev(i))};
    const EdgeRef inc1{ci, static_cast<int>(i)};
    const double h = std::max(poly.edge_length(inc0.edge), poly.edge_length(inc1.edge));

    std::set<EdgeRef> excluded{
        inc0, inc1,
        {ci, static_cast<int>((i + n - 2) % n)},
        {ci, static_cast<int>((i + 1) % n)}};

    const Point center = poly[i];
    std::set<EdgeRef> candidates;
    for (std::size_t c2 = 0; c2 < cs.curves.size(); ++c2) {
        const Polygon& other = cs.curves[c2];
        for (std::size_t j = 0; j < other.size(); ++j) {
            if (distance(other[j], center) > h) continue;
            const EdgeRef before{static_cast<int>(c2), static_cast<int>(other.prev(j))};
            const EdgeRef after{static_cast<int>(c2), static_cast<int>(j)};
            for (const EdgeRef& e : {before, after}) {
                if (c2 == c && excluded.count(e)) continue;
                candidates.insert(e);
            }
        }
    }

    std::vector<std::pair<EdgeRef, EdgeRef>> pairs;
    for (const EdgeRef& inc : {inc0, inc1}) {
        for (const EdgeRef& cand : candidates) pairs.emplace_back(inc, cand);
    }
    return pairs;
}

namespace detail {
inline bool edges_adjacent(const CurveSet& cs, const EdgeRef& a, const EdgeRef& b) {
    if (a.curve != b.curve) return false;
    const std::size_t n = cs.curves[a.curve].size();
    const std::size_t d = (a.edge - b.edge + static_cast<int>(n)) % static_cast<int>(n);
    return d == 0 || d == 1 || d == n - 1;
}

inline std::pair<Point, Point> edge_endpoints(const CurveSet& cs, const EdgeRef& e) {
    const Polygon& p = cs.curves[e.curve];
    return {p[e.edge], p[p.next(e.edge)]};
}
}  // namespace detail

// Number of unordered non-adjacent edge pairs that properly intersect.
inline int count_proper_intersections(const CurveSet& cs, bool cross_curve_only = false) {
    std::vector<EdgeRef> edges;
    for (std::size_t c = 0; c < cs.curves.size(); ++c) {
        for (std::size_t e = 0; e < cs.curves[c].size(); ++e) {
            edges.push_back({static_cast<int>(c), static_cast<int>(e)});
        }
    }
    int count = 0;
    for (std::size_t a = 0; a < edges.size(); ++a) {
        for (std::size_t b = a + 1; b < edges.size(); ++b) {
            if (cross_curve_only && edges[a].curve == edges[b].curve) continue;
            if (detail::edges_adjacent(cs, edges[a], edges[b])) continue;
            const auto [p1, p2] = detail::edge_endpoints(cs, edges[a]);
            const auto [q1, q2] = detail::edge_endpoints(cs, edges[b]);
            const auto params = segment_intersection_params(p1, p2, q1, q2,
                                                            default_tau_parallel(p1, p2, q1, q2));
            if (segments_properly_intersect(params)) ++count;
        }
    }
    return count;
}

inline int count_cross_intersections(const CurveSet& cs) {
    return count_proper_intersections(cs, true);
}

// n vertices at equal arc-length spacing along the closed polyline, starting
// at vertex 0. Optional maintenance step; perturbs repulsion state, so off by
// default in evolution.
inline Polygon resample_uniform(const Polygon& poly, std::size_t n) {
    if (n < 3) throw std::invalid_argument("resample_uniform: n must be >= 3");
    const double perim = poly.perimeter();
    if (perim < 1e-6) throw std::invalid_argument("resample_uniform: degenerate polygon (perimeter < 1e-6)");

    std::vector<double> cum(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) cum[i + 1] = cum[i] + poly.edge_length(i);

    std::vector<Point> out;
    out.reserve(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = perim * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < cum.size() - 1 && cum[seg + 1] <= s) ++seg;
        const double t = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        const Point a = poly[seg];
        const Point b = poly[poly.next(seg)];
        out.push_back(a + (b - a) * t);
    }
    return Polygon(std::move(out), poly.orientation());
}

}  // namespace polyseg
