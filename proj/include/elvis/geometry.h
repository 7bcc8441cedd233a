#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace elvis {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Counterclockwise rotation by `angle` radians.
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// --- Errors ---

enum class GeometryErrc {
    NonConvex,
    OriginNotInterior,
    DegenerateDimensions,
    ZeroVector,
};

std::string_view to_string(GeometryErrc code);

class GeometryError : public std::runtime_error {
public:
    GeometryError(GeometryErrc code, const std::string& detail);
    GeometryErrc code() const noexcept { return code_; }

private:
    GeometryErrc code_;
};

// --- Raw set descriptions ---

struct Ball {
    double r = 1.0;
};

struct Ellipse {
    double a = 1.0;   // semi-axis along the (rotated) x direction
    double b = 1.0;   // semi-axis along the (rotated) y direction
    double rot = 0.0; // radians
};

struct Polygon {
    std::vector<Vec2> vertices; // counterclockwise
};

using SetDescription = std::variant<Ball, Ellipse, Polygon>;

/// One edge of a polygon written as the half-plane <n, x> <= h.
struct Facet {
    Vec2 n;   // unit outward normal
    double h; // offset, strictly positive when the origin is interior
};

/// Facet i joins vertex i to vertex i+1 (cyclic).
struct HalfPlaneForm {
    std::vector<Facet> facets;
};

/// A closed, bounded, convex planar set with the origin in its interior.
///
/// Instances only exist in validated form: construct through
/// `VelocitySet::validate`. Polygons are stored with collinear and
/// duplicate vertices removed and carry their half-plane form.
class VelocitySet {
public:
    static VelocitySet validate(const SetDescription& raw);
    static VelocitySet ball(double r) { return validate(Ball{r}); }
    static VelocitySet ellipse(double a, double b, double rot = 0.0) {
        return validate(Ellipse{a, b, rot});
    }
    static VelocitySet polygon(std::vector<Vec2> vertices) {
        return validate(Polygon{std::move(vertices)});
    }

    const SetDescription& description() const { return desc_; }
    bool is_ball() const { return std::holds_alternative<Ball>(desc_); }
    bool is_ellipse() const { return std::holds_alternative<Ellipse>(desc_); }
    bool is_polygon() const { return std::holds_alternative<Polygon>(desc_); }

    /// Empty for balls and ellipses.
    const HalfPlaneForm& half_planes() const { return half_planes_; }
    /// Largest vertex norm (polygons), r (balls), max(a, b) (ellipses).
    double circumradius() const { return circumradius_; }

private:
    VelocitySet() = default;

    SetDescription desc_;
    HalfPlaneForm half_planes_;
    double circumradius_ = 0.0;
};

/// Exposed face of the polar set selected by a normal cone: a single
/// multiplier for smooth boundary points, a polar edge at polygon vertices.
struct NormalFace {
    enum class Kind { Point, Segment };

    Kind kind = Kind::Point;
    Vec2 lo;
    Vec2 hi; // equal to lo for Point

    static NormalFace point(Vec2 zeta) { return {Kind::Point, zeta, zeta}; }
    static NormalFace segment(Vec2 a, Vec2 b) { return {Kind::Segment, a, b}; }

    bool is_segment() const { return kind == Kind::Segment; }
    Vec2 midpoint() const { return 0.5 * (lo + hi); }
    double x_min() const { return std::min(lo.x, hi.x); }
    double x_max() const { return std::max(lo.x, hi.x); }
    /// Point of the face whose x-component is `x` clamped to the face's x-range.
    Vec2 at_x(double x) const;
    NormalFace negated() const { return {kind, -lo, -hi}; }
};

/// Relative tolerance (times the circumradius) within which a boundary
/// point of a polygon is treated as one of its vertices.
inline constexpr double kFaceTolerance = 1e-9;

double gauge(const VelocitySet& set, Vec2 v);
double support(const VelocitySet& set, Vec2 zeta);
VelocitySet polar(const VelocitySet& set);
NormalFace normal_face(const VelocitySet& set, Vec2 v);

/// Gauge evaluated in an arbitrary floating type `T` (e.g. a multiprecision
/// type). The set parameters are promoted exactly from double.
template <class T>
T gauge_as(const VelocitySet& set, T vx, T vy) {
    using std::sqrt;
    using std::cos;
    using std::sin;
    const auto& desc = set.description();
    if (const auto* ball = std::get_if<Ball>(&desc)) {
        return sqrt(vx * vx + vy * vy) / T(ball->r);
    }
    if (const auto* ell = std::get_if<Ellipse>(&desc)) {
        T wx = vx;
        T wy = vy;
        if (ell->rot != 0.0) {
            const T c = cos(T(ell->rot));
            const T s = sin(T(ell->rot));
            wx = c * vx + s * vy;
            wy = -s * vx + c * vy;
        }
        wx /= T(ell->a);
        wy /= T(ell->b);
        return sqrt(wx * wx + wy * wy);
    }
    T best(0);
    for (const Facet& f : set.half_planes().facets) {
        const T value = (T(f.n.x) * vx + T(f.n.y) * vy) / T(f.h);
        if (value > best) best = value;
    }
    return best;
}

} // namespace elvis
