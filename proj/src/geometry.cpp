#include "elvis/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace elvis {

std::string_view to_string(GeometryErrc code) {
    switch (code) {
    case GeometryErrc::NonConvex: return "NonConvex";
    case GeometryErrc::OriginNotInterior: return "OriginNotInterior";
    case GeometryErrc::DegenerateDimensions: return "DegenerateDimensions";
    case GeometryErrc::ZeroVector: return "ZeroVector";
    }
    return "Unknown";
}

GeometryError::GeometryError(GeometryErrc code, const std::string& detail)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), detail)), code_(code) {}

Vec2 NormalFace::at_x(double x) const {
    if (lo.x == hi.x) return midpoint();
    const double t = std::clamp((x - lo.x) / (hi.x - lo.x), 0.0, 1.0);
    return lo + t * (hi - lo);
}

namespace {

constexpr double kCollinearTol = 1e-12;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Drops repeated and collinear vertices in place. Throws NonConvex when a
// vertex folds back onto its incoming edge.
void simplify_ring(std::vector<Vec2>& ring, double scale) {
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const std::size_t n = ring.size();
            const Vec2 prev = ring[(i + n - 1) % n];
            const Vec2 cur = ring[i];
            const Vec2 next = ring[(i + 1) % n];
            const Vec2 e_in = cur - prev;
            const Vec2 e_out = next - cur;
            if (norm(e_out) <= kCollinearTol * scale) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>((i + 1) % n));
                changed = true;
                break;
            }
            if (std::abs(cross(e_in, e_out)) <= kCollinearTol * norm(e_in) * norm(e_out)) {
                if (dot(e_in, e_out) < 0.0) {
                    throw GeometryError(GeometryErrc::NonConvex,
                                        fmt::format("polygon folds back at vertex ({}, {})",
                                                    cur.x, cur.y));
                }
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
}

HalfPlaneForm build_half_planes(const std::vector<Vec2>& ring) {
    HalfPlaneForm form;
    form.facets.reserve(ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2 a = ring[i];
        const Vec2 e = ring[(i + 1) % ring.size()] - a;
        const Vec2 n = Vec2{e.y, -e.x} / norm(e);
        form.facets.push_back({n, dot(n, a)});
    }
    return form;
}

} // namespace

VelocitySet VelocitySet::validate(const SetDescription& raw) {
    VelocitySet set;
    if (const auto* ball = std::get_if<Ball>(&raw)) {
        if (!std::isfinite(ball->r) || ball->r <= 0.0) {
            throw GeometryError(GeometryErrc::DegenerateDimensions,
                                fmt::format("ball radius must be positive, got {}", ball->r));
        }
        set.desc_ = *ball;
        set.circumradius_ = ball->r;
        return set;
    }
    if (const auto* ell = std::get_if<Ellipse>(&raw)) {
        if (!std::isfinite(ell->a) || !std::isfinite(ell->b) || ell->a <= 0.0 ||
            ell->b <= 0.0) {
            throw GeometryError(GeometryErrc::DegenerateDimensions,
                                fmt::format("ellipse semi-axes must be positive, got a={} b={}",
                                            ell->a, ell->b));
        }
        if (!std::isfinite(ell->rot)) {
            throw GeometryError(GeometryErrc::DegenerateDimensions,
                                "ellipse rotation must be finite");
        }
        set.desc_ = *ell;
        set.circumradius_ = std::max(ell->a, ell->b);
        return set;
    }

    std::vector<Vec2> ring = std::get<Polygon>(raw).vertices;
    double scale = 0.0;
    for (Vec2 v : ring) {
        if (!finite(v)) {
            throw GeometryError(GeometryErrc::DegenerateDimensions,
                                "polygon vertices must be finite");
        }
        scale = std::max(scale, norm(v));
    }
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        bool repeated = false;
        for (std::size_t j = 0; j < i && !repeated; ++j) {
            repeated = norm(ring[i] - ring[j]) <= kCollinearTol * scale;
        }
        distinct += repeated ? 0 : 1;
    }
    if (distinct >= 3 && scale > 0.0) simplify_ring(ring, scale);
    if (distinct < 3 || ring.size() < 3 || scale == 0.0) {
        throw GeometryError(GeometryErrc::DegenerateDimensions,
                            "polygon needs at least 3 distinct, non-collinear vertices");
    }

    double turning = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const std::size_t n = ring.size();
        const Vec2 e_in = ring[i] - ring[(i + n - 1) % n];
        const Vec2 e_out = ring[(i + 1) % n] - ring[i];
        const double c = cross(e_in, e_out);
        if (c <= 0.0) {
            throw GeometryError(GeometryErrc::NonConvex,
                                fmt::format("vertex {} turns clockwise; vertices must be a "
                                            "counterclockwise convex ring",
                                            i));
        }
        turning += std::atan2(c, dot(e_in, e_out));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
        throw GeometryError(GeometryErrc::NonConvex, "vertex ring winds more than once");
    }

    HalfPlaneForm form = build_half_planes(ring);
    for (std::size_t i = 0; i < form.facets.size(); ++i) {
        if (form.facets[i].h <= kCollinearTol * scale) {
            throw GeometryError(GeometryErrc::OriginNotInterior,
                                fmt::format("origin is not strictly inside facet {}", i));
        }
    }

    double radius = 0.0;
    for (Vec2 v : ring) radius = std::max(radius, norm(v));
    set.desc_ = Polygon{std::move(ring)};
    set.half_planes_ = std::move(form);
    set.circumradius_ = radius;
    return set;
}

double gauge(const VelocitySet& set, Vec2 v) {
    return gauge_as<double>(set, v.x, v.y);
}

double support(const VelocitySet& set, Vec2 zeta) {
    const auto& desc = set.description();
    if (const auto* ball = std::get_if<Ball>(&desc)) return ball->r * norm(zeta);
    if (const auto* ell = std::get_if<Ellipse>(&desc)) {
        const Vec2 w = rotate(zeta, -ell->rot);
        return std::hypot(ell->a * w.x, ell->b * w.y);
    }
    const auto& vertices = std::get<Polygon>(desc).vertices;
    double best = dot(zeta, vertices.front());
    for (Vec2 v : vertices) best = std::max(best, dot(zeta, v));
    return best;
}

VelocitySet polar(const VelocitySet& set) {
    const auto& desc = set.description();
    if (const auto* ball = std::get_if<Ball>(&desc)) return VelocitySet::ball(1.0 / ball->r);
    if (const auto* ell = std::get_if<Ellipse>(&desc)) {
        return VelocitySet::ellipse(1.0 / ell->a, 1.0 / ell->b, ell->rot);
    }
    // Facet i of F is dual to the polar vertex where the constraints
    // <zeta, v_i> = 1 and <zeta, v_{i+1}> = 1 meet, namely n_i / h_i.
    std::vector<Vec2> dual;
    dual.reserve(set.half_planes().facets.size());
    for (const Facet& f : set.half_planes().facets) dual.push_back(f.n / f.h);
    return VelocitySet::polygon(std::move(dual));
}

NormalFace normal_face(const VelocitySet& set, Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) {
        throw GeometryError(GeometryErrc::ZeroVector, "normal face of the zero vector");
    }
    const Vec2 p = v / gauge(set, v);
    const auto& desc = set.description();
    if (const auto* ball = std::get_if<Ball>(&desc)) return NormalFace::point(p / (ball->r * ball->r));
    if (const auto* ell = std::get_if<Ellipse>(&desc)) {
        const Vec2 w = rotate(p, -ell->rot);
        return NormalFace::point(rotate({w.x / (ell->a * ell->a), w.y / (ell->b * ell->b)}, ell->rot));
    }

    const auto& vertices = std::get<Polygon>(desc).vertices;
    const auto& facets = set.half_planes().facets;
    const std::size_t n = vertices.size();

    std::size_t nearest = 0;
    double nearest_dist = norm(p - vertices[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double d = norm(p - vertices[i]);
        if (d < nearest_dist) {
            nearest = i;
            nearest_dist = d;
        }
    }
    if (nearest_dist <= kFaceTolerance * set.circumradius()) {
        const Facet& before = facets[(nearest + n - 1) % n];
        const Facet& after = facets[nearest];
        return NormalFace::segment(before.n / before.h, after.n / after.h);
    }

    std::size_t active = 0;
    double best = dot(facets[0].n, p) / facets[0].h;
    for (std::size_t i = 1; i < n; ++i) {
        const double value = dot(facets[i].n, p) / facets[i].h;
        if (value > best) {
            best = value;
            active = i;
        }
    }
    return NormalFace::point(facets[active].n / facets[active].h);
}

} // namespace elvis
