#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elvis/geometry.h"
#include "elvis/oracle.h"
#include "generators.h"

namespace elvis {
namespace {

using testing::Rng;

VelocitySet unit_square() {
    return VelocitySet::polygon({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
}

GeometryErrc validation_error(const SetDescription& raw) {
    try {
        VelocitySet::validate(raw);
    } catch (const GeometryError& e) {
        return e.code();
    }
    ADD_FAILURE() << "validation unexpectedly succeeded";
    return GeometryErrc::ZeroVector;
}

// Vertex sets compared up to cyclic rotation.
bool same_vertex_set(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (Vec2 p : a) {
        bool found = false;
        for (Vec2 q : b) found = found || norm(p - q) <= tol;
        if (!found) return false;
    }
    return true;
}

const std::vector<Vec2>& vertices(const VelocitySet& s) {
    return std::get<Polygon>(s.description()).vertices;
}

// --- validate ---

TEST(Validate, AcceptsBall) {
    EXPECT_TRUE(VelocitySet::ball(2.0).is_ball());
}

TEST(Validate, SquareHalfPlaneForm) {
    const VelocitySet sq = unit_square();
    const auto& facets = sq.half_planes().facets;
    ASSERT_EQ(facets.size(), 4u);
    const Vec2 normals[] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(facets[i].n.x, normals[i].x, 1e-15);
        EXPECT_NEAR(facets[i].n.y, normals[i].y, 1e-15);
        EXPECT_NEAR(facets[i].h, 1.0, 1e-15);
    }
    // Every vertex is feasible and tight on its two incident facets.
    const auto& vs = vertices(sq);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = 0; j < facets.size(); ++j) {
            const double slack = facets[j].h - dot(facets[j].n, vs[i]);
            EXPECT_GE(slack, -1e-15);
            if (j == i || j == (i + 3) % 4) {
                EXPECT_NEAR(slack, 0.0, 1e-15);
            }
        }
    }
}

TEST(Validate, RejectsOriginOutside) {
    EXPECT_EQ(validation_error(Polygon{{{1, 0}, {2, 0}, {1, 1}}}), GeometryErrc::OriginNotInterior);
}

TEST(Validate, RejectsOriginOnBoundary) {
    EXPECT_EQ(validation_error(Polygon{{{0, 0}, {1, 0}, {0, 1}}}), GeometryErrc::OriginNotInterior);
}

TEST(Validate, RejectsDegenerateDimensions) {
    EXPECT_EQ(validation_error(Ball{0.0}), GeometryErrc::DegenerateDimensions);
    EXPECT_EQ(validation_error(Ball{-1.0}), GeometryErrc::DegenerateDimensions);
    EXPECT_EQ(validation_error(Ellipse{1.0, 0.0}), GeometryErrc::DegenerateDimensions);
    EXPECT_EQ(validation_error(Ellipse{std::nan(""), 1.0}), GeometryErrc::DegenerateDimensions);
    EXPECT_EQ(validation_error(Polygon{{{1, 0}, {0, 1}}}), GeometryErrc::DegenerateDimensions);
    EXPECT_EQ(validation_error(Polygon{{{1, 0}, {0, 1}, {1, 0}, {0, 1}}}),
              GeometryErrc::DegenerateDimensions);
}

TEST(Validate, RejectsClockwiseAndReflex) {
    EXPECT_EQ(validation_error(Polygon{{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}}),
              GeometryErrc::NonConvex);
    EXPECT_EQ(validation_error(Polygon{{{1, 1}, {0, 0.2}, {-1, 1}, {-1, -1}, {1, -1}}}),
              GeometryErrc::NonConvex);
}

TEST(Validate, RejectsDoubleWinding) {
    std::vector<Vec2> star;
    for (int i = 0; i < 5; ++i) {
        const double t = 2.0 * std::numbers::pi * 2 * i / 5;
        star.push_back({std::cos(t), std::sin(t)});
    }
    EXPECT_EQ(validation_error(Polygon{star}), GeometryErrc::NonConvex);
}

TEST(Validate, DropsCollinearAndRepeatedVertices) {
    const VelocitySet sq =
        VelocitySet::polygon({{1, 1}, {0, 1}, {-1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 0}});
    EXPECT_EQ(vertices(sq).size(), 4u);
    EXPECT_TRUE(same_vertex_set(vertices(sq), vertices(unit_square()), 0.0));
}

// --- gauge ---

TEST(Gauge, ClosedFormExamples) {
    const oracle::OracleConfig cfg;
    EXPECT_DOUBLE_EQ(gauge(VelocitySet::ball(2.0), {0, 3}), 1.5);
    EXPECT_DOUBLE_EQ(gauge(VelocitySet::ellipse(2.0, 1.0), {2, 0}), 1.0);

    const VelocitySet ell = VelocitySet::ellipse(1.0, 0.5);
    EXPECT_NEAR(oracle::gauge_by_membership(ell, {1, 1}, cfg), std::sqrt(5.0), 1e-10);
    EXPECT_NEAR(gauge(ell, {1, 1}), std::sqrt(5.0), 1e-14);

    EXPECT_NEAR(oracle::gauge_by_membership(unit_square(), {3, 2}, cfg), 3.0, 1e-10);
    EXPECT_DOUBLE_EQ(gauge(unit_square(), {3, 2}), 3.0);
}

TEST(Gauge, ZeroAtOrigin) {
    EXPECT_EQ(gauge(unit_square(), {0, 0}), 0.0);
    EXPECT_EQ(gauge(VelocitySet::ellipse(1.0, 2.0, 0.3), {0, 0}), 0.0);
}

TEST(Gauge, RotatedEllipseMatchesRotatedInput) {
    const double rot = 0.7;
    const VelocitySet tilted = VelocitySet::ellipse(2.0, 0.5, rot);
    const VelocitySet straight = VelocitySet::ellipse(2.0, 0.5);
    const Vec2 v{0.3, -1.2};
    EXPECT_NEAR(gauge(tilted, rotate(v, rot)), gauge(straight, v), 1e-14);
}

TEST(GaugeProperty, HomogeneousAndSubadditive) {
    Rng rng(11);
    for (int family = 0; family < 3; ++family) {
        for (int i = 0; i < 1000; ++i) {
            const VelocitySet set = testing::random_set(rng, family);
            const Vec2 u = testing::random_vector(rng);
            const Vec2 v = testing::random_vector(rng);
            const double t = testing::uniform(rng, 1e-3, 1e3);
            const double gv = gauge(set, v);
            EXPECT_NEAR(gauge(set, t * v), t * gv, 1e-12 * t * gv);
            EXPECT_LE(gauge(set, u + v), gauge(set, u) + gv + 1e-12);
        }
    }
}

TEST(GaugeProperty, OneOnBoundary) {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double t = testing::uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const VelocitySet ball = testing::random_ball(rng);
        const auto& b = std::get<Ball>(ball.description());
        EXPECT_NEAR(gauge(ball, {b.r * std::cos(t), b.r * std::sin(t)}), 1.0, 1e-10);

        const VelocitySet ell = testing::random_ellipse(rng);
        const auto& e = std::get<Ellipse>(ell.description());
        const Vec2 p = rotate({e.a * std::cos(t), e.b * std::sin(t)}, e.rot);
        EXPECT_NEAR(gauge(ell, p), 1.0, 1e-10);

        const VelocitySet poly = testing::random_polygon(rng);
        const auto& vs = vertices(poly);
        const std::size_t k = static_cast<std::size_t>(i) % vs.size();
        const double w = testing::uniform(rng, 0.0, 1.0);
        const Vec2 q = (1.0 - w) * vs[k] + w * vs[(k + 1) % vs.size()];
        EXPECT_NEAR(gauge(poly, q), 1.0, 1e-10);
    }
}

// --- support & polar ---

TEST(Support, Examples) {
    EXPECT_DOUBLE_EQ(support(VelocitySet::ball(3.0), {1, 0}), 3.0);
    EXPECT_DOUBLE_EQ(support(unit_square(), {1, 1}), 2.0);

    const VelocitySet ell = VelocitySet::ellipse(2.0, 1.0);
    double sampled = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 100000;
        sampled = std::max(sampled, dot({0, 1}, {2.0 * std::cos(t), std::sin(t)}));
    }
    EXPECT_NEAR(sampled, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(support(ell, {0, 1}), 1.0);
}

TEST(Polar, Examples) {
    EXPECT_DOUBLE_EQ(std::get<Ball>(polar(VelocitySet::ball(2.0)).description()).r, 0.5);

    const auto& e = std::get<Ellipse>(polar(VelocitySet::ellipse(1.0, 0.5)).description());
    EXPECT_DOUBLE_EQ(e.a, 1.0);
    EXPECT_DOUBLE_EQ(e.b, 2.0);

    const VelocitySet diamond = polar(unit_square());
    EXPECT_TRUE(same_vertex_set(vertices(diamond), {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 1e-15));
    EXPECT_TRUE(same_vertex_set(vertices(polar(diamond)), vertices(unit_square()), 1e-15));
}

TEST(PolarProperty, GaugeOfPolarIsSupport) {
    Rng rng(13);
    for (int family = 0; family < 3; ++family) {
        for (int i = 0; i < 1000; ++i) {
            const VelocitySet set = testing::random_set(rng, family);
            const Vec2 zeta = testing::random_vector(rng);
            EXPECT_NEAR(gauge(polar(set), zeta), support(set, zeta), 1e-10);
        }
    }
}

TEST(PolarProperty, Bipolar) {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const VelocitySet poly = testing::random_polygon(rng);
        EXPECT_TRUE(same_vertex_set(vertices(polar(polar(poly))), vertices(poly), 1e-9));

        const VelocitySet ell = testing::random_ellipse(rng);
        const auto& e = std::get<Ellipse>(ell.description());
        const auto& ee = std::get<Ellipse>(polar(polar(ell)).description());
        // 1 / (1 / a) can differ from a in the last bit.
        EXPECT_NEAR(ee.a, e.a, 4e-16 * e.a);
        EXPECT_NEAR(ee.b, e.b, 4e-16 * e.b);
        EXPECT_EQ(ee.rot, e.rot);
    }
}

// --- normal_face ---

TEST(NormalFace, Examples) {
    const NormalFace ball = normal_face(VelocitySet::ball(2.0), {0, 5});
    ASSERT_FALSE(ball.is_segment());
    EXPECT_NEAR(ball.lo.x, 0.0, 1e-15);
    EXPECT_NEAR(ball.lo.y, 0.5, 1e-15);

    const NormalFace facet = normal_face(unit_square(), {2, 0.6});
    ASSERT_FALSE(facet.is_segment());
    EXPECT_NEAR(facet.lo.x, 1.0, 1e-15);
    EXPECT_NEAR(facet.lo.y, 0.0, 1e-15);

    const NormalFace corner = normal_face(unit_square(), {3, 3});
    ASSERT_TRUE(corner.is_segment());
    EXPECT_TRUE(same_vertex_set({corner.lo, corner.hi}, {{1, 0}, {0, 1}}, 1e-15));
}

TEST(NormalFace, VertexToleranceIsRelativeToCircumradius) {
    const VelocitySet big = VelocitySet::polygon({{100, 100}, {-100, 100}, {-100, -100}, {100, -100}});
    // 1e-8 away from the corner in absolute terms is within 1e-9 * 141.
    EXPECT_TRUE(normal_face(big, {100, 100 - 1e-8}).is_segment());
    EXPECT_FALSE(normal_face(big, {100, 100 - 1e-6}).is_segment());
}

TEST(NormalFace, ZeroVectorThrows) {
    try {
        normal_face(unit_square(), {0, 0});
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), GeometryErrc::ZeroVector);
    }
}

TEST(NormalFaceProperty, SupportOneAndNormalConeMembership) {
    Rng rng(15);
    oracle::OracleConfig cfg;
    cfg.membership_samples = 1000;
    for (int family = 0; family < 3; ++family) {
        for (int i = 0; i < 60; ++i) {
            const VelocitySet set = testing::random_set(rng, family);
            const auto samples = oracle::sample_set(set, cfg, 100 + i);
            std::vector<Vec2> queries = {testing::random_vector(rng)};
            if (set.is_polygon()) queries.push_back(vertices(set)[static_cast<std::size_t>(i) % vertices(set).size()]);
            for (Vec2 v : queries) {
                const NormalFace face = normal_face(set, v);
                const Vec2 p = v / gauge(set, v);
                for (Vec2 zeta : {face.lo, face.hi, face.midpoint()}) {
                    EXPECT_NEAR(support(set, zeta), 1.0, 1e-9);
                    for (Vec2 u : samples) EXPECT_GE(dot(zeta, p), dot(zeta, u) - 1e-9);
                }
            }
        }
    }
}

TEST(NormalFaceProperty, MatchesFiniteDifferenceGradientOnSmoothSets) {
    Rng rng(16);
    for (int family = 0; family < 2; ++family) {
        for (int i = 0; i < 1000; ++i) {
            const VelocitySet set = testing::random_set(rng, family);
            const Vec2 v = testing::random_vector(rng);
            const double h = 1e-7 * norm(v);
            const Vec2 fd{(gauge(set, v + Vec2{h, 0}) - gauge(set, v - Vec2{h, 0})) / (2 * h),
                          (gauge(set, v + Vec2{0, h}) - gauge(set, v - Vec2{0, h})) / (2 * h)};
            const NormalFace face = normal_face(set, v);
            ASSERT_FALSE(face.is_segment());
            EXPECT_NEAR(face.lo.x, fd.x, 1e-6);
            EXPECT_NEAR(face.lo.y, fd.y, 1e-6);
        }
    }
}

TEST(NormalFace, AtXClampsToSegment) {
    const NormalFace seg = NormalFace::segment({-1, 1}, {1, 1});
    EXPECT_EQ(seg.at_x(0.25), (Vec2{0.25, 1}));
    EXPECT_EQ(seg.at_x(5.0), (Vec2{1, 1}));
    EXPECT_EQ(NormalFace::point({2, 3}).at_x(0.0), (Vec2{2, 3}));
}

} // namespace
} // namespace elvis
