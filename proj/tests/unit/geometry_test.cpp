#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "generators.hpp"
#include "knotsim/errors.hpp"
#include "knotsim/geometry.hpp"

using namespace knotsim;

namespace {

KnotConfiguration unit_circle(std::size_t beads) {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < beads; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(beads);
        pts.emplace_back(std::cos(t), std::sin(t), 0.0);
    }
    return KnotConfiguration(std::move(pts));
}

}  // namespace

TEST(NearestKeyPoint, ExactBeadPosition) {
    const auto circle = make_circle();
    EXPECT_EQ(nearest_key_point(circle, circle[3]), 3u);
}

TEST(NearestKeyPoint, UnitCircleSymmetry) {
    EXPECT_EQ(nearest_key_point(unit_circle(16), Vec3(2, 0, 0)), 0u);
}

TEST(NearestKeyPoint, TiesResolveToSmallestIndex) {
    std::vector<Vec3> pts(8, Vec3::Zero());
    for (std::size_t i = 0; i < 8; ++i) pts[i] = Vec3(static_cast<double>(i), 0, 0);
    pts[5] = pts[2];
    EXPECT_EQ(nearest_key_point(KnotConfiguration(pts), pts[2]), 2u);
}

TEST(NearestKeyPoint, MatchesLinearScan) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto config = knotsim::testing::random_configuration(rng);
        const Vec3 p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
        std::size_t expected = 0;
        long double best = std::numeric_limits<long double>::infinity();
        for (std::size_t i = 0; i < config.size(); ++i) {
            long double d = 0;
            for (int k = 0; k < 3; ++k) {
                const long double diff = static_cast<long double>(config[i][k]) - p[k];
                d += diff * diff;
            }
            if (d < best) {
                best = d;
                expected = i;
            }
        }
        EXPECT_EQ(nearest_key_point(config, p), expected);
    }
}

TEST(NearestKeyPoint, IdentityOnBeads) {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto config = knotsim::testing::random_configuration(rng);
        for (std::size_t i = 0; i < config.size(); ++i) ASSERT_EQ(nearest_key_point(config, config[i]), i);
    }
}

TEST(DenormalizeAction, ZeroMapsToCenter) {
    const Workspace ws = Workspace::around(Vec3(0.5, -1, 2));
    const auto pa = denormalize_action(Action{}, ws, 1.0);
    EXPECT_EQ(pa.grasp_point, Vec3(0.5, -1, 2));
    EXPECT_EQ(pa.force, Vec3::Zero());
}

TEST(DenormalizeAction, CornerAndForceScaling) {
    const Workspace ws{Vec3(-1, -2, -3), Vec3(1, 2, 3)};
    Action a;
    a.location = Vec3(1, 1, 1);
    a.force = Vec3(0.5, 0, 0);
    const auto pa = denormalize_action(a, ws, 2.0);
    EXPECT_EQ(pa.grasp_point, Vec3(1, 2, 3));
    EXPECT_EQ(pa.force, Vec3(1.0, 0, 0));
}

TEST(DenormalizeAction, MonotoneAndInvertible) {
    Rng rng(13);
    const Workspace ws{Vec3(-0.3, 0.1, -2), Vec3(0.7, 0.6, 5)};
    for (int trial = 0; trial < 500; ++trial) {
        Action a, b;
        for (int k = 0; k < 3; ++k) {
            a.location[k] = uniform(rng, -0.999, 0.999);
            b.location[k] = uniform(rng, -0.999, 0.999);
        }
        const auto pa = denormalize_action(a, ws, 1.0);
        const auto pb = denormalize_action(b, ws, 1.0);
        for (int k = 0; k < 3; ++k) {
            if (a.location[k] < b.location[k]) {
                EXPECT_LE(pa.grasp_point[k], pb.grasp_point[k]);
            }
        }
        const Vec3 back = normalize_location(pa.grasp_point, ws);
        EXPECT_LT((back - a.location).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Action, ClampsOnIngestion) {
    const Action a = Action::from_array({2.0, -3.0, 0.5, 1.5, -1.0, -7.0});
    EXPECT_EQ(a.location, Vec3(1.0, -1.0, 0.5));
    EXPECT_EQ(a.force, Vec3(1.0, -1.0, -1.0));
}

TEST(CenterOfMass, Symmetry) {
    EXPECT_LT(center_of_mass(unit_circle(16)).norm(), 1e-15);
    std::vector<Vec3> pts(10, Vec3(1, 2, 3));
    EXPECT_EQ(center_of_mass(KnotConfiguration(pts)), Vec3(1, 2, 3));
}

TEST(CenterOfMass, MatchesExtendedPrecisionSum) {
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        auto config = knotsim::testing::random_configuration(rng);
        const Vec3 shift(uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5));
        for (auto& p : config.points()) p += shift;
        const Vec3 com = center_of_mass(config);
        for (int k = 0; k < 3; ++k) {
            long double sum = 0;
            for (const auto& p : config.points()) sum += p[k];
            const long double expected = sum / config.size();
            EXPECT_LE(std::abs(static_cast<long double>(com[k]) - expected),
                      1e-12L * std::max(1.0L, std::abs(expected)));
        }
    }
}

TEST(CenterOfMass, CommutesWithTranslation) {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto config = knotsim::testing::random_configuration(rng);
        const Vec3 shift(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3));
        auto moved = config;
        for (auto& p : moved.points()) p += shift;
        EXPECT_LT((center_of_mass(moved) - (center_of_mass(config) + shift)).norm(), 1e-12);
    }
}

TEST(KnotConfiguration, Validation) {
    EXPECT_TRUE(make_circle().is_valid());
    EXPECT_FALSE(make_circle(7).is_valid());
    auto bad = make_circle();
    bad[4].x() = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(bad.validate(), ValidationError);
    auto stretched = make_circle();
    stretched[10] *= 3.0;
    EXPECT_FALSE(stretched.is_valid());
    auto squeezed = make_circle();
    squeezed[1] = squeezed[0] + Vec3(0.01, 0, 0);
    EXPECT_FALSE(squeezed.is_valid());
}

TEST(KnotConfiguration, CircleHasRestLengthSides) {
    const auto c = make_circle(40, 0.05);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR((c[c.next(i)] - c[i]).norm(), 0.05, 1e-12);
}
