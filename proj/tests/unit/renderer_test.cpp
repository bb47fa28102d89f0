#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <tuple>

#include "generators.hpp"
#include "knotsim/config_io.hpp"
#include "knotsim/errors.hpp"
#include "knotsim/renderer.hpp"

using namespace knotsim;
namespace kt = knotsim::testing;

namespace {

constexpr Rgb kBlack{0, 0, 0};

int count_lit(const Image& img) {
    int lit = 0;
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) lit += img.rgb(row, col) != kBlack;
    }
    return lit;
}

KnotConfiguration snapped(KnotConfiguration c) {
    for (auto& p : c.points()) {
        for (int k = 0; k < 3; ++k) p[k] = std::ldexp(std::round(std::ldexp(p[k], 20)), -20);
    }
    return c;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("knotsim_renderer_" + name);
}

}  // namespace

TEST(Camera, TracksCenterOfMass) {
    const auto circle = make_circle(40, 0.05, Vec3(0.3, -0.2, 0.1));
    const Camera cam = camera_for(circle);
    EXPECT_LT((cam.center - Vec3(0.3, -0.2, 0.1)).norm(), 1e-12);
    EXPECT_EQ(cam.half_extent, kCameraHalfExtent);
}

TEST(Camera, ProjectionMapsExtentToPane) {
    // Half extent 0.5 makes one pixel exactly 2^-7 m.
    const Camera cam{Vec3(1, 2, 0), 0.5};
    EXPECT_EQ(project_to_pixel(Vec3(1, 2, 5), cam), (std::array<int, 2>{64, 64}));
    EXPECT_EQ(project_to_pixel(Vec3(0.5, 2.5, 0), cam), (std::array<int, 2>{0, 0}));
    EXPECT_EQ(project_to_pixel(Vec3(1.5, 1.5, 0), cam), (std::array<int, 2>{128, 128}));
    EXPECT_EQ(project_to_pixel(Vec3(0.5 - 0x1p-10, 2, 0), cam), (std::array<int, 2>{-1, 64}));
    // +y is up in the image.
    EXPECT_LT(project_to_pixel(Vec3(1, 2.1, 0), cam)[1], 64);
}

TEST(RenderPane, TranslationInvariant) {
    const auto base = snapped(make_circle());
    auto moved = base;
    for (auto& p : moved.points()) p += Vec3(0.25, -0.5, 0.125);
    EXPECT_EQ(render_pane(base, camera_for(base)), render_pane(moved, camera_for(moved)));
}

TEST(RenderPane, CoincidentBeadsDrawOneDiskAtCenter) {
    const KnotConfiguration c(std::vector<Vec3>(8, Vec3(0.5, 0.25, 0.0)));
    const Image pane = render_pane(c, camera_for(c));
    EXPECT_EQ(count_lit(pane), 29);  // lattice points with dx^2 + dy^2 <= 9
    EXPECT_EQ(pane.rgb(64, 64), bead_color(7, 8));
    EXPECT_EQ(pane.rgb(64, 61), bead_color(7, 8));
    EXPECT_EQ(pane.rgb(64, 60), kBlack);
}

TEST(RenderPane, HigherBeadOccludes) {
    std::vector<Vec3> pts(8, Vec3(5, 5, 0));  // off-pane filler
    pts[2] = Vec3(0.0, 0.0, 0.2);
    pts[5] = Vec3(0.01, 0.0, 0.1);
    const Camera cam{Vec3::Zero(), kCameraHalfExtent};
    const Image pane = render_pane(KnotConfiguration(pts), cam);
    const auto [c2, r2] = project_to_pixel(pts[2], cam);
    EXPECT_EQ(pane.rgb(r2, c2), bead_color(2, 8));
    EXPECT_EQ(pane.rgb(r2, c2 + 1), bead_color(2, 8));

    // Equal heights: the larger index wins.
    pts[5].z() = 0.2;
    const Image tie = render_pane(KnotConfiguration(pts), cam);
    EXPECT_EQ(tie.rgb(r2, c2 + 1), bead_color(5, 8));
}

TEST(RenderPane, ClipsAtBorders) {
    std::vector<Vec3> pts(8, Vec3(50, 50, 0));
    pts[0] = Vec3(-0.5, 0.0, 0.0);  // disk centre on column 0
    const Image pane = render_pane(KnotConfiguration(pts), Camera{Vec3::Zero(), 0.5});
    EXPECT_EQ(count_lit(pane), 18);  // columns 0..3 of the 29-pixel disk: 7 + 5 + 5 + 1
    EXPECT_EQ(pane.rgb(64, 0), bead_color(0, 8));
}

TEST(RenderPane, OcclusionMatchesBruteForce) {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const auto config = kt::random_configuration(rng);
        const Camera cam = camera_for(config);
        const Image pane = render_pane(config, cam);
        // Independent projection: 128 px span 1.2 m, row 0 at the top.
        std::vector<std::array<long, 2>> centers;
        for (const auto& p : config.points()) {
            const long double s = 128.0L / 1.2L;
            centers.push_back({static_cast<long>(std::floor((p.x() - cam.center.x()) * s + 64)),
                               static_cast<long>(std::floor((cam.center.y() - p.y()) * s + 64))});
        }
        int mismatches = 0;
        for (int row = 0; row < kPaneSize; ++row) {
            for (int col = 0; col < kPaneSize; ++col) {
                std::optional<std::size_t> top;
                for (std::size_t i = 0; i < config.size(); ++i) {
                    const long dx = col - centers[i][0], dy = row - centers[i][1];
                    if (dx * dx + dy * dy > 9) continue;
                    if (!top || std::make_tuple(config[i].z(), i) > std::make_tuple(config[*top].z(), *top)) top = i;
                }
                const Rgb expected = top ? bead_color(*top, config.size()) : kBlack;
                mismatches += pane.rgb(row, col) != expected;
            }
        }
        EXPECT_EQ(mismatches, 0) << "trial " << trial;
    }
}

TEST(BeadColor, Gradient) {
    EXPECT_EQ(bead_color(0, 40), (Rgb{255, 255, 255}));
    EXPECT_EQ(bead_color(39, 40), (Rgb{255, 0, 0}));
    for (std::size_t i = 0; i < 40; ++i) {
        const Rgb c = bead_color(i, 40);
        EXPECT_GE(std::max({c[0], c[1], c[2]}), 128) << i;  // never dark, never background
    }
    // Blue side early, green mid-rope, red at the end.
    const Rgb early = bead_color(6, 40), mid = bead_color(20, 40), late = bead_color(36, 40);
    EXPECT_GT(early[2], early[0]);
    EXPECT_GT(mid[1], mid[2]);
    EXPECT_GT(late[0], late[2]);
    EXPECT_NE(bead_color(1, 40), bead_color(2, 40));
}

TEST(RenderObservation, ShapeAndPanes) {
    const auto tie = kt::tie2_fixture();
    const WorldState state{make_circle(), tie, std::vector<Vec3>(40, Vec3::Zero()), 0};
    const Observation obs = render_observation(state);
    EXPECT_EQ(obs.width, 256);
    EXPECT_EQ(obs.height, 128);
    EXPECT_EQ(obs.pixels.size(), 3u * 128 * 256);
    const Image left = render_pane(state.manipulated, camera_for(state.manipulated));
    const Image right = render_pane(tie, camera_for(tie));
    for (int c = 0; c < 3; ++c) {
        for (int row = 0; row < 128; ++row) {
            for (int col = 0; col < 128; ++col) {
                ASSERT_EQ(obs.at(c, row, col), left.at(c, row, col));
                ASSERT_EQ(obs.at(c, row, col + 128), right.at(c, row, col));
            }
        }
    }
    EXPECT_EQ(render_observation(state), obs);
}

TEST(RenderObservation, SameConfigGivesIdenticalPanes) {
    const auto c = kt::single_crossing_fixture();
    const Observation obs = render_observation(WorldState{c, c, std::vector<Vec3>(c.size(), Vec3::Zero()), 0});
    for (int c2 = 0; c2 < 3; ++c2) {
        for (int row = 0; row < 128; ++row) {
            for (int col = 0; col < 128; ++col) ASSERT_EQ(obs.at(c2, row, col), obs.at(c2, row, col + 128));
        }
    }
}

TEST(Golden, FixturesMatchFrozenImages) {
    for (const char* name : {"circle40", "cross1", "tie2_a"}) {
        const auto config = load_configuration(kt::fixture_dir() / (std::string(name) + ".knot"));
        const Image golden = read_png(kt::fixture_dir() / "golden" / (std::string(name) + ".png"));
        EXPECT_EQ(render_pane(config, camera_for(config)), golden) << name;
    }
    const auto tie = load_configuration(kt::fixture_dir() / "tie2_a.knot");
    const auto circle = load_configuration(kt::fixture_dir() / "circle40.knot");
    const Image golden = read_png(kt::fixture_dir() / "golden" / "observation_circle40_tie2_a.png");
    EXPECT_EQ(render_observation(WorldState{circle, tie, std::vector<Vec3>(40, Vec3::Zero()), 0}), golden);
}

TEST(Png, RoundTrip) {
    Image img(5, 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 17);
    const auto path = temp_path("roundtrip.png");
    write_png(img, path);
    EXPECT_EQ(read_png(path), img);
    std::filesystem::remove(path);
}

TEST(Png, ErrorsCarryPath) {
    try {
        write_png(Image(2, 2), "/nonexistent_dir/x.png");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent_dir/x.png"), std::string::npos);
    }
    const auto garbage = temp_path("garbage.png");
    std::ofstream(garbage) << "not a png";
    EXPECT_THROW(read_png(garbage), IoError);
    EXPECT_THROW(read_png(temp_path("missing.png")), IoError);
    std::filesystem::remove(garbage);
}
