#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "knotsim/geometry.hpp"

namespace knotsim {

inline constexpr int kPaneSize = 128;
inline constexpr int kBeadPixelRadius = 3;
inline constexpr double kCameraHalfExtent = 0.6;  // m

/// Orthographic camera looking down -z.
struct Camera {
    Vec3 center = Vec3::Zero();
    double half_extent = kCameraHalfExtent;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Planar RGB image, channel-major: pixels[(c * height + row) * width + col].
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(3) * w * h, 0) {}

    std::uint8_t& at(int channel, int row, int col) {
        return pixels[(static_cast<std::size_t>(channel) * height + row) * width + col];
    }
    std::uint8_t at(int channel, int row, int col) const {
        return pixels[(static_cast<std::size_t>(channel) * height + row) * width + col];
    }
    Rgb rgb(int row, int col) const { return {at(0, row, col), at(1, row, col), at(2, row, col)}; }

    bool operator==(const Image&) const = default;
};

/// Shape [3, 128, 256]: manipulated rope on the left, goal exemplar on the right.
using Observation = Image;

Camera camera_for(const KnotConfiguration& config);

/// Color of bead `index` out of `count`: white at bead 0, red at the last
/// bead, hue sweeping blue -> green -> yellow -> red in between.
Rgb bead_color(std::size_t index, std::size_t count);

/// Pixel (col, row) of a world point; may fall outside the pane.
std::array<int, 2> project_to_pixel(const Vec3& p, const Camera& camera);

Image render_pane(const KnotConfiguration& config, const Camera& camera);

Observation render_observation(const WorldState& state);

/// 8-bit RGB PNG, no alpha. Throws IoError with the path.
void write_png(const Image& image, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

}  // namespace knotsim
