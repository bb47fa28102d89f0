#include "knotsim/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <numeric>

#include <png.h>

#include "knotsim/errors.hpp"

namespace knotsim {

Camera camera_for(const KnotConfiguration& config) { return Camera{center_of_mass(config), kCameraHalfExtent}; }

Rgb bead_color(std::size_t index, std::size_t count) {
    if (index == 0 || count < 2) return {255, 255, 255};
    // Hue in [0, 1024) where 1024 = 240 degrees; saturation ramps up over
    // the first eighth of the rope so the start stays pale.
    const std::int64_t last = static_cast<std::int64_t>(count) - 1;
    const std::int64_t i = static_cast<std::int64_t>(index);
    const std::int64_t hue = (1024 * (last - i)) / last;                    // 1024 -> 0
    const std::int64_t sat = std::min<std::int64_t>(255, (255 * 8 * i) / last);
    // Fully saturated color for the hue (blue=1024, green=512, red=0).
    std::int64_t r, g, b;
    if (hue >= 512) {  // blue -> green
        const std::int64_t t = hue - 512;
        r = 0;
        g = 255 - (255 * t) / 512;
        b = (255 * t) / 512;
    } else if (hue >= 256) {  // green -> yellow
        const std::int64_t t = hue - 256;
        r = 255 - (255 * t) / 256;
        g = 255;
        b = 0;
    } else {  // yellow -> red
        r = 255;
        g = (255 * hue) / 256;
        b = 0;
    }
    auto blend = [sat](std::int64_t c) { return static_cast<std::uint8_t>(255 - ((255 - c) * sat) / 255); };
    return {blend(r), blend(g), blend(b)};
}

std::array<int, 2> project_to_pixel(const Vec3& p, const Camera& camera) {
    const double scale = kPaneSize / (2.0 * camera.half_extent);
    const double col = (p.x() - camera.center.x()) * scale + kPaneSize / 2.0;
    const double row = (camera.center.y() - p.y()) * scale + kPaneSize / 2.0;
    return {static_cast<int>(std::floor(col)), static_cast<int>(std::floor(row))};
}

Image render_pane(const KnotConfiguration& config, const Camera& camera) {
    Image pane(kPaneSize, kPaneSize);
    const std::size_t n = config.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Back to front; equal heights draw the larger index last.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return config[a].z() < config[b].z(); });

    constexpr int r = kBeadPixelRadius;
    for (const std::size_t bead : order) {
        const auto [cx, cy] = project_to_pixel(config[bead], camera);
        const Rgb color = bead_color(bead, n);
        for (int dy = -r; dy <= r; ++dy) {
            const int row = cy + dy;
            if (row < 0 || row >= kPaneSize) continue;
            for (int dx = -r; dx <= r; ++dx) {
                const int col = cx + dx;
                if (col < 0 || col >= kPaneSize || dx * dx + dy * dy > r * r) continue;
                for (int c = 0; c < 3; ++c) pane.at(c, row, col) = color[c];
            }
        }
    }
    return pane;
}

Observation render_observation(const WorldState& state) {
    const Image left = render_pane(state.manipulated, camera_for(state.manipulated));
    const Image right = render_pane(state.goal, camera_for(state.goal));
    Observation obs(2 * kPaneSize, kPaneSize);
    for (int c = 0; c < 3; ++c) {
        for (int row = 0; row < kPaneSize; ++row) {
            for (int col = 0; col < kPaneSize; ++col) {
                obs.at(c, row, col) = left.at(c, row, col);
                obs.at(c, row, col + kPaneSize) = right.at(c, row, col);
            }
        }
    }
    return obs;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Keeps libpng quiet; the message is reported through IoError instead.
void on_png_error(png_structp png, png_const_charp message) {
    *static_cast<std::string*>(png_get_error_ptr(png)) = message;
    png_longjmp(png, 1);
}
void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

void write_png(const Image& image, const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path.string() + " for writing");

    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed for " + path.string());
    }
    std::vector<png_byte> row(static_cast<std::size_t>(3) * image.width);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed for " + path.string() + ": " + error);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 9);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) row[static_cast<std::size_t>(3) * x + c] = image.at(c, y, x);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(file.get()) != 0) throw IoError("write failed: " + path.string());
}

Image read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) throw IoError("cannot open " + path.string());

    std::string error;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed for " + path.string());
    }
    Image image;
    std::vector<png_byte> row;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decoding failed for " + path.string() + ": " + error);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path.string() + ": expected 8-bit RGB");
    }
    image = Image(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
    row.resize(static_cast<std::size_t>(3) * image.width);
    for (int y = 0; y < image.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) image.at(c, y, x) = row[static_cast<std::size_t>(3) * x + c];
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

}  // namespace knotsim
