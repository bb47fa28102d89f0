#include "knotsim/config_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "knotsim/errors.hpp"

namespace knotsim {
namespace {

static_assert(std::endian::native == std::endian::little, "knot files are written natively little-endian");

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t& offset) {
    if (offset + sizeof(T) > bytes.size()) {
        throw ParseError("truncated knot file", offset);
    }
    T value;
    std::memcpy(&value, bytes.data() + offset, sizeof(T));
    offset += sizeof(T);
    return value;
}

}  // namespace

std::vector<std::uint8_t> encode_configuration(const KnotConfiguration& config) {
    std::vector<std::uint8_t> out;
    out.reserve(12 + config.size() * 24);
    for (const char c : {'K', 'N', 'O', 'T'}) out.push_back(static_cast<std::uint8_t>(c));
    put<std::uint32_t>(out, kKnotFileVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(config.size()));
    for (const auto& p : config.points()) {
        put<double>(out, p.x());
        put<double>(out, p.y());
        put<double>(out, p.z());
    }
    return out;
}

KnotConfiguration decode_configuration(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "KNOT", 4) != 0) {
        throw ParseError("bad magic, expected \"KNOT\"", 0);
    }
    std::size_t offset = 4;
    const auto version = get<std::uint32_t>(bytes, offset);
    if (version != kKnotFileVersion) {
        throw ParseError("unsupported knot file version " + std::to_string(version), 4);
    }
    const auto count = get<std::uint32_t>(bytes, offset);
    if (bytes.size() != 12 + static_cast<std::size_t>(count) * 24) {
        throw ParseError("size mismatch for " + std::to_string(count) + " beads", offset);
    }
    std::vector<Vec3> pts(count);
    for (auto& p : pts) {
        p.x() = get<double>(bytes, offset);
        p.y() = get<double>(bytes, offset);
        p.z() = get<double>(bytes, offset);
    }
    return KnotConfiguration(std::move(pts));
}

void save_configuration(const KnotConfiguration& config, const std::filesystem::path& path) {
    const auto bytes = encode_configuration(config);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

KnotConfiguration load_configuration(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_configuration(bytes);
    } catch (const ParseError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace knotsim
