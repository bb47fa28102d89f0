#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "knotsim/geometry.hpp"

namespace knotsim {

/// Tolerances of the crossing oracle.
struct ProjectionTolerance {
    double xy_eps = 1e-9;      // m, minimum distance from an intersection to a segment endpoint
    double z_eps = 1e-6;       // m, minimum over/under separation
    double param_eps = 1e-12;  // two crossings on one segment closer than this are a tie
};

struct Crossing {
    std::size_t seg_a = 0;  // earlier-traversed segment
    std::size_t seg_b = 0;
    Eigen::Vector2d uv = Eigen::Vector2d::Zero();
    double param_a = 0.0;
    double param_b = 0.0;
    bool a_over = false;  // seg_a passes above seg_b
};

struct GaussEntry {
    std::uint32_t label = 0;
    bool over = false;

    bool operator==(const GaussEntry&) const = default;
};

/// Signed crossing sequence. Each label 1..n appears exactly twice, once
/// over and once under, and labels are numbered in order of first
/// appearance.
class GaussCode {
public:
    GaussCode() = default;
    /// Throws ValidationError if `entries` breaks the invariants.
    explicit GaussCode(std::vector<GaussEntry> entries);

    const std::vector<GaussEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

    bool operator==(const GaussCode&) const = default;

    /// Every sign inverted, labels unchanged.
    GaussCode mirrored() const;

    static void check(const std::vector<GaussEntry>& entries);

private:
    std::vector<GaussEntry> entries_;
};

/// Orientation of (c - a) relative to (b - a) in the plane: +1 counter-
/// clockwise, -1 clockwise, 0 collinear. Falls back to exact rational
/// arithmetic when the double determinant is smaller than 1e-12.
int orientation(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);

/// All crossings of the z-projection between non-adjacent segments, ordered
/// by (seg_a, seg_b). Throws DegenerateProjection.
std::vector<Crossing> find_crossings(const KnotConfiguration& config, const ProjectionTolerance& tol = {});

/// Traverses from bead 0 in increasing bead order. Throws DegenerateProjection.
GaussCode compute_gauss_code(const KnotConfiguration& config, const ProjectionTolerance& tol = {});

/// Gauss code from an already computed crossing list.
GaussCode gauss_code_from_crossings(const std::vector<Crossing>& crossings, const ProjectionTolerance& tol = {});

bool codes_equal(const GaussCode& a, const GaussCode& b);

/// (2n-1)!! * 2^n. Throws std::overflow_error instead of wrapping.
std::uint64_t count_possible_codes(unsigned n);

GaussCode parse_code(std::string_view text);
std::string format_code(const GaussCode& code);

inline std::size_t crossing_count(const GaussCode& code) { return code.size() / 2; }

}  // namespace knotsim
