#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace knotsim {

using Vec3 = Eigen::Vector3d;

inline constexpr std::size_t kDefaultBeadCount = 40;
inline constexpr double kDefaultRestLength = 0.05;  // m
inline constexpr std::size_t kMinBeadCount = 8;

/// Closed rope: bead i connects to bead i+1, and the last bead connects back
/// to bead 0.
class KnotConfiguration {
public:
    KnotConfiguration() = default;
    explicit KnotConfiguration(std::vector<Vec3> points) : points_(std::move(points)) {}

    const std::vector<Vec3>& points() const noexcept { return points_; }
    std::vector<Vec3>& points() noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Vec3& operator[](std::size_t i) const { return points_[i]; }
    Vec3& operator[](std::size_t i) { return points_[i]; }
    std::size_t next(std::size_t i) const noexcept { return i + 1 == points_.size() ? 0 : i + 1; }

    /// Bitwise equality of every coordinate.
    bool operator==(const KnotConfiguration& other) const;

    /// Validity: B >= 8, finite coordinates, and every neighbor distance in
    /// [0.25 r0, 4 r0].
    bool is_valid(double rest_length = kDefaultRestLength) const;

    /// Throws ValidationError naming the first violated invariant.
    void validate(double rest_length = kDefaultRestLength) const;

private:
    std::vector<Vec3> points_;
};

/// Regular polygon of `beads` points in the plane z = `z`, side length
/// `rest_length`, bead 0 at angle 0.
KnotConfiguration make_circle(std::size_t beads = kDefaultBeadCount,
                              double rest_length = kDefaultRestLength,
                              const Vec3& center = Vec3::Zero(), double z = 0.0);

struct Action {
    Vec3 location = Vec3::Zero();
    Vec3 force = Vec3::Zero();

    /// Components outside [-1, 1] are clamped, never rejected.
    static Action from_array(const std::array<double, 6>& a);
    std::array<double, 6> to_array() const;
};

struct Workspace {
    Vec3 min_corner;
    Vec3 max_corner;

    Vec3 center() const { return 0.5 * (min_corner + max_corner); }
    Vec3 half_extent() const { return 0.5 * (max_corner - min_corner); }

    /// [-h, h]^3 around `center`.
    static Workspace around(const Vec3& center, double half_extent = 1.0);
};

struct PhysicalAction {
    Vec3 grasp_point;
    Vec3 force;  // N
};

/// Index of the bead closest to `p`; ties resolve to the smallest index.
std::size_t nearest_key_point(const KnotConfiguration& config, const Vec3& p);

PhysicalAction denormalize_action(const Action& a, const Workspace& workspace, double f_max);

/// Inverse of the location half of denormalize_action.
Vec3 normalize_location(const Vec3& grasp_point, const Workspace& workspace);

Vec3 center_of_mass(const KnotConfiguration& config);

struct WorldState {
    KnotConfiguration manipulated;
    KnotConfiguration goal;
    std::vector<Vec3> velocities;
    std::size_t step_index = 0;
};

}  // namespace knotsim
