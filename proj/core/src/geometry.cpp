#include "knotsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "knotsim/errors.hpp"

namespace knotsim {

bool KnotConfiguration::operator==(const KnotConfiguration& other) const {
    if (points_.size() != other.points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            if (points_[i][k] != other.points_[i][k]) return false;
        }
    }
    return true;
}

bool KnotConfiguration::is_valid(double rest_length) const {
    try {
        validate(rest_length);
    } catch (const ValidationError&) {
        return false;
    }
    return true;
}

void KnotConfiguration::validate(double rest_length) const {
    if (points_.size() < kMinBeadCount) {
        throw ValidationError("configuration has " + std::to_string(points_.size()) +
                              " beads, need at least " + std::to_string(kMinBeadCount));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!points_[i].allFinite()) {
            throw ValidationError("bead " + std::to_string(i) + " has a non-finite coordinate");
        }
    }
    const double lo = 0.25 * rest_length;
    const double hi = 4.0 * rest_length;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = (points_[next(i)] - points_[i]).norm();
        if (d < lo || d > hi) {
            throw ValidationError("segment " + std::to_string(i) + " has length " + std::to_string(d) +
                                  " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }
}

KnotConfiguration make_circle(std::size_t beads, double rest_length, const Vec3& center, double z) {
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(beads);
    const double radius = rest_length / (2.0 * std::sin(angle / 2.0));
    std::vector<Vec3> pts;
    pts.reserve(beads);
    for (std::size_t i = 0; i < beads; ++i) {
        const double t = angle * static_cast<double>(i);
        pts.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t), center.z() + z);
    }
    return KnotConfiguration(std::move(pts));
}

Action Action::from_array(const std::array<double, 6>& a) {
    Action out;
    for (int k = 0; k < 3; ++k) {
        out.location[k] = std::clamp(a[k], -1.0, 1.0);
        out.force[k] = std::clamp(a[k + 3], -1.0, 1.0);
    }
    return out;
}

std::array<double, 6> Action::to_array() const {
    return {location.x(), location.y(), location.z(), force.x(), force.y(), force.z()};
}

Workspace Workspace::around(const Vec3& center, double half_extent) {
    const Vec3 h = Vec3::Constant(half_extent);
    return Workspace{center - h, center + h};
}

std::size_t nearest_key_point(const KnotConfiguration& config, const Vec3& p) {
    std::size_t best = 0;
    double best_d2 = (config[0] - p).squaredNorm();
    for (std::size_t i = 1; i < config.size(); ++i) {
        const double d2 = (config[i] - p).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

PhysicalAction denormalize_action(const Action& a, const Workspace& workspace, double f_max) {
    PhysicalAction out;
    const Vec3 c = workspace.center();
    const Vec3 h = workspace.half_extent();
    for (int k = 0; k < 3; ++k) {
        out.grasp_point[k] = c[k] + a.location[k] * h[k];
        out.force[k] = a.force[k] * f_max;
    }
    return out;
}

Vec3 normalize_location(const Vec3& grasp_point, const Workspace& workspace) {
    const Vec3 c = workspace.center();
    const Vec3 h = workspace.half_extent();
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = (grasp_point[k] - c[k]) / h[k];
    return out;
}

Vec3 center_of_mass(const KnotConfiguration& config) {
    Vec3 sum = Vec3::Zero();
    for (const auto& p : config.points()) sum += p;
    return sum / static_cast<double>(config.size());
}

}  // namespace knotsim
