#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "knotsim/geometry.hpp"
#include "knotsim/random.hpp"

namespace knotsim {

struct SimParams {
    double dt = 2.5e-4;            // s per substep
    int substeps_per_frame = 4;
    int frame_skip = 24;
    double k_stretch = 500.0;      // N/m
    double k_bend = 2e-8;          // N*m
    double bead_radius = 0.02;     // m
    double c_drag = 0.05;          // N*s/m
    double c_spring = 1.0;         // N*s/m, axial dashpot in parallel with each stretch spring
    double c_contact = 2.0;        // N*s/m, normal dashpot on overlapping bead pairs
    double f_max = 1.0;            // N
    double mass = 1e-3;            // kg per bead
    double rest_length = kDefaultRestLength;  // m

    double collision_stiffness() const { return 10.0 * k_stretch; }
    double step_duration() const { return dt * substeps_per_frame * frame_skip; }

    /// Throws ValidationError when any field is non-positive.
    void validate() const;

    /// Flat `key = value` text, one key per line; every key required.
    static SimParams parse(std::istream& in);
    static SimParams load(const std::filesystem::path& path);
    std::string to_text() const;
};

struct RopeState {
    KnotConfiguration positions;
    std::vector<Vec3> velocities;

    static RopeState at_rest(KnotConfiguration config);
};

struct EnergyBreakdown {
    double kinetic = 0.0;
    double stretch = 0.0;
    double bend = 0.0;
    double collision = 0.0;

    double total() const { return kinetic + stretch + bend + collision; }
};

/// Stretch (spring plus axial dashpot), bending, self-collision, and drag
/// forces per bead.
std::vector<Vec3> internal_forces(const RopeState& state, const SimParams& params);

/// Per-term forces, exposed for the Newton's-third-law checks.
struct ForceTerms {
    std::vector<Vec3> stretch, bend, collision, drag;
};
ForceTerms internal_force_terms(const RopeState& state, const SimParams& params);

EnergyBreakdown energy(const RopeState& state, const SimParams& params);

/// Advances one environment frame (frame_skip * substeps_per_frame
/// semi-implicit Euler substeps) with `applied_force` held on bead
/// `grasp_index`. Throws SimulationDiverged.
RopeState step_frame(const RopeState& state, std::size_t grasp_index, const Vec3& applied_force,
                     const SimParams& params);

/// Same as step_frame with a custom substep count and dt; used for
/// refinement checks.
RopeState integrate(const RopeState& state, std::size_t grasp_index, const Vec3& applied_force,
                    const SimParams& params, double dt, long substeps);

/// i.i.d. uniform noise in [-scale, scale] per coordinate. Invalid results
/// are redrawn up to 10 times; after that the input is returned unchanged.
KnotConfiguration apply_reset_noise(const KnotConfiguration& config, double scale, Rng& rng,
                                    double rest_length = kDefaultRestLength);

}  // namespace knotsim
