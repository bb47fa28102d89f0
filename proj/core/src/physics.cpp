#include "knotsim/physics.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "knotsim/errors.hpp"

namespace knotsim {
namespace {

constexpr double kDivergenceLimit = 1e3;

struct ParamField {
    const char* key;
    double SimParams::*real;
    int SimParams::*integer;
};

constexpr ParamField kFields[] = {
    {"dt", &SimParams::dt, nullptr},
    {"substeps_per_frame", nullptr, &SimParams::substeps_per_frame},
    {"frame_skip", nullptr, &SimParams::frame_skip},
    {"k_stretch", &SimParams::k_stretch, nullptr},
    {"k_bend", &SimParams::k_bend, nullptr},
    {"bead_radius", &SimParams::bead_radius, nullptr},
    {"c_drag", &SimParams::c_drag, nullptr},
    {"c_spring", &SimParams::c_spring, nullptr},
    {"c_contact", &SimParams::c_contact, nullptr},
    {"f_max", &SimParams::f_max, nullptr},
    {"mass", &SimParams::mass, nullptr},
    {"rest_length", &SimParams::rest_length, nullptr},
};

// Cyclic index distance; pairs closer than 2 share a bead or a segment.
std::size_t ring_distance(std::size_t i, std::size_t j, std::size_t n) {
    const std::size_t d = i > j ? i - j : j - i;
    return std::min(d, n - d);
}

// Spring plus axial dashpot; the dashpot only resists the rate of stretch,
// so rigid motion of the pair is unaffected.
void add_stretch(const std::vector<Vec3>& x, const std::vector<Vec3>& v, const SimParams& p, std::vector<Vec3>& f) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + 1 == n ? 0 : i + 1;
        const Vec3 d = x[j] - x[i];
        const double len = d.norm();
        if (len == 0.0) continue;
        const double rate = (v[j] - v[i]).dot(d) / len;
        const Vec3 force = ((p.k_stretch * (len - p.rest_length) + p.c_spring * rate) / len) * d;
        f[i] += force;
        f[j] -= force;
    }
}

// E = (k_bend / r0) * sum_i (1 - cos(turning angle at bead i))
void add_bend(const std::vector<Vec3>& x, const SimParams& p, std::vector<Vec3>& f) {
    const std::size_t n = x.size();
    const double k = p.k_bend / p.rest_length;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = i == 0 ? n - 1 : i - 1;
        const std::size_t next = i + 1 == n ? 0 : i + 1;
        const Vec3 e1 = x[i] - x[prev];
        const Vec3 e2 = x[next] - x[i];
        const double l1 = e1.norm();
        const double l2 = e2.norm();
        if (l1 == 0.0 || l2 == 0.0) continue;
        const Vec3 u1 = e1 / l1;
        const Vec3 u2 = e2 / l2;
        const double c = u1.dot(u2);
        const Vec3 g1 = (u2 - c * u1) / l1;
        const Vec3 g2 = (u1 - c * u2) / l2;
        f[prev] -= k * g1;
        f[i] += k * (g1 - g2);
        f[next] += k * g2;
    }
}

// Penalty contact with a normal dashpot that only acts while pairs overlap.
void add_collision(const std::vector<Vec3>& x, const std::vector<Vec3>& v, const SimParams& p, std::vector<Vec3>& f) {
    const std::size_t n = x.size();
    const double contact = 2.0 * p.bead_radius;
    const double contact2 = contact * contact;
    const double k = p.collision_stiffness();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (ring_distance(i, j, n) < 2) continue;
            const Vec3 d = x[i] - x[j];
            const double d2 = d.squaredNorm();
            if (d2 >= contact2 || d2 == 0.0) continue;
            const double len = std::sqrt(d2);
            const double approach = (v[i] - v[j]).dot(d) / len;  // > 0 when separating
            const Vec3 force = ((k * (contact - len) - p.c_contact * approach) / len) * d;
            f[i] += force;
            f[j] -= force;
        }
    }
}

void add_drag(const std::vector<Vec3>& v, const SimParams& p, std::vector<Vec3>& f) {
    for (std::size_t i = 0; i < v.size(); ++i) f[i] -= p.c_drag * v[i];
}

void check_finite(const RopeState& s) {
    for (std::size_t i = 0; i < s.velocities.size(); ++i) {
        const Vec3& x = s.positions[i];
        const Vec3& v = s.velocities[i];
        if (!x.allFinite() || !v.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceLimit ||
            v.cwiseAbs().maxCoeff() > kDivergenceLimit) {
            throw SimulationDiverged("bead " + std::to_string(i) + " diverged");
        }
    }
}

}  // namespace

void SimParams::validate() const {
    for (const auto& field : kFields) {
        const double value = field.real ? this->*field.real : static_cast<double>(this->*field.integer);
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ValidationError(std::string("sim parameter ") + field.key + " must be positive");
        }
    }
}

SimParams SimParams::parse(std::istream& in) {
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!values.emplace(key, trim(line.substr(eq + 1))).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate key " + key);
        }
    }

    SimParams p;
    for (const auto& field : kFields) {
        const auto it = values.find(field.key);
        if (it == values.end()) throw ValidationError(std::string("missing sim parameter ") + field.key);
        std::istringstream value(it->second);
        if (field.real) {
            value >> p.*field.real;
        } else {
            value >> p.*field.integer;
        }
        if (!value || !(value >> std::ws).eof()) {
            throw ValidationError(std::string("bad value for ") + field.key + ": " + it->second);
        }
        values.erase(it);
    }
    if (!values.empty()) throw ValidationError("unknown sim parameter " + values.begin()->first);
    p.validate();
    return p;
}

SimParams SimParams::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse(in);
}

std::string SimParams::to_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& field : kFields) {
        out << field.key << " = ";
        if (field.real) {
            out << this->*field.real;
        } else {
            out << this->*field.integer;
        }
        out << '\n';
    }
    return out.str();
}

RopeState RopeState::at_rest(KnotConfiguration config) {
    RopeState s;
    s.velocities.assign(config.size(), Vec3::Zero());
    s.positions = std::move(config);
    return s;
}

ForceTerms internal_force_terms(const RopeState& state, const SimParams& params) {
    const auto& x = state.positions.points();
    const std::size_t n = x.size();
    ForceTerms t;
    t.stretch.assign(n, Vec3::Zero());
    t.bend.assign(n, Vec3::Zero());
    t.collision.assign(n, Vec3::Zero());
    t.drag.assign(n, Vec3::Zero());
    add_stretch(x, state.velocities, params, t.stretch);
    add_bend(x, params, t.bend);
    add_collision(x, state.velocities, params, t.collision);
    add_drag(state.velocities, params, t.drag);
    return t;
}

std::vector<Vec3> internal_forces(const RopeState& state, const SimParams& params) {
    std::vector<Vec3> f(state.positions.size(), Vec3::Zero());
    add_stretch(state.positions.points(), state.velocities, params, f);
    add_bend(state.positions.points(), params, f);
    add_collision(state.positions.points(), state.velocities, params, f);
    add_drag(state.velocities, params, f);
    return f;
}

EnergyBreakdown energy(const RopeState& state, const SimParams& p) {
    const auto& x = state.positions.points();
    const std::size_t n = x.size();
    EnergyBreakdown e;
    for (const auto& v : state.velocities) e.kinetic += 0.5 * p.mass * v.squaredNorm();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t next = i + 1 == n ? 0 : i + 1;
        const std::size_t prev = i == 0 ? n - 1 : i - 1;
        const double stretch = (x[next] - x[i]).norm() - p.rest_length;
        e.stretch += 0.5 * p.k_stretch * stretch * stretch;
        const Vec3 u1 = (x[i] - x[prev]).normalized();
        const Vec3 u2 = (x[next] - x[i]).normalized();
        e.bend += p.k_bend / p.rest_length * (1.0 - u1.dot(u2));
    }
    const double contact = 2.0 * p.bead_radius;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (ring_distance(i, j, n) < 2) continue;
            const double d = (x[i] - x[j]).norm();
            if (d < contact) e.collision += 0.5 * p.collision_stiffness() * (contact - d) * (contact - d);
        }
    }
    return e;
}

RopeState integrate(const RopeState& state, std::size_t grasp_index, const Vec3& applied_force,
                    const SimParams& params, double dt, long substeps) {
    RopeState s = state;
    auto& x = s.positions.points();
    auto& v = s.velocities;
    const std::size_t n = x.size();
    std::vector<Vec3> f(n);
    const double inv_mass = 1.0 / params.mass;
    for (long k = 0; k < substeps; ++k) {
        std::fill(f.begin(), f.end(), Vec3::Zero());
        add_stretch(x, v, params, f);
        add_bend(x, params, f);
        add_collision(x, v, params, f);
        add_drag(v, params, f);
        f[grasp_index] += applied_force;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += (dt * inv_mass) * f[i];
            x[i] += dt * v[i];
        }
    }
    check_finite(s);
    return s;
}

RopeState step_frame(const RopeState& state, std::size_t grasp_index, const Vec3& applied_force,
                     const SimParams& params) {
    if (grasp_index >= state.positions.size()) {
        throw std::out_of_range("grasp index " + std::to_string(grasp_index) + " out of range");
    }
    const long substeps = static_cast<long>(params.substeps_per_frame) * params.frame_skip;
    return integrate(state, grasp_index, applied_force, params, params.dt, substeps);
}

KnotConfiguration apply_reset_noise(const KnotConfiguration& config, double scale, Rng& rng,
                                    double rest_length) {
    if (scale == 0.0) return config;
    for (int attempt = 0; attempt < 10; ++attempt) {
        KnotConfiguration out = config;
        for (auto& p : out.points()) {
            for (int k = 0; k < 3; ++k) p[k] += uniform(rng, -scale, scale);
        }
        if (out.is_valid(rest_length)) return out;
    }
    return config;
}

}  // namespace knotsim
