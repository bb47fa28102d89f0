#include "knotsim/gauss_code.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "knotsim/errors.hpp"

namespace knotsim {
namespace {

using Vec2 = Eigen::Vector2d;
using boost::multiprecision::cpp_rational;

constexpr double kExactFallbackThreshold = 1e-12;

Vec2 xy(const Vec3& p) { return {p.x(), p.y()}; }

int exact_orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const cpp_rational ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
    const cpp_rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return det.sign();
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (a + t * ab - p).norm();
}

double segment_distance(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    return std::min({point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                     point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
}

struct Event {
    std::size_t segment;
    double param;
    std::size_t crossing;
    bool over;
};

}  // namespace

GaussCode::GaussCode(std::vector<GaussEntry> entries) : entries_(std::move(entries)) { check(entries_); }

void GaussCode::check(const std::vector<GaussEntry>& entries) {
    if (entries.size() % 2 != 0) {
        throw ValidationError("gauss code has odd length " + std::to_string(entries.size()));
    }
    const std::size_t n = entries.size() / 2;
    std::vector<int> over_seen(n + 1, 0), under_seen(n + 1, 0);
    std::uint32_t next_new = 1;
    for (const auto& e : entries) {
        if (e.label == 0 || e.label > n) {
            throw ValidationError("label " + std::to_string(e.label) + " outside 1.." + std::to_string(n));
        }
        if (over_seen[e.label] == 0 && under_seen[e.label] == 0) {
            if (e.label != next_new) {
                throw ValidationError("label " + std::to_string(e.label) + " first appears before label " +
                                      std::to_string(next_new));
            }
            ++next_new;
        }
        (e.over ? over_seen : under_seen)[e.label]++;
    }
    for (std::size_t k = 1; k <= n; ++k) {
        if (over_seen[k] != 1 || under_seen[k] != 1) {
            throw ValidationError("label " + std::to_string(k) + " must appear once over and once under");
        }
    }
}

GaussCode GaussCode::mirrored() const {
    GaussCode out = *this;
    for (auto& e : out.entries_) e.over = !e.over;
    return out;
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double det = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (std::abs(det) < kExactFallbackThreshold) return exact_orientation(a, b, c);
    return det > 0.0 ? 1 : -1;
}

std::vector<Crossing> find_crossings(const KnotConfiguration& config, const ProjectionTolerance& tol) {
    const std::size_t n = config.size();
    std::vector<Crossing> out;
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = xy(config[i]);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t i1 = config.next(i);
        const Vec2 lo_a = p[i].cwiseMin(p[i1]).array() - tol.xy_eps;
        const Vec2 hi_a = p[i].cwiseMax(p[i1]).array() + tol.xy_eps;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // shares bead 0
            const std::size_t j1 = config.next(j);
            const Vec2 lo_b = p[j].cwiseMin(p[j1]);
            const Vec2 hi_b = p[j].cwiseMax(p[j1]);
            if ((hi_b.array() < lo_a.array()).any() || (lo_b.array() > hi_a.array()).any()) continue;

            const int o1 = orientation(p[i], p[i1], p[j]);
            const int o2 = orientation(p[i], p[i1], p[j1]);
            const int o3 = orientation(p[j], p[j1], p[i]);
            const int o4 = orientation(p[j], p[j1], p[i1]);
            const bool proper = o1 * o2 < 0 && o3 * o4 < 0;
            if (!proper) {
                if (segment_distance(p[i], p[i1], p[j], p[j1]) < tol.xy_eps) {
                    throw DegenerateProjection("segments " + std::to_string(i) + " and " + std::to_string(j) +
                                               " touch without crossing properly");
                }
                continue;
            }

            const Vec2 r = p[i1] - p[i];
            const Vec2 s = p[j1] - p[j];
            const Vec2 qp = p[j] - p[i];
            const double denom = r.x() * s.y() - r.y() * s.x();
            const double t = (qp.x() * s.y() - qp.y() * s.x()) / denom;
            const double u = (qp.x() * r.y() - qp.y() * r.x()) / denom;
            const double len_r = r.norm();
            const double len_s = s.norm();
            if (std::min(t, 1.0 - t) * len_r < tol.xy_eps || std::min(u, 1.0 - u) * len_s < tol.xy_eps) {
                throw DegenerateProjection("crossing of segments " + std::to_string(i) + " and " +
                                           std::to_string(j) + " lies on a bead");
            }
            const double za = config[i].z() + t * (config[i1].z() - config[i].z());
            const double zb = config[j].z() + u * (config[j1].z() - config[j].z());
            if (std::abs(za - zb) <= tol.z_eps) {
                throw DegenerateProjection("segments " + std::to_string(i) + " and " + std::to_string(j) +
                                           " cross at equal height");
            }
            Crossing c;
            c.seg_a = i;
            c.seg_b = j;
            c.uv = p[i] + t * r;
            c.param_a = t;
            c.param_b = u;
            c.a_over = za > zb;
            out.push_back(c);
        }
    }
    return out;
}

GaussCode gauss_code_from_crossings(const std::vector<Crossing>& crossings, const ProjectionTolerance& tol) {
    std::vector<Event> events;
    events.reserve(2 * crossings.size());
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        const auto& c = crossings[k];
        events.push_back({c.seg_a, c.param_a, k, c.a_over});
        events.push_back({c.seg_b, c.param_b, k, !c.a_over});
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        if (x.segment != y.segment) return x.segment < y.segment;
        if (x.param != y.param) return x.param < y.param;
        return x.crossing < y.crossing;
    });
    for (std::size_t k = 1; k < events.size(); ++k) {
        if (events[k].segment == events[k - 1].segment &&
            events[k].param - events[k - 1].param <= tol.param_eps) {
            throw DegenerateProjection("two crossings coincide on segment " + std::to_string(events[k].segment));
        }
    }

    std::vector<std::uint32_t> label(crossings.size(), 0);
    std::uint32_t next_label = 1;
    std::vector<GaussEntry> entries;
    entries.reserve(events.size());
    for (const auto& e : events) {
        if (label[e.crossing] == 0) label[e.crossing] = next_label++;
        entries.push_back({label[e.crossing], e.over});
    }
    return GaussCode(std::move(entries));
}

GaussCode compute_gauss_code(const KnotConfiguration& config, const ProjectionTolerance& tol) {
    return gauss_code_from_crossings(find_crossings(config, tol), tol);
}

bool codes_equal(const GaussCode& a, const GaussCode& b) { return a.entries() == b.entries(); }

std::uint64_t count_possible_codes(unsigned n) {
    // (2n-1)!! * 2^n = prod_{k=1..n} 2(2k-1)
    std::uint64_t total = 1;
    for (std::uint64_t k = 1; k <= n; ++k) {
        const std::uint64_t factor = 2 * (2 * k - 1);
        if (total > std::numeric_limits<std::uint64_t>::max() / factor) {
            throw std::overflow_error("count_possible_codes(" + std::to_string(n) + ") exceeds 64 bits");
        }
        total *= factor;
    }
    return total;
}

GaussCode parse_code(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto expect = [&](char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) {
            throw ParseError(std::string("expected '") + c + "'", pos);
        }
        ++pos;
    };

    std::vector<GaussEntry> entries;
    expect('[');
    skip_ws();
    if (pos < text.size() && text[pos] == ']') {
        ++pos;
    } else {
        while (true) {
            skip_ws();
            const std::size_t start = pos;
            std::uint64_t label = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                label = label * 10 + static_cast<std::uint64_t>(text[pos] - '0');
                if (label > std::numeric_limits<std::uint32_t>::max()) throw ParseError("label too large", start);
                ++pos;
            }
            if (pos == start) throw ParseError("expected crossing label", pos);
            skip_ws();
            if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) {
                throw ParseError("expected '+' or '-'", pos);
            }
            entries.push_back({static_cast<std::uint32_t>(label), text[pos] == '+'});
            ++pos;
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            expect(']');
            break;
        }
    }
    skip_ws();
    if (pos != text.size()) throw ParseError("trailing characters", pos);
    return GaussCode(std::move(entries));
}

std::string format_code(const GaussCode& code) {
    std::string out = "[";
    bool first = true;
    for (const auto& e : code.entries()) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(e.label);
        out += e.over ? '+' : '-';
    }
    out += ']';
    return out;
}

}  // namespace knotsim
