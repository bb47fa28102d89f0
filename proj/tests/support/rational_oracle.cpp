#include "rational_oracle.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include <gmpxx.h>

namespace knotsim::testing {
namespace {

struct Q2 {
    mpq_class x, y;
};

mpq_class cross(const Q2& a, const Q2& b) { return a.x * b.y - a.y * b.x; }
Q2 sub(const Q2& a, const Q2& b) { return {a.x - b.x, a.y - b.y}; }

// Whether point p lies on the closed segment [a, b] (exact).
bool on_segment(const Q2& p, const Q2& a, const Q2& b) {
    if (sgn(cross(sub(b, a), sub(p, a))) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

struct Event {
    std::size_t segment;
    mpq_class param;
    std::size_t crossing;
    bool over;
};

}  // namespace

std::optional<ExactResult> exact_gauss_code(const KnotConfiguration& config) {
    const std::size_t n = config.size();
    std::vector<Q2> p(n);
    std::vector<mpq_class> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = {mpq_class(config[i].x()), mpq_class(config[i].y())};
        z[i] = mpq_class(config[i].z());
    }

    ExactResult result;
    std::vector<Event> events;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t i1 = (i + 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t j1 = (j + 1) % n;
            // Each unordered pair once; skip pairs sharing a bead.
            if (j <= i || j == i1 || j1 == i) continue;

            const Q2 r = sub(p[i1], p[i]);
            const Q2 s = sub(p[j1], p[j]);
            const int o1 = sgn(cross(r, sub(p[j], p[i])));
            const int o2 = sgn(cross(r, sub(p[j1], p[i])));
            const int o3 = sgn(cross(s, sub(p[i], p[j])));
            const int o4 = sgn(cross(s, sub(p[i1], p[j])));
            if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
                if (on_segment(p[j], p[i], p[i1]) || on_segment(p[j1], p[i], p[i1]) ||
                    on_segment(p[i], p[j], p[j1]) || on_segment(p[i1], p[j], p[j1])) {
                    return std::nullopt;
                }
                continue;
            }
            if (o1 == o2 || o3 == o4) continue;

            const mpq_class denom = cross(r, s);
            const Q2 qp = sub(p[j], p[i]);
            const mpq_class t = cross(qp, s) / denom;
            const mpq_class u = cross(qp, r) / denom;
            const mpq_class za = z[i] + t * (z[i1] - z[i]);
            const mpq_class zb = z[j] + u * (z[j1] - z[j]);
            if (za == zb) return std::nullopt;
            const bool a_over = za > zb;
            const std::size_t k = result.crossings.size();
            result.crossings.push_back({i, j, a_over});
            events.push_back({i, t, k, a_over});
            events.push_back({j, u, k, !a_over});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.segment != b.segment) return a.segment < b.segment;
        return a.param < b.param;
    });
    for (std::size_t k = 1; k < events.size(); ++k) {
        if (events[k].segment == events[k - 1].segment && events[k].param == events[k - 1].param) return std::nullopt;
    }
    std::vector<std::uint32_t> label(result.crossings.size(), 0);
    std::uint32_t next = 1;
    std::vector<GaussEntry> entries;
    for (const auto& e : events) {
        if (label[e.crossing] == 0) label[e.crossing] = next++;
        entries.push_back({label[e.crossing], e.over});
    }
    result.code = GaussCode(std::move(entries));
    return result;
}

unsigned long long enumerate_gauss_codes(unsigned n) {
    if (n > 8) throw std::invalid_argument("enumeration supports n <= 8");
    const unsigned len = 2 * n;
    const unsigned alphabet = 2 * n;  // symbol = 2 * (label - 1) + (over ? 1 : 0)
    std::vector<unsigned> word(len, 0);
    unsigned long long count = 0;
    while (true) {
        // Check: each label once over, once under; labels first appear in order.
        std::array<int, 16> seen{};
        unsigned next_label = 0;
        bool ok = true;
        for (unsigned k = 0; k < len && ok; ++k) {
            const unsigned label = word[k] / 2;
            if (seen[2 * label] == 0 && seen[2 * label + 1] == 0) {
                if (label != next_label) ok = false;
                ++next_label;
            }
            if (++seen[word[k]] > 1) ok = false;
        }
        if (ok) ++count;

        unsigned pos = 0;
        while (pos < len && ++word[pos] == alphabet) word[pos++] = 0;
        if (pos == len) break;
    }
    return count;
}

}  // namespace knotsim::testing
