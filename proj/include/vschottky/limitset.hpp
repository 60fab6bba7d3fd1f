#pragma once

// Limit sets approximated by word images of pairing discs, with nesting and
// decay diagnostics and a deterministic SVG renderer.

#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/schottky.hpp>
#include <vschottky/sphere.hpp>
#include <vschottky/words.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace vschottky {

inline constexpr int kDefaultLimitSetDepth = 8;
inline constexpr std::size_t kCircleBudget = 1000000;

struct SampleCircle {
    Word word;
    SphereDisc disc;
    int parent = -1;  // index of the circle of the word minus its last letter
    double diameter = 0.0;
};

struct LimitSetSample {
    int depth = 0;
    std::vector<std::string> names;
    std::vector<SampleCircle> circles;
    std::vector<SpherePoint> points;
    std::vector<double> max_diameter_by_depth;  // entry k-1 for words of length k
    bool truncated = false;
    bool classical = false;  // circles come from a pairing system and nest
};

struct SampleOptions {
    bool require_verified = true;
    std::size_t budget = kCircleBudget;
};

namespace detail {

// Fixed points deduplicated on a 1e-9 grid of sphere coordinates, kept in
// first-seen order.
class PointSet {
public:
    void add(const SpherePoint& p) {
        auto u = p.on_sphere();
        auto key = std::make_tuple(std::llround(u[0] * 1e9), std::llround(u[1] * 1e9), std::llround(u[2] * 1e9));
        if (seen_.insert(key).second) points_.push_back(p);
    }
    std::vector<SpherePoint> take() { return std::move(points_); }

private:
    std::set<std::tuple<long long, long long, long long>> seen_;
    std::vector<SpherePoint> points_;
};

inline void add_loxodromic_fixed_points(const MoebiusMap& m, PointSet& points) {
    if (classify(m).kind == MapKind::loxodromic)
        for (const auto& p : fixed_points(m)) points.add(p);
}

inline void record_diameter(LimitSetSample& s, std::size_t length, double d) {
    if (s.max_diameter_by_depth.size() < length) s.max_diameter_by_depth.resize(length, 0.0);
    s.max_diameter_by_depth[length - 1] = std::max(s.max_diameter_by_depth[length - 1], d);
}

}  // namespace detail

/// Discs w(D) for every reduced word w = w' l of length <= depth, where D is
/// the disc of the last letter; the parent of w(D) is the disc of w'.
inline LimitSetSample sample(const PairingSystem& ps, int depth, const SampleOptions& options = {}) {
    if (depth < 0) throw std::invalid_argument("sample: depth must be >= 0");
    if (options.require_verified) {
        auto report = verify_pairing(ps);
        if (!report.ok())
            throw std::invalid_argument("sample: pairing system does not verify: " + report.failures.front());
    }
    LimitSetSample s;
    s.depth = depth;
    s.classical = true;
    auto gens = ps.generators();
    s.names = generator_names(gens);
    detail::PointSet points;
    std::vector<int> stack(static_cast<std::size_t>(depth) + 1, -1);
    enumerate_words(gens, depth, [&](const Word& w, const MoebiusMap& value) {
        if (s.circles.size() >= options.budget) {
            s.truncated = true;
            return false;
        }
        // value = w' l, so w'(D_l) = value(l^-1 (D_l)) = value(complement of D_{l^-1})
        SphereDisc disc = disc_image(value, ps.letter_disc(w.back().inverse()).complement());
        int parent = stack[w.size() - 1];
        double diameter = spherical_diameter(disc);
        s.circles.push_back({w, disc, parent, diameter});
        stack[w.size()] = static_cast<int>(s.circles.size()) - 1;
        detail::record_diameter(s, w.size(), diameter);
        detail::add_loxodromic_fixed_points(value, points);
        return true;
    });
    s.points = points.take();
    return s;
}

/// Sample of an assembled group. A single leaf with a verifying Schottky
/// pairing is sampled through it. Otherwise the circles are the images of the
/// certificate discs under words outside their stabilizers, without parents.
inline LimitSetSample sample(const ConstructionTree& tree, int depth, const SampleOptions& options = {}) {
    if (depth < 0) throw std::invalid_argument("sample: depth must be >= 0");
    auto group = assemble(tree);
    if (options.require_verified)
        for (const auto& [name, report] : group.certificates)
            if (!report.ok()) throw std::invalid_argument("sample: certificate '" + name + "' does not hold");

    LimitSetSample s;
    s.depth = depth;
    s.names = group.names();
    if (tree.kind() == ConstructionTree::Kind::leaf) {
        if (auto ps = schottky_pairing(tree.group()); ps && verify_pairing(*ps).ok()) {
            auto inner = sample(*ps, depth, options);
            inner.names = s.names;
            // rewrite words over the leaf's generator indices
            for (auto& c : inner.circles)
                for (auto& l : c.word)
                    l.gen = tree.group().schottky_generators[static_cast<std::size_t>(l.gen)];
            return inner;
        }
    }

    std::vector<SphereDisc> seeds;
    auto collect = [&](auto&& self, const ConstructionTree::Node& n) -> void {
        if (n.b1) seeds.push_back(*n.b1);
        if (n.b2) seeds.push_back(*n.b2);
        if (n.left) self(self, *n.left);
        if (n.right) self(self, *n.right);
    };
    collect(collect, tree.node());

    detail::PointSet points;
    const auto& gens = group.generators;
    enumerate_words(gens, depth, [&](const Word& w, const MoebiusMap& value) {
        detail::add_loxodromic_fixed_points(value, points);
        for (const auto& seed : seeds) {
            if (s.circles.size() >= options.budget) {
                s.truncated = true;
                return false;
            }
            SphereDisc disc = disc_image(value, seed);
            if (relation(disc, seed, 1e-9) == DiscRelation::overlapping) continue;
            double diameter = spherical_diameter(disc);
            s.circles.push_back({w, disc, -1, diameter});
            detail::record_diameter(s, w.size(), diameter);
        }
        return true;
    });
    s.points = points.take();
    return s;
}

struct DisconnectednessReport {
    double max_terminal_diameter = 0.0;
    std::size_t nesting_violations = 0;
    std::vector<std::string> violations;  // first few offending words
    bool strictly_decreasing = true;      // from depth 2 on
    double contraction = 0.0;             // rho from depth 2 to the terminal depth
    double constant = 0.0;                // C with max_diameter(k) <= C rho^k
};

/// Nesting of every circle in its parent (within 1e-7) and decay of the
/// maximal diameter per depth.
inline DisconnectednessReport disconnectedness_report(const LimitSetSample& s, std::size_t keep = 10) {
    if (s.depth < 2) throw std::invalid_argument("disconnectedness_report: sample depth must be >= 2");
    DisconnectednessReport r;
    for (const auto& c : s.circles) {
        if (c.parent < 0) continue;
        if (!contains(s.circles[static_cast<std::size_t>(c.parent)].disc, c.disc, 1e-7)) {
            ++r.nesting_violations;
            if (r.violations.size() < keep) r.violations.push_back(format_word(c.word, s.names));
        }
    }
    const auto& d = s.max_diameter_by_depth;
    if (!d.empty()) r.max_terminal_diameter = d.back();
    for (std::size_t k = 2; k < d.size(); ++k)
        if (!(d[k] < d[k - 1])) r.strictly_decreasing = false;
    if (d.size() >= 3 && d[1] > 0.0 && d.back() > 0.0) {
        double steps = static_cast<double>(d.size() - 2);
        r.contraction = std::pow(d.back() / d[1], 1.0 / steps);
        for (std::size_t k = 1; k < d.size(); ++k)
            r.constant = std::max(r.constant, d[k] / std::pow(r.contraction, static_cast<double>(k + 1)));
    }
    return r;
}

/// One line per circle: word, (A, B, C, side), chordal diameter.
inline void write_sample(std::ostream& os, const LimitSetSample& s) {
    char buf[256];
    for (const auto& c : s.circles) {
        const auto& k = c.disc.circle();
        std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g %.12g %d %.12g", k.A(), k.B().real(), k.B().imag(), k.C(),
                      c.disc.side(), c.diameter);
        os << (c.word.empty() ? std::string("1") : format_word(c.word, s.names)) << " " << buf << "\n";
    }
}

struct RenderOptions {
    int width = 800;
    int height = 800;
    Complex center = 0.0;
    double half_width = 4.0;  // plane units from center to the left edge
    double stroke = 1.0;
};

/// SVG of the sample in the plane window. Circles through infinity are drawn
/// as lines, fixed points as dots; colors cycle with word length.
inline std::string render(const LimitSetSample& s, const RenderOptions& o = {}) {
    if (o.width <= 0 || o.height <= 0 || !(o.half_width > 0.0))
        throw std::invalid_argument("render: image size and window must be positive");
    static const char* palette[] = {"#1f4e79", "#2e75b6", "#548235", "#bf9000", "#c55a11", "#7030a0", "#c00000", "#3b3838"};
    const double scale = o.width / (2.0 * o.half_width);
    auto px = [&](Complex z) {
        return std::pair{(z.real() - o.center.real()) * scale + o.width / 2.0,
                         -(z.imag() - o.center.imag()) * scale + o.height / 2.0};
    };
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  o.width, o.height, o.width, o.height);
    out << buf;
    std::snprintf(buf, sizeof buf, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", o.width, o.height);
    out << buf;
    const double reach = 4.0 * (o.width + o.height);
    for (const auto& c : s.circles) {
        const char* color = palette[(c.word.size() + 7) % 8];
        const auto& k = c.disc.circle();
        if (std::abs(k.A()) < 1e-12) {
            // 2 Re(conj(B) z) + C = 0
            Complex b = k.B();
            Complex foot = -k.C() * b / (2.0 * std::norm(b));
            Complex dir = Complex{0.0, 1.0} * b / std::abs(b);
            auto [x1, y1] = px(foot - dir * reach);
            auto [x2, y2] = px(foot + dir * reach);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" stroke-width=\"%.3f\"/>\n",
                          x1, y1, x2, y2, color, o.stroke);
        } else {
            auto [x, y] = px(k.center());
            double r = k.radius() * scale;
            if (r < 0.05) r = 0.05;
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"%s\" "
                          "stroke-width=\"%.3f\"/>\n",
                          x, y, r, color, o.stroke);
        }
        out << buf;
    }
    for (const auto& p : s.points) {
        if (p.is_infinity()) continue;
        auto [x, y] = px(p.value());
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"black\"/>\n", x, y,
                      1.5 * o.stroke);
        out << buf;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace vschottky
