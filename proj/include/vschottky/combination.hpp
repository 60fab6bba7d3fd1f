#pragma once

// Klein-Maskit combination: free products with trivial or finite cyclic
// amalgam and HNN extensions, with their disc hypotheses checked by bounded
// word enumeration. A failed check throws HypothesisFailure carrying a
// concrete witness.

#include <vschottky/basic_groups.hpp>
#include <vschottky/moebius.hpp>
#include <vschottky/sphere.hpp>
#include <vschottky/words.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vschottky {

inline constexpr int kDefaultDepth = 6;

enum class Outcome { pass, bounded_pass, fail };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::bounded_pass: return "bounded-pass";
        case Outcome::fail: return "fail";
    }
    return "?";
}

struct HypothesisCheck {
    std::string name;
    Outcome outcome = Outcome::pass;
    int depth = 0;
    std::size_t words_checked = 0;
    std::string witness;

    bool ok() const { return outcome != Outcome::fail; }
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok()) return false;
        return true;
    }
    const HypothesisCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.ok()) return &c;
        return nullptr;
    }
    void add(HypothesisCheck c) { checks.push_back(std::move(c)); }
    void add(std::string name, bool passed, std::string witness = {}) {
        checks.push_back({std::move(name), passed ? Outcome::pass : Outcome::fail, 0, 0,
                          passed ? std::string{} : std::move(witness)});
    }
};

class HypothesisFailure : public std::runtime_error {
public:
    HypothesisFailure(const std::string& where, HypothesisReport report)
        : std::runtime_error(describe(where, report)), report_(std::move(report)) {}

    const HypothesisReport& report() const { return report_; }

private:
    static std::string describe(const std::string& where, const HypothesisReport& r) {
        const auto* f = r.first_failure();
        std::string out = where + ": hypothesis '" + (f ? f->name : "?") + "' fails";
        if (f && !f->witness.empty()) out += ", witness " + f->witness;
        return out;
    }

    HypothesisReport report_;
};

/// A cyclic subgroup given by a generator of finite order; no generator means
/// the trivial group.
struct CyclicSubgroup {
    std::optional<MoebiusMap> generator;
    int order = 1;

    static CyclicSubgroup trivial() { return {}; }
    /// Order read off the classification; throws unless the map is elliptic
    /// of finite order.
    static CyclicSubgroup generated_by(const MoebiusMap& m) {
        auto cls = classify(m);
        if (cls.kind != MapKind::elliptic || cls.order == 0)
            throw std::invalid_argument("CyclicSubgroup: generator is " + std::string(to_string(cls.kind)) +
                                        ", not elliptic of finite order");
        return {m, cls.order};
    }

    std::vector<MoebiusMap> elements() const {
        std::vector<MoebiusMap> out{MoebiusMap::identity()};
        if (generator)
            for (int k = 1; k < order; ++k) out.push_back(compose(out.back(), *generator));
        return out;
    }
    bool contains(const MoebiusMap& m, double tolerance = kTolerance) const {
        for (const auto& e : elements())
            if (projectively_equal(e, m, tolerance)) return true;
        return false;
    }
};

/// X is stabilized by H and every reduced word of length <= depth outside H
/// moves the open disc X off itself. Exact pass when every generator of K lies
/// in H; otherwise a bounded pass.
inline HypothesisCheck check_precisely_invariant(const SphereDisc& x, const CyclicSubgroup& h,
                                                 const std::vector<Generator>& k, int depth,
                                                 const std::string& name = "precisely invariant") {
    if (depth < 1) throw std::invalid_argument("check_precisely_invariant: depth must be >= 1");
    HypothesisCheck check{name, Outcome::bounded_pass, depth, 0, {}};
    if (h.generator && !same_disc(disc_image(*h.generator, x), x, 1e-7)) {
        check.outcome = Outcome::fail;
        check.witness = "subgroup generator does not preserve the disc";
        return check;
    }
    bool all_in_h = true;
    for (const auto& g : k) all_in_h = all_in_h && h.contains(g.map, 1e-7);
    if (all_in_h) {
        check.outcome = Outcome::pass;
        return check;
    }
    auto names = generator_names(k);
    // rounding in a product grows with the square of the largest partial product
    std::vector<double> peak(static_cast<std::size_t>(depth) + 1, 1.0);
    check.words_checked = enumerate_words(k, depth, [&](const Word& w, const MoebiusMap& value) {
        peak[w.size()] = std::max(peak[w.size() - 1], value.norm());
        if (h.contains(value, std::max(1e-7, 1e-14 * peak[w.size()] * peak[w.size()]))) return true;
        if (relation(disc_image(value, x), x) == DiscRelation::overlapping) {
            check.outcome = Outcome::fail;
            check.witness = format_word(w, names);
            return false;
        }
        return true;
    });
    return check;
}

struct Amalgam {
    std::string left;
    std::string right;
    int order = 1;
};

/// Tree of basic groups joined by combination nodes. Nodes are immutable and
/// shared between copies.
class ConstructionTree {
public:
    enum class Kind { trivial, leaf, product, hnn };

    struct Node {
        Kind kind = Kind::trivial;
        std::string label;
        std::optional<BasicGroup> group;
        std::shared_ptr<const Node> left;   // product left, hnn base
        std::shared_ptr<const Node> right;  // product right
        std::optional<Amalgam> amalgam;
        std::optional<SphereDisc> b1, b2;
        std::optional<Generator> stable;
        std::string h1, h2;  // hnn edge generators, empty for trivial
        int h_order = 1;
        int h_exponent = 1;  // stable^-1 h2 stable = h1^h_exponent
        HypothesisReport report;
    };

    ConstructionTree() : node_(std::make_shared<Node>()) {}
    explicit ConstructionTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static ConstructionTree trivial() { return {}; }
    static ConstructionTree leaf(BasicGroup group) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::leaf;
        n->label = group.label;
        n->group = std::move(group);
        return ConstructionTree(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const Node& node() const { return *node_; }
    const std::string& label() const { return node_->label; }
    const BasicGroup& group() const { return *node_->group; }
    ConstructionTree left() const { return ConstructionTree(node_->left); }
    ConstructionTree right() const { return ConstructionTree(node_->right); }
    ConstructionTree base() const { return ConstructionTree(node_->left); }

private:
    std::shared_ptr<const Node> node_;
};

/// Generators in tree order: leaves left to right, stable letters after their
/// base.
inline std::vector<Generator> tree_generators(const ConstructionTree& t) {
    using Kind = ConstructionTree::Kind;
    switch (t.kind()) {
        case Kind::trivial: return {};
        case Kind::leaf: return t.group().generators;
        case Kind::product: {
            auto g = tree_generators(t.left());
            auto r = tree_generators(t.right());
            g.insert(g.end(), r.begin(), r.end());
            return g;
        }
        case Kind::hnn: {
            auto g = tree_generators(t.base());
            g.push_back(*t.node().stable);
            return g;
        }
    }
    return {};
}

inline int find_generator(const std::vector<Generator>& gens, const std::string& name) {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return static_cast<int>(i);
    return -1;
}

namespace detail {

inline const Generator& require_generator(const std::vector<Generator>& gens, const std::string& name,
                                          const std::string& where) {
    int i = find_generator(gens, name);
    if (i < 0) throw std::invalid_argument(where + ": unknown generator '" + name + "'");
    return gens[static_cast<std::size_t>(i)];
}

inline void require_unique_names(const std::vector<Generator>& a, const std::vector<Generator>& b,
                                 const std::string& where) {
    std::set<std::string> seen;
    for (const auto* list : {&a, &b})
        for (const auto& g : *list)
            if (!seen.insert(g.name).second)
                throw std::invalid_argument(where + ": duplicate generator name '" + g.name + "'");
}

}  // namespace detail

/// Free product of left and right amalgamated over the subgroup generated by
/// the named pair (projectively equal, finite order), or over the trivial
/// group. B1 must be precisely invariant under the amalgam in left, B2 in
/// right, and the two open discs must share their boundary circle.
inline ConstructionTree free_product(const ConstructionTree& left, const ConstructionTree& right,
                                     const std::optional<std::pair<std::string, std::string>>& amalgam,
                                     const SphereDisc& b1, const SphereDisc& b2, int depth = kDefaultDepth,
                                     const std::string& label = {}) {
    const std::string where = "free_product" + (label.empty() ? std::string{} : " " + label);
    auto lg = tree_generators(left), rg = tree_generators(right);
    detail::require_unique_names(lg, rg, where);

    HypothesisReport report;
    CyclicSubgroup hl, hr;
    std::optional<Amalgam> am;
    if (amalgam) {
        const auto& u = detail::require_generator(lg, amalgam->first, where);
        const auto& v = detail::require_generator(rg, amalgam->second, where);
        auto cls = classify(u.map);
        bool finite = cls.kind == MapKind::elliptic && cls.order > 0;
        report.add("amalgam is finite cyclic", finite, u.name + " is " + to_string(cls.kind));
        bool equal = projectively_equal(u.map, v.map, 1e-7);
        report.add("amalgam generators agree", equal, u.name + " != " + v.name);
        if (finite && equal) {
            hl = CyclicSubgroup::generated_by(u.map);
            hr = CyclicSubgroup::generated_by(v.map);
            am = Amalgam{u.name, v.name, cls.order};
        }
    }
    bool common = same_circle(b1.circle(), b2.circle(), 1e-7) &&
                  relation(b1, b2, 1e-7) == DiscRelation::touching;
    report.add("discs share their boundary", common, "B1 and B2 are not complementary");
    if (report.ok()) {
        report.add(check_precisely_invariant(b1, hl, lg, depth, "B1 precisely invariant in left"));
        report.add(check_precisely_invariant(b2, hr, rg, depth, "B2 precisely invariant in right"));
    }
    if (!report.ok()) throw HypothesisFailure(where, report);

    auto n = std::make_shared<ConstructionTree::Node>();
    n->kind = ConstructionTree::Kind::product;
    n->label = label;
    n->left = std::make_shared<ConstructionTree::Node>(left.node());
    n->right = std::make_shared<ConstructionTree::Node>(right.node());
    n->amalgam = am;
    n->b1 = b1;
    n->b2 = b2;
    n->report = std::move(report);
    return ConstructionTree(std::move(n));
}

/// HNN extension of base by a loxodromic stable letter A with A(S1) = S2,
/// A(B1) disjoint from B2, A^-1 H2 A = H1, Bj precisely invariant under Hj in
/// the base, and T(closure B1) disjoint from closure B2 for base words T.
/// Empty h1/h2 mean trivial edge groups.
inline ConstructionTree hnn_extension(const ConstructionTree& base, const Generator& stable,
                                      const SphereDisc& b1, const SphereDisc& b2, const std::string& h1 = {},
                                      const std::string& h2 = {}, int depth = kDefaultDepth,
                                      const std::string& label = {}) {
    const std::string where = "hnn_extension" + (label.empty() ? std::string{} : " " + label);
    auto bg = tree_generators(base);
    detail::require_unique_names(bg, {stable}, where);
    if (h1.empty() != h2.empty())
        throw std::invalid_argument(where + ": edge groups must both be trivial or both cyclic");

    HypothesisReport report;
    auto cls = classify(stable.map);
    bool lox = cls.kind == MapKind::loxodromic;
    report.add("stable letter is loxodromic", lox, stable.name + " is " + to_string(cls.kind));
    auto image = map_circle(stable.map, b1.circle());
    bool sigma = same_circle(image, b2.circle(), 1e-7);
    std::ostringstream mismatch;
    mismatch << stable.name << "(S1) = " << image << " but S2 = " << b2.circle();
    report.add("A(S1) = S2", sigma, mismatch.str());
    bool off = relation(disc_image(stable.map, b1), b2, 1e-7) != DiscRelation::overlapping;
    report.add("A(B1) disjoint from B2", off, stable.name + "(B1) meets B2");

    CyclicSubgroup c1, c2;
    int exponent = 1;
    if (!h1.empty()) {
        const auto& u1 = detail::require_generator(bg, h1, where);
        const auto& u2 = detail::require_generator(bg, h2, where);
        auto k1 = classify(u1.map), k2 = classify(u2.map);
        bool finite = k1.kind == MapKind::elliptic && k1.order > 0 && k2.kind == MapKind::elliptic &&
                      k2.order == k1.order;
        report.add("edge groups are finite cyclic of equal order", finite, h1 + ", " + h2);
        if (finite) {
            c1 = CyclicSubgroup::generated_by(u1.map);
            c2 = CyclicSubgroup::generated_by(u2.map);
            auto conj = compose(compose(stable.map.inverse(), u2.map), stable.map);
            auto powers = c1.elements();
            bool found = false;
            for (int r = 1; r < c1.order && !found; ++r)
                if (projectively_equal(conj, powers[static_cast<std::size_t>(r)], 1e-7)) {
                    exponent = r;
                    found = true;
                }
            report.add("A^-1 H2 A = H1", found, stable.name + "^-1 " + h2 + " " + stable.name);
        }
    }
    if (report.ok()) {
        report.add(check_precisely_invariant(b1, c1, bg, depth, "B1 precisely invariant under H1"));
        report.add(check_precisely_invariant(b2, c2, bg, depth, "B2 precisely invariant under H2"));
        HypothesisCheck apart{"T(B1) disjoint from B2", Outcome::bounded_pass, depth, 1, {}};
        if (relation(b1, b2) != DiscRelation::disjoint) {
            apart.outcome = Outcome::fail;
            apart.witness = "1";
        } else {
            auto names = generator_names(bg);
            apart.words_checked += enumerate_words(bg, depth, [&](const Word& w, const MoebiusMap& v) {
                if (relation(disc_image(v, b1), b2) != DiscRelation::disjoint) {
                    apart.outcome = Outcome::fail;
                    apart.witness = format_word(w, names);
                    return false;
                }
                return true;
            });
        }
        report.add(apart);
    }
    if (!report.ok()) throw HypothesisFailure(where, report);

    auto n = std::make_shared<ConstructionTree::Node>();
    n->kind = ConstructionTree::Kind::hnn;
    n->label = label;
    n->left = std::make_shared<ConstructionTree::Node>(base.node());
    n->b1 = b1;
    n->b2 = b2;
    n->stable = stable;
    n->h1 = h1;
    n->h2 = h2;
    n->h_order = c1.order;
    n->h_exponent = exponent;
    n->report = std::move(report);
    return ConstructionTree(std::move(n));
}

/// Relator over global generator indices.
struct GlobalRelation {
    std::string name;
    Word word;
};

struct AssembledGroup {
    std::vector<Generator> generators;
    std::vector<GlobalRelation> relations;
    std::vector<std::pair<std::string, HypothesisReport>> certificates;

    std::vector<std::string> names() const { return generator_names(generators); }
};

namespace detail {

inline void assemble_into(const ConstructionTree& t, AssembledGroup& out) {
    using Kind = ConstructionTree::Kind;
    auto index = [&](const std::string& name) { return find_generator(out.generators, name); };
    switch (t.kind()) {
        case Kind::trivial: return;
        case Kind::leaf: {
            int offset = static_cast<int>(out.generators.size());
            const auto& g = t.group();
            out.generators.insert(out.generators.end(), g.generators.begin(), g.generators.end());
            for (const auto& r : g.relations) {
                Word w = r.word;
                for (auto& l : w) l.gen += offset;
                out.relations.push_back({g.label.empty() ? r.name : g.label + ": " + r.name, w});
            }
            return;
        }
        case Kind::product: {
            assemble_into(t.left(), out);
            assemble_into(t.right(), out);
            const auto& n = t.node();
            if (n.amalgam)
                out.relations.push_back({n.amalgam->left + " = " + n.amalgam->right,
                                         {{index(n.amalgam->left), 1}, {index(n.amalgam->right), -1}}});
            out.certificates.emplace_back(n.label.empty() ? "product" : n.label, n.report);
            return;
        }
        case Kind::hnn: {
            assemble_into(t.base(), out);
            const auto& n = t.node();
            out.generators.push_back(*n.stable);
            int a = index(n.stable->name);
            if (!n.h1.empty()) {
                Word w{{a, -1}, {index(n.h2), 1}, {a, 1}};
                for (int k = 0; k < n.h_exponent; ++k) w.push_back({index(n.h1), -1});
                out.relations.push_back({n.stable->name + "^-1 " + n.h2 + " " + n.stable->name + " = " +
                                             n.h1 + (n.h_exponent == 1 ? std::string() : "^" + std::to_string(n.h_exponent)),
                                         w});
            }
            out.certificates.emplace_back(n.label.empty() ? "hnn" : n.label, n.report);
            return;
        }
    }
}

}  // namespace detail

/// Flat generator list, relators and the certificate bundle of a tree.
inline AssembledGroup assemble(const ConstructionTree& tree) {
    AssembledGroup out;
    detail::assemble_into(tree, out);
    return out;
}

/// Quotient orbifold signature of the assembled group. Free products add
/// genera and merge cone points; a finite amalgam of order m removes one cone
/// point of order m from each side; an HNN extension adds a handle and removes
/// the cone points of its edge groups.
inline OrbifoldSignature tree_signature(const ConstructionTree& t) {
    using Kind = ConstructionTree::Kind;
    auto remove_cone = [](std::vector<int>& cones, int m) {
        auto it = std::find(cones.begin(), cones.end(), m);
        if (it == cones.end())
            throw std::logic_error("tree_signature: no cone point of order " + std::to_string(m));
        cones.erase(it);
    };
    switch (t.kind()) {
        case Kind::trivial: return {0, {}};
        case Kind::leaf: return orbifold_signature(t.group());
        case Kind::product: {
            auto l = tree_signature(t.left()), r = tree_signature(t.right());
            int m = t.node().amalgam ? t.node().amalgam->order : 1;
            if (m > 1) {
                remove_cone(l.cones, m);
                remove_cone(r.cones, m);
            }
            l.cones.insert(l.cones.end(), r.cones.begin(), r.cones.end());
            return {l.genus + r.genus, l.cones};
        }
        case Kind::hnn: {
            auto b = tree_signature(t.base());
            int m = t.node().h_order;
            if (m > 1) {
                remove_cone(b.cones, m);
                remove_cone(b.cones, m);
            }
            return {b.genus + 1, b.cones};
        }
    }
    return {};
}

/// Disc around the fixed point p of an involution (other fixed point q)
/// bounded by a circle it preserves: the preimage of |w| < rho under the map
/// sending p to 0 and q to infinity.
inline SphereDisc disc_around(const SpherePoint& p, const SpherePoint& q, double rho) {
    auto s = MoebiusMap::sending_to_zero_infinity(p, q);
    return disc_image(s.inverse(), SphereDisc::inside(0.0, rho));
}

struct AmalgamPlacement {
    BasicGroup right;  // conjugated so its involution equals the left one
    SphereDisc b1;
    SphereDisc b2;
};

/// Auto-placement for an amalgam over an involution: picks a precisely
/// invariant disc around a fixed point of each involution, halving the radius
/// from `radius` until the bounded check passes, then conjugates the right
/// group so that its disc becomes the complement of the left one.
inline AmalgamPlacement place_for_amalgam(const std::vector<Generator>& left, const std::string& left_inv,
                                          const BasicGroup& right, const std::string& right_inv,
                                          double radius = 0.5, int depth = kDefaultDepth) {
    auto pick = [&](const std::vector<Generator>& gens, const std::string& name)
        -> std::tuple<SpherePoint, SpherePoint, double> {
        const auto& u = detail::require_generator(gens, name, "place_for_amalgam");
        auto cls = classify(u.map);
        if (cls.kind != MapKind::elliptic || cls.order != 2)
            throw std::invalid_argument("place_for_amalgam: " + name + " is not an involution");
        auto fp = fixed_points(u.map);
        auto h = CyclicSubgroup::generated_by(u.map);
        for (int flip = 0; flip < 2; ++flip) {
            const auto& p = fp[static_cast<std::size_t>(flip)];
            const auto& q = fp[static_cast<std::size_t>(1 - flip)];
            double rho = radius;
            for (int attempt = 0; attempt < 12; ++attempt, rho /= 2.0)
                if (check_precisely_invariant(disc_around(p, q, rho), h, gens, depth).ok())
                    return {p, q, rho};
        }
        throw std::runtime_error("place_for_amalgam: no precisely invariant disc around the fixed points of " +
                                 name);
    };
    auto [p, q, rho] = pick(left, left_inv);
    auto [pr, qr, rho_r] = pick(right.generators, right_inv);
    auto sl = MoebiusMap::sending_to_zero_infinity(p, q);
    auto sr = MoebiusMap::sending_to_zero_infinity(pr, qr);
    MoebiusMap swap(0.0, rho * rho_r, 1.0, 0.0);  // w -> rho rho_r / w
    MoebiusMap t = compose(compose(sl.inverse(), swap), sr);
    SphereDisc b1 = disc_around(p, q, rho);
    return {conjugate(right, t), b1, b1.complement()};
}

}  // namespace vschottky
