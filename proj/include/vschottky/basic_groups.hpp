#pragma once

// Basic virtual Schottky groups of types T1-T7 and B3.
//
// Every T-type is a split extension F x| Q of a free group F (the distinguished
// Schottky subgroup) by a finite abelian group Q whose generators act on each
// free generator either trivially or by inversion. B3 groups are amalgams of
// T3/T5/T6 groups over shared involutions and are assembled in b3.hpp.

#include <vschottky/moebius.hpp>
#include <vschottky/schottky.hpp>
#include <vschottky/sphere.hpp>
#include <vschottky/words.hpp>

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vschottky {

using Rational = boost::rational<std::int64_t>;

enum class BasicType { T1, T2, T3, T4, T5, T6, T7, B3 };

inline const char* to_string(BasicType t) {
    switch (t) {
        case BasicType::T1: return "T1";
        case BasicType::T2: return "T2";
        case BasicType::T3: return "T3";
        case BasicType::T4: return "T4";
        case BasicType::T5: return "T5";
        case BasicType::T6: return "T6";
        case BasicType::T7: return "T7";
        case BasicType::B3: return "B3";
    }
    return "?";
}

inline std::optional<BasicType> parse_basic_type(const std::string& s) {
    for (auto t : {BasicType::T1, BasicType::T2, BasicType::T3, BasicType::T4, BasicType::T5,
                   BasicType::T6, BasicType::T7, BasicType::B3})
        if (s == to_string(t)) return t;
    return std::nullopt;
}

/// (genus; cone orders), cone orders kept sorted.
struct OrbifoldSignature {
    int genus = 0;
    std::vector<int> cones;

    OrbifoldSignature() = default;
    OrbifoldSignature(int g, std::vector<int> c) : genus(g), cones(std::move(c)) {
        std::sort(cones.begin(), cones.end());
    }

    bool operator==(const OrbifoldSignature&) const = default;

    /// Orbifold Euler characteristic 2 - 2g - sum(1 - 1/m).
    Rational euler_characteristic() const {
        Rational chi(2 - 2 * genus);
        for (int m : cones) chi -= Rational(1) - Rational(1, m);
        return chi;
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << genus;
        if (!cones.empty()) {
            os << ";";
            for (std::size_t i = 0; i < cones.size(); ++i) os << (i ? "," : "") << cones[i];
        }
        os << ")";
        return os.str();
    }
};

inline std::ostream& operator<<(std::ostream& os, const OrbifoldSignature& s) { return os << s.str(); }

struct BasicParams {
    int n = 2;
    Complex lambda1 = 2.0;
    Complex lambda2 = 2.0;
    Complex lambda3 = 2.0;
};

/// Split structure F x| Q used by the symbolic layer. Indices refer to the
/// group's generator list.
struct SplitStructure {
    std::vector<int> free_gens;
    std::vector<int> finite_gens;
    std::vector<int> finite_orders;
    /// inverts[i][k]: finite generator i inverts free generator k
    std::vector<std::vector<bool>> inverts;
};

/// A relator over the group's own generator indices, with a display name.
struct Relation {
    std::string name;
    Word word;
};

class ConstructionTree;

struct BasicGroup {
    BasicType type = BasicType::T1;
    BasicParams params;
    std::string label;
    std::vector<Generator> generators;
    std::vector<int> schottky_generators;
    /// H = K/G as cyclic orders, and the image of each generator.
    std::vector<int> quotient_orders;
    std::vector<std::vector<int>> theta;
    Rational chi{0};
    OrbifoldSignature signature;
    std::vector<Relation> relations;
    /// Commutation relations in their usual written form, checked alongside relations.
    std::vector<Relation> extra_relations;
    SplitStructure split;
    /// Accumulated conjugator from the standard model.
    MoebiusMap placement;
    /// B3 only: the amalgam of its components.
    std::shared_ptr<const ConstructionTree> components;

    int schottky_rank() const { return static_cast<int>(schottky_generators.size()); }
    int quotient_order() const {
        int h = 1;
        for (int d : quotient_orders) h *= d;
        return h;
    }
    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].name == name) return static_cast<int>(i);
        return -1;
    }
    std::vector<std::string> names() const { return generator_names(generators); }
};

namespace detail {

inline std::string qualified(const std::string& label, const std::string& name) {
    return label.empty() ? name : label + "." + name;
}

inline Word letters(std::initializer_list<std::pair<int, int>> spec) {
    Word w;
    for (auto [g, e] : spec)
        for (int k = 0; k < std::abs(e); ++k) w.push_back({g, e > 0 ? 1 : -1});
    return w;
}

inline MoebiusMap t6_b(Complex l) { return {l + 1.0, 1.0 - l, 1.0 - l, l + 1.0}; }

inline MoebiusMap t7_c(Complex l) {
    const Complex i{0.0, 1.0};
    return {l + 1.0, i * (1.0 - l), i * (l - 1.0), l + 1.0};
}

inline void require_multiplier(Complex l, const char* what) {
    if (!(std::abs(l) > 1.0 + kTolerance))
        throw std::invalid_argument(std::string("make_basic: |") + what + "| must exceed 1");
}

}  // namespace detail

/// Names of the relations that fail on the generator matrices.
inline std::vector<std::string> failed_relations(const BasicGroup& bg, double tolerance = kTolerance) {
    std::vector<std::string> failed;
    for (const auto* list : {&bg.relations, &bg.extra_relations})
        for (const auto& r : *list)
            if (!is_identity(evaluate(bg.generators, r.word), tolerance)) failed.push_back(r.name);
    return failed;
}

/// Builds a T-type group in its standard position. Throws
/// std::invalid_argument for |lambda| <= 1 or n < 2, and std::logic_error if
/// a defining relation fails on the matrices.
inline BasicGroup make_basic(BasicType type, const BasicParams& p = {}, const std::string& label = {}) {
    using detail::letters;
    BasicGroup bg;
    bg.type = type;
    bg.params = p;
    bg.label = label;
    auto gen = [&](const std::string& name, MoebiusMap m, int order) {
        bg.generators.push_back({detail::qualified(label, name), m, order});
    };
    const MoebiusMap U(-1.0, 0.0, 0.0, 1.0), V(0.0, 1.0, 1.0, 0.0);
    auto add_klein_four = [&] {
        gen("U", U, 2);
        gen("V", V, 2);
        bg.relations.push_back({"U^2", letters({{0, 2}})});
        bg.relations.push_back({"V^2", letters({{1, 2}})});
        bg.relations.push_back({"(UV)^2", letters({{0, 1}, {1, 1}, {0, 1}, {1, 1}})});
        bg.quotient_orders = {2, 2};
        bg.theta = {{1, 0}, {0, 1}};
        bg.split.finite_gens = {0, 1};
        bg.split.finite_orders = {2, 2};
    };
    // relation X Y X^-1 Y^s for finite x and free y
    auto action = [&](const std::string& name, int x, int y, int s) {
        bg.relations.push_back({name, letters({{x, 1}, {y, 1}, {x, -1}, {y, s}})});
    };
    auto add_free = [&](const std::string& name, MoebiusMap m) {
        int idx = static_cast<int>(bg.generators.size());
        gen(name, m, 0);
        bg.schottky_generators.push_back(idx);
        bg.split.free_gens.push_back(idx);
        bg.theta.push_back(std::vector<int>(bg.quotient_orders.size(), 0));
        return idx;
    };
    auto set_inverts = [&](std::vector<std::vector<bool>> inv) { bg.split.inverts = std::move(inv); };

    switch (type) {
        case BasicType::T1: {
            if (p.n < 2) throw std::invalid_argument("make_basic: T1 needs n >= 2");
            gen("E", MoebiusMap::rotation(p.n), p.n);
            bg.relations.push_back({"E^n", letters({{0, p.n}})});
            bg.quotient_orders = {p.n};
            bg.theta = {{1}};
            bg.split.finite_gens = {0};
            bg.split.finite_orders = {p.n};
            bg.split.inverts = {{}};
            bg.chi = Rational(1, p.n);
            bg.signature = {0, {p.n, p.n}};
            break;
        }
        case BasicType::T2: {
            detail::require_multiplier(p.lambda1, "lambda");
            add_free("L", MoebiusMap::scaling(p.lambda1));
            bg.chi = 0;
            bg.signature = {1, {}};
            break;
        }
        case BasicType::T3: {
            add_klein_four();
            set_inverts({{}, {}});
            bg.chi = Rational(1, 4);
            bg.signature = {0, {2, 2, 2}};
            break;
        }
        case BasicType::T4: {
            if (p.n < 2) throw std::invalid_argument("make_basic: T4 needs n >= 2");
            detail::require_multiplier(p.lambda1, "lambda");
            bg.quotient_orders = {p.n};
            add_free("A", MoebiusMap::scaling(p.lambda1));
            gen("E", MoebiusMap::rotation(p.n), p.n);
            bg.theta.push_back({1});
            bg.relations.push_back({"E^n", letters({{1, p.n}})});
            bg.relations.push_back({"AEA^-1E^-1", letters({{0, 1}, {1, 1}, {0, -1}, {1, -1}})});
            bg.extra_relations.push_back({"AE=EA", letters({{0, 1}, {1, 1}, {0, -1}, {1, -1}})});
            bg.split.finite_gens = {1};
            bg.split.finite_orders = {p.n};
            set_inverts({{false}});
            bg.chi = 0;
            bg.signature = {1, {}};
            break;
        }
        case BasicType::T5: {
            detail::require_multiplier(p.lambda1, "lambda");
            add_klein_four();
            int a = add_free("A", MoebiusMap::scaling(p.lambda1));
            action("UAU^-1A^-1", 0, a, -1);
            action("VAV^-1A", 1, a, 1);
            bg.extra_relations.push_back({"AU=UA", letters({{a, 1}, {0, 1}, {a, -1}, {0, -1}})});
            bg.extra_relations.push_back({"VAV^-1=A^-1", letters({{1, 1}, {a, 1}, {1, -1}, {a, 1}})});
            set_inverts({{false}, {true}});
            bg.chi = 0;
            bg.signature = {0, {2, 2, 2, 2}};
            break;
        }
        case BasicType::T6:
        case BasicType::T7: {
            bool t7 = type == BasicType::T7;
            detail::require_multiplier(p.lambda1, "lambda1");
            detail::require_multiplier(p.lambda2, "lambda2");
            if (t7) detail::require_multiplier(p.lambda3, "lambda3");
            add_klein_four();
            int a = add_free("A", MoebiusMap::scaling(p.lambda1));
            int b = add_free("B", detail::t6_b(p.lambda2));
            action("UAU^-1A^-1", 0, a, -1);
            action("VAV^-1A", 1, a, 1);
            action("UBU^-1B", 0, b, 1);
            action("VBV^-1B^-1", 1, b, -1);
            bg.extra_relations.push_back({"AU=UA", letters({{a, 1}, {0, 1}, {a, -1}, {0, -1}})});
            bg.extra_relations.push_back({"BV=VB", letters({{b, 1}, {1, 1}, {b, -1}, {1, -1}})});
            if (t7) {
                int c = add_free("C", detail::t7_c(p.lambda3));
                action("UCU^-1C", 0, c, 1);
                action("VCV^-1C", 1, c, 1);
                bg.extra_relations.push_back(
                    {"C(UV)=(UV)C",
                     letters({{c, 1}, {0, 1}, {1, 1}, {c, -1}, {1, -1}, {0, -1}})});
                set_inverts({{false, true, true}, {true, false, true}});
                bg.chi = Rational(-1, 2);
                bg.signature = {0, {2, 2, 2, 2, 2, 2}};
            } else {
                set_inverts({{false, true}, {true, false}});
                bg.chi = Rational(-1, 4);
                bg.signature = {0, {2, 2, 2, 2, 2}};
            }
            break;
        }
        case BasicType::B3:
            throw std::invalid_argument("make_basic: B3 groups are built with make_b3");
    }
    auto failed = failed_relations(bg);
    if (!failed.empty())
        throw std::logic_error("make_basic: relation " + failed.front() + " fails for " +
                               to_string(type));
    return bg;
}

/// The signature of the quotient orbifold of the region of discontinuity.
inline OrbifoldSignature orbifold_signature(const BasicGroup& bg) { return bg.signature; }

/// The same group conjugated by t: every generator g becomes t g t^-1.
inline BasicGroup conjugate(BasicGroup bg, const MoebiusMap& t) {
    for (auto& g : bg.generators) g.map = conjugate(g.map, t);
    bg.placement = compose(t, bg.placement);
    return bg;
}

/// The group with every generator renamed under a new label.
inline BasicGroup relabel(BasicGroup bg, const std::string& label) {
    for (auto& g : bg.generators) {
        auto dot = g.name.rfind('.');
        std::string bare = dot == std::string::npos ? g.name : g.name.substr(dot + 1);
        g.name = detail::qualified(label, bare);
    }
    bg.label = label;
    return bg;
}

/// Pairing circles for the Schottky subgroup of a T2, T4, T5, T6 or T7 group.
/// Each free generator is conjugate to w -> lambda w; its circles are the
/// preimages of |w| = |lambda|^(-1/2) and |w| = |lambda|^(1/2). Whether the
/// family actually verifies depends on the multipliers; run verify_pairing.
inline std::optional<PairingSystem> schottky_pairing(const BasicGroup& bg) {
    if (bg.schottky_generators.empty() || bg.type == BasicType::B3) return std::nullopt;
    std::vector<Pairing> pairs;
    const Complex i{0.0, 1.0};
    for (int idx : bg.schottky_generators) {
        const auto& g = bg.generators[static_cast<std::size_t>(idx)];
        std::string bare = g.name.substr(g.name.rfind('.') == std::string::npos ? 0 : g.name.rfind('.') + 1);
        MoebiusMap to_standard;  // sends repelling point to 0, attracting to infinity
        Complex lambda = bg.params.lambda1;
        if (bare == "B") {
            to_standard = MoebiusMap(1.0, -1.0, 1.0, 1.0);
            lambda = bg.params.lambda2;
        } else if (bare == "C") {
            to_standard = MoebiusMap(1.0, -i, 1.0, i);
            lambda = bg.params.lambda3;
        }
        double s = 1.0 / std::sqrt(std::abs(lambda));
        MoebiusMap back = compose(bg.placement, to_standard.inverse());
        pairs.push_back({disc_image(back, SphereDisc::inside(0.0, s)),
                         disc_image(back, SphereDisc::outside(0.0, std::abs(lambda) * s)), g.map, g.name});
    }
    return PairingSystem(std::move(pairs));
}

}  // namespace vschottky
