#pragma once

// B3 groups: amalgamated free products of T3, T5 and T6 groups over shared
// involutions.

#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/group_algebra.hpp>

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vschottky {

/// Identifies the involution `left` (already in the amalgam) with the
/// involution `right` of the next component. Without discs the next component
/// is auto-placed around the fixed points at the given radius.
struct B3Gluing {
    std::string left;
    std::string right;
    std::optional<std::pair<SphereDisc, SphereDisc>> discs;
    double radius = 0.5;
};

namespace detail {

using Z2Vector = std::array<int, 2>;
using Z2Matrix = std::array<std::array<int, 2>, 2>;

inline Z2Vector apply(const Z2Matrix& m, const std::vector<int>& v) {
    return {(m[0][0] * v[0] + m[0][1] * v[1]) % 2, (m[1][0] * v[0] + m[1][1] * v[1]) % 2};
}

/// GL(2, F2) in a fixed order; the first element sending `from` to `to`.
inline Z2Matrix z2_automorphism(const std::vector<int>& from, const std::vector<int>& to) {
    static const std::array<Z2Matrix, 6> all = {{{{{1, 0}, {0, 1}}},
                                                 {{{0, 1}, {1, 0}}},
                                                 {{{1, 1}, {0, 1}}},
                                                 {{{1, 0}, {1, 1}}},
                                                 {{{0, 1}, {1, 1}}},
                                                 {{{1, 1}, {1, 0}}}}};
    for (const auto& m : all) {
        auto img = apply(m, from);
        if (img[0] == to[0] % 2 && img[1] == to[1] % 2) return m;
    }
    throw std::logic_error("z2_automorphism: no automorphism between the given elements");
}

}  // namespace detail

/// Amalgam K1 *_<U1> K2 *_<U2> ... of T3/T5/T6 components, glued left to
/// right. A single component is returned unchanged.
inline BasicGroup make_b3(const std::vector<BasicGroup>& components, const std::vector<B3Gluing>& gluings,
                          int depth = kDefaultDepth, const std::string& label = {}) {
    if (components.empty()) throw std::invalid_argument("make_b3: no components");
    if (gluings.size() + 1 != components.size())
        throw std::invalid_argument("make_b3: need one gluing per consecutive pair of components");
    std::set<std::string> labels;
    for (const auto& c : components) {
        if (c.type != BasicType::T3 && c.type != BasicType::T5 && c.type != BasicType::T6)
            throw std::invalid_argument(std::string("make_b3: component of type ") + to_string(c.type) +
                                        " (expected T3, T5 or T6)");
        if (components.size() > 1 && (c.label.empty() || !labels.insert(c.label).second))
            throw std::invalid_argument("make_b3: components need distinct labels");
    }
    if (components.size() == 1) return components.front();

    auto is_involution = [](const Generator& g) {
        auto cls = classify(g.map);
        return cls.kind == MapKind::elliptic && cls.order == 2;
    };

    ConstructionTree tree = ConstructionTree::leaf(components.front());
    std::vector<std::vector<int>> theta = components.front().theta;
    std::optional<MoebiusMap> previous;
    for (std::size_t i = 0; i < gluings.size(); ++i) {
        const auto& glue = gluings[i];
        auto current = tree_generators(tree);
        const auto& u = detail::require_generator(current, glue.left, "make_b3");
        if (!is_involution(u)) throw std::invalid_argument("make_b3: " + glue.left + " is not an involution");
        BasicGroup next = components[i + 1];
        int r = next.index_of(glue.right);
        if (r < 0) throw std::invalid_argument("make_b3: unknown generator '" + glue.right + "'");
        if (!is_involution(next.generators[static_cast<std::size_t>(r)]))
            throw std::invalid_argument("make_b3: " + glue.right + " is not an involution");
        if (previous && projectively_equal(*previous, u.map, 1e-7))
            throw std::invalid_argument("make_b3: consecutive amalgams over the same involution " + glue.left);

        SphereDisc b1 = SphereDisc::inside(0.0, 1.0), b2 = b1.complement();
        if (glue.discs) {
            std::tie(b1, b2) = *glue.discs;
        } else {
            auto placed = place_for_amalgam(current, glue.left, next, glue.right, glue.radius, depth);
            next = std::move(placed.right);
            b1 = placed.b1;
            b2 = placed.b2;
        }
        tree = free_product(tree, ConstructionTree::leaf(next), std::pair{glue.left, glue.right}, b1, b2, depth,
                            glue.left + " = " + glue.right);
        previous = u.map;

        // match the quotient images of the identified involutions
        auto phi = detail::z2_automorphism(next.theta[static_cast<std::size_t>(r)],
                                           theta[static_cast<std::size_t>(find_generator(current, glue.left))]);
        for (const auto& image : next.theta) {
            auto v = detail::apply(phi, image);
            theta.push_back({v[0], v[1]});
        }
    }

    BasicGroup bg;
    bg.type = BasicType::B3;
    bg.label = label;
    bg.params = components.front().params;
    auto group = assemble(tree);
    bg.generators = group.generators;
    for (const auto& r : group.relations) bg.relations.push_back({r.name, r.word});
    bg.quotient_orders = {2, 2};
    bg.theta = std::move(theta);
    bg.chi = euler_characteristic(tree);
    bg.signature = tree_signature(tree);
    bg.components = std::make_shared<const ConstructionTree>(tree);
    return bg;
}

}  // namespace vschottky
