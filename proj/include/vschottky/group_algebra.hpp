#pragma once

// Symbolic layer over construction trees: normal forms, quotient maps onto
// finite abelian groups, Euler characteristics and the rank of the kernel.

#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/words.hpp>

#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vschottky {

/// Z_{d1} + ... + Z_{dk}; the empty list is the trivial group.
class FiniteAbelianGroup {
public:
    using Element = std::vector<int>;

    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
        for (int d : orders_)
            if (d < 2) throw std::invalid_argument("FiniteAbelianGroup: cyclic orders must be >= 2");
    }

    const std::vector<int>& orders() const { return orders_; }
    std::size_t rank() const { return orders_.size(); }
    long order() const {
        long h = 1;
        for (int d : orders_) h *= d;
        return h;
    }

    Element zero() const { return Element(orders_.size(), 0); }
    Element reduce(Element e) const {
        check(e);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ((e[i] % orders_[i]) + orders_[i]) % orders_[i];
        return e;
    }
    Element add(const Element& x, const Element& y) const {
        check(x);
        check(y);
        Element out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] + y[i]) % orders_[i];
        return out;
    }
    Element negate(const Element& x) const {
        Element out = zero();
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = (orders_[i] - x[i] % orders_[i]) % orders_[i];
        return out;
    }
    Element scale(const Element& x, int k) const {
        Element out = x;
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = static_cast<int>(((static_cast<long>(x[i]) * k) % orders_[i] + orders_[i]) % orders_[i]);
        return out;
    }
    bool is_zero(const Element& x) const { return reduce(x) == zero(); }

    /// Order of an element: lcm of d_i / gcd(d_i, x_i).
    int element_order(const Element& x) const {
        int o = 1;
        auto r = reduce(x);
        for (std::size_t i = 0; i < r.size(); ++i) o = std::lcm(o, orders_[i] / std::gcd(orders_[i], r[i]));
        return o;
    }

    /// Size of the subgroup generated by the given elements.
    long generated_order(const std::vector<Element>& gens) const {
        std::set<Element> seen{zero()};
        std::deque<Element> todo{zero()};
        while (!todo.empty()) {
            auto x = todo.front();
            todo.pop_front();
            for (const auto& g : gens) {
                auto y = add(x, reduce(g));
                if (seen.insert(y).second) todo.push_back(y);
            }
        }
        return static_cast<long>(seen.size());
    }

    std::string str() const {
        if (orders_.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < orders_.size(); ++i) out += (i ? " x Z" : "Z") + std::to_string(orders_[i]);
        return out;
    }
    static std::string element_str(const Element& e) {
        std::string out = "(";
        for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
        return out + ")";
    }

private:
    void check(const Element& e) const {
        if (e.size() != orders_.size())
            throw std::invalid_argument("FiniteAbelianGroup: element has " + std::to_string(e.size()) +
                                        " coordinates, expected " + std::to_string(orders_.size()));
    }

    std::vector<int> orders_;
};

/// Theta: generators -> H, stored in generator order.
class QuotientMap {
public:
    using Element = FiniteAbelianGroup::Element;

    QuotientMap() = default;
    QuotientMap(FiniteAbelianGroup target, std::vector<std::string> names, const std::map<std::string, Element>& images)
        : target_(std::move(target)), names_(std::move(names)) {
        for (const auto& [name, _] : images)
            if (std::find(names_.begin(), names_.end(), name) == names_.end())
                throw std::invalid_argument("QuotientMap: unknown generator '" + name + "'");
        for (const auto& n : names_) {
            auto it = images.find(n);
            if (it == images.end()) throw std::invalid_argument("QuotientMap: no image for generator '" + n + "'");
            images_.push_back(target_.reduce(it->second));
        }
    }

    /// The quotient recorded on a basic group.
    static QuotientMap of_basic(const BasicGroup& bg) {
        std::map<std::string, Element> images;
        for (std::size_t i = 0; i < bg.generators.size(); ++i) images[bg.generators[i].name] = bg.theta[i];
        return {FiniteAbelianGroup(bg.quotient_orders), bg.names(), images};
    }

    const FiniteAbelianGroup& target() const { return target_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Element>& images() const { return images_; }
    const Element& image(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return images_[i];
        throw std::invalid_argument("QuotientMap: unknown generator '" + name + "'");
    }

    long image_order() const { return target_.generated_order(images_); }
    bool surjective() const { return image_order() == target_.order(); }

private:
    FiniteAbelianGroup target_;
    std::vector<std::string> names_;
    std::vector<Element> images_;
};

/// Sum of the letter images.
inline QuotientMap::Element theta_apply(const QuotientMap& theta, const Word& w) {
    auto out = theta.target().zero();
    for (const auto& l : w) {
        if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= theta.images().size())
            throw std::invalid_argument("theta_apply: unknown generator index " + std::to_string(l.gen));
        out = theta.target().add(out, theta.target().scale(theta.images()[static_cast<std::size_t>(l.gen)], l.exp));
    }
    return out;
}

inline QuotientMap::Element theta_apply(const QuotientMap& theta, std::string_view word) {
    return theta_apply(theta, parse_word(word, theta.names()));
}

inline bool is_kernel_word(const QuotientMap& theta, const Word& w) {
    return theta.target().is_zero(theta_apply(theta, w));
}

inline bool is_kernel_word(const QuotientMap& theta, std::string_view word) {
    return is_kernel_word(theta, parse_word(word, theta.names()));
}

/// Names of the relators not sent to zero.
inline std::vector<std::string> inconsistent_relations(const QuotientMap& theta, const AssembledGroup& group) {
    std::vector<std::string> bad;
    for (const auto& r : group.relations)
        if (!is_kernel_word(theta, r.word)) bad.push_back(r.name);
    return bad;
}

/// chi of the group of a tree: leaves carry their own value; a free product
/// over Z_m gives chi1 + chi2 - 1/m and an HNN extension over Z_m gives
/// chi - 1/m (m = 1 for trivial edge groups).
inline Rational euler_characteristic(const ConstructionTree& t) {
    using Kind = ConstructionTree::Kind;
    switch (t.kind()) {
        case Kind::trivial: return 1;
        case Kind::leaf: return t.group().chi;
        case Kind::product: {
            int m = t.node().amalgam ? t.node().amalgam->order : 1;
            return euler_characteristic(t.left()) + euler_characteristic(t.right()) - Rational(1, m);
        }
        case Kind::hnn: return euler_characteristic(t.base()) - Rational(1, t.node().h_order);
    }
    return 0;
}

struct RankReport {
    Rational chi{0};
    long quotient_order = 1;
    Rational kernel_rank{0};
    bool surjective = true;
    bool integral = true;

    int rank() const {
        if (!integral) throw std::logic_error("RankReport: kernel rank is not an integer");
        return static_cast<int>(kernel_rank.numerator());
    }
};

/// rank ker(theta) = 1 - |H| chi(K). Throws std::invalid_argument when theta
/// misses a relation, or is not onto H unless `force` (then H is replaced by
/// the image).
inline RankReport kernel_rank(const ConstructionTree& tree, const QuotientMap& theta, bool force = false) {
    auto group = assemble(tree);
    if (theta.names() != group.names())
        throw std::invalid_argument("kernel_rank: quotient map is not defined on the tree's generators");
    auto bad = inconsistent_relations(theta, group);
    if (!bad.empty()) throw std::invalid_argument("kernel_rank: relation " + bad.front() + " is not in the kernel");
    RankReport r;
    r.chi = euler_characteristic(tree);
    long image = theta.image_order();
    r.surjective = image == theta.target().order();
    if (!r.surjective && !force)
        throw std::invalid_argument("kernel_rank: theta is not surjective (image of order " + std::to_string(image) +
                                    " in " + theta.target().str() + ")");
    r.quotient_order = image;
    r.kernel_rank = Rational(1) - Rational(image) * r.chi;
    r.integral = r.kernel_rank.denominator() == 1;
    return r;
}

/// A word of length <= depth whose matrix is elliptic yet lies in the kernel;
/// its absence certifies at that depth that ker(theta) is torsion free.
inline std::optional<Word> kernel_torsion_witness(const ConstructionTree& tree, const QuotientMap& theta,
                                                  int depth) {
    std::optional<Word> witness;
    enumerate_words(tree_generators(tree), depth, [&](const Word& w, const MoebiusMap& m) {
        if (classify(m).kind == MapKind::elliptic && is_kernel_word(theta, w)) {
            witness = w;
            return false;
        }
        return true;
    });
    return witness;
}

namespace detail {

/// Normal form over a subtree whose generators occupy [first, first + count).
class NormalFormModel {
public:
    virtual ~NormalFormModel() = default;
    virtual Word normal_form(const Word& w) const = 0;

    int first = 0;
    int count = 0;
    bool owns(int gen) const { return gen >= first && gen < first + count; }
};

inline Word repeat(int gen, int times) {
    Word w;
    for (int k = 0; k < std::abs(times); ++k) w.push_back({gen, times > 0 ? 1 : -1});
    return w;
}

class TrivialModel final : public NormalFormModel {
public:
    Word normal_form(const Word& w) const override {
        if (!w.empty()) throw std::logic_error("TrivialModel: trivial group has no generators");
        return {};
    }
};

/// F x| Q with Q abelian acting by inversions: an element is w q with w a
/// reduced word in the free generators and q in Q.
class SplitLeafModel final : public NormalFormModel {
public:
    SplitLeafModel(const SplitStructure& split, int offset) : split_(split) { first = offset; }

    Word normal_form(const Word& word) const override {
        Word free;
        std::vector<int> q(split_.finite_gens.size(), 0);
        for (const auto& l : word) {
            int local = l.gen - first;
            if (int k = index_in(split_.free_gens, local); k >= 0) {
                int sign = 1;
                for (std::size_t i = 0; i < q.size(); ++i)
                    if (split_.inverts[i][static_cast<std::size_t>(k)] && q[i] % 2 == 1) sign = -sign;
                free.push_back({l.gen, l.exp * sign});
                free = freely_reduce(free);
            } else if (int i = index_in(split_.finite_gens, local); i >= 0) {
                int d = split_.finite_orders[static_cast<std::size_t>(i)];
                auto& e = q[static_cast<std::size_t>(i)];
                e = ((e + l.exp) % d + d) % d;
            } else {
                throw std::invalid_argument("normal_form: generator outside leaf");
            }
        }
        for (std::size_t i = 0; i < q.size(); ++i) {
            auto tail = repeat(first + split_.finite_gens[i], q[i]);
            free.insert(free.end(), tail.begin(), tail.end());
        }
        return free;
    }

private:
    static int index_in(const std::vector<int>& v, int x) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] == x) return static_cast<int>(i);
        return -1;
    }

    SplitStructure split_;
};

/// Decomposes x = u^j r with r the shortlex-least normal form in H x.
struct CosetSplit {
    int j = 0;
    Word rep;
};

inline CosetSplit right_coset(const NormalFormModel& model, int u, int order, const Word& x) {
    CosetSplit best{0, model.normal_form(x)};
    for (int j = 1; j < order; ++j) {
        auto candidate = model.normal_form(concat(repeat(u, -j), x));
        if (shortlex_less(candidate, best.rep)) best = {j, candidate};
    }
    return best;
}

/// Amalgamated free product over <u_L> = <u_R> (order m, possibly trivial).
class AmalgamModel final : public NormalFormModel {
public:
    AmalgamModel(std::unique_ptr<NormalFormModel> left, std::unique_ptr<NormalFormModel> right, int u_left,
                 int u_right, int order)
        : left_(std::move(left)), right_(std::move(right)), u_{u_left, u_right}, order_(order) {
        first = left_->first;
        count = left_->count + right_->count;
    }

    Word normal_form(const Word& word) const override {
        // syllables, processed right to left; H is pushed to the front
        std::vector<std::pair<int, Word>> syllables;
        for (const auto& l : word) {
            int side = left_->owns(l.gen) ? 0 : right_->owns(l.gen) ? 1 : -1;
            if (side < 0) throw std::invalid_argument("normal_form: generator outside product");
            if (syllables.empty() || syllables.back().first != side) syllables.push_back({side, {}});
            syllables.back().second.push_back(l);
        }
        int j = 0;
        std::deque<std::pair<int, Word>> reps;
        for (auto it = syllables.rbegin(); it != syllables.rend(); ++it) {
            int side = it->first;
            Word x = it->second;
            if (order_ > 1) x = concat(x, repeat(u_[side], j));
            if (!reps.empty() && reps.front().first == side) {
                x = concat(x, reps.front().second);
                reps.pop_front();
            }
            auto split = split_in(side, x);
            j = split.j;
            if (!split.rep.empty()) reps.push_front({side, split.rep});
        }
        Word out = j == 0 ? Word{} : model(0).normal_form(repeat(u_[0], j));
        for (const auto& [side, rep] : reps) out.insert(out.end(), rep.begin(), rep.end());
        return out;
    }

private:
    const NormalFormModel& model(int side) const { return side == 0 ? *left_ : *right_; }
    CosetSplit split_in(int side, const Word& x) const {
        if (order_ <= 1) return {0, model(side).normal_form(x)};
        return right_coset(model(side), u_[side], order_, x);
    }

    std::unique_ptr<NormalFormModel> left_, right_;
    int u_[2];
    int order_;
};

/// Britton normal form for t^-1 u2 t = u1^r over <u1>, <u2> of order m.
class HnnModel final : public NormalFormModel {
public:
    HnnModel(std::unique_ptr<NormalFormModel> base, int stable, int u1, int u2, int order, int r)
        : base_(std::move(base)), t_(stable), u1_(u1), u2_(u2), order_(order), r_(r) {
        first = base_->first;
        count = base_->count + 1;
        for (int s = 1; s < std::max(order_, 2); ++s)
            if ((static_cast<long>(s) * r_) % order_ == 1 % order_) r_inverse_ = s;
    }

    Word normal_form(const Word& word) const override {
        Word acc;
        std::deque<std::pair<int, Word>> tail;  // (exponent of t, base rep after it)
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            if (it->gen != t_) {
                if (!base_->owns(it->gen)) throw std::invalid_argument("normal_form: generator outside HNN");
                acc.insert(acc.begin(), *it);
                continue;
            }
            int e = it->exp;
            // t acc t^-1 with acc in <u1>, or t^-1 acc t with acc in <u2>
            auto split = split_for(e, acc);
            if (!tail.empty() && tail.front().first == -e && split.rep.empty()) {
                acc = concat(pushed(e, split.j), tail.front().second);
                tail.pop_front();
                continue;
            }
            tail.push_front({e, split.rep});
            acc = pushed(e, split.j);
        }
        Word out = base_->normal_form(acc);
        for (const auto& [e, rep] : tail) {
            out.push_back({t_, e});
            out.insert(out.end(), rep.begin(), rep.end());
        }
        return out;
    }

private:
    // acc = h rep with h in the edge group standing right of t^e
    CosetSplit split_for(int e, const Word& acc) const {
        if (order_ <= 1) return {0, base_->normal_form(acc)};
        return right_coset(*base_, e > 0 ? u1_ : u2_, order_, acc);
    }
    // t u1^j = u2^(j r^-1) t and t^-1 u2^j = u1^(r j) t^-1
    Word pushed(int e, int j) const {
        if (order_ <= 1 || j == 0) return {};
        if (e > 0) return repeat(u2_, static_cast<int>((static_cast<long>(j) * r_inverse_) % order_));
        return repeat(u1_, static_cast<int>((static_cast<long>(j) * r_) % order_));
    }

    std::unique_ptr<NormalFormModel> base_;
    int t_, u1_, u2_, order_, r_, r_inverse_ = 1;
};

inline std::unique_ptr<NormalFormModel> build_model(const ConstructionTree& t, int& next);

inline std::unique_ptr<NormalFormModel> leaf_model(const BasicGroup& bg, int& next) {
    if (bg.type == BasicType::B3) {
        if (!bg.components) throw std::logic_error("normal_form: B3 leaf without components");
        return build_model(*bg.components, next);
    }
    auto m = std::make_unique<SplitLeafModel>(bg.split, next);
    m->count = static_cast<int>(bg.generators.size());
    next += m->count;
    return m;
}

inline std::unique_ptr<NormalFormModel> build_model(const ConstructionTree& t, int& next) {
    using Kind = ConstructionTree::Kind;
    switch (t.kind()) {
        case Kind::trivial: {
            auto m = std::make_unique<TrivialModel>();
            m->first = next;
            return m;
        }
        case Kind::leaf: return leaf_model(t.group(), next);
        case Kind::product: {
            int start = next;
            auto l = build_model(t.left(), next);
            auto r = build_model(t.right(), next);
            int ul = -1, ur = -1, order = 1;
            if (const auto& am = t.node().amalgam) {
                auto gens = tree_generators(t);
                ul = start + find_generator(gens, am->left);
                ur = start + find_generator(gens, am->right);
                order = am->order;
            }
            return std::make_unique<AmalgamModel>(std::move(l), std::move(r), ul, ur, order);
        }
        case Kind::hnn: {
            int start = next;
            auto b = build_model(t.base(), next);
            int stable = next++;
            const auto& n = t.node();
            int u1 = -1, u2 = -1;
            if (!n.h1.empty()) {
                auto gens = tree_generators(t.base());
                u1 = start + find_generator(gens, n.h1);
                u2 = start + find_generator(gens, n.h2);
            }
            return std::make_unique<HnnModel>(std::move(b), stable, u1, u2, n.h_order, n.h_exponent);
        }
    }
    return nullptr;
}

}  // namespace detail

/// Canonical form of words in the group of a tree: identity iff empty.
class NormalForm {
public:
    explicit NormalForm(const ConstructionTree& tree) : names_(generator_names(tree_generators(tree))) {
        int next = 0;
        model_ = detail::build_model(tree, next);
    }

    Word operator()(const Word& w) const {
        for (const auto& l : w)
            if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= names_.size())
                throw std::invalid_argument("normal_form: unknown generator index " + std::to_string(l.gen));
        return model_->normal_form(w);
    }
    Word operator()(std::string_view w) const { return (*this)(parse_word(w, names_)); }
    bool is_identity(const Word& w) const { return (*this)(w).empty(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::shared_ptr<const detail::NormalFormModel> model_;
};

inline Word normal_form(const ConstructionTree& tree, const Word& w) { return NormalForm(tree)(w); }

inline Word normal_form(const ConstructionTree& tree, std::string_view w) { return NormalForm(tree)(w); }

}  // namespace vschottky
