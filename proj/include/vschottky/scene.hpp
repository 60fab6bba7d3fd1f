#pragma once

// Scene files: brace-nested stanzas declaring leaves, combination nodes,
// Schottky pairing systems and quotient maps. See docs/scene-format.md.

#include <vschottky/b3.hpp>
#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/cyclic_case.hpp>
#include <vschottky/group_algebra.hpp>
#include <vschottky/schottky.hpp>

#include <boost/rational.hpp>

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vschottky {

class SceneError : public std::runtime_error {
public:
    SceneError(int line, std::string field, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + (field.empty() ? "" : ", field '" + field + "'") +
                             ": " + message),
          line_(line),
          field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// `key arg... [{ children }]`; line numbers are ignored by ==.
struct Stanza {
    std::string key;
    std::vector<std::string> args;
    std::vector<Stanza> children;
    bool has_block = false;
    int line = 0;

    bool operator==(const Stanza& o) const {
        return key == o.key && args == o.args && has_block == o.has_block && children == o.children;
    }
};

namespace detail {

struct SceneToken {
    enum Kind { word, open, close, separator, end } kind;
    std::string text;
    int line;
};

inline std::vector<SceneToken> tokenize_scene(std::string_view text) {
    std::vector<SceneToken> out;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (ch == '\n' || ch == ';') {
            out.push_back({SceneToken::separator, {}, line});
            if (ch == '\n') ++line;
            ++i;
        } else if (ch == '{' || ch == '}') {
            out.push_back({ch == '{' ? SceneToken::open : SceneToken::close, {}, line});
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else {
            std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '{' &&
                   text[i] != '}' && text[i] != ';' && text[i] != '#')
                ++i;
            out.push_back({SceneToken::word, std::string(text.substr(start, i - start)), line});
        }
    }
    out.push_back({SceneToken::end, {}, line});
    return out;
}

}  // namespace detail

inline std::vector<Stanza> parse_stanzas(std::string_view text) {
    auto tokens = detail::tokenize_scene(text);
    std::size_t pos = 0;
    using T = detail::SceneToken;
    auto block = [&](auto&& self, bool nested, int open_line) -> std::vector<Stanza> {
        std::vector<Stanza> out;
        for (;;) {
            const auto& t = tokens[pos];
            if (t.kind == T::separator) {
                ++pos;
            } else if (t.kind == T::end) {
                if (nested) throw SceneError(open_line, {}, "unclosed '{'");
                return out;
            } else if (t.kind == T::close) {
                if (!nested) throw SceneError(t.line, {}, "unexpected '}'");
                ++pos;
                return out;
            } else if (t.kind == T::open) {
                throw SceneError(t.line, {}, "'{' without a stanza name");
            } else {
                Stanza s;
                s.key = t.text;
                s.line = t.line;
                ++pos;
                while (tokens[pos].kind == T::word) s.args.push_back(tokens[pos++].text);
                if (tokens[pos].kind == T::open) {
                    ++pos;
                    s.has_block = true;
                    s.children = self(self, true, s.line);
                }
                out.push_back(std::move(s));
            }
        }
    };
    return block(block, false, 0);
}

inline void format_stanzas(std::ostream& os, const std::vector<Stanza>& stanzas, int indent = 0) {
    for (const auto& s : stanzas) {
        os << std::string(static_cast<std::size_t>(indent), ' ') << s.key;
        for (const auto& a : s.args) os << ' ' << a;
        if (s.has_block) {
            os << " {\n";
            format_stanzas(os, s.children, indent + 2);
            os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
        }
        os << '\n';
    }
}

inline std::string format_stanzas(const std::vector<Stanza>& stanzas) {
    std::ostringstream os;
    format_stanzas(os, stanzas);
    return os.str();
}

/// Integer, decimal or rational literal ("3", "-0.25", "1e-3", "7/4").
inline double parse_real(const std::string& text, int line = 0, const std::string& field = {}) {
    auto fail = [&] { return SceneError(line, field, "not a number: '" + text + "'"); };
    if (text.empty()) throw fail();
    if (text[0] == '+' && text.size() > 1 && text[1] != '+' && text[1] != '-')
        return parse_real(text.substr(1), line, field);
    if (auto slash = text.find('/'); slash != std::string::npos) {
        long long p = 0, q = 0;
        auto rp = std::from_chars(text.data(), text.data() + slash, p);
        auto rq = std::from_chars(text.data() + slash + 1, text.data() + text.size(), q);
        if (rp.ec != std::errc{} || rp.ptr != text.data() + slash || rq.ec != std::errc{} ||
            rq.ptr != text.data() + text.size())
            throw fail();
        if (q == 0) throw SceneError(line, field, "zero denominator in '" + text + "'");
        return boost::rational_cast<double>(boost::rational<long long>(p, q));
    }
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw fail();
    if (!std::isfinite(v)) throw SceneError(line, field, "number is not finite: '" + text + "'");
    return v;
}

/// Real literal, imaginary literal ("2i", "-i", "1/2i") or "re+imi".
inline Complex parse_complex(const std::string& text, int line = 0, const std::string& field = {}) {
    if (text.empty() || text.back() != 'i') return parse_real(text, line, field);
    std::string body = text.substr(0, text.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    double imag = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im, line, field);
    return {re.empty() ? 0.0 : parse_real(re, line, field), imag};
}

struct SceneGroup {
    std::optional<BasicGroup> leaf;
    std::optional<ConstructionTree> tree;
    std::optional<PairingSystem> pairing;
    std::optional<QuotientMap> theta;
    std::string kind;  // stanza key that declared it
};

struct BuiltScene {
    std::string root;
    SceneGroup group;
    std::optional<QuotientMap> theta;

    /// The root as a construction tree; empty for a pairing system.
    std::optional<ConstructionTree> tree() const {
        if (group.tree) return group.tree;
        if (group.leaf) return ConstructionTree::leaf(*group.leaf);
        return std::nullopt;
    }
};

class Scene {
public:
    static Scene parse(std::string_view text) {
        Scene scene;
        scene.stanzas_ = parse_stanzas(text);
        for (const auto& s : scene.stanzas_) {
            static const std::vector<std::string> named = {"leaf", "cyclic", "product", "hnn", "schottky"};
            if (std::find(named.begin(), named.end(), s.key) != named.end()) {
                if (s.args.size() != 1 || !s.has_block)
                    throw SceneError(s.line, s.key, "expected '" + s.key + " NAME { ... }'");
            } else if (s.key == "theta") {
                if (!s.args.empty() || !s.has_block) throw SceneError(s.line, s.key, "expected 'theta { ... }'");
            } else if (s.key == "root") {
                if (s.args.size() != 1 || s.has_block) throw SceneError(s.line, s.key, "expected 'root NAME'");
            } else if (s.key == "depth" || s.key == "ls-depth") {
                if (s.args.size() != 1 || s.has_block) throw SceneError(s.line, s.key, "expected one integer");
                int v = scene.integer(s.args[0], s.line, s.key);
                if (v < 1) throw SceneError(s.line, s.key, "must be >= 1");
                (s.key == "depth" ? scene.depth_ : scene.ls_depth_) = v;
            } else {
                throw SceneError(s.line, s.key, "unknown stanza");
            }
        }
        return scene;
    }

    const std::vector<Stanza>& stanzas() const { return stanzas_; }
    /// Normalized text: comments dropped, one statement per line.
    std::string str() const { return format_stanzas(stanzas_); }
    std::optional<int> depth() const { return depth_; }
    std::optional<int> ls_depth() const { return ls_depth_; }

    /// Constructs every declared group in order, running hypothesis checks to
    /// `depth`. Input errors throw SceneError; failed checks throw
    /// HypothesisFailure.
    BuiltScene build(int depth) const {
        std::map<std::string, SceneGroup> groups;
        std::string last, root;
        const Stanza* theta = nullptr;
        int root_line = 0;
        for (const auto& s : stanzas_) {
            if (s.key == "theta") {
                theta = &s;
                continue;
            }
            if (s.key == "root") {
                root = s.args[0];
                root_line = s.line;
                continue;
            }
            if (s.key == "depth" || s.key == "ls-depth") continue;
            const std::string& name = s.args[0];
            if (groups.count(name)) throw SceneError(s.line, s.key, "duplicate name '" + name + "'");
            try {
                SceneGroup g;
                if (s.key == "leaf") g = build_leaf(s, groups, depth);
                else if (s.key == "cyclic") g = build_cyclic_stanza(s, depth);
                else if (s.key == "product") g = build_product(s, groups, depth);
                else if (s.key == "hnn") g = build_hnn(s, groups, depth);
                else g = build_schottky(s);
                g.kind = s.key;
                groups.emplace(name, std::move(g));
            } catch (const std::invalid_argument& e) {
                throw SceneError(s.line, s.key, e.what());
            }
            last = name;
        }
        if (root.empty()) root = last;
        if (root.empty()) throw SceneError(1, {}, "scene declares no group");
        auto it = groups.find(root);
        if (it == groups.end()) throw SceneError(root_line, "root", "unknown group '" + root + "'");

        BuiltScene out{root, it->second, it->second.theta};
        if (!out.theta && out.group.leaf) out.theta = QuotientMap::of_basic(*out.group.leaf);
        if (theta) {
            auto tree = out.tree();
            if (!tree) throw SceneError(theta->line, "theta", "root is a pairing system");
            out.theta = build_theta(*theta, generator_names(tree_generators(*tree)));
        }
        return out;
    }

private:
    std::vector<Stanza> stanzas_;
    std::optional<int> depth_, ls_depth_;

    static int integer(const std::string& text, int line, const std::string& field) {
        int v = 0;
        auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
            throw SceneError(line, field, "not an integer: '" + text + "'");
        return v;
    }

    static void arity(const Stanza& s, std::size_t lo, std::size_t hi) {
        if (s.has_block) throw SceneError(s.line, s.key, "unexpected block");
        if (s.args.size() < lo || s.args.size() > hi)
            throw SceneError(s.line, s.key,
                             "expected " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi)) +
                                 " values, got " + std::to_string(s.args.size()));
    }

    static MoebiusMap matrix(const Stanza& s, std::size_t from) {
        if (s.args.size() != from + 4 && !(s.args.size() == from + 5 && s.args.back() == "anti"))
            throw SceneError(s.line, s.key, "expected four complex entries and an optional 'anti'");
        Complex e[4];
        for (std::size_t k = 0; k < 4; ++k) e[k] = parse_complex(s.args[from + k], s.line, s.key);
        if (std::abs(e[0] * e[3] - e[1] * e[2]) < 1e-300) throw SceneError(s.line, s.key, "singular matrix");
        return MoebiusMap(e[0], e[1], e[2], e[3],
                          s.args.size() == from + 5 ? Orientation::anticonformal : Orientation::conformal);
    }

    /// circle C R [inside|outside] | left-of X | right-of X | form A B C SIDE
    static SphereDisc disc(const Stanza& s) {
        const auto& a = s.args;
        if (s.has_block || a.empty()) throw SceneError(s.line, s.key, "expected a disc");
        if (a[0] == "circle" && (a.size() == 3 || a.size() == 4)) {
            Complex c = parse_complex(a[1], s.line, s.key);
            double r = parse_real(a[2], s.line, s.key);
            if (!(r > 0.0)) throw SceneError(s.line, s.key, "radius must be positive");
            std::string side = a.size() == 4 ? a[3] : "inside";
            if (side != "inside" && side != "outside")
                throw SceneError(s.line, s.key, "side must be 'inside' or 'outside'");
            return side == "inside" ? SphereDisc::inside(c, r) : SphereDisc::outside(c, r);
        }
        if ((a[0] == "left-of" || a[0] == "right-of") && a.size() == 2) {
            double x = parse_real(a[1], s.line, s.key);
            return a[0] == "left-of" ? SphereDisc::left_of(x) : SphereDisc::right_of(x);
        }
        if (a[0] == "form" && a.size() == 5) {
            int side = integer(a[4], s.line, s.key);
            if (side != 1 && side != -1) throw SceneError(s.line, s.key, "side must be 1 or -1");
            return {SphereCircle::normalized(parse_real(a[1], s.line, s.key), parse_complex(a[2], s.line, s.key),
                                             parse_real(a[3], s.line, s.key)),
                    side};
        }
        throw SceneError(s.line, s.key, "malformed disc");
    }

    static ConstructionTree tree_of(const std::map<std::string, SceneGroup>& groups, const Stanza& s) {
        arity(s, 1, 1);
        auto it = groups.find(s.args[0]);
        if (it == groups.end()) throw SceneError(s.line, s.key, "unknown group '" + s.args[0] + "'");
        if (it->second.leaf) return ConstructionTree::leaf(*it->second.leaf);
        if (it->second.tree) return *it->second.tree;
        throw SceneError(s.line, s.key, "'" + s.args[0] + "' is a pairing system, not a group node");
    }

    static BasicType basic_type(const Stanza& s) {
        arity(s, 1, 1);
        static const std::map<std::string, BasicType> types = {
            {"T1", BasicType::T1}, {"T2", BasicType::T2}, {"T3", BasicType::T3}, {"T4", BasicType::T4},
            {"T5", BasicType::T5}, {"T6", BasicType::T6}, {"T7", BasicType::T7}, {"B3", BasicType::B3}};
        auto it = types.find(s.args[0]);
        if (it == types.end()) throw SceneError(s.line, s.key, "unknown type '" + s.args[0] + "'");
        return it->second;
    }

    static SceneGroup build_leaf(const Stanza& st, const std::map<std::string, SceneGroup>& groups, int depth) {
        const std::string& name = st.args[0];
        std::optional<BasicType> type;
        BasicParams p;
        std::optional<MoebiusMap> conj;
        std::vector<BasicGroup> components;
        std::vector<B3Gluing> gluings;
        for (const auto& s : st.children) {
            if (s.key == "type") {
                type = basic_type(s);
            } else if (s.key == "n") {
                arity(s, 1, 1);
                p.n = integer(s.args[0], s.line, s.key);
            } else if (s.key == "lambda" || s.key == "lambda1" || s.key == "lambda2" || s.key == "lambda3") {
                arity(s, 1, 1);
                Complex v = parse_complex(s.args[0], s.line, s.key);
                (s.key == "lambda2" ? p.lambda2 : s.key == "lambda3" ? p.lambda3 : p.lambda1) = v;
            } else if (s.key == "conjugate") {
                conj = matrix(s, 0);
            } else if (s.key == "component") {
                arity(s, 1, 1);
                auto it = groups.find(s.args[0]);
                if (it == groups.end() || !it->second.leaf)
                    throw SceneError(s.line, s.key, "'" + s.args[0] + "' is not a declared leaf");
                components.push_back(*it->second.leaf);
            } else if (s.key == "glue") {
                if (s.args.size() != 2 && !(s.args.size() == 4 && s.args[2] == "radius"))
                    throw SceneError(s.line, s.key, "expected 'glue LEFT RIGHT [radius R]'");
                B3Gluing g{s.args[0], s.args[1], std::nullopt, 0.5};
                if (s.args.size() == 4) g.radius = parse_real(s.args[3], s.line, s.key);
                if (s.has_block) {
                    std::optional<SphereDisc> b1, b2;
                    for (const auto& c : s.children) {
                        if (c.key == "b1") b1 = disc(c);
                        else if (c.key == "b2") b2 = disc(c);
                        else throw SceneError(c.line, c.key, "unknown field in glue");
                    }
                    if (!b1 || !b2) throw SceneError(s.line, s.key, "glue block needs b1 and b2");
                    g.discs = std::pair{*b1, *b2};
                }
                gluings.push_back(std::move(g));
            } else {
                throw SceneError(s.line, s.key, "unknown field in leaf");
            }
        }
        if (!type) throw SceneError(st.line, "type", "leaf '" + name + "' has no type");
        SceneGroup g;
        if (*type == BasicType::B3) {
            if (components.empty()) throw SceneError(st.line, "component", "B3 leaf needs components");
            g.leaf = make_b3(components, gluings, depth, name);
        } else {
            if (!components.empty() || !gluings.empty())
                throw SceneError(st.line, "component", "only B3 leaves take components");
            g.leaf = make_basic(*type, p, name);
        }
        if (conj) g.leaf = conjugate(*g.leaf, *conj);
        return g;
    }

    static SceneGroup build_cyclic_stanza(const Stanza& st, int depth) {
        CyclicSignature sig;
        CyclicPlacement place;
        place.depth = depth;
        bool have_n = false;
        for (const auto& s : st.children) {
            auto one = [&] {
                arity(s, 1, 1);
                return integer(s.args[0], s.line, s.key);
            };
            if (s.key == "n") {
                sig.n = one();
                have_n = true;
            } else if (s.key == "a") {
                sig.a = one();
            } else if (s.key == "b" || s.key == "d") {
                throw SceneError(s.line, s.key, "given by the length of the " + std::string(s.key == "b" ? "m" : "nj") + " list");
            } else if (s.key == "c") {
                sig.c = one();
            } else if (s.key == "m" || s.key == "nj") {
                if (s.has_block) throw SceneError(s.line, s.key, "unexpected block");
                auto& list = s.key == "m" ? sig.m : sig.nj;
                for (const auto& a : s.args) list.push_back(integer(a, s.line, s.key));
                std::sort(list.begin(), list.end());
            } else if (s.key == "lambda") {
                arity(s, 1, 1);
                place.lambda = parse_complex(s.args[0], s.line, s.key);
            } else {
                throw SceneError(s.line, s.key, "unknown field in cyclic");
            }
        }
        if (!have_n) throw SceneError(st.line, "n", "cyclic needs n");
        if (sig.n < 2) throw SceneError(st.line, "n", "n must be >= 2");
        for (int k : sig.m)
            if (k < 2 || sig.n % k != 0) throw SceneError(st.line, "m", "entries must be divisors of n that are >= 2");
        for (int k : sig.nj)
            if (k < 3 || sig.n % k != 0) throw SceneError(st.line, "nj", "entries must be divisors of n that are >= 3");
        sig.b = static_cast<int>(sig.m.size());
        sig.d = static_cast<int>(sig.nj.size());
        auto g = sig.genus_formula();
        if (g.denominator() != 1) throw SceneError(st.line, {}, "genus formula is not an integer");
        sig.g = g.numerator();
        auto built = build_cyclic(sig, place);
        SceneGroup out;
        out.tree = std::move(built.tree);
        out.theta = std::move(built.theta);
        return out;
    }

    static SceneGroup build_product(const Stanza& st, const std::map<std::string, SceneGroup>& groups, int depth) {
        std::optional<ConstructionTree> left, right;
        std::optional<BasicGroup> right_leaf;
        std::optional<std::pair<std::string, std::string>> amalgam;
        std::optional<SphereDisc> b1, b2;
        std::optional<double> place;
        int place_line = st.line;
        for (const auto& s : st.children) {
            if (s.key == "left") {
                left = tree_of(groups, s);
            } else if (s.key == "right") {
                right = tree_of(groups, s);
                const auto& g = groups.at(s.args[0]);
                right_leaf = g.leaf;
            } else if (s.key == "amalgam") {
                arity(s, 2, 2);
                amalgam = std::pair{s.args[0], s.args[1]};
            } else if (s.key == "b1") {
                b1 = disc(s);
            } else if (s.key == "b2") {
                b2 = disc(s);
            } else if (s.key == "place") {
                arity(s, 0, 1);
                place = s.args.empty() ? 0.5 : parse_real(s.args[0], s.line, s.key);
                place_line = s.line;
            } else {
                throw SceneError(s.line, s.key, "unknown field in product");
            }
        }
        if (!left || !right) throw SceneError(st.line, left ? "right" : "left", "product needs left and right");
        if (place) {
            if (b1 || b2) throw SceneError(place_line, "place", "give either discs or 'place', not both");
            if (!amalgam || !right_leaf)
                throw SceneError(place_line, "place", "auto-placement needs an amalgam and a leaf on the right");
            auto placed = place_for_amalgam(tree_generators(*left), amalgam->first, *right_leaf, amalgam->second,
                                            *place, depth);
            right = ConstructionTree::leaf(std::move(placed.right));
            b1 = placed.b1;
            b2 = placed.b2;
        }
        if (!b1 || !b2) throw SceneError(st.line, b1 ? "b2" : "b1", "product needs discs b1 and b2 or 'place'");
        SceneGroup g;
        g.tree = free_product(*left, *right, amalgam, *b1, *b2, depth, st.args[0]);
        return g;
    }

    static SceneGroup build_hnn(const Stanza& st, const std::map<std::string, SceneGroup>& groups, int depth) {
        ConstructionTree base = ConstructionTree::trivial();
        std::optional<Generator> stable;
        std::optional<SphereDisc> b1, b2;
        std::string h1, h2;
        for (const auto& s : st.children) {
            if (s.key == "base") {
                base = tree_of(groups, s);
            } else if (s.key == "stable") {
                if (s.args.empty()) throw SceneError(s.line, s.key, "expected 'stable NAME a b c d [anti]'");
                stable = Generator{s.args[0], matrix(s, 1), 0};
            } else if (s.key == "b1") {
                b1 = disc(s);
            } else if (s.key == "b2") {
                b2 = disc(s);
            } else if (s.key == "h1" || s.key == "h2") {
                arity(s, 1, 1);
                (s.key == "h1" ? h1 : h2) = s.args[0];
            } else {
                throw SceneError(s.line, s.key, "unknown field in hnn");
            }
        }
        if (!stable) throw SceneError(st.line, "stable", "hnn needs a stable letter");
        if (!b1 || !b2) throw SceneError(st.line, b1 ? "b2" : "b1", "hnn needs discs b1 and b2");
        if (h1.empty() != h2.empty()) throw SceneError(st.line, h1.empty() ? "h1" : "h2", "give both h1 and h2 or neither");
        SceneGroup g;
        g.tree = hnn_extension(base, *stable, *b1, *b2, h1, h2, depth, st.args[0]);
        return g;
    }

    static SceneGroup build_schottky(const Stanza& st) {
        std::vector<Pairing> pairs;
        for (const auto& s : st.children) {
            if (s.key != "pair" || s.args.size() != 1 || !s.has_block)
                throw SceneError(s.line, s.key, "expected 'pair NAME { from DISC; to DISC; [map a b c d] }'");
            std::optional<SphereDisc> from, to;
            std::optional<MoebiusMap> map;
            const Stanza* from_stanza = nullptr;
            const Stanza* to_stanza = nullptr;
            for (const auto& c : s.children) {
                if (c.key == "from") {
                    from = disc(c);
                    from_stanza = &c;
                } else if (c.key == "to") {
                    to = disc(c);
                    to_stanza = &c;
                } else if (c.key == "map") {
                    map = matrix(c, 0);
                } else {
                    throw SceneError(c.line, c.key, "unknown field in pair");
                }
            }
            if (!from || !to) throw SceneError(s.line, from ? "to" : "from", "pair needs from and to discs");
            if (!map) {
                auto round_inside = [](const Stanza* d) {
                    return d->args[0] == "circle" && (d->args.size() == 3 || d->args[3] == "inside");
                };
                if (!round_inside(from_stanza) || !round_inside(to_stanza))
                    throw SceneError(s.line, "map", "map may be omitted only between two inside circles");
                pairs.push_back(Pairing::between_discs(from->circle().center(), from->circle().radius(),
                                                       to->circle().center(), to->circle().radius(), s.args[0]));
            } else {
                pairs.push_back({*from, *to, *map, s.args[0]});
            }
        }
        if (pairs.empty()) throw SceneError(st.line, "pair", "schottky needs at least one pair");
        SceneGroup g;
        g.pairing = PairingSystem(std::move(pairs));
        return g;
    }

    static QuotientMap build_theta(const Stanza& st, const std::vector<std::string>& names) {
        std::optional<std::vector<int>> orders;
        std::map<std::string, FiniteAbelianGroup::Element> images;
        for (const auto& s : st.children) {
            if (s.has_block || s.args.empty()) throw SceneError(s.line, s.key, "expected values");
            std::vector<int> v;
            for (const auto& a : s.args) v.push_back(integer(a, s.line, s.key));
            if (s.key == "target") orders = v;
            else if (!images.emplace(s.key, v).second) throw SceneError(s.line, s.key, "duplicate image");
        }
        if (!orders) throw SceneError(st.line, "target", "theta needs a target");
        for (const auto& [name, v] : images)
            if (v.size() != orders->size())
                throw SceneError(st.line, name, "image has " + std::to_string(v.size()) + " entries, target has " +
                                                    std::to_string(orders->size()));
        try {
            return QuotientMap(FiniteAbelianGroup(*orders), names, images);
        } catch (const std::invalid_argument& e) {
            throw SceneError(st.line, "theta", e.what());
        }
    }
};

}  // namespace vschottky
