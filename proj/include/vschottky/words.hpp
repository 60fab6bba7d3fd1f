#pragma once

// Words in named generators and bounded enumeration of reduced words.

#include <vschottky/moebius.hpp>

#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vschottky {

/// A generator letter or its inverse; `gen` indexes a generator list.
struct Letter {
    int gen = 0;
    int exp = 1;  // +1 or -1

    Letter inverse() const { return {gen, -exp}; }
    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

inline Word inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l = l.inverse();
    return r;
}

/// Cancels adjacent inverse pairs.
inline Word freely_reduce(const Word& w) {
    Word r;
    r.reserve(w.size());
    for (const auto& l : w) {
        if (!r.empty() && r.back() == l.inverse()) r.pop_back();
        else r.push_back(l);
    }
    return r;
}

inline Word concat(Word u, const Word& v) {
    u.insert(u.end(), v.begin(), v.end());
    return u;
}

/// Shortlex order: shorter first, then lexicographic by (gen, exp).
inline bool shortlex_less(const Word& u, const Word& v) {
    if (u.size() != v.size()) return u.size() < v.size();
    return u < v;
}

/// A named generator with its matrix and projective order (0 for infinite).
struct Generator {
    std::string name;
    MoebiusMap map;
    int order = 0;
};

inline MoebiusMap evaluate(const std::vector<Generator>& gens, const Word& w) {
    MoebiusMap m;
    for (const auto& l : w) {
        const auto& g = gens.at(static_cast<std::size_t>(l.gen)).map;
        m = compose(m, l.exp > 0 ? g : g.inverse());
    }
    return m;
}

/// "A B^-1 E^2"; exponents expand into repeated letters. `1` or empty is the
/// identity. Throws std::invalid_argument on unknown names.
inline Word parse_word(std::string_view text, const std::vector<std::string>& names) {
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        int exponent = 1;
        auto caret = tok.find('^');
        std::string name = tok.substr(0, caret);
        if (caret != std::string::npos) {
            try {
                std::size_t used = 0;
                exponent = std::stoi(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::invalid_argument("bad exponent in word token '" + tok + "'");
            }
        }
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("unknown generator '" + name + "'");
        for (int k = 0; k < std::abs(exponent); ++k) w.push_back({it->second, exponent > 0 ? 1 : -1});
    }
    return w;
}

/// Inverse of parse_word, with runs collapsed into powers.
inline std::string format_word(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        int power = static_cast<int>(j - i) * w[i].exp;
        if (!out.empty()) out += ' ';
        out += names.at(static_cast<std::size_t>(w[i].gen));
        if (power != 1) out += "^" + std::to_string(power);
        i = j;
    }
    return out;
}

inline std::vector<std::string> generator_names(const std::vector<Generator>& gens) {
    std::vector<std::string> names;
    names.reserve(gens.size());
    for (const auto& g : gens) names.push_back(g.name);
    return names;
}

/// Whether `next` may follow the word `w` in a reduced word. Inverse pairs
/// never touch; for a generator of finite order m, a run of equal letters is
/// capped at floor(m/2) for positive and floor((m-1)/2) for negative
/// exponents, so every power of a torsion generator has one spelling.
inline bool may_extend(const std::vector<Generator>& gens, const Word& w, Letter next) {
    const auto& g = gens[static_cast<std::size_t>(next.gen)];
    if (g.order == 1) return false;
    if (!w.empty() && w.back() == next.inverse()) return false;
    if (g.order == 0) return true;
    int cap = next.exp > 0 ? g.order / 2 : (g.order - 1) / 2;
    int run = 0;
    for (auto it = w.rbegin(); it != w.rend() && *it == next; ++it) ++run;
    return run + 1 <= cap;
}

/// Depth-first enumeration of the nonempty reduced words of length <= depth,
/// in a fixed order (generator index, then +1 before -1). The visitor gets the
/// word and its value; returning false stops the walk. Returns the number of
/// words visited.
inline std::size_t enumerate_words(
    const std::vector<Generator>& gens, int depth,
    const std::function<bool(const Word&, const MoebiusMap&)>& visit) {
    std::size_t count = 0;
    bool stop = false;
    Word w;
    std::vector<MoebiusMap> inverses;
    inverses.reserve(gens.size());
    for (const auto& g : gens) inverses.push_back(g.map.inverse());

    std::function<void(const MoebiusMap&)> rec = [&](const MoebiusMap& prefix) {
        if (stop || static_cast<int>(w.size()) >= depth) return;
        for (int gi = 0; gi < static_cast<int>(gens.size()) && !stop; ++gi) {
            for (int e : {1, -1}) {
                Letter l{gi, e};
                if (!may_extend(gens, w, l)) continue;
                const auto& factor = e > 0 ? gens[static_cast<std::size_t>(gi)].map
                                           : inverses[static_cast<std::size_t>(gi)];
                MoebiusMap value = compose(prefix, factor);
                w.push_back(l);
                ++count;
                if (!visit(w, value)) stop = true;
                else rec(value);
                w.pop_back();
                if (stop) break;
            }
        }
    };
    rec(MoebiusMap::identity());
    return count;
}

/// Number of reduced words of length exactly k over g free generators.
inline std::size_t free_word_count(int g, int k) {
    if (k == 0) return 1;
    std::size_t n = static_cast<std::size_t>(2 * g);
    for (int i = 1; i < k; ++i) n *= static_cast<std::size_t>(2 * g - 1);
    return n;
}

/// Counts of map classes over an enumeration.
struct ClassTally {
    std::size_t words = 0;
    std::size_t identity = 0;
    std::size_t elliptic = 0;
    std::size_t parabolic = 0;
    std::size_t ambiguous = 0;
    std::size_t loxodromic = 0;
    std::size_t other = 0;
};

inline ClassTally tally_classes(const std::vector<Generator>& gens, int depth) {
    ClassTally t;
    t.words = enumerate_words(gens, depth, [&](const Word&, const MoebiusMap& m) {
        switch (classify(m).kind) {
            case MapKind::identity: ++t.identity; break;
            case MapKind::elliptic: ++t.elliptic; break;
            case MapKind::parabolic: ++t.parabolic; break;
            case MapKind::ambiguous_parabolic: ++t.ambiguous; break;
            case MapKind::loxodromic: ++t.loxodromic; break;
            default: ++t.other; break;
        }
        return true;
    });
    return t;
}

}  // namespace vschottky
