#pragma once

// Virtual Schottky groups K with K/G cyclic of order n: admissible
// signatures and their realization as free products of T1, T2 and T4 leaves.

#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/group_algebra.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace vschottky {

/// (n; a, b, c, d; m_1..m_b; n_1..n_d) with implied genus g. The lists are
/// kept sorted.
struct CyclicSignature {
    int n = 2;
    int a = 0, b = 0, c = 0, d = 0;
    std::vector<int> m;
    std::vector<int> nj;
    long g = 0;

    /// g = n(a + b + c/2 + d - 1) + 1 - n sum 1/n_j
    Rational genus_formula() const {
        Rational g_value = Rational(n) * (Rational(a + b + d - 1) + Rational(c, 2)) + 1;
        for (int k : nj) g_value -= Rational(n, k);
        return g_value;
    }

    /// 1, 2 or 3 for the admissibility clause that holds, 0 if none.
    int clause() const {
        if (a + b > 0) return 1;
        int gcd = 0;
        for (int k : nj) gcd = std::gcd(gcd, n / k);
        if (c > 0) return std::gcd(gcd, n / 2) == 1 ? 2 : 0;
        return gcd == 1 ? 3 : 0;
    }

    /// Kernel of rank 0 or 1.
    bool elementary() const { return g <= 1; }

    bool operator<(const CyclicSignature& o) const {
        return std::tie(n, g, a, b, c, d, m, nj) < std::tie(o.n, o.g, o.a, o.b, o.c, o.d, o.m, o.nj);
    }
    bool operator==(const CyclicSignature& o) const = default;

    std::string str() const {
        std::ostringstream os;
        os << "n=" << n << " g=" << g << " a=" << a << " b=" << b << " c=" << c << " d=" << d;
        auto list = [&](const char* name, const std::vector<int>& v) {
            os << " " << name << "=[";
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << "]";
        };
        list("m", m);
        list("n_j", nj);
        return os.str();
    }
};

inline std::vector<int> divisors_in(int n, int lo) {
    std::vector<int> out;
    for (int k = lo; k <= n; ++k)
        if (n % k == 0) out.push_back(k);
    return out;
}

/// Every admissible signature with 0 <= g <= g_max, sorted by
/// (g, a, b, c, d, m, n_j).
inline std::vector<CyclicSignature> enumerate_signatures(int n, long g_max) {
    if (n < 2) throw std::invalid_argument("enumerate_signatures: n must be >= 2");
    if (g_max < 0) throw std::invalid_argument("enumerate_signatures: g_max must be >= 0");
    const auto m_choices = divisors_in(n, 2), n_choices = divisors_in(n, 3);
    const long base = 1 - n;
    std::vector<CyclicSignature> out;

    // all sorted lists of length k drawn from choices
    auto multisets = [](const std::vector<int>& choices, int k) {
        std::vector<std::vector<int>> result;
        std::vector<int> cur;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (static_cast<int>(cur.size()) == k) {
                result.push_back(cur);
                return;
            }
            for (std::size_t i = start; i < choices.size(); ++i) {
                cur.push_back(choices[i]);
                self(self, i);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return result;
    };

    for (int a = 0; base + static_cast<long>(a) * n <= g_max; ++a)
        for (int b = 0; base + static_cast<long>(a + b) * n <= g_max; ++b) {
            auto m_lists = multisets(m_choices, b);
            for (int c = 0; n % 2 == 0 || c == 0; ++c) {
                long gc = base + static_cast<long>(a + b) * n + static_cast<long>(c) * (n / 2);
                if (gc > g_max) break;
                std::vector<int> nj;
                auto rec = [&](auto&& self, std::size_t start, long g) -> void {
                    if (g >= 0) {
                        CyclicSignature s{n, a, b, c, static_cast<int>(nj.size()), {}, nj, g};
                        if (s.clause() != 0)
                            for (const auto& ml : m_lists) {
                                s.m = ml;
                                out.push_back(s);
                            }
                    }
                    for (std::size_t i = start; i < n_choices.size(); ++i) {
                        long g2 = g + n - n / n_choices[i];
                        if (g2 > g_max) continue;
                        nj.push_back(n_choices[i]);
                        self(self, i, g2);
                        nj.pop_back();
                    }
                };
                rec(rec, 0, gc);
                if (n % 2 == 1) break;
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// The free-product type, e.g. "Z * (Z ⊕ Z₃) * Z₂ * Z₄".
inline std::string isomorphism_type(const CyclicSignature& s) {
    auto sub = [](int k) {
        static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
        std::string out;
        for (char ch : std::to_string(k)) out += digits[ch - '0'];
        return out;
    };
    std::vector<std::string> parts;
    for (int i = 0; i < s.a; ++i) parts.push_back("Z");
    for (int k : s.m) parts.push_back("(Z ⊕ Z" + sub(k) + ")");
    for (int i = 0; i < s.c; ++i) parts.push_back("Z" + sub(2));
    for (int k : s.nj) parts.push_back("Z" + sub(k));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " * " : "") + parts[i];
    return out;
}

struct CyclicPlacement {
    double spacing = 3.0;    // distance between consecutive leaves on the real axis
    Complex lambda = 4.0;    // multiplier of every tau_j and eta_j
    double shrink = 0.25;    // leaf fixed points sit at x_i +- delta
    int depth = kDefaultDepth;
    int retries = 3;
};

struct CyclicGroup {
    CyclicSignature signature;
    ConstructionTree tree;
    QuotientMap theta;
};

namespace detail {

inline BasicGroup named_leaf(BasicType type, int order, Complex lambda, const std::vector<std::string>& names,
                             const std::string& label) {
    BasicParams p;
    p.n = order;
    p.lambda1 = lambda;
    auto bg = make_basic(type, p, label);
    for (std::size_t i = 0; i < names.size(); ++i) bg.generators[i].name = names[i];
    return bg;
}

// Fixed points 0, infinity moved to x +- delta.
inline BasicGroup place_leaf(const BasicGroup& bg, double x, double delta) {
    MoebiusMap to_pair(delta, delta, -1.0, 1.0);  // 0 -> delta, infinity -> -delta
    return conjugate(bg, compose(MoebiusMap::translation(x), to_pair));
}

}  // namespace detail

/// Leaves in the order tau, (eta, theta), gamma, eps along the real axis,
/// joined left to right by free products across vertical lines; theta sends
/// tau_j, eta_j to 1, theta_j to n/m_j, gamma_j to n/2 and eps_j to n/n_j.
inline CyclicGroup build_cyclic(const CyclicSignature& s, const CyclicPlacement& placement = {}) {
    if (s.clause() == 0 || s.genus_formula() != Rational(s.g) || s.g < 0 ||
        static_cast<int>(s.m.size()) != s.b || static_cast<int>(s.nj.size()) != s.d || (s.c > 0 && s.n % 2 == 1))
        throw std::invalid_argument("build_cyclic: signature is not admissible: " + s.str());
    if (std::abs(placement.lambda) <= 1.0) throw std::invalid_argument("build_cyclic: |lambda| must exceed 1");

    struct Spec {
        BasicType type;
        int order;
        std::vector<std::string> names;
        std::vector<int> images;
    };
    std::vector<Spec> specs;
    auto idx = [](const char* stem, int j) { return std::string(stem) + std::to_string(j); };
    for (int j = 1; j <= s.a; ++j) specs.push_back({BasicType::T2, 2, {idx("tau", j)}, {1}});
    for (int j = 1; j <= s.b; ++j) {
        int mj = s.m[static_cast<std::size_t>(j - 1)];
        specs.push_back({BasicType::T4, mj, {idx("eta", j), idx("theta", j)}, {1, s.n / mj}});
    }
    for (int j = 1; j <= s.c; ++j) specs.push_back({BasicType::T1, 2, {idx("gamma", j)}, {s.n / 2}});
    for (int j = 1; j <= s.d; ++j) {
        int nj = s.nj[static_cast<std::size_t>(j - 1)];
        specs.push_back({BasicType::T1, nj, {idx("eps", j)}, {s.n / nj}});
    }

    double lambda_room = (std::abs(placement.lambda) - 1.0) / (std::abs(placement.lambda) + 1.0);
    double shrink = placement.shrink;
    for (int attempt = 0;; ++attempt, shrink /= 2.0) {
        try {
            ConstructionTree tree;
            std::map<std::string, FiniteAbelianGroup::Element> images;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                const auto& sp = specs[i];
                double room = sp.type == BasicType::T2 ? lambda_room : std::sin(kPi / sp.order);
                if (sp.type == BasicType::T4) room = std::min(room, lambda_room);
                double x = placement.spacing * static_cast<double>(i);
                auto leaf = detail::place_leaf(
                    detail::named_leaf(sp.type, sp.order, placement.lambda, sp.names, sp.names.front()), x,
                    shrink * room);
                for (std::size_t k = 0; k < sp.names.size(); ++k) images[sp.names[k]] = {sp.images[k]};
                if (i == 0) {
                    tree = ConstructionTree::leaf(std::move(leaf));
                } else {
                    double wall = x - placement.spacing / 2.0;
                    tree = free_product(tree, ConstructionTree::leaf(std::move(leaf)), std::nullopt,
                                        SphereDisc::right_of(wall), SphereDisc::left_of(wall), placement.depth,
                                        "* " + sp.names.front());
                }
            }
            QuotientMap theta(FiniteAbelianGroup({s.n}), generator_names(tree_generators(tree)), images);
            return {s, std::move(tree), std::move(theta)};
        } catch (const HypothesisFailure&) {
            if (attempt + 1 >= placement.retries) throw;
        }
    }
}

}  // namespace vschottky
