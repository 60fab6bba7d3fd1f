#include <vschottky/cyclic_case.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace vschottky;

namespace {

CyclicSignature sig(int n, int a, int b, int c, std::vector<int> m, std::vector<int> nj) {
    CyclicSignature s{n, a, b, c, static_cast<int>(nj.size()), std::move(m), std::move(nj), 0};
    auto g = s.genus_formula();
    s.g = g.numerator() / g.denominator();
    return s;
}

bool contains(const std::vector<CyclicSignature>& list, const CyclicSignature& s) {
    return std::find(list.begin(), list.end(), s) != list.end();
}

long gcd_all(const std::vector<long>& v) {
    long r = 0;
    for (long x : v) r = std::gcd(r, x);
    return r;
}

// Raw grid: every (a, b, c) and every list of divisors, in any order; keeps
// those with an integral g in range and one true clause, then sorts each list.
std::set<std::string> brute_force(int n, long g_max) {
    std::set<std::string> out;
    std::vector<int> divs;
    for (int k = 2; k <= n; ++k)
        if (n % k == 0) divs.push_back(k);
    const int cap = 6;
    std::vector<std::vector<int>> tuples{{}};
    for (int len = 1; len <= cap; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& t : tuples)
            if (static_cast<int>(t.size()) == len - 1)
                for (int k : divs) {
                    auto u = t;
                    u.push_back(k);
                    next.push_back(u);
                }
        tuples.insert(tuples.end(), next.begin(), next.end());
    }
    for (int a = 0; a <= cap; ++a)
        for (int c = 0; c <= 2 * cap; ++c)
            for (const auto& ml : tuples)
                for (const auto& nl : tuples) {
                    int b = static_cast<int>(ml.size()), d = static_cast<int>(nl.size());
                    bool ok = true;
                    for (int k : nl) ok = ok && k >= 3;
                    if (!ok || (c > 0 && n % 2 == 1)) continue;
                    // 2g = 2n(a+b+d-1) + nc + 2 - 2n sum 1/n_j
                    long twice = 2L * n * (a + b + d - 1) + static_cast<long>(n) * c + 2;
                    for (int k : nl) twice -= 2L * n / k;
                    if (twice % 2 != 0 || twice < 0 || twice / 2 > g_max) continue;
                    std::vector<long> parts;
                    for (int k : nl) parts.push_back(n / k);
                    bool c1 = a + b > 0;
                    bool c2 = a + b == 0 && c > 0 && [&] {
                        auto p = parts;
                        p.push_back(n / 2);
                        return gcd_all(p) == 1;
                    }();
                    bool c3 = a + b == 0 && c == 0 && gcd_all(parts) == 1;
                    if (c1 + c2 + c3 != 1) continue;
                    auto sm = ml, sn = nl;
                    std::sort(sm.begin(), sm.end());
                    std::sort(sn.begin(), sn.end());
                    CyclicSignature s{n, a, b, c, d, sm, sn, twice / 2};
                    out.insert(s.str());
                }
    return out;
}

}  // namespace

TEST(EnumerateSignatures, Examples) {
    auto two = enumerate_signatures(2, 1);
    EXPECT_TRUE(contains(two, sig(2, 1, 0, 0, {}, {})));
    EXPECT_EQ(sig(2, 1, 0, 0, {}, {}).g, 1);
    auto three = enumerate_signatures(3, 2);
    auto target = sig(3, 0, 0, 0, {}, {3, 3});
    EXPECT_EQ(target.g, 2);
    EXPECT_TRUE(contains(three, target));
}

TEST(EnumerateSignatures, GenusZeroEntryIsElementary) {
    auto s = sig(2, 0, 0, 1, {}, {});
    EXPECT_EQ(s.g, 0);
    EXPECT_EQ(s.clause(), 2);
    EXPECT_TRUE(s.elementary());
    EXPECT_TRUE(contains(enumerate_signatures(2, 0), s));
}

TEST(EnumerateSignatures, SortedAndUnique) {
    auto list = enumerate_signatures(12, 20);
    EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
    EXPECT_EQ(std::adjacent_find(list.begin(), list.end()), list.end());
    for (std::size_t i = 1; i < list.size(); ++i) EXPECT_LE(list[i - 1].g, list[i].g);
}

TEST(EnumerateSignatures, RejectsBadInput) {
    EXPECT_THROW(enumerate_signatures(1, 3), std::invalid_argument);
    EXPECT_THROW(enumerate_signatures(3, -1), std::invalid_argument);
}

TEST(EnumerateSignatures, OddOrderHasNoInvolutions) {
    for (const auto& s : enumerate_signatures(9, 30)) EXPECT_EQ(s.c, 0);
}

TEST(EnumerateSignatures, MatchesBruteForceFilter) {
    for (int n = 2; n <= 8; ++n) {
        long g_max = 8;
        std::set<std::string> listed;
        for (const auto& s : enumerate_signatures(n, g_max)) {
            EXPECT_EQ(s.genus_formula(), Rational(s.g));
            EXPECT_NE(s.clause(), 0);
            listed.insert(s.str());
        }
        EXPECT_EQ(listed, brute_force(n, g_max)) << "n=" << n;
    }
}

TEST(IsomorphismType, Examples) {
    EXPECT_EQ(isomorphism_type(sig(2, 2, 0, 0, {}, {})), "Z * Z");
    EXPECT_EQ(isomorphism_type(sig(2, 0, 0, 2, {}, {})), "Z₂ * Z₂");
    EXPECT_EQ(isomorphism_type(sig(3, 0, 1, 0, {3}, {})), "(Z ⊕ Z₃)");
    EXPECT_EQ(isomorphism_type(sig(12, 1, 1, 1, {12}, {3})), "Z * (Z ⊕ Z₁₂) * Z₂ * Z₃");
}

TEST(BuildCyclic, SingleT2Leaf) {
    auto built = build_cyclic(sig(2, 1, 0, 0, {}, {}));
    EXPECT_EQ(built.tree.kind(), ConstructionTree::Kind::leaf);
    EXPECT_EQ(built.tree.group().type, BasicType::T2);
    EXPECT_EQ(built.theta.image("tau1"), (FiniteAbelianGroup::Element{1}));
    EXPECT_EQ(kernel_rank(built.tree, built.theta).rank(), 1);
}

TEST(BuildCyclic, Z3StarZ3) {
    auto built = build_cyclic(sig(3, 0, 0, 0, {}, {3, 3}));
    EXPECT_EQ(built.tree.kind(), ConstructionTree::Kind::product);
    EXPECT_EQ(kernel_rank(built.tree, built.theta).rank(), 2);
    EXPECT_EQ(euler_characteristic(built.tree), Rational(-1, 3));
}

TEST(BuildCyclic, SingleT4Leaf) {
    auto s = sig(4, 0, 1, 0, {4}, {});
    EXPECT_EQ(s.g, 1);
    auto built = build_cyclic(s);
    EXPECT_EQ(built.tree.group().type, BasicType::T4);
    EXPECT_EQ(built.theta.image("theta1"), (FiniteAbelianGroup::Element{1}));
    EXPECT_EQ(kernel_rank(built.tree, built.theta).rank(), 1);
}

TEST(BuildCyclic, GeneratorCountIsAPlus2BPlusCPlusD) {
    auto s = sig(6, 2, 2, 1, {2, 3}, {3, 6});
    auto group = assemble(build_cyclic(s).tree);
    EXPECT_EQ(group.generators.size(), static_cast<std::size_t>(s.a + 2 * s.b + s.c + s.d));
    EXPECT_EQ(group.names(), (std::vector<std::string>{"tau1", "tau2", "eta1", "theta1", "eta2", "theta2", "gamma1",
                                                       "eps1", "eps2"}));
}

TEST(BuildCyclic, RejectsInadmissibleSignature) {
    EXPECT_THROW(build_cyclic(sig(6, 0, 0, 0, {}, {3, 3})), std::invalid_argument);
    auto bad = sig(3, 1, 0, 0, {}, {});
    bad.g = 7;
    EXPECT_THROW(build_cyclic(bad), std::invalid_argument);
}

TEST(CyclicProperties, KernelRankEqualsGenusForSmallSignatures) {
    for (int n = 2; n <= 12; ++n)
        for (const auto& s : enumerate_signatures(n, 12)) {
            CyclicPlacement place;
            place.depth = 2;
            auto built = build_cyclic(s, place);
            auto r = kernel_rank(built.tree, built.theta);
            ASSERT_TRUE(r.integral) << s.str();
            EXPECT_EQ(r.rank(), s.g) << s.str();
        }
}

TEST(CyclicProperties, CertificatesPassAtFullDepth) {
    for (const auto& s : {sig(6, 1, 1, 1, {3}, {3}), sig(4, 0, 0, 2, {}, {4}), sig(5, 0, 0, 0, {}, {5, 5, 5})}) {
        auto built = build_cyclic(s);
        for (const auto& [name, report] : assemble(built.tree).certificates) EXPECT_TRUE(report.ok()) << name;
        EXPECT_FALSE(kernel_torsion_witness(built.tree, built.theta, 4)) << s.str();
    }
}
