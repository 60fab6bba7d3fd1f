#include <vschottky/schottky.hpp>

#include <gtest/gtest.h>

using namespace vschottky;

namespace {

PairingSystem rank_one(double lambda) {
    return PairingSystem::from_circles({{SphereCircle::circle(0.0, 0.5), SphereCircle::circle(0.0, 2.0),
                                         MoebiusMap::scaling(lambda)}});
}

PairingSystem rank_two() {
    return PairingSystem({Pairing::between_discs(-2.0, 1.0, 2.0, 1.0),
                          Pairing::between_discs({0, -2}, 1.0, {0, 2}, 1.0)});
}

}  // namespace

TEST(VerifyPairing, RankOneScaling) {
    auto ps = rank_one(4.0);
    EXPECT_EQ(ps.pairings()[0].from.side(), 1);
    EXPECT_EQ(ps.pairings()[0].to.side(), -1);
    auto report = verify_pairing(ps);
    EXPECT_TRUE(report.ok());
}

TEST(VerifyPairing, WrongMultiplierFailsCondition2) {
    auto report = verify_pairing(rank_one(2.0));
    EXPECT_FALSE(report.ok());
    EXPECT_FALSE(report.circles_paired);
    EXPECT_TRUE(report.disjoint_circles);
}

TEST(VerifyPairing, RegionNotMappedOff) {
    // 1/(4z) sends |z| = 1/2 onto |z| = 1/2, not onto |z| = 2
    PairingSystem ps({{SphereDisc::inside(0.0, 0.5), SphereDisc::outside(0.0, 2.0),
                       MoebiusMap(0.0, 1.0, 4.0, 0.0), "A"}});
    EXPECT_FALSE(verify_pairing(ps).ok());
    // z -> 4/z maps |z| = 1/2 to |z| = 8 ... pick one that maps C onto C' but with
    // the wrong side: z -> 1/z sends |z|=1/2 to |z|=2 and the outside of the
    // small disc to the inside of |z| = 2
    PairingSystem flipped({{SphereDisc::inside(0.0, 0.5), SphereDisc::outside(0.0, 2.0),
                            MoebiusMap(0.0, 1.0, 1.0, 0.0), "A"}});
    auto report = verify_pairing(flipped);
    EXPECT_TRUE(report.circles_paired);
    EXPECT_FALSE(report.region_mapped_off);
}

TEST(VerifyPairing, EmptySystemIsTrivialGroup) {
    PairingSystem ps;
    EXPECT_EQ(ps.rank(), 0);
    EXPECT_TRUE(verify_pairing(ps).ok());
}

TEST(VerifyPairing, OverlappingDiscs) {
    PairingSystem ps({Pairing::between_discs(-0.5, 1.0, 0.5, 1.0)});
    auto report = verify_pairing(ps);
    EXPECT_FALSE(report.disjoint_circles);
}

TEST(VerifyPairing, FixedPointOnCircleRejected) {
    // z -> 4z with circles through the fixed point 0
    PairingSystem ps({{SphereDisc::inside(0.5, 0.5), SphereDisc::outside(0.0, 8.0),
                       MoebiusMap::scaling(4.0), "A"}});
    auto report = verify_pairing(ps);
    EXPECT_FALSE(report.fixed_points_clear);
}

TEST(VerifyPairing, InferenceRejectsIntersectingCircles) {
    EXPECT_THROW(PairingSystem::from_circles({{SphereCircle::circle(0.0, 1.0),
                                               SphereCircle::circle(1.0, 1.0),
                                               MoebiusMap::scaling(2.0)}}),
                 std::invalid_argument);
}

TEST(VerifyPairing, RankTwoClassical) {
    EXPECT_TRUE(verify_pairing(rank_two()).ok());
}

TEST(PingPong, SingleLetters) {
    auto ps = rank_one(4.0);
    EXPECT_TRUE(same_disc(ping_pong_disc(ps, {{0, 1}}), SphereDisc::outside(0.0, 2.0)));
    EXPECT_TRUE(same_disc(ping_pong_disc(ps, {{0, -1}}), SphereDisc::inside(0.0, 0.5)));
}

TEST(PingPong, SquareIsNested) {
    auto ps = rank_one(4.0);
    auto d = ping_pong_disc(ps, {{0, 1}, {0, 1}});
    EXPECT_TRUE(same_disc(d, SphereDisc::outside(0.0, 8.0)));
    EXPECT_TRUE(strictly_contains(ping_pong_disc(ps, {{0, 1}}), d));
}

TEST(PingPong, RejectsUnreducedWords) {
    EXPECT_THROW(ping_pong_disc(rank_one(4.0), {{0, 1}, {0, -1}}), std::invalid_argument);
    EXPECT_THROW(ping_pong_disc(rank_one(4.0), {}), std::invalid_argument);
}

TEST(Nontrivial, RankOneDepthEight) {
    auto cert = is_nontrivial_to_depth(rank_one(4.0), 8);
    EXPECT_TRUE(cert.holds);
    EXPECT_EQ(cert.words_checked, 16u);
}

TEST(Nontrivial, RankTwoDepthSix) {
    auto cert = is_nontrivial_to_depth(rank_two(), 6);
    EXPECT_TRUE(cert.holds);
    EXPECT_EQ(cert.words_checked, 4u + 12u + 36u + 108u + 324u + 972u);
}

TEST(Nontrivial, DepthZeroIsVacuous) {
    auto cert = is_nontrivial_to_depth(rank_two(), 0);
    EXPECT_TRUE(cert.holds);
    EXPECT_EQ(cert.words_checked, 0u);
}

TEST(Nontrivial, BrokenSystemGivesWitness) {
    // circles pairwise overlapping: nesting fails at some word
    PairingSystem ps({Pairing::between_discs(-0.5, 1.0, 0.5, 1.0),
                      Pairing::between_discs({0, -0.5}, 1.0, {0, 0.5}, 1.0)});
    auto cert = is_nontrivial_to_depth(ps, 4);
    EXPECT_FALSE(cert.holds);
    ASSERT_TRUE(cert.witness.has_value());
    EXPECT_FALSE(cert.witness->empty());
}

TEST(SchottkyProperties, NestingAlongExtensions) {
    auto ps = rank_two();
    auto gens = ps.generators();
    enumerate_words(gens, 6, [&](const Word& w, const MoebiusMap&) {
        if (w.size() < 2) return true;
        auto child = ping_pong_disc(ps, w);
        auto parent = ping_pong_disc(ps, Word(w.begin(), w.end() - 1));
        EXPECT_TRUE(strictly_contains(parent, child));
        EXPECT_LT(spherical_diameter(child), spherical_diameter(parent));
        return true;
    });
}

TEST(SchottkyProperties, PurelyLoxodromic) {
    auto t = tally_classes(rank_two().generators(), 6);
    EXPECT_EQ(t.words, 1456u);
    EXPECT_EQ(t.loxodromic, 1456u);
}

TEST(SchottkyProperties, DiameterEnvelope) {
    // contraction ratio estimated from depth-2 words bounds the decay
    auto ps = rank_two();
    auto gens = ps.generators();
    std::vector<double> max_diam(9, 0.0);
    enumerate_words(gens, 8, [&](const Word& w, const MoebiusMap&) {
        double d = spherical_diameter(ping_pong_disc(ps, w));
        max_diam[w.size()] = std::max(max_diam[w.size()], d);
        return true;
    });
    double rho = max_diam[2] / max_diam[1];
    ASSERT_LT(rho, 1.0);
    for (int k = 2; k <= 8; ++k) EXPECT_LE(max_diam[k], max_diam[1] * std::pow(rho, k - 1) * 1.0001);
}
