#include <vschottky/moebius.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace vschottky;

namespace {

const MoebiusMap U{-1.0, 0.0, 0.0, 1.0};
const MoebiusMap V{0.0, 1.0, 1.0, 0.0};

MoebiusMap t6_b(double lambda) {
    return {lambda + 1.0, 1.0 - lambda, 1.0 - lambda, lambda + 1.0};
}

bool near(const SpherePoint& p, const SpherePoint& q, double tol = 1e-9) {
    return chordal_distance(p, q) < tol;
}

MoebiusMap random_map(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        Complex a{n(rng), n(rng)}, b{n(rng), n(rng)}, c{n(rng), n(rng)}, d{n(rng), n(rng)};
        if (std::abs(a * d - b * c) > 0.1) return {a, b, c, d};
    }
}

}  // namespace

TEST(Compose, InvolutionSquaresToIdentity) {
    EXPECT_TRUE(is_identity(compose(U, U)));
}

TEST(Compose, MinusOneOverZ) {
    MoebiusMap uv = compose(U, V);
    EXPECT_TRUE(projectively_equal(uv, MoebiusMap(0.0, -1.0, 1.0, 0.0)));
}

TEST(Compose, ScalingCommutesWithHalfTurn) {
    MoebiusMap a = MoebiusMap::scaling({2.5, 1.0});
    EXPECT_TRUE(projectively_equal(compose(a, U), compose(U, a)));
}

TEST(Compose, AnticonformalTimesAnticonformalIsConformal) {
    MoebiusMap j = MoebiusMap::conjugation();
    MoebiusMap m = compose(j, MoebiusMap(Complex{0, 1}, 1.0, 0.0, 1.0, Orientation::anticonformal));
    EXPECT_TRUE(m.is_conformal());
    // conj(i conj(z) + 1) = -i z + 1
    EXPECT_TRUE(projectively_equal(m, MoebiusMap(Complex{0, -1}, 1.0, 0.0, 1.0)));
}

TEST(Compose, AnticonformalInverse) {
    MoebiusMap m(Complex{1, 2}, 3.0, Complex{0, 1}, 1.0, Orientation::anticonformal);
    EXPECT_TRUE(is_identity(compose(m, m.inverse())));
    EXPECT_TRUE(is_identity(compose(m.inverse(), m)));
}

TEST(Apply, InversionSendsZeroToInfinity) {
    EXPECT_TRUE(V(SpherePoint(0.0)).is_infinity());
    EXPECT_TRUE(MoebiusMap::scaling(2.0)(SpherePoint::infinity()).is_infinity());
}

TEST(Apply, T6GeneratorFixesOne) {
    EXPECT_TRUE(near(t6_b(4.0)(SpherePoint(1.0)), SpherePoint(1.0)));
}

TEST(Apply, PoleAndImageOfInfinity) {
    MoebiusMap m(1.0, 2.0, 3.0, 4.0);
    EXPECT_TRUE(m(SpherePoint(-4.0 / 3.0)).is_infinity());
    EXPECT_TRUE(near(m(SpherePoint::infinity()), SpherePoint(1.0 / 3.0)));
}

TEST(Classify, EllipticOrderThree) {
    auto cls = classify(MoebiusMap::rotation(3));
    EXPECT_EQ(cls.kind, MapKind::elliptic);
    EXPECT_EQ(cls.order, 3);
}

TEST(Classify, LoxodromicMultiplier) {
    auto cls = classify(MoebiusMap::scaling(2.0));
    EXPECT_EQ(cls.kind, MapKind::loxodromic);
    EXPECT_NEAR(std::abs(cls.multiplier - Complex(2.0)), 0.0, 1e-12);
}

TEST(Classify, Translation) {
    EXPECT_EQ(classify(MoebiusMap::translation(1.0)).kind, MapKind::parabolic);
}

TEST(Classify, BorderlineTraceIsAmbiguous) {
    // multiplier 1 + 1e-5 gives tr^2 - 4 of order 1e-10
    EXPECT_EQ(classify(MoebiusMap::scaling(1.0 + 1e-5)).kind, MapKind::ambiguous_parabolic);
}

TEST(Classify, IrrationalRotation) {
    auto cls = classify(MoebiusMap::scaling(std::polar(1.0, 1.0)));
    EXPECT_EQ(cls.kind, MapKind::elliptic);
    EXPECT_TRUE(cls.irrational_rotation());
}

TEST(Classify, OrderBoundIsConfigurable) {
    auto m = MoebiusMap::rotation(150);
    EXPECT_TRUE(classify(m).irrational_rotation());
    EXPECT_EQ(classify(m, 200).order, 150);
}

TEST(Classify, Anticonformal) {
    EXPECT_EQ(classify(MoebiusMap::conjugation()).kind, MapKind::reflection);
    MoebiusMap antipodal(0.0, -1.0, 1.0, 0.0, Orientation::anticonformal);  // -1/conj(z)
    EXPECT_EQ(classify(antipodal).kind, MapKind::imaginary_reflection);
    MoebiusMap glide(3.0, 0.0, 0.0, 1.0, Orientation::anticonformal);  // 3 conj(z)
    auto cls = classify(glide);
    EXPECT_EQ(cls.kind, MapKind::pseudo_hyperbolic);
    EXPECT_NEAR(std::abs(cls.multiplier - Complex(9.0)), 0.0, 1e-9);
}

TEST(FixedPoints, HalfTurn) {
    auto fp = fixed_points(U);
    ASSERT_EQ(fp.size(), 2u);
    bool zero_first = near(fp[0], SpherePoint(0.0));
    EXPECT_TRUE(zero_first ? fp[1].is_infinity() : fp[0].is_infinity());
}

TEST(FixedPoints, Inversion) {
    auto fp = fixed_points(V);
    ASSERT_EQ(fp.size(), 2u);
    EXPECT_TRUE((near(fp[0], 1.0) && near(fp[1], -1.0)) || (near(fp[0], -1.0) && near(fp[1], 1.0)));
}

TEST(FixedPoints, MinusOneOverZ) {
    auto fp = fixed_points(compose(U, V));
    ASSERT_EQ(fp.size(), 2u);
    EXPECT_TRUE((near(fp[0], Complex{0, 1}) && near(fp[1], Complex{0, -1})) ||
                (near(fp[0], Complex{0, -1}) && near(fp[1], Complex{0, 1})));
}

TEST(FixedPoints, ParabolicHasOne) {
    EXPECT_EQ(fixed_points(MoebiusMap::translation(1.0)).size(), 1u);
    EXPECT_EQ(fixed_points(MoebiusMap(1.0, 0.0, 1.0, 1.0)).size(), 1u);
}

TEST(FixedPoints, IdentityRejected) {
    EXPECT_THROW(fixed_points(MoebiusMap::identity()), std::invalid_argument);
}

TEST(FixedPoints, AttractingFirst) {
    auto fp = fixed_points(t6_b(4.0));
    ASSERT_EQ(fp.size(), 2u);
    EXPECT_TRUE(near(fp[0], -1.0));
    EXPECT_TRUE(near(fp[1], 1.0));
}

TEST(ProjectiveEquality, SignAndOrientation) {
    MoebiusMap m(1.0, 2.0, 3.0, 7.0);
    MoebiusMap minus(-1.0, -2.0, -3.0, -7.0);
    EXPECT_TRUE(projectively_equal(m, m));
    EXPECT_TRUE(projectively_equal(m, minus));
    EXPECT_FALSE(projectively_equal(m, MoebiusMap(1.0, 2.0, 3.0, 7.0, Orientation::anticonformal)));
    EXPECT_FALSE(projectively_equal(m, MoebiusMap(1.0, 2.0, 3.0, 7.001)));
}

TEST(Construction, SingularRejected) {
    EXPECT_THROW(MoebiusMap(1.0, 2.0, 2.0, 4.0), std::invalid_argument);
}

// Properties over random maps.

TEST(MoebiusProperties, ComposeIsAssociative) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto a = random_map(rng), b = random_map(rng), c = random_map(rng);
        EXPECT_TRUE(projectively_equal(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-8));
    }
}

TEST(MoebiusProperties, ClassIsConjugationInvariant) {
    std::mt19937_64 rng(11);
    std::vector<MoebiusMap> samples = {MoebiusMap::rotation(5), MoebiusMap::scaling({3.0, 1.0}),
                                       MoebiusMap::translation(1.0), U};
    for (int i = 0; i < 50; ++i) {
        auto t = random_map(rng);
        for (const auto& m : samples) {
            auto c1 = classify(m), c2 = classify(conjugate(m, t));
            EXPECT_EQ(c1.kind, c2.kind);
            EXPECT_EQ(c1.order, c2.order);
            EXPECT_NEAR(std::abs(c1.multiplier - c2.multiplier), 0.0, 1e-6);
        }
    }
}

TEST(MoebiusProperties, FixedPointsAreFixed) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        auto m = random_map(rng);
        for (const auto& p : fixed_points(m)) EXPECT_TRUE(near(m(p), p, 1e-7));
    }
}

TEST(MoebiusProperties, IteratesApproachAttractingPoint) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        auto m = random_map(rng);
        auto cls = classify(m);
        if (cls.kind != MapKind::loxodromic || std::abs(cls.multiplier) < 1.5) continue;
        auto attracting = fixed_points(m)[0];
        SpherePoint p(0.123, -0.456);
        for (int k = 0; k < 80; ++k) p = m(p);
        EXPECT_LT(chordal_distance(p, attracting), 1e-6);
    }
}
