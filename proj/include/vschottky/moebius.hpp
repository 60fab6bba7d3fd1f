#pragma once

// Möbius and extended Möbius transformations of the Riemann sphere.
//
// A map is stored as a 2x2 complex matrix normalized to determinant 1 and an
// orientation flag. Conformal maps act as z -> (az+b)/(cz+d); anticonformal
// maps act as z -> (a conj(z) + b)/(c conj(z) + d). Matrices are only defined
// up to sign, so every equality test is projective.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vschottky {

using Complex = std::complex<double>;

/// Shared numerical tolerance for projective equality and tangency.
inline constexpr double kTolerance = 1e-9;

/// Default bound for elliptic order detection.
inline constexpr int kMaxEllipticOrder = 120;

inline constexpr double kPi = 3.14159265358979323846;

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
public:
    constexpr SpherePoint() = default;
    SpherePoint(Complex z) : z_(z) {  // NOLINT(google-explicit-constructor)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            infinite_ = true;
            z_ = {};
        }
    }
    SpherePoint(double x, double y = 0.0) : SpherePoint(Complex{x, y}) {}

    static SpherePoint infinity() {
        SpherePoint p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinity() const { return infinite_; }
    Complex value() const {
        if (infinite_) throw std::logic_error("SpherePoint: infinity has no finite value");
        return z_;
    }

    /// Image on the unit sphere under inverse stereographic projection.
    std::array<double, 3> on_sphere() const {
        if (infinite_) return {0.0, 0.0, 1.0};
        double r2 = std::norm(z_);
        double s = 1.0 + r2;
        return {2.0 * z_.real() / s, 2.0 * z_.imag() / s, (r2 - 1.0) / s};
    }

    friend std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
        if (p.infinite_) return os << "inf";
        return os << p.z_;
    }

private:
    Complex z_{};
    bool infinite_ = false;
};

/// Chordal distance on the unit sphere; 2 for antipodal points.
inline double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
    auto u = p.on_sphere();
    auto v = q.on_sphere();
    double dx = u[0] - v[0], dy = u[1] - v[1], dz = u[2] - v[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

enum class Orientation { conformal, anticonformal };

inline Orientation operator*(Orientation a, Orientation b) {
    return a == b ? Orientation::conformal : Orientation::anticonformal;
}

class MoebiusMap {
public:
    MoebiusMap() = default;

    /// Builds the map with matrix [[a, b], [c, d]]; the matrix is rescaled to
    /// determinant 1. Throws std::invalid_argument for singular matrices.
    MoebiusMap(Complex a, Complex b, Complex c, Complex d,
               Orientation orientation = Orientation::conformal)
        : a_(a), b_(b), c_(c), d_(d), orientation_(orientation) {
        normalize();
    }

    static MoebiusMap identity() { return {}; }
    static MoebiusMap scaling(Complex lambda) { return {lambda, 0.0, 0.0, 1.0}; }
    static MoebiusMap rotation(int n) {
        return scaling(std::polar(1.0, 2.0 * kPi / n));
    }
    static MoebiusMap translation(Complex t) { return {1.0, t, 0.0, 1.0}; }
    /// z -> conj(z)
    static MoebiusMap conjugation() { return {1.0, 0.0, 0.0, 1.0, Orientation::anticonformal}; }

    /// The map sending p to 0 and q to infinity, with a fixed normalization:
    /// z -> (z - p)/(z - q) when both are finite.
    static MoebiusMap sending_to_zero_infinity(const SpherePoint& p, const SpherePoint& q) {
        if (p.is_infinity() && q.is_infinity())
            throw std::invalid_argument("sending_to_zero_infinity: coincident points");
        if (p.is_infinity()) return {0.0, 1.0, 1.0, -q.value()};
        if (q.is_infinity()) return {1.0, -p.value(), 0.0, 1.0};
        if (std::abs(p.value() - q.value()) == 0.0)
            throw std::invalid_argument("sending_to_zero_infinity: coincident points");
        return {1.0, -p.value(), 1.0, -q.value()};
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    Orientation orientation() const { return orientation_; }
    bool is_conformal() const { return orientation_ == Orientation::conformal; }

    Complex trace() const { return a_ + d_; }
    /// Square of the trace; independent of the sign ambiguity.
    Complex trace_squared() const { return trace() * trace(); }

    double norm() const {
        return std::max({std::abs(a_), std::abs(b_), std::abs(c_), std::abs(d_)});
    }

    MoebiusMap inverse() const {
        MoebiusMap inv;
        inv.a_ = d_;
        inv.b_ = -b_;
        inv.c_ = -c_;
        inv.d_ = a_;
        inv.orientation_ = orientation_;
        if (orientation_ == Orientation::anticonformal) {
            inv.a_ = std::conj(inv.a_);
            inv.b_ = std::conj(inv.b_);
            inv.c_ = std::conj(inv.c_);
            inv.d_ = std::conj(inv.d_);
        }
        return inv;
    }

    SpherePoint operator()(const SpherePoint& p) const { return apply(p); }

    SpherePoint apply(const SpherePoint& p) const {
        if (p.is_infinity()) {
            if (c_ == 0.0) return SpherePoint::infinity();
            return SpherePoint(a_ / c_);
        }
        Complex z = p.value();
        if (orientation_ == Orientation::anticonformal) z = std::conj(z);
        Complex den = c_ * z + d_;
        Complex num = a_ * z + b_;
        if (den == 0.0) return SpherePoint::infinity();
        return SpherePoint(num / den);
    }

    friend std::ostream& operator<<(std::ostream& os, const MoebiusMap& m) {
        os << "[" << m.a_ << ", " << m.b_ << "; " << m.c_ << ", " << m.d_ << "]";
        if (m.orientation_ == Orientation::anticonformal) os << "*";
        return os;
    }

private:
    friend MoebiusMap compose(const MoebiusMap&, const MoebiusMap&);

    void normalize() {
        if (!std::isfinite(std::abs(a_)) || !std::isfinite(std::abs(b_)) ||
            !std::isfinite(std::abs(c_)) || !std::isfinite(std::abs(d_)))
            throw std::invalid_argument("MoebiusMap: non-finite matrix entry");
        Complex det = a_ * d_ - b_ * c_;
        double scale = norm();
        if (scale == 0.0 || std::abs(det) <= 1e-300 || std::abs(det) < 1e-14 * scale * scale)
            throw std::invalid_argument("MoebiusMap: singular matrix");
        Complex s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
        c_ /= s;
        d_ /= s;
    }

    // A product of unimodular matrices is unimodular; the determinant is only
    // recomputed where it is numerically meaningful.
    void renormalize() {
        double scale = norm();
        if (!std::isfinite(scale)) throw std::invalid_argument("MoebiusMap: non-finite matrix entry");
        if (scale * scale > 1e10) return;
        Complex det = a_ * d_ - b_ * c_;
        if (std::abs(det - 1.0) > 1e-6 && std::abs(det + 1.0) > 1e-6) return;
        Complex s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
        c_ /= s;
        d_ /= s;
    }

    Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
    Orientation orientation_ = Orientation::conformal;
};

/// m1 after m2. Anticonformal first factor conjugates the matrix of m2.
inline MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    Complex a2 = m2.a_, b2 = m2.b_, c2 = m2.c_, d2 = m2.d_;
    if (m1.orientation_ == Orientation::anticonformal) {
        a2 = std::conj(a2);
        b2 = std::conj(b2);
        c2 = std::conj(c2);
        d2 = std::conj(d2);
    }
    MoebiusMap r;
    r.a_ = m1.a_ * a2 + m1.b_ * c2;
    r.b_ = m1.a_ * b2 + m1.b_ * d2;
    r.c_ = m1.c_ * a2 + m1.d_ * c2;
    r.d_ = m1.c_ * b2 + m1.d_ * d2;
    r.orientation_ = m1.orientation_ * m2.orientation_;
    r.renormalize();
    return r;
}

inline MoebiusMap operator*(const MoebiusMap& m1, const MoebiusMap& m2) { return compose(m1, m2); }

inline MoebiusMap power(const MoebiusMap& m, int k) {
    MoebiusMap base = k < 0 ? m.inverse() : m;
    MoebiusMap result;
    for (int i = 0, n = std::abs(k); i < n; ++i) result = compose(result, base);
    return result;
}

/// t m t^-1
inline MoebiusMap conjugate(const MoebiusMap& m, const MoebiusMap& t) {
    return compose(compose(t, m), t.inverse());
}

/// True iff the matrices agree up to sign within tolerance (relative to the
/// larger entry once it exceeds 1) and the orientations match.
inline bool projectively_equal(const MoebiusMap& m1, const MoebiusMap& m2,
                               double tolerance = kTolerance) {
    if (m1.orientation() != m2.orientation()) return false;
    double scale = std::max({1.0, m1.norm(), m2.norm()});
    double tol = tolerance * scale;
    auto close = [&](double sign) {
        return std::abs(m1.a() - sign * m2.a()) <= tol && std::abs(m1.b() - sign * m2.b()) <= tol &&
               std::abs(m1.c() - sign * m2.c()) <= tol && std::abs(m1.d() - sign * m2.d()) <= tol;
    };
    return close(1.0) || close(-1.0);
}

inline bool is_identity(const MoebiusMap& m, double tolerance = kTolerance) {
    return projectively_equal(m, MoebiusMap::identity(), tolerance);
}

enum class MapKind {
    identity,
    elliptic,
    parabolic,
    ambiguous_parabolic,
    loxodromic,
    reflection,
    imaginary_reflection,
    pseudo_parabolic,
    pseudo_hyperbolic,
};

inline const char* to_string(MapKind kind) {
    switch (kind) {
        case MapKind::identity: return "identity";
        case MapKind::elliptic: return "elliptic";
        case MapKind::parabolic: return "parabolic";
        case MapKind::ambiguous_parabolic: return "ambiguous-parabolic";
        case MapKind::loxodromic: return "loxodromic";
        case MapKind::reflection: return "reflection";
        case MapKind::imaginary_reflection: return "imaginary-reflection";
        case MapKind::pseudo_parabolic: return "pseudo-parabolic";
        case MapKind::pseudo_hyperbolic: return "pseudo-hyperbolic";
    }
    return "?";
}

/// Conjugacy class of a map. `order` is the exact projective order of an
/// elliptic map (0 when none was found below the search bound); `multiplier`
/// is set for loxodromic and pseudo-hyperbolic maps (for the latter it is the
/// multiplier of the square) and satisfies |multiplier| > 1.
struct MapClass {
    MapKind kind = MapKind::identity;
    int order = 0;
    Complex multiplier{};

    bool irrational_rotation() const { return kind == MapKind::elliptic && order == 0; }
    bool operator==(const MapClass&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const MapClass& c) {
    os << to_string(c.kind);
    if (c.kind == MapKind::elliptic) {
        if (c.order > 0) os << "(order " << c.order << ")";
        else os << "(irrational)";
    }
    if (c.kind == MapKind::loxodromic || c.kind == MapKind::pseudo_hyperbolic)
        os << "(multiplier " << c.multiplier << ")";
    return os;
}

namespace detail {

inline Complex multiplier_from_trace_squared(Complex t2) {
    // k + 1/k = t^2 - 2, pick the root of modulus > 1
    Complex s = t2 - 2.0;
    Complex root = std::sqrt(s * s - 4.0);
    Complex k1 = (s + root) / 2.0;
    Complex k2 = (s - root) / 2.0;
    return std::abs(k1) >= std::abs(k2) ? k1 : k2;
}

inline MapClass classify_conformal(const MoebiusMap& m, int max_order, double epsilon) {
    if (is_identity(m)) return {MapKind::identity, 1, {}};
    Complex t2 = m.trace_squared();
    double gap = std::abs(t2 - 4.0);
    if (gap < epsilon) {
        double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t2));
        if (gap <= rounding) return {MapKind::parabolic, 0, {}};
        return {MapKind::ambiguous_parabolic, 0, {}};
    }
    if (std::abs(t2.imag()) <= epsilon && t2.real() >= -epsilon && t2.real() < 4.0) {
        MapClass result{MapKind::elliptic, 0, {}};
        MoebiusMap p = m;
        for (int n = 2; n <= max_order; ++n) {
            p = compose(p, m);
            if (is_identity(p)) {
                result.order = n;
                break;
            }
        }
        return result;
    }
    return {MapKind::loxodromic, 0, multiplier_from_trace_squared(t2)};
}

}  // namespace detail

/// Trace classification. Borderline traces (|tr^2 - 4| < epsilon) that are
/// not parabolic to rounding accuracy come back as ambiguous_parabolic.
/// Anticonformal maps are classified through their square.
inline MapClass classify(const MoebiusMap& m, int max_order = kMaxEllipticOrder,
                         double epsilon = kTolerance) {
    if (m.is_conformal()) return detail::classify_conformal(m, max_order, epsilon);
    MoebiusMap sq = compose(m, m);
    if (is_identity(sq)) {
        // M conj(M) = +I for reflections, -I for the fixed-point-free involution
        Complex t = m.a() * std::conj(m.a()) + m.b() * std::conj(m.c()) +
                    m.c() * std::conj(m.b()) + m.d() * std::conj(m.d());
        return {t.real() > 0 ? MapKind::reflection : MapKind::imaginary_reflection, 2, {}};
    }
    MapClass inner = detail::classify_conformal(sq, max_order, epsilon);
    if (inner.kind == MapKind::loxodromic) return {MapKind::pseudo_hyperbolic, 0, inner.multiplier};
    return {MapKind::pseudo_parabolic, 0, {}};
}

/// Fixed points of a non-identity conformal map. Loxodromic maps list the
/// attracting point first.
inline std::vector<SpherePoint> fixed_points(const MoebiusMap& m) {
    if (!m.is_conformal()) throw std::invalid_argument("fixed_points: anticonformal map");
    MapClass cls = classify(m);
    if (cls.kind == MapKind::identity) throw std::invalid_argument("fixed_points: identity map");
    Complex a = m.a(), b = m.b(), c = m.c(), d = m.d();
    bool single = cls.kind == MapKind::parabolic || cls.kind == MapKind::ambiguous_parabolic;
    std::vector<SpherePoint> pts;
    if (std::abs(c) <= kTolerance * 1e-3 * m.norm()) {
        // upper triangular: infinity is fixed
        if (single) return {SpherePoint::infinity()};
        SpherePoint finite(b / (d - a));
        // derivative at the finite point is a/d
        if (std::abs(a / d) < 1.0) pts = {finite, SpherePoint::infinity()};
        else pts = {SpherePoint::infinity(), finite};
        return pts;
    }
    Complex disc = std::sqrt((a + d) * (a + d) - 4.0);
    if (single) return {SpherePoint((a - d) / (2.0 * c))};
    Complex z1 = ((a - d) + disc) / (2.0 * c);
    Complex z2 = ((a - d) - disc) / (2.0 * c);
    // derivative at z is 1/(cz+d)^2
    if (std::abs(c * z1 + d) >= std::abs(c * z2 + d)) pts = {SpherePoint(z1), SpherePoint(z2)};
    else pts = {SpherePoint(z2), SpherePoint(z1)};
    return pts;
}

}  // namespace vschottky
