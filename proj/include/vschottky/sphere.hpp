#pragma once

// Generalized circles and discs on the Riemann sphere.
//
// A circle is the zero set of the Hermitian form
//     f(z) = A|z|^2 + 2 Re(conj(B) z) + C,
// with A, C real and |B|^2 - AC > 0. A = 0 gives a line (a circle through
// infinity). Geometric predicates are evaluated on the unit sphere, where
// every disc is a spherical cap, so infinity needs no special casing.

#include <vschottky/moebius.hpp>

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vschottky {

/// Center (unit vector) and angular radius of a spherical cap.
struct Cap {
    std::array<double, 3> center;
    double angle;
};

namespace detail {

inline double angle_between(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    double cx = u[1] * v[2] - u[2] * v[1];
    double cy = u[2] * v[0] - u[0] * v[2];
    double cz = u[0] * v[1] - u[1] * v[0];
    double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

}  // namespace detail

class SphereCircle {
public:
    /// Throws std::invalid_argument when the form is degenerate.
    SphereCircle(double a, Complex b, double c) : a_(a), b_(b), c_(c) {
        double disc = std::norm(b_) - a_ * c_;
        if (!std::isfinite(disc) || !(disc > 0.0))
            throw std::invalid_argument("SphereCircle: degenerate Hermitian form");
        double s = std::sqrt(disc);
        a_ /= s;
        b_ /= s;
        c_ /= s;
    }

    /// Form already scaled to |B|^2 - AC = 1; skips the cancellation-prone
    /// discriminant, which is exact under congruence by a det-1 matrix.
    static SphereCircle normalized(double a, Complex b, double c) {
        SphereCircle out;
        out.a_ = a;
        out.b_ = b;
        out.c_ = c;
        return out;
    }

    static SphereCircle circle(Complex center, double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("SphereCircle: radius must be positive");
        return {1.0, -center, std::norm(center) - radius * radius};
    }
    /// The line through p and q.
    static SphereCircle line(Complex p, Complex q) {
        Complex normal = Complex{0.0, 1.0} * (q - p);
        return {0.0, normal, -2.0 * (std::conj(normal) * p).real()};
    }
    /// The vertical line Re z = x.
    static SphereCircle vertical_line(double x) { return {0.0, 1.0, -2.0 * x}; }

    double A() const { return a_; }
    Complex B() const { return b_; }
    double C() const { return c_; }

    bool is_line() const { return std::abs(a_) <= kTolerance * 1e-3; }
    Complex center() const {
        if (is_line()) throw std::logic_error("SphereCircle: line has no center");
        return -b_ / a_;
    }
    double radius() const {
        if (is_line()) throw std::logic_error("SphereCircle: line has no radius");
        return std::sqrt(std::max(0.0, std::norm(b_) / (a_ * a_) - c_ / a_));
    }

    /// Form value pulled back to the unit sphere, scaled to lie in [-1, 1]:
    /// (v.P + A + C)/|v| where v = (2 Re B, 2 Im B, A - C).
    double sphere_value(const SpherePoint& p) const {
        auto P = p.on_sphere();
        double v0 = 2.0 * b_.real(), v1 = 2.0 * b_.imag(), v2 = a_ - c_;
        double nv = vector_norm();
        return (v0 * P[0] + v1 * P[1] + v2 * P[2] + a_ + c_) / nv;
    }

    /// Cap where `side * f < 0`.
    /// sin(angle) = 2/|v| and cos(angle) = s(A+C)/|v|; atan2 keeps small caps
    /// accurate.
    Cap cap(int side) const {
        double v0 = 2.0 * b_.real(), v1 = 2.0 * b_.imag(), v2 = a_ - c_;
        double nv = vector_norm();
        double s = side > 0 ? 1.0 : -1.0;
        Cap cap;
        cap.center = {-s * v0 / nv, -s * v1 / nv, -s * v2 / nv};
        cap.angle = std::atan2(2.0, s * (a_ + c_));
        return cap;
    }

    friend std::ostream& operator<<(std::ostream& os, const SphereCircle& c) {
        return os << "circle(A=" << c.a_ << ", B=" << c.b_ << ", C=" << c.c_ << ")";
    }

private:
    SphereCircle() = default;

    // |v|^2 = 4(|B|^2 - AC) + (A + C)^2 with the discriminant fixed at 1
    double vector_norm() const { return std::sqrt(4.0 + (a_ + c_) * (a_ + c_)); }

    double a_ = 0.0;
    Complex b_;
    double c_ = 0.0;
};

/// One of the two complementary open discs of a circle: the points where
/// side * f < 0.
class SphereDisc {
public:
    SphereDisc(SphereCircle circle, int side) : circle_(circle), side_(side >= 0 ? 1 : -1) {}

    static SphereDisc inside(Complex center, double radius) {
        return {SphereCircle::circle(center, radius), 1};
    }
    static SphereDisc outside(Complex center, double radius) {
        return {SphereCircle::circle(center, radius), -1};
    }
    /// {Re z > x}
    static SphereDisc right_of(double x) { return {SphereCircle::vertical_line(x), -1}; }
    /// {Re z < x}
    static SphereDisc left_of(double x) { return {SphereCircle::vertical_line(x), 1}; }

    const SphereCircle& circle() const { return circle_; }
    int side() const { return side_; }
    SphereDisc complement() const { return {circle_, -side_}; }
    Cap cap() const { return circle_.cap(side_); }

    /// Signed depth: positive inside, negative outside, zero on the circle.
    double depth(const SpherePoint& p) const { return -side_ * circle_.sphere_value(p); }
    bool contains(const SpherePoint& p, double tolerance = kTolerance) const {
        return depth(p) > tolerance;
    }

    /// A point strictly inside the disc (the cap center pulled back).
    SpherePoint interior_point() const {
        auto u = cap().center;
        if (u[2] >= 1.0 - 1e-15) return SpherePoint::infinity();
        return SpherePoint(Complex{u[0], u[1]} / (1.0 - u[2]));
    }

    friend std::ostream& operator<<(std::ostream& os, const SphereDisc& d) {
        return os << "disc(" << d.circle_ << ", side=" << d.side_ << ")";
    }

private:
    SphereCircle circle_;
    int side_;
};

/// Image circle: the Hermitian form is pushed forward by the inverse matrix.
inline SphereCircle map_circle(const MoebiusMap& m, const SphereCircle& circle) {
    Complex h00 = circle.A(), h01 = circle.B(), h10 = std::conj(circle.B()), h11 = circle.C();
    if (!m.is_conformal()) {
        h01 = std::conj(h01);
        h10 = std::conj(h10);
    }
    // N = M^-1 for det M = 1; result N^* H N
    Complex n00 = m.d(), n01 = -m.b(), n10 = -m.c(), n11 = m.a();
    Complex t00 = h00 * n00 + h01 * n10, t01 = h00 * n01 + h01 * n11;
    Complex t10 = h10 * n00 + h11 * n10, t11 = h10 * n01 + h11 * n11;
    Complex r00 = std::conj(n00) * t00 + std::conj(n10) * t10;
    Complex r01 = std::conj(n00) * t01 + std::conj(n10) * t11;
    Complex r11 = std::conj(n01) * t01 + std::conj(n11) * t11;
    return SphereCircle::normalized(r00.real(), r01, r11.real());
}

/// Image disc. The congruence N^* H N rescales the form by a positive factor,
/// so the side label carries over unchanged.
inline SphereDisc disc_image(const MoebiusMap& m, const SphereDisc& disc) {
    return {map_circle(m, disc.circle()), disc.side()};
}

enum class DiscRelation { disjoint, touching, overlapping };

inline const char* to_string(DiscRelation r) {
    switch (r) {
        case DiscRelation::disjoint: return "disjoint";
        case DiscRelation::touching: return "touching";
        case DiscRelation::overlapping: return "overlapping";
    }
    return "?";
}

/// Relation between two open discs: disjoint closures, closures meeting only
/// on the boundary (within tolerance), or overlapping interiors.
inline DiscRelation relation(const SphereDisc& d1, const SphereDisc& d2,
                             double tolerance = kTolerance) {
    Cap c1 = d1.cap(), c2 = d2.cap();
    double gap = detail::angle_between(c1.center, c2.center) - (c1.angle + c2.angle);
    if (gap > tolerance) return DiscRelation::disjoint;
    if (gap >= -tolerance) return DiscRelation::touching;
    return DiscRelation::overlapping;
}

inline bool discs_disjoint(const SphereDisc& d1, const SphereDisc& d2,
                           double tolerance = kTolerance) {
    return relation(d1, d2, tolerance) == DiscRelation::disjoint;
}

/// Closure of `inner` lies strictly inside `outer`.
inline bool strictly_contains(const SphereDisc& outer, const SphereDisc& inner,
                              double tolerance = kTolerance) {
    Cap co = outer.cap(), ci = inner.cap();
    return detail::angle_between(co.center, ci.center) + ci.angle < co.angle - tolerance;
}

/// Closure of `inner` inside closure of `outer`, allowing tangency.
inline bool contains(const SphereDisc& outer, const SphereDisc& inner,
                     double tolerance = kTolerance) {
    Cap co = outer.cap(), ci = inner.cap();
    return detail::angle_between(co.center, ci.center) + ci.angle <= co.angle + tolerance;
}

inline bool same_disc(const SphereDisc& d1, const SphereDisc& d2, double tolerance = kTolerance) {
    Cap c1 = d1.cap(), c2 = d2.cap();
    return detail::angle_between(c1.center, c2.center) <= tolerance &&
           std::abs(c1.angle - c2.angle) <= tolerance;
}

inline bool same_circle(const SphereCircle& c1, const SphereCircle& c2,
                        double tolerance = kTolerance) {
    SphereDisc d1(c1, 1);
    return same_disc(d1, SphereDisc(c2, 1), tolerance) ||
           same_disc(d1, SphereDisc(c2, -1), tolerance);
}

/// True iff p and q lie strictly on opposite sides of the circle.
inline bool circle_separates(const SphereCircle& c, const SpherePoint& p, const SpherePoint& q,
                             double tolerance = kTolerance) {
    double fp = c.sphere_value(p), fq = c.sphere_value(q);
    return (fp > tolerance && fq < -tolerance) || (fp < -tolerance && fq > tolerance);
}

/// Chordal diameter of the circle on the unit sphere (2 for great circles).
inline double spherical_diameter(const SphereCircle& c) {
    return 2.0 * std::sin(c.cap(1).angle);
}

/// Chordal diameter of the closed disc; 2 once the cap reaches a hemisphere.
inline double spherical_diameter(const SphereDisc& d) {
    double angle = d.cap().angle;
    return angle >= kPi / 2 ? 2.0 : 2.0 * std::sin(angle);
}

}  // namespace vschottky
