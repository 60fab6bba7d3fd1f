#pragma once

// Classical Schottky pairing systems.
//
// A system of rank g is a list of g pairings (D_j, D'_j, A_j) where D_j and
// D'_j are the closed discs cut off by the circles C_j and C'_j away from the
// common region, and A_j maps C_j onto C'_j and the outside of D_j onto D'_j.

#include <vschottky/moebius.hpp>
#include <vschottky/sphere.hpp>
#include <vschottky/words.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace vschottky {

struct Pairing {
    SphereDisc from;  // bounded by C_j
    SphereDisc to;    // bounded by C'_j
    MoebiusMap map;   // A_j
    std::string name;

    /// Pairs the round discs |z-c| < r and |z-c2| < r2 with
    /// z -> c2 + r r2/(z - c), which sends the outside of the first onto the
    /// inside of the second.
    static Pairing between_discs(Complex c, double r, Complex c2, double r2, std::string name = {}) {
        return {SphereDisc::inside(c, r), SphereDisc::inside(c2, r2),
                MoebiusMap(c2, r * r2 - c * c2, 1.0, -c), std::move(name)};
    }
};

class PairingSystem {
public:
    PairingSystem() = default;
    explicit PairingSystem(std::vector<Pairing> pairings) : pairings_(std::move(pairings)) {
        for (std::size_t j = 0; j < pairings_.size(); ++j)
            if (pairings_[j].name.empty()) pairings_[j].name = "A" + std::to_string(j + 1);
    }

    /// Builds a system from bare circles, taking for each circle the side that
    /// misses every other circle. Throws std::invalid_argument when that side
    /// is not unique (intersecting or badly nested circles).
    static PairingSystem from_circles(
        const std::vector<std::tuple<SphereCircle, SphereCircle, MoebiusMap>>& triples) {
        std::vector<SphereCircle> circles;
        for (const auto& [c, cp, m] : triples) {
            circles.push_back(c);
            circles.push_back(cp);
        }
        auto side_of = [&](std::size_t i) {
            std::vector<int> good;
            for (int s : {1, -1}) {
                SphereDisc d(circles[i], s);
                bool ok = true;
                for (std::size_t j = 0; j < circles.size() && ok; ++j) {
                    if (j == i) continue;
                    ok = discs_disjoint(d, SphereDisc(circles[j], 1)) ||
                         discs_disjoint(d, SphereDisc(circles[j], -1));
                }
                if (ok) good.push_back(s);
            }
            if (good.size() != 1)
                throw std::invalid_argument("PairingSystem: cannot infer disc side of circle " +
                                            std::to_string(i));
            return good.front();
        };
        std::vector<Pairing> ps;
        for (std::size_t j = 0; j < triples.size(); ++j) {
            const auto& [c, cp, m] = triples[j];
            ps.push_back({SphereDisc(c, side_of(2 * j)),
                          SphereDisc(cp, side_of(2 * j + 1)), m, {}});
        }
        return PairingSystem(std::move(ps));
    }

    int rank() const { return static_cast<int>(pairings_.size()); }
    const std::vector<Pairing>& pairings() const { return pairings_; }

    std::vector<Generator> generators() const {
        std::vector<Generator> gens;
        for (const auto& p : pairings_) gens.push_back({p.name, p.map, 0});
        return gens;
    }

    /// Disc of a single letter: D'_j for A_j, D_j for A_j^-1.
    const SphereDisc& letter_disc(Letter l) const {
        const auto& p = pairings_.at(static_cast<std::size_t>(l.gen));
        return l.exp > 0 ? p.to : p.from;
    }

    /// All 2g discs in order D_1, D'_1, D_2, ...
    std::vector<SphereDisc> discs() const {
        std::vector<SphereDisc> out;
        for (const auto& p : pairings_) {
            out.push_back(p.from);
            out.push_back(p.to);
        }
        return out;
    }

private:
    std::vector<Pairing> pairings_;
};

struct VerificationReport {
    bool disjoint_circles = true;   // condition (i)
    bool circles_paired = true;     // condition (ii)
    bool region_mapped_off = true;  // condition (iii)
    bool fixed_points_clear = true;
    std::vector<std::string> failures;

    bool ok() const {
        return disjoint_circles && circles_paired && region_mapped_off && fixed_points_clear;
    }
};

inline VerificationReport verify_pairing(const PairingSystem& ps, double tolerance = kTolerance) {
    VerificationReport report;
    auto discs = ps.discs();
    for (std::size_t i = 0; i < discs.size(); ++i)
        for (std::size_t j = i + 1; j < discs.size(); ++j) {
            auto rel = relation(discs[i], discs[j], tolerance);
            if (rel != DiscRelation::disjoint) {
                report.disjoint_circles = false;
                report.failures.push_back("(i) discs " + std::to_string(i) + " and " +
                                          std::to_string(j) + " are " + to_string(rel));
            }
        }
    for (const auto& p : ps.pairings()) {
        if (!same_circle(map_circle(p.map, p.from.circle()), p.to.circle(), tolerance)) {
            report.circles_paired = false;
            report.failures.push_back("(ii) " + p.name + " does not map C onto C'");
        } else if (!same_disc(disc_image(p.map, p.from.complement()), p.to, tolerance)) {
            report.region_mapped_off = false;
            report.failures.push_back("(iii) " + p.name +
                                      " does not map the common region off itself");
        }
        auto cls = classify(p.map);
        if (cls.kind != MapKind::loxodromic) {
            report.fixed_points_clear = false;
            report.failures.push_back(p.name + " is " + to_string(cls.kind) + ", not loxodromic");
            continue;
        }
        for (const auto& fp : fixed_points(p.map))
            for (const auto& d : discs)
                if (std::abs(d.depth(fp)) <= tolerance) {
                    report.fixed_points_clear = false;
                    report.failures.push_back("fixed point of " + p.name +
                                              " lies on a pairing circle");
                }
    }
    return report;
}

/// Image of the disc of the last letter under the prefix; for a verified
/// system it is nested inside the disc of the first letter.
inline SphereDisc ping_pong_disc(const PairingSystem& ps, const Word& w) {
    if (w.empty()) throw std::invalid_argument("ping_pong_disc: empty word");
    if (freely_reduce(w).size() != w.size())
        throw std::invalid_argument("ping_pong_disc: word is not reduced");
    auto gens = ps.generators();
    Word prefix(w.begin(), w.end() - 1);
    return disc_image(evaluate(gens, prefix), ps.letter_disc(w.back()));
}

struct NontrivialityCertificate {
    bool holds = true;
    std::size_t words_checked = 0;
    std::optional<Word> witness;
};

/// Checks every reduced word of length <= depth: its ping-pong disc must be a
/// proper disc inside the disc of its first letter and the word must not
/// evaluate to the identity.
inline NontrivialityCertificate is_nontrivial_to_depth(const PairingSystem& ps, int depth,
                                                       double tolerance = kTolerance) {
    NontrivialityCertificate cert;
    if (depth <= 0 || ps.rank() == 0) return cert;
    auto gens = ps.generators();
    cert.words_checked = enumerate_words(gens, depth, [&](const Word& w, const MoebiusMap& value) {
        // prefix(D_last) = w(outside of D_{last^-1})
        SphereDisc disc = disc_image(value, ps.letter_disc(w.back().inverse()).complement());
        double angle = disc.cap().angle;
        bool proper = angle > 0.0 && angle < kPi - tolerance;
        bool nested = contains(ps.letter_disc(w.front()), disc, 1e-7);
        if (!proper || !nested || is_identity(value)) {
            cert.holds = false;
            cert.witness = w;
            return false;
        }
        return true;
    });
    return cert;
}

}  // namespace vschottky
