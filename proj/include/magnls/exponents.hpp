#pragma once

#include "magnls/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnls {

/// A Lebesgue exponent p stored as its exact reciprocal 1/p, so that
/// p = infinity is the first-class value recip == 0 and every admissibility
/// window below is decided by exact rational comparisons.
struct Exponent {
    Rational recip{0};

    static Exponent from_recip(const Rational& r) {
        if (r < 0) throw std::invalid_argument("exponent reciprocal must be nonnegative");
        return Exponent{r};
    }
    /// From the exponent value itself; p must be >= 1 and finite.
    static Exponent value(const Rational& p) {
        if (p < 1) throw std::invalid_argument("exponent value must be >= 1, got " + format_rational(p));
        return Exponent{Rational(1) / p};
    }
    static Exponent value(long long p) { return value(Rational(p)); }
    static Exponent infinity() { return Exponent{Rational(0)}; }

    bool is_infinite() const { return recip == 0; }
    /// p in [1, infinity], i.e. 1/p in [0, 1].
    bool lebesgue_valid() const { return recip >= 0 && recip <= 1; }

    double as_double() const {
        if (is_infinite()) return std::numeric_limits<double>::infinity();
        return 1.0 / to_double(recip);
    }

    friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Parses "4", "18/7", "inf". The literal is the exponent value, not its reciprocal.
inline Exponent parse_exponent(std::string_view text) {
    if (text == "inf" || text == "Inf" || text == "INF") return Exponent::infinity();
    return Exponent::value(parse_rational(text));
}

inline std::string format_exponent(const Exponent& e) {
    if (e.is_infinite()) return "inf";
    return format_rational(Rational(1) / e.recip);
}

/// (time index, space index) pair; covers the symbols (q,r), (s,p), (q~,p~).
struct ExpPair {
    Exponent q;
    Exponent r;
    friend bool operator==(const ExpPair&, const ExpPair&) = default;
};

inline std::string format_pair(const ExpPair& pr) {
    return "(" + format_exponent(pr.q) + "," + format_exponent(pr.r) + ")";
}

/// The * product: 1/p = 1/p1 + ... + 1/pn. No range clamping; the result can
/// have reciprocal > 1 and callers validate where a Lebesgue index is required.
inline Exponent star(std::span<const Exponent> ps) {
    if (ps.empty()) throw std::invalid_argument("star() requires at least one exponent");
    Rational sum(0);
    for (const auto& p : ps) sum += p.recip;
    return Exponent{sum};
}

inline Exponent star(std::initializer_list<Exponent> ps) {
    return star(std::span<const Exponent>(ps.begin(), ps.size()));
}

inline Exponent star(const Exponent& a, const Exponent& b) { return star({a, b}); }

inline ExpPair star(const ExpPair& a, const ExpPair& b) {
    return ExpPair{star(a.q, b.q), star(a.r, b.r)};
}

/// Hoelder dual p': 1/p + 1/p' = 1. Defined for p in [1, infinity].
inline Exponent holder_dual(const Exponent& p) {
    if (!p.lebesgue_valid())
        throw std::invalid_argument("holder_dual requires 1/p in [0,1], got 1/p = " + format_rational(p.recip));
    return Exponent{Rational(1) - p.recip};
}

enum class Admissibility { endpoint, nonendpoint, not_admissible };

/// Schroedinger-admissible in d = 3: 2/q + 3/r = 3/2 with r in [2,6];
/// (2,6) is the endpoint.
inline Admissibility classify_admissible(const ExpPair& pr) {
    const Rational iq = pr.q.recip, ir = pr.r.recip;
    if (!pr.q.lebesgue_valid() || !pr.r.lebesgue_valid()) return Admissibility::not_admissible;
    if (2 * iq + 3 * ir != Rational(3, 2)) return Admissibility::not_admissible;
    if (ir < Rational(1, 6) || ir > Rational(1, 2)) return Admissibility::not_admissible;
    if (ir == Rational(1, 6)) return Admissibility::endpoint;
    return Admissibility::nonendpoint;
}

inline bool is_admissible(const ExpPair& pr) {
    return classify_admissible(pr) != Admissibility::not_admissible;
}

/// Dual-admissible: 2/s + 3/p = 7/2 with p in [6/5, 2].
inline bool is_dual_admissible(const ExpPair& sp) {
    const Rational is = sp.q.recip, ip = sp.r.recip;
    if (!sp.q.lebesgue_valid() || !sp.r.lebesgue_valid()) return false;
    return 2 * is + 3 * ip == Rational(7, 2) && ip >= Rational(1, 2) && ip <= Rational(5, 6);
}

/// (q,r)-admissible source pair: the strict window 2/s + 3/p < 7/2 together
/// with the r-dependent constraint on 1/p (two branches split at r = 3).
inline bool is_qr_admissible(const ExpPair& sp, const ExpPair& qr) {
    if (!is_admissible(qr))
        throw std::invalid_argument("is_qr_admissible: " + format_pair(qr) + " is not admissible");
    const Rational is = sp.q.recip, ip = sp.r.recip, ir = qr.r.recip;
    if (!sp.q.lebesgue_valid() || !sp.r.lebesgue_valid()) return false;
    if (2 * is + 3 * ip >= Rational(7, 2)) return false;
    if (ir > Rational(1, 3)) {  // 2 <= r < 3
        return ip >= Rational(1, 2) && ip <= 1;
    }
    // 3 <= r <= 6
    return ip >= Rational(1, 2) && ip < ir + Rational(2, 3);
}

/// (q,r)-grad-admissible source pair: 2/s + 3/p < 5/2 and 1/2 <= 1/p < 1/r + 1/3.
/// Strictly stronger than is_qr_admissible for the same (q,r).
inline bool is_grad_admissible(const ExpPair& sp, const ExpPair& qr) {
    if (!is_admissible(qr))
        throw std::invalid_argument("is_grad_admissible: " + format_pair(qr) + " is not admissible");
    const Rational is = sp.q.recip, ip = sp.r.recip, ir = qr.r.recip;
    if (!sp.q.lebesgue_valid() || !sp.r.lebesgue_valid()) return false;
    if (2 * is + 3 * ip >= Rational(5, 2)) return false;
    return ip >= Rational(1, 2) && ip < ir + Rational(1, 3);
}

enum class ThetaKind { inhomogeneous, gradient };

/// Contraction gain exponent theta of the retarded estimates over a window of
/// length T (the T^theta factor): theta = 7/4 - 1/s - 3/(2p) for the
/// inhomogeneous estimate and 5/4 - 1/s - 3/(2p) for the gradient estimate.
/// Gated on the matching admissibility predicate against the contraction pair
/// (4,3), which guarantees theta > 0.
inline Rational theta_gain(const ExpPair& sp, ThetaKind kind) {
    static const ExpPair contraction_pair{Exponent::value(4), Exponent::value(3)};
    const bool ok = (kind == ThetaKind::inhomogeneous) ? is_qr_admissible(sp, contraction_pair)
                                                       : is_grad_admissible(sp, contraction_pair);
    if (!ok)
        throw std::invalid_argument("theta_gain: " + format_pair(sp) +
                                    " fails the matching admissibility predicate");
    const Rational base = (kind == ThetaKind::inhomogeneous) ? Rational(7, 4) : Rational(5, 4);
    return base - sp.q.recip - Rational(3, 2) * sp.r.recip;
}

/// Per-component integrability data (a_j, b_j) of a decomposition A = A1 + A2,
/// plus availability of the gradient and of the time derivative.
struct PotentialComponentClass {
    Exponent a;
    Exponent b;
    bool has_gradient = false;
    bool has_time_derivative = false;
};

struct PotentialClassSpec {
    std::vector<PotentialComponentClass> components;  // at most two
};

enum class PotentialClass { A1, A2, A1_tilde, A2_tilde, none };

inline std::string to_string(PotentialClass c) {
    switch (c) {
        case PotentialClass::A1: return "A1";
        case PotentialClass::A2: return "A2";
        case PotentialClass::A1_tilde: return "A1~";
        case PotentialClass::A2_tilde: return "A2~";
        default: return "none";
    }
}

struct ClassificationResult {
    PotentialClass cls = PotentialClass::none;
    std::string violated;  // first violated constraint, named; empty on success
};

/// Membership windows: A1~ requires a_j in (4,inf], b_j in (3,6) and
/// 2/a_j + 3/b_j < 1 per component; A2~ requires a_j in (2,inf], b_j in
/// (3,inf], the same sum window, and gradient data. The regular classes A1/A2
/// additionally require time-derivative data on every component.
inline ClassificationResult classify_potential(const PotentialClassSpec& spec) {
    if (spec.components.empty()) return {PotentialClass::none, "no components"};
    if (spec.components.size() > 2) return {PotentialClass::none, "more than two components"};

    auto sum_window = [](const PotentialComponentClass& c) {
        return 2 * c.a.recip + 3 * c.b.recip < Rational(1);
    };

    std::string why_not_a1;
    bool a1 = true;
    for (const auto& c : spec.components) {
        if (!(c.a.recip < Rational(1, 4))) { a1 = false; why_not_a1 = "a_j in (4,inf]"; break; }
        if (!(c.b.recip > Rational(1, 6) && c.b.recip < Rational(1, 3))) { a1 = false; why_not_a1 = "b_j in (3,6)"; break; }
        if (!sum_window(c)) { a1 = false; why_not_a1 = "2/a_j + 3/b_j < 1"; break; }
    }
    std::string why_not_a2;
    bool a2 = true;
    for (const auto& c : spec.components) {
        if (!(c.a.recip < Rational(1, 2))) { a2 = false; why_not_a2 = "a_j in (2,inf]"; break; }
        if (!(c.b.recip < Rational(1, 3))) { a2 = false; why_not_a2 = "b_j in (3,inf]"; break; }
        if (!sum_window(c)) { a2 = false; why_not_a2 = "2/a_j + 3/b_j < 1"; break; }
        if (!c.has_gradient) { a2 = false; why_not_a2 = "gradient data required"; break; }
    }
    const bool regular = std::all_of(spec.components.begin(), spec.components.end(),
                                     [](const auto& c) { return c.has_time_derivative; });
    if (a1) return {regular ? PotentialClass::A1 : PotentialClass::A1_tilde, ""};
    if (a2) return {regular ? PotentialClass::A2 : PotentialClass::A2_tilde, ""};
    return {PotentialClass::none, why_not_a1 + "; " + why_not_a2};
}

/// Contraction-space pair for the pure-power term:
/// (q,r) = (4(g+1)/(g-1), 3(g+1)/(g+2)), admissible with r in [2,3).
inline ExpPair pair_for_power(const Rational& gamma) {
    if (!(gamma > 1 && gamma <= 5))
        throw std::invalid_argument("pair_for_power: gamma in (1,5] required, got " + format_rational(gamma));
    const Rational q = 4 * (gamma + 1) / (gamma - 1);
    const Rational r = 3 * (gamma + 1) / (gamma + 2);
    return ExpPair{Exponent::value(q), Exponent::value(r)};
}

/// Contraction-space pair for the Hartree term: (inf,2) for alpha in (0,2],
/// (6/(a-2), 18/(13-2a)) for alpha in (2,3); admissible with r in [2,3).
inline ExpPair pair_for_hartree(const Rational& alpha) {
    if (!(alpha > 0 && alpha < 3))
        throw std::invalid_argument("pair_for_hartree: alpha in (0,3) required, got " + format_rational(alpha));
    if (alpha <= 2) return ExpPair{Exponent::infinity(), Exponent::value(2)};
    const Rational q = Rational(6) / (alpha - 2);
    const Rational r = Rational(18) / (13 - 2 * alpha);
    return ExpPair{Exponent::value(q), Exponent::value(r)};
}

/// Searches the one-parameter family (s,p) = (a,b) * (q,rho) with (q,r)
/// admissible, r in [2,3] and rho in {r, 3r/(3-r)}, for a witness passing
/// is_grad_admissible against (4,3). The search enumerates 1/r over reduced
/// rationals with denominator <= 24 and returns the feasible witness that
/// minimizes 1/s, then 1/p (the statement only asserts existence; the
/// tie-break makes the choice deterministic).
inline ExpPair find_grad_witness(const Exponent& a, const Exponent& b) {
    if (!(2 * a.recip + 3 * b.recip < Rational(1)) || !(b.recip < Rational(1, 3)))
        throw std::invalid_argument("find_grad_witness: requires 2/a + 3/b < 1 and b > 3");

    static const ExpPair contraction_pair{Exponent::value(4), Exponent::value(3)};
    std::optional<ExpPair> best;
    auto consider = [&](const ExpPair& cand) {
        if (!is_grad_admissible(cand, contraction_pair)) return;
        if (!best || cand.q.recip < best->q.recip ||
            (cand.q.recip == best->q.recip && cand.r.recip < best->r.recip))
            best = cand;
    };
    for (long long den = 1; den <= 24; ++den) {
        for (long long num = (den + 2) / 3; 2 * num <= den; ++num) {
            const Rational ir(num, den);   // 1/r in [1/3, 1/2]
            if (ir < Rational(1, 3)) continue;
            const Rational iq = Rational(3, 4) - Rational(3, 2) * ir;
            const Exponent q{iq}, r{ir};
            for (const Rational& irho : {ir, ir - Rational(1, 3)}) {
                const ExpPair cand{star(a, q), star(b, Exponent{irho})};
                consider(cand);
            }
            (void)r;
        }
    }
    if (!best)
        throw std::logic_error("find_grad_witness: no witness found for (a,b) = (" +
                               format_exponent(a) + "," + format_exponent(b) +
                               ") although the precondition holds");
    return *best;
}

}  // namespace magnls
