#include "magnls/exponents.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace magnls;

namespace {
Exponent ex(long long p) { return Exponent::value(p); }
Exponent ex(long long n, long long d) { return Exponent::value(Rational(n, d)); }
const Exponent inf = Exponent::infinity();
ExpPair pair43() { return {ex(4), ex(3)}; }
}  // namespace

TEST_CASE("star product") {
    CHECK(star(ex(2), ex(2)) == ex(1));
    CHECK(star(ex(3), ex(6)) == ex(2));
    CHECK(star(inf, ex(4)) == ex(4));
    CHECK_THROWS_AS(star(std::initializer_list<Exponent>{}), std::invalid_argument);

    // no clamping: 1/2 + 2/3 = 7/6 > 1 is representable
    Exponent over = star(ex(2), ex(3, 2));
    CHECK(over.recip == Rational(7, 6));
    CHECK_FALSE(over.lebesgue_valid());

    // associative and commutative on a rational sweep
    const auto recips = support::reciprocals_up_to(6);
    for (const auto& a : recips)
        for (const auto& b : recips) {
            Exponent ea{Rational(a.n, a.d)}, eb{Rational(b.n, b.d)};
            CHECK(star(ea, eb) == star(eb, ea));
            CHECK(star(star(ea, eb), ex(2)) == star(ea, star(eb, ex(2))));
        }
}

TEST_CASE("holder dual") {
    CHECK(holder_dual(ex(2)) == ex(2));
    CHECK(holder_dual(ex(6, 5)) == ex(6));
    CHECK(holder_dual(inf) == ex(1));
    CHECK_THROWS_AS(holder_dual(Exponent{Rational(7, 6)}), std::invalid_argument);

    for (const auto& a : support::reciprocals_up_to(12)) {
        Exponent e{Rational(a.n, a.d)};
        CHECK(holder_dual(holder_dual(e)) == e);
    }
}

TEST_CASE("admissibility examples") {
    CHECK(classify_admissible({ex(4), ex(3)}) == Admissibility::nonendpoint);
    CHECK(classify_admissible({ex(2), ex(6)}) == Admissibility::endpoint);
    CHECK(classify_admissible({ex(8), ex(4)}) == Admissibility::not_admissible);

    CHECK(is_dual_admissible({ex(1), ex(2)}));
    CHECK(is_dual_admissible({ex(2), ex(6, 5)}));
    CHECK_FALSE(is_dual_admissible({ex(2), ex(2)}));

    CHECK(is_qr_admissible({ex(2), ex(2)}, pair43()));
    CHECK_FALSE(is_qr_admissible({ex(1), ex(2)}, pair43()));  // 2/s + 3/p = 7/2, not strict
    CHECK(is_qr_admissible({inf, ex(2)}, {inf, ex(2)}));
    CHECK_THROWS_AS(is_qr_admissible({ex(2), ex(2)}, {ex(8), ex(4)}), std::invalid_argument);

    CHECK(is_grad_admissible({ex(4), ex(8, 5)}, pair43()));
    CHECK_FALSE(is_grad_admissible({ex(2), ex(2)}, pair43()));  // 5/2, not strict
    CHECK_FALSE(is_grad_admissible({ex(1), ex(2)}, pair43()));
}

TEST_CASE("admissibility agrees with the brute-force rational checker") {
    const auto recips = support::reciprocals_up_to(24);
    std::vector<support::Frac> admissible_r;  // 1/r of admissible pairs, for the source predicates
    std::size_t mismatches = 0;

    for (const auto& a : recips) {
        for (const auto& b : recips) {
            Exponent eq{Rational(a.n, a.d)}, er{Rational(b.n, b.d)};
            const ExpPair pr{eq, er};
            const bool adm = support::ref_admissible(a, b);
            if (is_admissible(pr) != adm) ++mismatches;
            if (adm) {
                admissible_r.push_back(b);
                if ((classify_admissible(pr) == Admissibility::endpoint) != support::ref_endpoint(a, b))
                    ++mismatches;
            }
            if (is_dual_admissible(pr) != support::ref_dual_admissible(a, b)) ++mismatches;
        }
    }
    CHECK(admissible_r.size() > 5);

    // source-pair predicates against every admissible (q,r) found above,
    // plus the Remark ordering grad-admissible => admissible
    for (const auto& ir : admissible_r) {
        const Rational rr(ir.n, ir.d);
        const ExpPair qr{Exponent{Rational(3, 4) - Rational(3, 2) * rr}, Exponent{rr}};
        REQUIRE(is_admissible(qr));
        for (const auto& a : recips) {
            for (const auto& b : recips) {
                const ExpPair sp{Exponent{Rational(a.n, a.d)}, Exponent{Rational(b.n, b.d)}};
                const bool got_qr = is_qr_admissible(sp, qr);
                const bool got_grad = is_grad_admissible(sp, qr);
                if (got_qr != support::ref_qr_admissible(a, b, ir)) ++mismatches;
                if (got_grad != support::ref_grad_admissible(a, b, ir)) ++mismatches;
                if (got_grad && !got_qr) ++mismatches;
            }
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("theta gain") {
    CHECK(theta_gain({ex(2), ex(2)}, ThetaKind::inhomogeneous) == Rational(1, 2));
    CHECK(theta_gain({ex(4), ex(8, 5)}, ThetaKind::gradient) == Rational(1, 16));
    CHECK(theta_gain({inf, ex(2)}, ThetaKind::inhomogeneous) == Rational(1));
    CHECK_THROWS_AS(theta_gain({ex(1), ex(2)}, ThetaKind::inhomogeneous), std::invalid_argument);
    CHECK_THROWS_AS(theta_gain({ex(2), ex(2)}, ThetaKind::gradient), std::invalid_argument);

    // positive whenever the matching predicate passes
    for (const auto& a : support::reciprocals_up_to(12)) {
        for (const auto& b : support::reciprocals_up_to(12)) {
            const ExpPair sp{Exponent{Rational(a.n, a.d)}, Exponent{Rational(b.n, b.d)}};
            if (is_qr_admissible(sp, pair43()))
                CHECK(theta_gain(sp, ThetaKind::inhomogeneous) > 0);
            if (is_grad_admissible(sp, pair43()))
                CHECK(theta_gain(sp, ThetaKind::gradient) > 0);
        }
    }
}

TEST_CASE("potential classification") {
    auto comp = [](Exponent a, Exponent b, bool grad, bool dt) {
        return PotentialComponentClass{a, b, grad, dt};
    };
    {
        auto res = classify_potential({{comp(inf, ex(4), false, true)}});
        CHECK(res.cls == PotentialClass::A1);
    }
    {
        auto res = classify_potential({{comp(inf, inf, true, true)}});
        CHECK(res.cls == PotentialClass::A2);
    }
    {
        auto res = classify_potential({{comp(ex(6), ex(4), false, false)}});
        CHECK(res.cls == PotentialClass::none);
        CHECK(res.violated.find("2/a_j + 3/b_j < 1") != std::string::npos);
    }
    {
        // no time derivative data: tilde classes only
        auto res = classify_potential({{comp(inf, ex(4), false, false)}});
        CHECK(res.cls == PotentialClass::A1_tilde);
    }
    {
        // two components, one failing the A1 window but both fitting A2
        auto res = classify_potential({{comp(inf, ex(4), true, true), comp(inf, ex(8), true, true)}});
        CHECK(res.cls == PotentialClass::A2);
    }
    {
        auto res = classify_potential({{comp(inf, ex(8), false, true)}});
        // b = 8 outside (3,6) and no gradient for A2
        CHECK(res.cls == PotentialClass::none);
    }
}

TEST_CASE("contraction-space pairs for the nonlinearity") {
    CHECK(pair_for_power(Rational(5)) == ExpPair{ex(6), ex(18, 7)});
    CHECK(pair_for_power(Rational(3)) == ExpPair{ex(8), ex(12, 5)});
    CHECK(pair_for_power(Rational(2)) == ExpPair{ex(12), ex(9, 4)});
    CHECK_THROWS_AS(pair_for_power(Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(pair_for_power(Rational(6)), std::invalid_argument);

    CHECK(pair_for_hartree(Rational(1)) == ExpPair{inf, ex(2)});
    CHECK(pair_for_hartree(Rational(2)) == ExpPair{inf, ex(2)});
    CHECK(pair_for_hartree(Rational(5, 2)) == ExpPair{ex(12), ex(9, 4)});
    CHECK_THROWS_AS(pair_for_hartree(Rational(3)), std::invalid_argument);

    // sweeps: always admissible with r in [2,3)
    for (int k = 1; k <= 40; ++k) {
        const Rational gamma = Rational(1) + Rational(k, 10);
        const ExpPair pg = pair_for_power(gamma);
        CHECK(is_admissible(pg));
        CHECK(pg.r.recip > Rational(1, 3));
        CHECK(pg.r.recip <= Rational(1, 2));
    }
    for (int k = 1; k <= 29; ++k) {
        const Rational alpha = Rational(k, 10);
        const ExpPair pa = pair_for_hartree(alpha);
        CHECK(is_admissible(pa));
        CHECK(pa.r.recip > Rational(1, 3));
        CHECK(pa.r.recip <= Rational(1, 2));
    }
}

TEST_CASE("grad witness search") {
    CHECK_THROWS_AS(find_grad_witness(ex(5), ex(4)), std::invalid_argument);  // 2/5 + 3/4 > 1

    const ExpPair w1 = find_grad_witness(inf, ex(4));
    CHECK(is_grad_admissible(w1, pair43()));
    const ExpPair w2 = find_grad_witness(inf, inf);
    CHECK(is_grad_admissible(w2, pair43()));

    // witness exists and passes across the admissible class window
    for (const auto& a : support::reciprocals_up_to(8)) {
        for (const auto& b : support::reciprocals_up_to(8)) {
            const Exponent ea{Rational(a.n, a.d)}, eb{Rational(b.n, b.d)};
            if (!(2 * ea.recip + 3 * eb.recip < Rational(1)) || !(eb.recip < Rational(1, 3))) continue;
            const ExpPair w = find_grad_witness(ea, eb);
            CHECK(is_grad_admissible(w, pair43()));
        }
    }
}

TEST_CASE("exponent parsing") {
    CHECK(parse_exponent("4") == ex(4));
    CHECK(parse_exponent("18/7") == ex(18, 7));
    CHECK(parse_exponent("inf") == inf);
    CHECK_THROWS_AS(parse_exponent("0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_exponent("x"), std::invalid_argument);
    CHECK(format_exponent(ex(18, 7)) == "18/7");
    CHECK(format_exponent(inf) == "inf");
}
