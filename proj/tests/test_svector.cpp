#include "doctest.h"

#include <random>

#include "supersplit/svector.hpp"
#include "test_helpers.hpp"

using namespace supersplit;
using namespace testutil;

namespace {

VectorField field_of(const SignaturePtr& sig, const std::string& coord, const SuperElement& coeff) {
    VectorField v(sig);
    v.set_component(coord, coeff);
    return v;
}

} // namespace

TEST_CASE("apply is the derivation action") {
    auto sig = make_signature({"x"}, {"t1", "t2"});
    auto eps = canonical_field(sig, CanonicalKind::Euler);
    auto t1t2 = co(sig, "t1") * co(sig, "t2");
    CHECK(eps.apply(t1t2) == t1t2 * Rational(2));

    auto ddx = field_of(sig, "x", SuperElement::constant(sig, 1));
    auto f = co(sig, "x") * co(sig, "x") + t1t2;
    CHECK(ddx.apply(f) == co(sig, "x") * Rational(2));
}

TEST_CASE("de Rham field on a (1|1) cotangent chart") {
    auto sig = make_signature({"x"}, {"t1"});
    auto dX = canonical_field(sig, CanonicalKind::DeRham);
    auto f = co(sig, "x") * co(sig, "x") * co(sig, "x");
    CHECK(dX.apply(f) == co(sig, "t1") * (co(sig, "x") * co(sig, "x")) * Rational(3));
    CHECK(super_bracket(dX, dX).is_zero());
}

TEST_CASE("bracket scaling under the Euler field") {
    auto sig = make_signature({"x"}, {"t1", "t2"});
    auto eps = canonical_field(sig, CanonicalKind::Euler);

    auto ddt1 = field_of(sig, "t1", SuperElement::constant(sig, 1));
    CHECK(super_bracket(eps, ddt1) == -ddt1);

    auto v = field_of(sig, "x", co(sig, "t1") * co(sig, "t2"));
    CHECK(super_bracket(eps, v) == v * Rational(2));

    CHECK(super_bracket(ddt1, ddt1).is_zero());
}

TEST_CASE("bracket identities") {
    std::mt19937 rng(171);
    auto sig = make_signature({"x"}, {"t1", "t2"});
    std::uniform_int_distribution<int> expd(0, 2);
    std::uniform_int_distribution<long long> coeff(-3, 3);
    std::uniform_int_distribution<OddMask> maskd(0, 3);

    auto random_field = [&](Parity p) {
        VectorField v(sig);
        for (int tries = 0; tries < 6; ++tries) {
            OddMask m = maskd(rng);
            ExpVec e = {expd(rng)};
            auto se = SuperElement::term(sig, m, LaurentPoly::monomial(sig->even_ctx,
                                                                       Rational(coeff(rng)), e));
            bool comp_even = maskd(rng) % 2 == 0;
            bool mask_even = (popcount(m) & 1) == 0;
            // Keep the requested field parity.
            if (p == Parity::Even && comp_even != mask_even) continue;
            if (p == Parity::Odd && comp_even == mask_even) continue;
            if (comp_even) {
                VectorField add(sig);
                add.even_component(0) = se;
                v += add;
            } else {
                VectorField add(sig);
                add.odd_component(maskd(rng) % 2) = se;
                v += add;
            }
        }
        return v;
    };

    for (int i = 0; i < 30; ++i) {
        for (Parity pu : {Parity::Even, Parity::Odd}) {
            for (Parity pv : {Parity::Even, Parity::Odd}) {
                auto u = random_field(pu);
                auto v = random_field(pv);
                // [u,v] = -(-1)^{|u||v|}[v,u]
                int s = (pu == Parity::Odd && pv == Parity::Odd) ? 1 : -1;
                CHECK(super_bracket(u, v) == super_bracket(v, u) * Rational(s));
            }
        }
    }
}

TEST_CASE("(1|1) cotangent bracket identity") {
    auto sig = make_signature({"x"}, {"t1"});
    auto gamma = field_of(sig, "t1", co(sig, "x"));  // x d/dt
    auto dX = canonical_field(sig, CanonicalKind::DeRham); // t d/dx
    VectorField want(sig);
    want.even_component(0) = co(sig, "x");
    want.odd_component(0) = co(sig, "t1");
    CHECK(super_bracket(gamma, dX) == want);
}

TEST_CASE("pushforward through FIX-S2 and FIX-NS2") {
    SUBCASE("Euler field is global on the split model") {
        Atlas a = fix_s2();
        REQUIRE(validate_atlas(a).ok());
        auto eps1 = canonical_field(a.chart(1), CanonicalKind::Euler);
        auto pushed = pushforward(eps1, a.transition(0, 1));
        CHECK(pushed == canonical_field(a.chart(0), CanonicalKind::Euler).with_invertible(1u));
    }
    SUBCASE("NS2 picks up the obstruction term") {
        Atlas a = fix_ns2();
        REQUIRE(validate_atlas(a).ok());
        auto sig0 = a.chart(0);
        auto eps1 = canonical_field(a.chart(1), CanonicalKind::Euler);
        auto pushed = pushforward(eps1, a.transition(0, 1));
        VectorField want = canonical_field(sig0, CanonicalKind::Euler);
        want.even_component(0) = xpow(sig0, 0, -1, 2) * co(sig0, "t1") * co(sig0, "t2");
        CHECK(pushed == want.with_invertible(1u));
    }
    SUBCASE("reduced chain rule: d/dy -> -x^2 d/dx") {
        Atlas a = fix_s2();
        REQUIRE(validate_atlas(a).ok());
        ReducedData rd = reduced_data(a);
        auto rsig1 = rd.reduced_atlas.chart(1);
        auto rsig0 = rd.reduced_atlas.chart(0);
        VectorField ddy(rsig1);
        ddy.even_component(0) = SuperElement::constant(rsig1, 1);
        auto pushed = pushforward(ddy, rd.reduced_atlas.transition(0, 1));
        VectorField want(rsig0);
        want.even_component(0) = xpow(rsig0, 0, 2, -1);
        CHECK(pushed == want);
    }
}

TEST_CASE("filtration data") {
    auto sig3 = make_signature({"x"}, {"t1", "t2", "t3"});
    SUBCASE("d/dt1 has degree -1") {
        auto v = field_of(sig3, "t1", SuperElement::constant(sig3, 1));
        auto fd = filtration_data(v);
        CHECK(fd.degree == -1);
    }
    SUBCASE("even part present blocks algebraicity") {
        auto t12 = co(sig3, "t1") * co(sig3, "t2");
        auto t123 = t12 * co(sig3, "t3");
        VectorField v(sig3);
        v.even_component(0) = t12;
        v.odd_component(2) = t123;
        auto fd = filtration_data(v);
        CHECK(fd.degree == 2);
        CHECK_FALSE(fd.algebraic_flags.at(2));
    }
    SUBCASE("pure d/dt part is algebraic") {
        auto v = field_of(sig3, "t1", co(sig3, "t1") * co(sig3, "t2"));
        auto fd = filtration_data(v);
        CHECK(fd.degree == 1);
        CHECK(fd.algebraic_flags.at(1));
    }
    SUBCASE("zero field rejected") {
        CHECK_THROWS_AS(filtration_data(VectorField::zero(sig3)), DomainError);
    }
}

TEST_CASE("Euler eigenvalue properties, exhaustive q <= 3") {
    for (size_t q : {1u, 2u, 3u}) {
        std::vector<std::string> odd;
        for (size_t i = 1; i <= q; ++i) odd.push_back("t" + std::to_string(i));
        auto sig = make_signature({"x"}, odd);
        auto eps = canonical_field(sig, CanonicalKind::Euler);

        // eps(f) = m f for J-homogeneous f of degree m.
        for (OddMask m = 0; m < (1u << q); ++m) {
            auto f = SuperElement::term(sig, m,
                                        LaurentPoly::monomial(sig->even_ctx, 1, {2}));
            CHECK(eps.apply(f) == f * Rational(popcount(m)));
        }

        // ad_eps(v) = m v on generator tuples t_I d/dx and t_I d/dt_j.
        for (OddMask m = 0; m < (1u << q); ++m) {
            auto coeff = SuperElement::term(sig, m, LaurentPoly::constant(sig->even_ctx, 1));
            VectorField vx(sig);
            vx.even_component(0) = coeff;
            CHECK(super_bracket(eps, vx) == vx * Rational(popcount(m)));
            for (size_t j = 0; j < q; ++j) {
                VectorField vt(sig);
                vt.odd_component(j) = coeff;
                CHECK(super_bracket(eps, vt) == vt * Rational(popcount(m) - 1));
            }
        }
    }
}

TEST_CASE("Leibniz rule for apply") {
    std::mt19937 rng(99);
    auto sig = make_signature({"x"}, {"t1", "t2"});
    std::uniform_int_distribution<int> expd(0, 2);
    std::uniform_int_distribution<long long> coeffd(-3, 3);
    std::uniform_int_distribution<OddMask> maskd(0, 3);
    auto random_elem = [&](Parity p) {
        SuperElement r(sig);
        for (int k = 0; k < 3; ++k) {
            OddMask m = maskd(rng);
            if (((popcount(m) & 1) == 1) != (p == Parity::Odd)) continue;
            r.add_term(m, LaurentPoly::monomial(sig->even_ctx, Rational(coeffd(rng)),
                                                {expd(rng)}));
        }
        return r;
    };
    for (int i = 0; i < 60; ++i) {
        for (Parity pv : {Parity::Even, Parity::Odd}) {
            for (Parity pf : {Parity::Even, Parity::Odd}) {
                VectorField v(sig);
                if (pv == Parity::Even) {
                    v.even_component(0) = random_elem(Parity::Even);
                    v.odd_component(0) = random_elem(Parity::Odd);
                } else {
                    v.even_component(0) = random_elem(Parity::Odd);
                    v.odd_component(1) = random_elem(Parity::Even);
                }
                auto f = random_elem(pf);
                auto g = random_elem(Parity::Even) + random_elem(Parity::Odd);
                auto lhs = v.apply(f * g);
                int sign = (pv == Parity::Odd && pf == Parity::Odd) ? -1 : 1;
                auto rhs = v.apply(f) * g + (f * v.apply(g)) * Rational(sign);
                CHECK(lhs == rhs);
            }
        }
    }
}
