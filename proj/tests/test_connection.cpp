#include "doctest.h"

#include <random>

#include "supersplit/connection.hpp"
#include "test_helpers.hpp"

using namespace supersplit;
using namespace testutil;

namespace {

SignaturePtr c12() { return make_signature({"x"}, {"t1", "t2"}); }

// The x -> x + t1 t2 automorphism as a standalone transition on one chart.
TransitionMap twist_map(const SignaturePtr& sig) {
    TransitionMap t;
    t.source = 0;
    t.target = 0;
    t.source_sig = sig;
    t.target_sig = sig;
    t.images.emplace("x", co(sig, "x") + co(sig, "t1") * co(sig, "t2"));
    t.images.emplace("t1", co(sig, "t1"));
    t.images.emplace("t2", co(sig, "t2"));
    attach_inverse(t);
    return t;
}

ChristoffelData twisted_connection(const SignaturePtr& sig) {
    return transport_connection(ChristoffelData::flat(sig), twist_map(sig));
}

VectorField twisted_fixed_point(const SignaturePtr& sig) {
    VectorField h = canonical_field(sig, CanonicalKind::Euler);
    h.even_component(0) = co(sig, "t1") * co(sig, "t2") * Rational(-2);
    return h;
}

// All graded parts of v sit in strata >= m.
bool vanishes_mod(const VectorField& v, int m) {
    if (v.is_zero()) return true;
    return filtration_degree(v) >= m;
}

SuperElement random_homogeneous(std::mt19937& rng, const SignaturePtr& sig, Parity p) {
    std::uniform_int_distribution<int> expd(0, 2);
    std::uniform_int_distribution<long long> coeffd(-3, 3);
    std::uniform_int_distribution<OddMask> maskd(0, (1u << sig->q()) - 1);
    SuperElement r(sig);
    for (int k = 0; k < 3; ++k) {
        OddMask m = maskd(rng);
        if (((popcount(m) & 1) == 1) != (p == Parity::Odd)) continue;
        r.add_term(m, LaurentPoly::monomial(sig->even_ctx, Rational(coeffd(rng)), {expd(rng)}));
    }
    return r;
}

VectorField random_homogeneous_field(std::mt19937& rng, const SignaturePtr& sig, Parity p) {
    VectorField v(sig);
    v.even_component(0) = random_homogeneous(rng, sig, p);
    for (size_t j = 0; j < sig->q(); ++j) {
        v.odd_component(j) =
            random_homogeneous(rng, sig, p == Parity::Even ? Parity::Odd : Parity::Even);
    }
    return v;
}

// Random even, graded-symmetric Christoffel data.
ChristoffelData random_connection(std::mt19937& rng, const SignaturePtr& sig) {
    ChristoffelData n(sig);
    int p = static_cast<int>(sig->p());
    int dim = p + static_cast<int>(sig->q());
    for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
            for (int c = 0; c < dim; ++c) {
                int par = (CoordIndex::parity(*sig, a) + CoordIndex::parity(*sig, b) +
                           CoordIndex::parity(*sig, c)) %
                          2;
                SuperElement val =
                    random_homogeneous(rng, sig, par ? Parity::Odd : Parity::Even);
                bool both_odd = CoordIndex::parity(*sig, a) && CoordIndex::parity(*sig, b);
                if (a == b && both_odd) continue; // antisymmetric diagonal must vanish
                n.set(a, b, c, val);
                if (a != b) n.set(b, a, c, both_odd ? -val : val);
            }
        }
    }
    return n;
}

} // namespace

TEST_CASE("flat connection basics") {
    auto sig = c12();
    auto flat = ChristoffelData::flat(sig);
    auto eps = canonical_field(sig, CanonicalKind::Euler);
    CHECK(covariant_derivative(flat, eps, eps) == eps);

    VectorField ddx = CoordIndex::frame_field(sig, 0);
    VectorField xddx = co(sig, "x") * ddx;
    CHECK(covariant_derivative(flat, ddx, xddx) == ddx);
}

TEST_CASE("twisted connection via transport") {
    auto sig = c12();
    auto n = twisted_connection(sig);
    std::string why;
    CHECK(n.is_even(&why));
    CHECK(n.is_graded_symmetric(&why));
    // Only odd-odd entries survive: gamma[t1,t2 -> x] = -1.
    CHECK(n.get(1, 2, 0) == SuperElement::constant(sig, -1));
    CHECK(n.get(2, 1, 0) == SuperElement::constant(sig, 1));
    CHECK(n.get(0, 0, 0).is_zero());

    auto h = twisted_fixed_point(sig);
    CHECK(covariant_derivative(n, h, h) == h);
}

TEST_CASE("torsion") {
    auto sig = c12();
    std::mt19937 rng(5151);

    SUBCASE("flat coordinate frame is torsion free") {
        auto flat = ChristoffelData::flat(sig);
        CHECK(torsion(flat, CoordIndex::frame_field(sig, 0), CoordIndex::frame_field(sig, 1))
                  .is_zero());
    }
    SUBCASE("graded symmetry forces zero frame torsion") {
        auto n = random_connection(rng, sig);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                CHECK(torsion(n, CoordIndex::frame_field(sig, a), CoordIndex::frame_field(sig, b))
                          .is_zero());
            }
        }
    }
    SUBCASE("asymmetric odd-odd slot shows up in the torsion") {
        ChristoffelData n(sig);
        n.set(1, 2, 0, SuperElement::constant(sig, 1)); // missing the (2,1) partner
        auto tor = torsion(n, CoordIndex::frame_field(sig, 1), CoordIndex::frame_field(sig, 2));
        CHECK_FALSE(tor.is_zero());
    }
    SUBCASE("torsion is tensorial in the first slot") {
        auto n = random_connection(rng, sig);
        for (int i = 0; i < 10; ++i) {
            for (Parity pf : {Parity::Even, Parity::Odd}) {
                for (Parity pu : {Parity::Even, Parity::Odd}) {
                    auto f = random_homogeneous(rng, sig, pf);
                    auto u = random_homogeneous_field(rng, sig, pu);
                    auto v = random_homogeneous_field(rng, sig, Parity::Even);
                    CHECK(torsion(n, f * u, v) == f * torsion(n, u, v));
                }
            }
        }
    }
}

TEST_CASE("Leibniz and linearity axioms on random connections") {
    auto sig = c12();
    std::mt19937 rng(77);
    for (int i = 0; i < 15; ++i) {
        auto n = random_connection(rng, sig);
        for (Parity pu : {Parity::Even, Parity::Odd}) {
            for (Parity pg : {Parity::Even, Parity::Odd}) {
                auto u = random_homogeneous_field(rng, sig, pu);
                auto v = random_homogeneous_field(rng, sig, Parity::Even);
                auto f = random_homogeneous(rng, sig, Parity::Even);
                auto g = random_homogeneous(rng, sig, pg);
                // nabla(fu (x) gv) = f(u(g) v + (-1)^{|u||g|} g nabla_u v)
                auto lhs = covariant_derivative(n, f * u, g * v);
                int sign = (pu == Parity::Odd && pg == Parity::Odd) ? -1 : 1;
                auto rhs = f * (u.apply(g) * v + (g * covariant_derivative(n, u, v)) * Rational(sign));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("evenness and filtration axioms") {
    auto sig = c12();
    std::mt19937 rng(88);
    auto n = random_connection(rng, sig);

    SUBCASE("parity additivity") {
        for (int i = 0; i < 20; ++i) {
            for (Parity pu : {Parity::Even, Parity::Odd}) {
                for (Parity pv : {Parity::Even, Parity::Odd}) {
                    auto u = random_homogeneous_field(rng, sig, pu);
                    auto v = random_homogeneous_field(rng, sig, pv);
                    auto w = covariant_derivative(n, u, v);
                    Parity expected = (pu == pv) ? Parity::Even : Parity::Odd;
                    Parity got = w.parity();
                    CHECK((got == expected || got == Parity::Zero));
                }
            }
        }
    }
    SUBCASE("strata add for nonnegative degrees") {
        // Generators of T^(m): t_I d/dx (|I| = m) and t_I d/dt (|I| = m+1).
        struct Gen {
            VectorField v;
            int degree;
        };
        std::vector<Gen> gens;
        for (OddMask m = 0; m < 4; ++m) {
            VectorField vx(sig);
            vx.even_component(0) =
                SuperElement::term(sig, m, LaurentPoly::monomial(sig->even_ctx, 1, {1}));
            gens.push_back({vx, popcount(m)});
            if (popcount(m) >= 1) {
                VectorField vt(sig);
                vt.odd_component(0) =
                    SuperElement::term(sig, m, LaurentPoly::monomial(sig->even_ctx, 1, {1}));
                gens.push_back({vt, popcount(m) - 1});
            }
        }
        for (const auto& gu : gens) {
            for (const auto& gv : gens) {
                if (gu.degree < 0 || gv.degree < 0) continue;
                auto w = covariant_derivative(n, gu.v, gv.v);
                CHECK(vanishes_mod(w, gu.degree + gv.degree));
            }
        }
    }
}

TEST_CASE("shear and scaling properties of lifts") {
    auto sig = c12();
    auto flat = ChristoffelData::flat(sig);
    auto twisted = twisted_connection(sig);
    auto t1t2 = co(sig, "t1") * co(sig, "t2");

    struct Case {
        ChristoffelData n;
        VectorField h;
    };
    std::vector<Case> cases = {{flat, canonical_field(sig, CanonicalKind::Euler)},
                               {twisted, twisted_fixed_point(sig)},
                               {twisted, canonical_field(sig, CanonicalKind::Euler)}};

    // Algebraic sections of fixed degree m: t_I d/dt with |I| = m+1.
    auto algebraic = [&](int m) {
        std::vector<VectorField> out;
        for (OddMask mask = 0; mask < 4; ++mask) {
            if (popcount(mask) != m + 1) continue;
            for (size_t j = 0; j < 2; ++j) {
                VectorField v(sig);
                v.odd_component(j) =
                    SuperElement::term(sig, mask, LaurentPoly::monomial(sig->even_ctx, 1, {2}));
                out.push_back(v);
            }
        }
        return out;
    };

    for (const auto& c : cases) {
        for (int m = 0; m <= 1; ++m) {
            for (const auto& v : algebraic(m)) {
                // Shear: nabla_v H == v mod T^(m+1)
                CHECK(vanishes_mod(covariant_derivative(c.n, v, c.h) - v, m + 1));
                // Scaling: nabla_H v == (m+1) v mod T^(m+1)
                CHECK(vanishes_mod(covariant_derivative(c.n, c.h, v) - v * Rational(m + 1),
                                   m + 1));
                // Torsion on lifts: tor(H, v) == 0 mod T^(m+1)
                CHECK(vanishes_mod(torsion(c.n, c.h, v), m + 1));
            }
        }
        // Non-algebraic section: nabla_H v == m v modulo algebraic sections of
        // T^(m) (plus higher strata).
        VectorField w(sig);
        w.even_component(0) = t1t2 * Rational(3);
        auto drift = covariant_derivative(c.n, c.h, w) - w * Rational(2);
        if (!drift.is_zero()) {
            auto fd = filtration_data(drift);
            for (const auto& [deg, part] : fd.graded_parts) {
                if (deg < 2) CHECK(false);
                if (deg == 2) CHECK(fd.algebraic_flags.at(2));
            }
        }
    }
}

TEST_CASE("check_global") {
    auto sig = c12();

    SUBCASE("flat on a single chart passes") {
        Atlas a;
        a.add_chart(sig);
        std::map<int, ChristoffelData> conn;
        conn.emplace(0, ChristoffelData::flat(sig));
        CHECK(check_global(conn, a).ok());
    }
    SUBCASE("identity gluing with flat charts passes") {
        auto sig1 = make_signature({"y"}, {"eta1", "eta2"});
        Atlas a;
        a.add_chart(sig);
        a.add_chart(sig1);
        TransitionMap t;
        t.source = 0;
        t.target = 1;
        t.images.emplace("y", co(sig, "x"));
        t.images.emplace("eta1", co(sig, "t1"));
        t.images.emplace("eta2", co(sig, "t2"));
        a.set_transition(std::move(t));
        REQUIRE(validate_atlas(a).ok());
        std::map<int, ChristoffelData> conn;
        conn.emplace(0, ChristoffelData::flat(sig));
        conn.emplace(1, ChristoffelData::flat(sig1));
        CHECK(check_global(conn, a).ok());
    }
    SUBCASE("P1 admits no global affine connection") {
        Atlas a = fix_s2();
        REQUIRE(validate_atlas(a).ok());
        std::map<int, ChristoffelData> conn;
        conn.emplace(0, ChristoffelData::flat(a.chart(0)));
        conn.emplace(1, ChristoffelData::flat(a.chart(1)));
        CHECK_FALSE(check_global(conn, a).ok());
    }
}

TEST_CASE("connection differences are tensorial") {
    auto sig = c12();
    auto flat = ChristoffelData::flat(sig);
    auto twisted = twisted_connection(sig);

    CHECK(connection_difference(flat, flat).is_zero());

    auto d = connection_difference(twisted, flat);
    CHECK_FALSE(d.is_zero());
    std::string why;
    CHECK(d.is_even(&why));
    CHECK(d.is_graded_symmetric(&why));

    // Difference evaluated on (f u, v) equals f * (difference on (u, v)).
    std::mt19937 rng(314);
    auto f = random_homogeneous(rng, sig, Parity::Even);
    auto u = random_homogeneous_field(rng, sig, Parity::Even);
    auto v = random_homogeneous_field(rng, sig, Parity::Odd);
    CHECK(tensor_evaluate(d, f * u, v) == f * tensor_evaluate(d, u, v));

    // The two evaluations of the difference agree with the difference of
    // covariant derivatives.
    CHECK(tensor_evaluate(d, u, v) ==
          covariant_derivative(twisted, u, v) - covariant_derivative(flat, u, v));
}

TEST_CASE("flat transport through the automorphism reproduces the direct twist") {
    // Transport law validation: transporting the twisted connection back
    // through the inverse automorphism must give the flat one.
    auto sig = c12();
    auto t = twist_map(sig);
    auto n = twisted_connection(sig);
    TransitionMap back = t.reversed();
    auto round = transport_connection(n, back);
    CHECK(round == ChristoffelData::flat(sig));
}
