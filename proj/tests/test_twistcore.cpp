#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include <twists/twistcore.hpp>

using namespace twists;

namespace {

const char* kCorpus[] = {"x^3+2", "x^3-x+1", "x*(x^3-x)^2 + 3*x", "x^4+x^3+x^2+x+1",
                         "(x^2+1)*((x^3-x)^2+3)"};

} // namespace

TEST_CASE("fixed_divisor on fixed values", "[twistcore]") {
    // [DERIVED] gcd(0,0,6,24) = 6; gcd(2,4,8) = 2; gcd of f(0..7) = 3 for the third
    CHECK(fixed_divisor(parse_poly("x^3-x")) == 6);
    CHECK(fixed_divisor(parse_poly("x^2+x+2")) == 2);
    CHECK(fixed_divisor(parse_poly("x*(x^3-x)^2 + 3*x")) == 3);
    CHECK(fixed_divisor(parse_poly("x^3+2")) == 1);
    CHECK_THROWS_AS(fixed_divisor(parse_poly("7")), precondition_error);
    CHECK_THROWS_AS(fixed_divisor(parse_poly("0")), precondition_error);
}

TEST_CASE("fixed_divisor divides every value and is maximal", "[twistcore]") {
    for (const char* s : kCorpus) {
        const IntPoly f = parse_poly(s);
        CAPTURE(s);
        const Int D = fixed_divisor(f);
        CHECK(D >= 1);
        for (long n = -1000; n <= 1000; ++n) CHECK(f.eval(Int(n)) % D == 0);
        // maximality per prime: some n in [0, deg f] has ord_l(f(n)) = ord_l(D)
        for (const auto& [l, e] : factorize(D).factors) {
            bool tight = false;
            for (int n = 0; n <= f.degree(); ++n)
                if (f.eval(Int(n)) % (D * l) != 0) tight = true;
            CHECK(tight);
            (void)e;
        }
    }
}

TEST_CASE("p_shape on fixed values", "[twistcore]") {
    const PAdicShape s1 = p_shape(parse_poly("x^3+2"), 5);
    CHECK(s1.D == 1);
    CHECK(s1.eps == 0);
    CHECK(s1.k == 0);
    CHECK(s1.t == 1);
    CHECK(s1.u == 1);
    CHECK(s1.delta == 1);

    // [DERIVED] D = 6, sqf(6) = 6 = 3*2
    const PAdicShape s2 = p_shape(parse_poly("x^3-x"), 3);
    CHECK(s2.D == 6);
    CHECK(s2.eps == 1);
    CHECK(s2.k == 0);
    CHECK(s2.u == 1);
    CHECK(s2.delta == 2);

    const PAdicShape s3 = p_shape(parse_poly("x*(x^3-x)^2 + 3*x"), 3);
    CHECK(s3.D == 3);
    CHECK(s3.eps == 1);
    CHECK(s3.k == 0);
    CHECK(s3.u == 1);
    CHECK(s3.delta == 1);
}

TEST_CASE("p_shape invariants across the corpus", "[twistcore]") {
    const Int primes[] = {2, 3, 5, 7, 11};
    for (const char* s : kCorpus) {
        for (const Int& p : primes) {
            CAPTURE(s, p.get_str());
            const PAdicShape sh = p_shape(parse_poly(s), p);
            CHECK(sh.D == sqf(sh.D) * sh.t * sh.t);
            CHECK(detail::raw_valuation(p, sh.D) == 2 * sh.k + sh.eps);
            CHECK(sh.t == detail::pow_ui(p, sh.k) * sh.u);
            CHECK(sh.u % p != 0);
            CHECK(sqf(sh.D) == detail::pow_ui(p, sh.eps) * sh.delta);
            CHECK(sh.delta % p != 0);
            CHECK(is_squarefree(sh.delta));
        }
    }
}

TEST_CASE("s_check witnesses for x^3+2 at p=5", "[twistcore]") {
    const IntPoly f = parse_poly("x^3+2");
    // [DERIVED] full scan oracle of x0 in [0,5): f = 2,3,10,29,66 and
    // 66 = 1 mod 5, 2 = 2, 3 = 3, 29 = 4, 10 has ord > 0
    struct Expect {
        long r, h, x0, z0;
    };
    const Expect table[] = {{1, 1, 4, 1}, {2, 2, 0, 1}, {3, 3, 1, 1}, {4, 4, 3, 1}};
    for (const Expect& e : table) {
        CAPTURE(e.r);
        const auto w = s_check(f, 5, e.r, 0);
        REQUIRE(w.has_value());
        CHECK(w->h == e.h);
        CHECK(w->x0 == e.x0);
        CHECK(w->z0 == e.z0);
        CHECK(w->y0 == e.z0);
        CHECK(verify_switness(f, 5, *w));
    }
}

TEST_CASE("s_check witnesses at positive eps", "[twistcore]") {
    const IntPoly f = parse_poly("x*(x^3-x)^2 + 3*x");
    // witness (h=r, x0=3r, y0=3) for r in {1,2}
    for (long r = 1; r <= 2; ++r) {
        CAPTURE(r);
        const auto w = s_check(f, 3, r, 0);
        REQUIRE(w.has_value());
        CHECK(w->h == r);
        CHECK(w->x0 == 3 * r);
        CHECK(w->y0 == 3);
        CHECK(w->z0 == 1);
        CHECK(verify_switness(f, 3, *w));
    }
}

TEST_CASE("s_check decides no-witness cases", "[twistcore]") {
    // values of x^3-x+1 mod 27 never sit in the nonsquare class at ord 0
    const IntPoly f = parse_poly("x^3-x+1");
    CHECK_FALSE(s_check(f, 3, 2, 0).has_value());
    CHECK_FALSE(s_check(f, 3, 2, 1).has_value());
    CHECK(s_check(f, 3, 1, 0).has_value());

    // f = (x^2+1)*((x^3-x)^2+3) has ord_3 f(n) = 1 identically, so no r works
    const IntPoly g = parse_poly("(x^2+1)*((x^3-x)^2+3)");
    for (long r = 1; r <= 2; ++r) {
        CHECK_FALSE(s_check(g, 3, r, 0).has_value());
        CHECK_FALSE(s_check(g, 3, r, 1).has_value());
    }
}

TEST_CASE("s_check rejects bad input", "[twistcore]") {
    const IntPoly f = parse_poly("x^3+2");
    CHECK_THROWS_AS(s_check(f, 5, 10, 0), precondition_error);
    CHECK_THROWS_AS(s_check(f, 4, 1, 0), precondition_error);
    CHECK_THROWS_AS(s_check(f, 5, 1, 20), budget_error); // 5^41 over any scan budget
}

TEST_CASE("s_check witness satisfies the defining congruence", "[twistcore]") {
    // with eps = 0 and v = 0 the witness gives r*y0^2 = f(x0) mod p, p not | y0
    const IntPoly f = parse_poly("x^3+2");
    const Int primes[] = {5, 7, 11, 13};
    for (const Int& p : primes) {
        for (Int r = 1; r < p; ++r) {
            const auto w = s_check(f, p, r, 0);
            if (!w) continue;
            CHECK(w->y0 % p != 0);
            Int lhs = (r * w->y0 * w->y0 - f.eval(w->x0)) % p;
            CHECK(lhs == 0);
        }
    }
}

TEST_CASE("square_class_transfer moves witnesses within a class", "[twistcore]") {
    const IntPoly f = parse_poly("x^3+2");
    const auto w1 = s_check(f, 5, 1, 0);
    REQUIRE(w1.has_value());

    // identity transfer
    const SWitness same = square_class_transfer(*w1, 1);
    CHECK(same.h == w1->h);
    CHECK(same.y0 == w1->y0);

    // 4 = 1 * 2^2 mod 5
    const SWitness w4 = square_class_transfer(*w1, 4);
    CHECK(w4.r == 4);
    CHECK(verify_switness(f, 5, w4));
    CHECK(s_check(f, 5, 4, 0).has_value());

    // 2 and 3 are nonsquares mod 5: not reachable from the class of 1
    CHECK_THROWS_AS(square_class_transfer(*w1, 2), precondition_error);
    CHECK_THROWS_AS(square_class_transfer(*w1, 5), precondition_error);
}

TEST_CASE("square_class_transfer at positive eps", "[twistcore]") {
    const IntPoly f = parse_poly("x*(x^5-x)^2 + 5*x");
    const auto w1 = s_check(f, 5, 1, 0);
    REQUIRE(w1.has_value());
    const SWitness w4 = square_class_transfer(*w1, 4);
    CHECK(w4.r == 4);
    CHECK(verify_switness(f, 5, w4));
}

TEST_CASE("transfer agrees with independent decision across the corpus", "[twistcore]") {
    const Int primes[] = {3, 5, 7, 11, 13};
    for (const char* s : kCorpus) {
        const IntPoly f = parse_poly(s);
        for (const Int& p : primes) {
            for (unsigned long v = 0; v <= 1; ++v) {
                for (Int r = 1; r < p; ++r) {
                    const auto w = s_check(f, p, r, v);
                    if (!w) continue;
                    // any a in the square class of r admits a transferred witness
                    // and an independently found one
                    for (Int a = 1; a < p; ++a) {
                        bool same_class = false;
                        for (Int c = 1; c < p; ++c)
                            if ((r * c * c - a) % p == 0) same_class = true;
                        if (!same_class) continue;
                        CAPTURE(s, p.get_str(), v, r.get_str(), a.get_str());
                        const SWitness t = square_class_transfer(*w, a);
                        CHECK(verify_switness(f, p, t));
                        CHECK(t.v == v);
                        CHECK(s_check(f, p, a, v).has_value());
                    }
                }
            }
        }
    }
}

TEST_CASE("analyze evaluates the large-prime conditions", "[twistcore]") {
    const IntPoly f = parse_poly("x^3+2");

    const TwistSetup ok = analyze(f, 17);
    CHECK(ok.large_prime_ok);
    CHECK(ok.reasons.empty());
    CHECK(ok.genus == 1);
    CHECK(ok.factor_disc_ok);
    REQUIRE(ok.factors.size() == 1);
    CHECK(ok.factors[0].first == f);

    const TwistSetup small = analyze(f, 13);
    CHECK_FALSE(small.large_prime_ok);
    REQUIRE(small.reasons.size() == 1);
    CHECK(small.reasons[0] == "p <= 4g^2+6g+4");

    const TwistSetup bad_disc = analyze(f, 3);
    CHECK_FALSE(bad_disc.large_prime_ok);
    CHECK(std::find(bad_disc.reasons.begin(), bad_disc.reasons.end(), "p | disc") !=
          bad_disc.reasons.end());
    CHECK_FALSE(bad_disc.factor_disc_ok);

    CHECK_THROWS_AS(analyze(parse_poly("x^2-2*x+1"), 5), precondition_error);
    CHECK_THROWS_AS(analyze(f, 4), precondition_error);
}

TEST_CASE("analyze reports p | lc and p | D", "[twistcore]") {
    const TwistSetup s1 = analyze(parse_poly("5*x^3+2"), 5);
    CHECK(std::find(s1.reasons.begin(), s1.reasons.end(), "p | lc") != s1.reasons.end());

    const TwistSetup s2 = analyze(parse_poly("x^3-x"), 3); // D = 6
    CHECK(std::find(s2.reasons.begin(), s2.reasons.end(), "p | D") != s2.reasons.end());
}

TEST_CASE("residues_with_point_mod_p on fixed values", "[twistcore]") {
    CHECK(residues_with_point_mod_p(parse_poly("x^3+2"), 5) == std::set<long>{1, 2, 3, 4});
    CHECK(residues_with_point_mod_p(parse_poly("x^4+x^3+x^2+x+1"), 5) == std::set<long>{1, 4});
    CHECK(residues_with_point_mod_p(parse_poly("x^2+1"), 3) == std::set<long>{1, 2});
    CHECK_THROWS_AS(residues_with_point_mod_p(parse_poly("x^3+2"), Int(10'007), Int(100)),
                    budget_error);
}

TEST_CASE("residues_with_point_mod_p agrees with a direct pair scan", "[twistcore]") {
    const Int primes[] = {3, 5, 7, 11};
    for (const char* s : kCorpus) {
        const IntPoly f = parse_poly(s);
        for (const Int& p : primes) {
            CAPTURE(s, p.get_str());
            const long pp = p.get_si();
            std::set<long> direct;
            for (long r = 1; r < pp; ++r)
                for (long x = 0; x < pp && !direct.count(r); ++x)
                    for (long y = 1; y < pp; ++y) {
                        if ((Int(r) * y * y - f.eval(Int(x))) % p == 0) {
                            direct.insert(r);
                            break;
                        }
                    }
            CHECK(residues_with_point_mod_p(f, p) == direct);
        }
    }
}

TEST_CASE("classify_shape labels the named sets", "[twistcore]") {
    CHECK(classify_shape({}, 5) == ShapeLabel::empty);
    CHECK(classify_shape({1, 4}, 5) == ShapeLabel::squares);
    CHECK(classify_shape({2, 3}, 5) == ShapeLabel::nonsquares);
    CHECK(classify_shape({1, 2, 3, 4}, 5) == ShapeLabel::all);
    CHECK(classify_shape({1}, 5) == ShapeLabel::mixed_partial);
    CHECK(classify_shape({1, 2}, 5) == ShapeLabel::mixed_partial);
    CHECK(classify_shape({1}, 3) == ShapeLabel::squares);
    CHECK(classify_shape({1, 2}, 3) == ShapeLabel::all);
    CHECK(classify_shape({1}, 2) == ShapeLabel::all);

    CHECK(std::string(shape_label_name(ShapeLabel::mixed_partial)) == "mixed-partial");
    CHECK(std::string(shape_label_name(ShapeLabel::empty)) == "empty");
}
