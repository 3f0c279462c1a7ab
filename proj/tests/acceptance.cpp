// Acceptance gate: ten criteria, one PASS/FAIL line each, nonzero exit on
// any failure.  Timing bounds are wall-clock seconds on the build machine.

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <twists/twists.hpp>

using namespace twists;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << idx << "] " << name;
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1: golden integral pipeline with exact intermediate values, under 10 s
void criterion1() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^3+2");
        const auto w = s_check(f, 5, 1, 0);
        ok = w.has_value();
        if (ok) {
            const ConstructionContext ctx = build_context(f, 5, 1, 0, *w);
            ok = ctx.q == 11 && ctx.m == 48 && ctx.b == 1379 && ctx.a == 605 &&
                 ctx.Delta == 121 && ctx.g.coeff(0) == Int("21672421");
            if (!ok) detail = "context values diverge";
            if (ok) {
                ok = Int("21672421") * 121 == Int("2622362941") &&
                     f.eval(Int(1379)) == Int("2622362941");
                if (!ok) detail = "identity 21672421*121 = 1379^3+2 fails";
            }
            if (ok) {
                const TwistStream s = integral_twists_count(ctx, 5);
                ok = s.twists.size() == 5;
                for (const TwistWitness& tw : s.twists) {
                    ok = ok && verify_twist(f, tw) && (tw.d - 1) % 5 == 0;
                }
                if (!ok) detail = "emitted twists fail verification";
            }
        } else {
            detail = "no witness for S(1,0)";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double t = seconds_since(start);
    if (t >= 10.0) {
        ok = false;
        detail = "runtime " + std::to_string(t) + " s >= 10 s";
    }
    report(1, "golden pipeline x^3+2, p=5, r=1", ok, detail);
}

// 2: five distinct verified twists for every residue class mod 5, under 60 s
void criterion2() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^3+2");
        for (long r = 1; r <= 4 && ok; ++r) {
            const auto w = s_check(f, 5, r, 0);
            if (!w) {
                ok = false;
                detail = "no witness for r=" + std::to_string(r);
                break;
            }
            const ConstructionContext ctx = build_context(f, 5, r, 0, *w);
            const TwistStream s = integral_twists_count(ctx, 5);
            std::set<Int> ds;
            for (const TwistWitness& tw : s.twists) {
                if (!verify_twist(f, tw) || (tw.d - r) % 5 != 0) {
                    ok = false;
                    detail = "bad twist at r=" + std::to_string(r);
                }
                ds.insert(tw.d);
            }
            if (ds.size() < 5) {
                ok = false;
                detail = "fewer than 5 distinct d at r=" + std::to_string(r);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double t = seconds_since(start);
    if (t >= 60.0) {
        ok = false;
        detail = "runtime " + std::to_string(t) + " s >= 60 s";
    }
    report(2, "five verified twists per residue class", ok, detail);
}

// 3: empty residue map with constant 3-adic valuation 1
void criterion3() {
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("(x^2+1)*((x^3-x)^2+3)");
        const RpReport rep = empirical_rp_integral(f, 3, 200);
        ok = rep.residues().empty() && rep.skipped == 0;
        if (!ok) detail = "residue set not empty";
        for (long n = -200; n <= 200 && ok; ++n) {
            const Int val = f.eval(Int(n));
            if (val == 0 || detail::raw_valuation(3, val) != 1) {
                ok = false;
                detail = "ord_3 f(" + std::to_string(n) + ") != 1";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(3, "empty family: R(3) = {} and ord_3 = 1 throughout", ok, detail);
}

// 4: squares-only family, residue 1 attained, S(2,v) refuted for v <= 1
void criterion4() {
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^3-x+1");
        const RpReport rep = empirical_rp_integral(f, 3, 500);
        const std::set<long> residues = rep.residues();
        ok = residues == std::set<long>{1};
        if (!ok) detail = "residues differ from {1}";
        if (ok && (s_check(f, 3, 2, 0).has_value() || s_check(f, 3, 2, 1).has_value())) {
            ok = false;
            detail = "S(2,v) unexpectedly has a witness";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(4, "squares family: residues = {1}, S(2,v) refuted", ok, detail);
}

// 5: witness for r in {1,2} and exact context values at p = 3
void criterion5() {
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x*(x^3-x)^2 + 3*x");
        const auto w1 = s_check(f, 3, 1, 0);
        const auto w2 = s_check(f, 3, 2, 0);
        ok = w1.has_value() && w2.has_value();
        if (!ok) detail = "missing witness";
        if (ok) {
            const ConstructionContext ctx = build_context(f, 3, 1, 0, *w1);
            ok = ctx.q == 7 && ctx.m == 49 && ctx.b == 8967 && ctx.a == 1323 && ctx.Delta == 441;
            if (!ok) {
                std::ostringstream os;
                os << "got q=" << ctx.q << " m=" << ctx.m << " b=" << ctx.b << " a=" << ctx.a
                   << " Delta=" << ctx.Delta;
                detail = os.str();
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(5, "positive-eps pipeline at p=3: q=7, m=49, b=8967, a=1323, Delta=441", ok, detail);
}

// 6: singleton residue map from both scans
void criterion6() {
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^4+x^3+x^2+x+1");
        const std::set<long> integral = empirical_rp_integral(f, 5, 200).residues();
        const std::set<long> rational = empirical_rp_rational(f, 5, 40).residues();
        ok = integral == std::set<long>{1} && rational == std::set<long>{1};
        if (!ok) detail = "residues differ from {1}";
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(6, "cyclotomic family: residues = {1} in both scans", ok, detail);
}

// 7: all residues attain mod-p points for 14 < p <= 200 away from 108, under 5 s
void criterion7() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^3+2");
        for (long p = 15; p <= 200 && ok; ++p) {
            if (!is_prime(p) || 108 % p == 0) continue;
            std::set<long> expect;
            for (long r = 1; r < p; ++r) expect.insert(r);
            if (residues_with_point_mod_p(f, p) != expect) {
                ok = false;
                detail = "missing residues at p=" + std::to_string(p);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double t = seconds_since(start);
    if (t >= 5.0) {
        ok = false;
        detail = "runtime " + std::to_string(t) + " s >= 5 s";
    }
    report(7, "every residue has a mod-p point for 14 < p <= 200", ok, detail);
}

// 8: transfer suite across square classes
void criterion8() {
    bool ok = true;
    std::string detail;
    try {
        const char* polys[] = {"x^3+2", "x^3-x+1", "x*(x^3-x)^2 + 3*x"};
        const long primes[] = {3, 5, 7};
        for (const char* s : polys) {
            const IntPoly f = parse_poly(s);
            for (long p : primes) {
                for (unsigned long v = 0; v <= 1 && ok; ++v) {
                    // verdict per residue, then compare inside square classes
                    std::vector<bool> holds(static_cast<std::size_t>(p), false);
                    for (long r = 1; r < p; ++r)
                        holds[static_cast<std::size_t>(r)] = s_check(f, p, r, v).has_value();
                    for (long r = 1; r < p && ok; ++r) {
                        for (long c = 1; c < p; ++c) {
                            const long a = static_cast<long>((r * c % p) * c % p);
                            if (holds[static_cast<std::size_t>(r)] !=
                                holds[static_cast<std::size_t>(a)]) {
                                ok = false;
                                detail = std::string(s) + " p=" + std::to_string(p) +
                                         " verdict differs inside a square class";
                            }
                        }
                        if (ok && holds[static_cast<std::size_t>(r)]) {
                            const auto w = s_check(f, p, r, v);
                            for (long c = 1; c < p; ++c) {
                                const long a = static_cast<long>((r * c % p) * c % p);
                                const SWitness moved = square_class_transfer(*w, a);
                                if (!verify_switness(f, p, moved)) {
                                    ok = false;
                                    detail = std::string(s) + " p=" + std::to_string(p) +
                                             " transferred witness invalid";
                                }
                            }
                        }
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "square-class transfer suite over three families", ok, detail);
}

// 9: rational pipeline with non-integer points and the cleared identity
void criterion9() {
    bool ok = true;
    std::string detail;
    try {
        const IntPoly f = parse_poly("x^3+2");
        const auto w = s_check(f, 5, 2, 0);
        ok = w.has_value();
        if (!ok) detail = "no witness for S(2,0)";
        if (ok) {
            const ConstructionContext ctx = build_context(f, 5, 2, 0, *w);
            const TwistStream s = rational_twists(ctx, 40);
            long fractional = 0;
            const unsigned long total_deg = static_cast<unsigned long>(ctx.F.degree());
            const Int qu = ctx.q * ctx.shape.u;
            const Int rest = qu * qu *
                             detail::pow_ui(ctx.p, 2 * ctx.v +
                                                       2 * static_cast<unsigned long>(ctx.shape.eps));
            for (const TwistWitness& tw : s.twists) {
                if (!verify_twist(f, tw)) {
                    ok = false;
                    detail = "emitted twist fails verify_twist";
                }
                // beta^{deg F} * f(a*lambda+b) = d*(qu)^2*p^{2v+2eps} with x = a*lambda+b
                const Rat lhs = Rat(detail::pow_ui(tw.beta, total_deg)) * f.eval(tw.x);
                const Rat rhs = Rat(tw.d * rest);
                if (lhs != rhs) {
                    ok = false;
                    detail = "cleared identity fails";
                }
                if (tw.x.get_den() != 1) ++fractional;
            }
            if (ok && fractional < 3) {
                ok = false;
                detail = "fewer than 3 non-integer points";
            }
            if (ok) {
                const auto entries = greaves_precheck(ctx, 1000);
                std::set<Int> ls;
                for (const GreavesEntry& e : entries) {
                    ls.insert(e.l);
                    if (eval_form(ctx.F, e.alpha, e.beta) % (e.l * e.l) == 0) {
                        ok = false;
                        detail = "square divisor survives at l=" + e.l.get_str();
                    }
                }
                Int l = 2;
                while (l <= 1000 && ok) {
                    if (!ls.count(l)) {
                        ok = false;
                        detail = "no pair recorded for l=" + l.get_str();
                    }
                    mpz_nextprime(l.get_mpz_t(), l.get_mpz_t());
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "rational pipeline at r=2 with cleared identity and square sieve", ok, detail);
}

// 10: density statistic fixed point and positive golden count
void criterion10() {
    bool ok = true;
    std::string detail;
    try {
        const DensityReport rep = squarefree_density(parse_poly("x"), 1000);
        Rat expected(608, 1000);
        expected.canonicalize();
        ok = rep.count == 608 && rep.ratio == expected;
        if (!ok) detail = "density of squarefree integers misses 608/1000";
        if (ok) {
            const IntPoly f = parse_poly("x^3+2");
            const auto w = s_check(f, 5, 1, 0);
            const ConstructionContext ctx = build_context(f, 5, 1, 0, *w);
            const DensityReport golden = squarefree_density(ctx.g, 200);
            if (golden.count <= 0) {
                ok = false;
                detail = "no squarefree golden values below 200";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(10, "squarefree density 608/1000 and positive golden count", ok, detail);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::cout << "acceptance: all 10 criteria pass\n";
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria failed\n";
    return 1;
}
