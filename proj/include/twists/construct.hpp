#pragma once

// The constructive engines.  From a witness for S(r,v) an affine change of
// variables x -> a*x + b produces Delta * g(x) = f(a*x + b) with g free of
// fixed prime divisors and every value delta * g(n) congruent to r mod p;
// squarefree values then give integral-point twists, and the homogenization
// of g gives rational-point twists over coprime pairs.  Every intermediate
// identity is verified before a context is returned.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twistcore.hpp"

namespace twists {

// Smallest prime q <= search_bound with q coprime to D, q*u = z0 (mod p),
// and f having a simple root mod q.  The progression guarantees q*u can
// play the role of z0 in the scaled congruence; the simple root feeds the
// lift that pins ord_q(f(m)) = 2.
inline Int find_q(const IntPoly& f, const Int& p, const PAdicShape& shape, const SWitness& w,
                  const Int& search_bound = Int(1'000'000)) {
    if (w.z0 % p == 0) throw precondition_error("find_q: p divides z0");
    if (shape.u % p == 0) throw precondition_error("find_q: p divides u");
    const Int target = w.z0 * inv_mod(shape.u, p) % p;
    Int q = 2;
    while (q <= search_bound) {
        if (shape.D % q != 0 && q % p == target) {
            for (const ModRoot& root : roots_mod(f, q, search_bound))
                if (root.simple) return q;
        }
        mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    }
    throw budget_error("find_q: no usable prime up to " + search_bound.get_str());
}

// Smallest nonnegative m with ord_q(f(m)) = 2, restricted to the residue
// classes of simple roots of f mod q.  In such a class the valuation of
// f(m) equals the q-adic distance from m to the lifted root beta, so the
// least candidates are beta mod q^2 and beta mod q^2 plus q^2.
inline Int hensel_m(const IntPoly& f, const Int& q) {
    if (!is_prime(q)) throw precondition_error("hensel_m: q is not prime");
    std::vector<ModRoot> roots = roots_mod(f, q);
    const IntPoly fprime = f.derivative();
    const Int q2 = q * q, q3 = q2 * q;
    Int best = -1;
    bool have_simple = false;
    for (const ModRoot& root : roots) {
        if (!root.simple) continue;
        have_simple = true;
        // two linear Newton steps: root mod q -> mod q^2 -> mod q^3
        Int beta = root.root;
        const Int w = inv_mod(fprime.eval(beta) % q, q);
        beta = (beta - f.eval(beta) * w) % q2;
        if (beta < 0) beta += q2;
        beta = (beta - f.eval(beta) * w) % q3;
        if (beta < 0) beta += q3;

        Int cand = beta % q2;
        Int val = f.eval(cand);
        if (val == 0 || detail::raw_valuation(q, val) != 2) cand += q2;
        val = f.eval(cand);
        if (val == 0 || detail::raw_valuation(q, val) != 2)
            throw std::logic_error("hensel_m: lifted candidate misses ord exactly 2");
        if (best < 0 || cand < best) best = cand;
    }
    if (!have_simple) throw precondition_error("hensel_m: f has no simple root mod q");
    return best;
}

// Smallest n in [0, s^{e+1}) with f(n) not divisible by s^{e+1}; exists by
// the maximality of the fixed divisor when e = ord_s(D).
inline Int find_ns(const IntPoly& f, const Int& s, unsigned long e) {
    if (!is_prime(s)) throw precondition_error("find_ns: s is not prime");
    const Int mod = detail::pow_ui(s, e + 1);
    for (Int n = 0; n < mod; ++n)
        if (f.eval(n) % mod != 0) return n;
    throw std::logic_error("find_ns: every residue divisible by s^{e+1}, fixed divisor overstated");
}

struct SidePrime {
    Int s;
    unsigned long e = 0; // ord_s(D)
    Int n;               // chosen residue with f(n) nonzero mod s^{e+1}
};

struct ConstructionContext {
    IntPoly f;
    Int p;
    Int r;
    unsigned long v = 0;
    SWitness witness;
    PAdicShape shape;
    TwistSetup setup;
    Int q;
    Int m;
    std::vector<SidePrime> side_primes;
    Int b;
    Int a;
    Int Delta;
    IntPoly g;
    BinaryForm F;
};

enum class TwistKind { integral, rational };

struct TwistWitness {
    Int d;
    TwistKind kind = TwistKind::integral;
    Rat x;
    Rat y;
    Int alpha; // source index: n for integral witnesses
    Int beta;  // 1 for integral witnesses
};

// d squarefree, y nonzero, d*y^2 = f(x) in exact rational arithmetic, and
// integrality of (x, y) when the witness claims an integral point.
inline bool verify_twist(const IntPoly& f, const TwistWitness& w, const FactorConfig& cfg = {}) {
    if (w.y == 0) return false;
    if (w.d == 0 || !is_squarefree(w.d, cfg)) return false;
    if (w.kind == TwistKind::integral &&
        (w.x.get_den() != 1 || w.y.get_den() != 1))
        return false;
    return Rat(w.d) * w.y * w.y == f.eval(w.x);
}

inline ConstructionContext build_context(const IntPoly& f, const Int& p, const Int& r,
                                         unsigned long v, const SWitness& w,
                                         const Int& q_bound = Int(1'000'000),
                                         const FactorConfig& fcfg = {},
                                         const FactorQConfig& qcfg = {}) {
    ConstructionContext ctx;
    ctx.setup = analyze(f, p, qcfg);
    ctx.f = f;
    ctx.p = p;
    ctx.v = v;
    ctx.shape = ctx.setup.shape;
    const Int nr = ((r % p) + p) % p;
    if (nr == 0) throw precondition_error("build_context: p divides r");
    ctx.r = nr;
    if (!verify_switness(f, p, w))
        throw precondition_error("build_context: witness fails its invariants");
    if (w.r != nr || w.v != v)
        throw precondition_error("build_context: witness is for a different (r, v)");
    ctx.witness = w;
    if (v < ctx.shape.k)
        throw std::logic_error("build_context: v < k despite a valid witness");

    ctx.q = find_q(f, p, ctx.shape, w, q_bound);
    ctx.m = hensel_m(f, ctx.q);

    const unsigned long e = v + static_cast<unsigned long>(ctx.shape.eps);
    const Int M = detail::pow_ui(p, 2 * e + 1);
    std::vector<std::pair<Int, Int>> congruences;
    congruences.push_back({w.x0 % M, M});
    congruences.push_back({ctx.m, ctx.q * ctx.q * ctx.q});
    ctx.a = ctx.q * ctx.q * M;
    for (const auto& [s, es] : factorize(ctx.shape.D, fcfg).factors) {
        if (s == p) continue;
        SidePrime sp;
        sp.s = s;
        sp.e = es;
        sp.n = find_ns(f, s, es);
        const Int smod = detail::pow_ui(s, es + 1);
        congruences.push_back({sp.n, smod});
        ctx.a *= smod;
        ctx.side_primes.push_back(std::move(sp));
    }
    ctx.b = crt(congruences);
    ctx.Delta =
        ctx.shape.D * ctx.q * ctx.q * detail::pow_ui(p, 2 * (v - ctx.shape.k) + ctx.shape.eps);

    const IntPoly composed = compose_affine(f, ctx.a, ctx.b);
    try {
        ctx.g = exact_divide(composed, ctx.Delta);
    } catch (const precondition_error&) {
        throw std::logic_error("build_context: Delta does not divide f(a*x+b) coefficientwise");
    }
    // scaling identity: Delta = delta * (q*u)^2 * p^{2v+2eps}
    const Int qu = ctx.q * ctx.shape.u;
    if (ctx.Delta != ctx.shape.delta * qu * qu * detail::pow_ui(p, 2 * v + 2 * ctx.shape.eps))
        throw std::logic_error("build_context: Delta misses its factored form");
    if (composed != ctx.g * ctx.Delta)
        throw std::logic_error("build_context: composed identity f(a*x+b) = Delta*g failed");
    if (discriminant(ctx.g) == 0)
        throw std::logic_error("build_context: disc g vanished");
    if (fixed_divisor(ctx.g) != 1)
        throw std::logic_error("build_context: g kept a fixed prime divisor");
    const Int pD = p * ctx.shape.D;
    for (long n = -200; n <= 200; ++n)
        if (gcd(ctx.g.eval(Int(n)), pD) != 1)
            throw std::logic_error("build_context: gcd(g(n), p*D) != 1 at n = " +
                                   std::to_string(n));
    ctx.F = binary_form(ctx.g);
    return ctx;
}

struct TwistStream {
    std::vector<TwistWitness> twists;
    unsigned long skipped = 0; // values whose factorization exhausted the budget
};

namespace detail {

inline void emit_integral(const ConstructionContext& ctx, const Int& n, std::set<Int>& seen,
                          TwistStream& out, const FactorConfig& cfg) {
    const Int gn = ctx.g.eval(n);
    if (gn == 0) return;
    bool sf;
    try {
        sf = is_squarefree(gn, cfg);
    } catch (const budget_error&) {
        ++out.skipped;
        return;
    }
    if (!sf) return;
    TwistWitness w;
    w.d = ctx.shape.delta * gn;
    if (seen.count(w.d)) return;
    w.kind = TwistKind::integral;
    w.x = Rat(ctx.a * n + ctx.b);
    w.y = Rat(ctx.q * ctx.shape.u *
              pow_ui(ctx.p, ctx.v + static_cast<unsigned long>(ctx.shape.eps)));
    w.alpha = n;
    w.beta = 1;
    if ((w.d - ctx.r) % ctx.p != 0)
        throw std::logic_error("integral_twists: emitted d escapes r mod p");
    if (!verify_twist(ctx.f, w, cfg))
        throw std::logic_error("integral_twists: emitted witness fails verification");
    seen.insert(w.d);
    out.twists.push_back(std::move(w));
}

} // namespace detail

// All integral twists with source n in [lo, hi]; d-deduplicated, skipping
// (and counting) values the factorization budget cannot settle.
inline TwistStream integral_twists(const ConstructionContext& ctx, long lo, long hi,
                                   const FactorConfig& cfg = {}) {
    TwistStream out;
    std::set<Int> seen;
    for (long n = lo; n <= hi; ++n) detail::emit_integral(ctx, Int(n), seen, out, cfg);
    return out;
}

// The first `count` integral twists along n = 0, 1, 2, ...; the cap bounds
// the scan, not the output.
inline TwistStream integral_twists_count(const ConstructionContext& ctx, unsigned long count,
                                         long scan_cap = 1'000'000,
                                         const FactorConfig& cfg = {}) {
    TwistStream out;
    std::set<Int> seen;
    for (long n = 0; n <= scan_cap && out.twists.size() < count; ++n)
        detail::emit_integral(ctx, Int(n), seen, out, cfg);
    if (out.twists.size() < count)
        throw budget_error("integral_twists: scan cap reached before " + std::to_string(count) +
                           " twists");
    return out;
}

struct GreavesEntry {
    Int l;
    Int alpha;
    Int beta;
};

// For every prime l <= l_bound, a pair (alpha, beta) = (q, 1) mod p*D with
// l^2 not dividing F(alpha, beta), searched over expanding square shells
// around (q, 1).  Failure within the shells would contradict the existence
// argument the pipeline rests on, so it aborts.
inline std::vector<GreavesEntry> greaves_precheck(const ConstructionContext& ctx,
                                                  const Int& l_bound = Int(1000),
                                                  int shell_cap = 64) {
    const Int mod = ctx.p * ctx.shape.D;
    std::vector<GreavesEntry> out;
    Int l = 2;
    while (l <= l_bound) {
        const Int l2 = l * l;
        bool found = false;
        for (int t = 0; t <= shell_cap && !found; ++t) {
            for (long i = -t; i <= t && !found; ++i) {
                for (long j = -t; j <= t && !found; ++j) {
                    if (std::max(std::abs(i), std::abs(j)) != t) continue;
                    const Int alpha = ctx.q + Int(i) * mod;
                    const Int beta = Int(1) + Int(j) * mod;
                    if (eval_form(ctx.F, alpha, beta) % l2 != 0) {
                        out.push_back({l, alpha, beta});
                        found = true;
                    }
                }
            }
        }
        if (!found)
            throw std::logic_error("greaves_precheck: no admissible pair for l = " + l.get_str());
        mpz_nextprime(l.get_mpz_t(), l.get_mpz_t());
    }
    return out;
}

// Rational twists over coprime pairs (alpha, beta) = (q, 1) mod p*D with
// |alpha| <= H, 1 <= beta <= H: d = delta * F(alpha, beta) when squarefree,
// point x = a*(alpha/beta) + b, y = q*u*p^{v+eps} / beta^{(par+sig)/2}.
inline TwistStream rational_twists(const ConstructionContext& ctx, const Int& height,
                                   unsigned long count_cap = 0, const FactorConfig& cfg = {}) {
    if (ctx.f.degree() < 3)
        throw precondition_error("rational_twists: deg f must be at least 3");
    TwistStream out;
    std::set<Int> seen;
    const Int mod = ctx.p * ctx.shape.D;
    const int total_deg = ctx.F.degree();
    const unsigned long e = ctx.v + static_cast<unsigned long>(ctx.shape.eps);
    const Int ybase = ctx.q * ctx.shape.u * detail::pow_ui(ctx.p, e);
    const Int scale = ctx.shape.delta * ctx.q * ctx.shape.u * ctx.q * ctx.shape.u *
                      detail::pow_ui(ctx.p, 2 * e); // d*(qu)^2*p^{2v+2eps} target

    // first alpha >= -H in the progression q mod p*D
    const Int amod = ((ctx.q % mod) + mod) % mod;
    Int astart;
    {
        Int span = amod + height;
        Int steps;
        mpz_fdiv_q(steps.get_mpz_t(), span.get_mpz_t(), mod.get_mpz_t());
        astart = amod - steps * mod;
    }
    for (Int beta = 1; beta <= height; beta += mod) {
        for (Int alpha = astart; alpha <= height; alpha += mod) {
            if (gcd(alpha, beta) != 1) continue;
            const Int val = eval_form(ctx.F, alpha, beta);
            if (val == 0) continue;
            bool sf;
            try {
                sf = is_squarefree(val, cfg);
            } catch (const budget_error&) {
                ++out.skipped;
                continue;
            }
            if (!sf) continue;
            TwistWitness w;
            w.d = ctx.shape.delta * val;
            if (seen.count(w.d)) continue;
            w.kind = TwistKind::rational;
            const Rat lambda = Rat(alpha) / Rat(beta);
            w.x = Rat(ctx.a) * lambda + Rat(ctx.b);
            w.y = Rat(ybase) / Rat(detail::pow_ui(beta, static_cast<unsigned long>(total_deg / 2)));
            w.alpha = alpha;
            w.beta = beta;
            if ((w.d - ctx.r) % ctx.p != 0)
                throw std::logic_error("rational_twists: emitted d escapes r mod p");
            // clearing denominators: beta^{par+sig} * f(a*lambda+b) = d*(qu)^2*p^{2v+2eps}
            if (Rat(detail::pow_ui(beta, static_cast<unsigned long>(total_deg))) *
                    ctx.f.eval(w.x) !=
                Rat(w.d * scale / ctx.shape.delta))
                throw std::logic_error("rational_twists: cleared identity failed");
            if (!verify_twist(ctx.f, w, cfg))
                throw std::logic_error("rational_twists: emitted witness fails verification");
            seen.insert(w.d);
            out.twists.push_back(std::move(w));
            if (count_cap != 0 && out.twists.size() >= count_cap) return out;
        }
    }
    return out;
}

} // namespace twists
