#pragma once

// Local theory at a prime p: the fixed divisor D and its p-adic shape, the
// one-prime statement S(r,v) with explicit witnesses, transfer of witnesses
// along square classes, the large-prime conditions, and mod-p residue sets
// with their shape labels.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "factor.hpp"
#include "poly.hpp"

namespace twists {

// D = gcd(f(0), ..., f(deg f)): the largest integer dividing f(n) for every n.
inline Int fixed_divisor(const IntPoly& f) {
    if (f.degree() < 1) throw precondition_error("fixed_divisor: f must be nonconstant");
    Int d = 0;
    for (int n = 0; n <= f.degree(); ++n) d = gcd(d, f.eval(Int(n)));
    return abs(d);
}

// D = p^eps * delta * t^2 with t = p^k * u, p coprime to u and delta,
// delta squarefree: the decomposition driving the v -> v+eps shift.
struct PAdicShape {
    Int D;
    Int p;
    int eps = 0;
    unsigned long k = 0;
    Int t;
    Int u;
    Int delta;
};

inline PAdicShape p_shape(const IntPoly& f, const Int& p) {
    if (!is_prime(p)) throw precondition_error("p_shape: p is not prime");
    PAdicShape s;
    s.D = fixed_divisor(f);
    s.p = p;
    const unsigned long ord = detail::raw_valuation(p, s.D);
    s.eps = static_cast<int>(ord % 2);
    s.k = ord / 2;
    const Int sq = sqf(s.D);
    const Int tt = s.D / sq;
    s.t = detail::isqrt(tt);
    if (s.t * s.t != tt) throw std::logic_error("p_shape: D / sqf(D) is not a square");
    s.u = s.t / detail::pow_ui(p, s.k);
    s.delta = s.eps ? sq / p : sq;
    if (s.u % p == 0 || s.delta % p == 0) throw std::logic_error("p_shape: p-part left over");
    return s;
}

// Witness for S(r,v) at p: h*y0^2 = f(x0) (mod p^{2(v+eps)+1}) with h = r
// (mod p), y0 = p^{v+eps} * z0, p coprime to z0.
struct SWitness {
    Int p;
    Int r;
    unsigned long v = 0;
    Int h;
    Int x0;
    Int y0;
    Int z0;
};

inline bool verify_switness(const IntPoly& f, const Int& p, const SWitness& w) {
    if (w.p != p) return false;
    if (w.r % p == 0 || w.r < 1 || w.r >= p) return false;
    if (w.z0 % p == 0) return false;
    const int eps = p_shape(f, p).eps;
    const unsigned long e = w.v + static_cast<unsigned long>(eps);
    const Int pe = detail::pow_ui(p, e);
    if (w.y0 != pe * w.z0) return false;
    if ((w.h - w.r) % p != 0) return false;
    const Int M = pe * pe * p; // p^{2(v+eps)+1}
    return (w.h * w.y0 * w.y0 - f.eval(w.x0)) % M == 0;
}

// Decide S(r,v) by scanning x0 over a full period p^{2(v+eps)+1}: a witness
// exists iff some x0 has ord_p(f(x0)) = 2(v+eps) and the unit part falls in
// r's square class.  Returns the witness minimizing (z0, x0); nullopt means
// "no witness", which is a proof of failure at this v, not a lower bound.
inline std::optional<SWitness> s_check(const IntPoly& f, const Int& p, const Int& r,
                                       unsigned long v, const Int& scan_budget = Int(10'000'000)) {
    if (!is_prime(p)) throw precondition_error("s_check: p is not prime");
    if (r % p == 0) throw precondition_error("s_check: p divides r");
    const int eps = p_shape(f, p).eps;
    const unsigned long w = v + static_cast<unsigned long>(eps);
    const Int modulus = detail::pow_ui(p, 2 * w + 1);
    if (modulus > scan_budget)
        throw budget_error("s_check undecided: p^" + std::to_string(2 * w + 1) +
                           " exceeds the scan budget");

    const long long M = modulus.get_si();
    const long long pp = p.get_si();
    std::vector<long long> fc(f.coeffs().size());
    for (std::size_t i = 0; i < fc.size(); ++i)
        fc[i] = static_cast<long long>(
            mpz_fdiv_ui(f.coeff(i).get_mpz_t(), static_cast<unsigned long>(M)));

    // least square root table mod p: sqrt_tbl[a] = least z >= 1 with z^2 = a
    std::vector<long> sqrt_tbl(static_cast<std::size_t>(pp), -1);
    for (long long z = 1; z < pp; ++z) {
        long long sq = z * z % pp;
        if (sqrt_tbl[static_cast<std::size_t>(sq)] < 0)
            sqrt_tbl[static_cast<std::size_t>(sq)] = static_cast<long>(z);
    }
    const Int nr = ((r % p) + p) % p;
    const long long inv_r = inv_mod(nr, p).get_si();

    long best_z = -1;
    long long best_x = -1;
    for (long long x = 0; x < M; ++x) {
        long long val = 0;
        for (std::size_t i = fc.size(); i-- > 0;) val = (val * x + fc[i]) % M;
        if (val == 0) continue; // ord too high inside this period
        unsigned long e = 0;
        while (val % pp == 0) {
            val /= pp;
            ++e;
        }
        if (e != 2 * w) continue;
        long long target = val % pp * inv_r % pp;
        long z = sqrt_tbl[static_cast<std::size_t>(target)];
        if (z < 0) continue;
        if (best_z < 0 || z < best_z) {
            best_z = z;
            best_x = x;
            if (best_z == 1) break; // scanning x ascending, no later x beats (1, x)
        }
    }
    if (best_z < 0) return std::nullopt;
    SWitness out;
    out.p = p;
    out.r = nr;
    out.v = v;
    out.h = nr;
    out.x0 = static_cast<long>(best_x);
    out.z0 = best_z;
    out.y0 = detail::pow_ui(p, w) * out.z0;
    return out;
}

// Move a witness for S(r,v) to S(a,v) for a in the same square class:
// with a = r*g^{2k} (g a primitive root), multiply h by g^{2k} and y0 by
// z^k, z the inverse of g mod p^{2(v+eps)+1}.
inline SWitness square_class_transfer(const SWitness& w, const Int& a) {
    const Int& p = w.p;
    if (a % p == 0) throw precondition_error("square_class_transfer: p divides a");
    const Int na = ((a % p) + p) % p;
    const Int g = primitive_root(p);
    Int half = (p - 1) / 2; // size of a square class for odd p
    if (half < 1) half = 1;
    Int k = -1;
    Int c = w.r;
    const Int gsq = g * g % p;
    for (Int i = 0; i < half; ++i) {
        if (c == na) {
            k = i;
            break;
        }
        c = c * gsq % p;
    }
    if (k < 0)
        throw precondition_error("square_class_transfer: target not in the source square class");

    const unsigned long e = w.y0 == 0 ? 0 : detail::raw_valuation(p, w.y0);
    const Int M = detail::pow_ui(p, 2 * e + 1);
    const Int z = inv_mod(g, M);
    const Int zk = detail::powm(z, k, M);
    SWitness out;
    out.p = p;
    out.r = na;
    out.v = w.v;
    out.h = w.h * detail::powm(g, Int(2 * k), M) % M;
    out.x0 = w.x0;
    out.z0 = w.z0 * zk % M;
    out.y0 = detail::pow_ui(p, e) * out.z0;
    return out;
}

// The large-prime conditions and the factor-discriminant hypothesis,
// evaluated individually with reasons for any failure.
struct TwistSetup {
    IntPoly f;
    Int p;
    PAdicShape shape;
    unsigned long genus = 0;
    std::vector<std::pair<IntPoly, unsigned long>> factors;
    bool large_prime_ok = false;
    std::vector<std::string> reasons;  // empty iff large_prime_ok
    bool factor_disc_ok = false;       // some irreducible factor has p coprime to its disc
};

inline TwistSetup analyze(const IntPoly& f, const Int& p, const FactorQConfig& cfg = {}) {
    if (!is_prime(p)) throw precondition_error("analyze: p is not prime");
    if (f.degree() < 1 || discriminant(f) == 0)
        throw precondition_error("analyze: disc f must be nonzero");
    TwistSetup s;
    s.f = f;
    s.p = p;
    s.shape = p_shape(f, p);
    s.genus = static_cast<unsigned long>((f.degree() - 1) / 2);
    s.factors = factor_q(f, cfg);
    if (f.lc() % p == 0) s.reasons.push_back("p | lc");
    if (s.shape.D % p == 0) s.reasons.push_back("p | D");
    if (discriminant(f) % p == 0) s.reasons.push_back("p | disc");
    const Int threshold = Int(4) * s.genus * s.genus + Int(6) * s.genus + 4;
    if (p <= threshold) s.reasons.push_back("p <= 4g^2+6g+4");
    s.large_prime_ok = s.reasons.empty();
    s.factor_disc_ok = false;
    for (const auto& [irr, mult] : s.factors)
        if (discriminant(irr) % p != 0) s.factor_disc_ok = true;
    return s;
}

// All r in (Z/p)^* with r*y^2 = f(x) (mod p) solvable with y nonzero:
// the union of the square classes of the nonzero values of f mod p.
inline std::set<long> residues_with_point_mod_p(const IntPoly& f, const Int& p,
                                                const Int& budget = Int(10'000)) {
    if (!is_prime(p)) throw precondition_error("residues_with_point_mod_p: p is not prime");
    if (p > budget) throw budget_error("residues_with_point_mod_p: p exceeds the scan budget");
    const long long pp = p.get_si();
    std::vector<long long> fc(f.coeffs().size());
    for (std::size_t i = 0; i < fc.size(); ++i)
        fc[i] = static_cast<long long>(
            mpz_fdiv_ui(f.coeff(i).get_mpz_t(), static_cast<unsigned long>(pp)));
    std::vector<char> is_qr(static_cast<std::size_t>(pp), 0);
    for (long long y = 1; y < pp; ++y) is_qr[static_cast<std::size_t>(y * y % pp)] = 1;
    bool hit_qr = false, hit_nqr = false;
    for (long long x = 0; x < pp; ++x) {
        long long val = 0;
        for (std::size_t i = fc.size(); i-- > 0;) val = (val * x + fc[i]) % pp;
        if (val == 0) continue;
        (is_qr[static_cast<std::size_t>(val)] ? hit_qr : hit_nqr) = true;
    }
    std::set<long> out;
    for (long r = 1; r < pp; ++r) {
        const bool qr = is_qr[static_cast<std::size_t>(r)] != 0;
        if ((qr && hit_qr) || (!qr && hit_nqr)) out.insert(r);
    }
    return out;
}

enum class ShapeLabel { empty, squares, nonsquares, all, mixed_partial };

inline const char* shape_label_name(ShapeLabel s) {
    switch (s) {
        case ShapeLabel::empty: return "empty";
        case ShapeLabel::squares: return "squares";
        case ShapeLabel::nonsquares: return "nonsquares";
        case ShapeLabel::all: return "all";
        case ShapeLabel::mixed_partial: return "mixed-partial";
    }
    return "mixed-partial";
}

// Match the set against the named shapes; anything else, e.g. a proper
// subset coming from an empirical lower bound, is mixed-partial.
inline ShapeLabel classify_shape(const std::set<long>& residues, const Int& p) {
    if (!is_prime(p)) throw precondition_error("classify_shape: p is not prime");
    if (residues.empty()) return ShapeLabel::empty;
    const long long pp = p.get_si();
    std::set<long> squares, nonsquares, all;
    for (long long y = 1; y < pp; ++y) squares.insert(static_cast<long>(y * y % pp));
    for (long r = 1; r < pp; ++r) {
        all.insert(r);
        if (!squares.count(r)) nonsquares.insert(r);
    }
    if (residues == all) return ShapeLabel::all;
    if (residues == squares) return ShapeLabel::squares;
    if (residues == nonsquares) return ShapeLabel::nonsquares;
    return ShapeLabel::mixed_partial;
}

} // namespace twists
