#pragma once

// Factorization over Q for small degrees (default cap 12): Yun squarefree
// decomposition, distinct/equal-degree splitting modulo a good odd prime,
// quadratic Hensel lifting past twice the Landau-Mignotte bound, and
// subset recombination.  Output factors are primitive with positive
// leading coefficient.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace twists {

struct FactorQConfig {
    int max_degree = 12;
};

namespace detail {

// --------------------------- F_p[x], p < 2^31 ------------------------------

using FpPoly = std::vector<long long>; // c[i] multiplies x^i, values in [0,p)

inline Int int_of(long long v) {
    static_assert(sizeof(long) == sizeof(long long));
    Int out;
    mpz_set_si(out.get_mpz_t(), static_cast<long>(v));
    return out;
}

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int fp_deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

inline FpPoly fp_from(const IntPoly& f, long long p) {
    FpPoly a(f.coeffs().size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = static_cast<long long>(mpz_fdiv_ui(f.coeff(i).get_mpz_t(), p));
    fp_trim(a);
    return a;
}

inline long long fp_inv(long long a, long long p) {
    long long r0 = p, r1 = a % p, s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    s0 %= p;
    return s0 < 0 ? s0 + p : s0;
}

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        long long v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        c[i] = v % p;
    }
    fp_trim(c);
    return c;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        long long v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
        c[i] = (v % p + p) % p;
    }
    fp_trim(c);
    return c;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(c);
    return c;
}

inline FpPoly fp_scale(FpPoly a, long long s, long long p) {
    for (auto& c : a) c = c * s % p;
    fp_trim(a);
    return a;
}

inline void fp_divmod(const FpPoly& a, const FpPoly& b, long long p, FpPoly* q, FpPoly* r) {
    FpPoly rem = a;
    const int db = fp_deg(b);
    const long long inv = fp_inv(b.back(), p);
    FpPoly quot(fp_deg(rem) >= db ? fp_deg(rem) - db + 1 : 0, 0);
    for (int i = fp_deg(rem); i >= db; --i) {
        long long t = rem[i] * inv % p;
        if (t != 0) {
            quot[i - db] = t;
            for (int j = 0; j <= db; ++j)
                rem[i - db + j] = ((rem[i - db + j] - t * b[j]) % p + p) % p;
        }
    }
    fp_trim(rem);
    if (q) *q = std::move(quot);
    if (r) *r = std::move(rem);
}

inline FpPoly fp_rem(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly r;
    fp_divmod(a, b, p, nullptr, &r);
    return r;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, long long p) {
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) a = fp_scale(a, fp_inv(a.back(), p), p);
    return a;
}

// extended Euclid: s*a + t*b = g with g monic
inline void fp_eea(const FpPoly& a, const FpPoly& b, long long p, FpPoly* g, FpPoly* s,
                   FpPoly* t) {
    FpPoly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        FpPoly q, r;
        fp_divmod(r0, r1, p, &q, &r);
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        FpPoly t2 = fp_sub(t0, fp_mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    long long inv = fp_inv(r0.back(), p);
    *g = fp_scale(r0, inv, p);
    *s = fp_scale(s0, inv, p);
    *t = fp_scale(t0, inv, p);
}

inline FpPoly fp_deriv(const FpPoly& a, long long p) {
    if (a.size() <= 1) return {};
    FpPoly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (static_cast<long long>(i) % p) % p;
    fp_trim(d);
    return d;
}

inline FpPoly fp_powmod(FpPoly base, Int e, const FpPoly& mod, long long p) {
    FpPoly acc = {1};
    base = fp_rem(base, mod, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = fp_rem(fp_mul(acc, base, p), mod, p);
        e >>= 1;
        if (e > 0) base = fp_rem(fp_mul(base, base, p), mod, p);
    }
    return acc;
}

// distinct-degree split of a monic squarefree f: pairs (product, degree)
inline std::vector<std::pair<FpPoly, int>> fp_ddf(FpPoly f, long long p) {
    std::vector<std::pair<FpPoly, int>> out;
    const FpPoly x = {0, 1};
    FpPoly w = fp_rem(x, f, p); // invariant: w = x^{p^i} mod f
    int i = 0;
    while (fp_deg(f) >= 2 * (i + 1)) {
        ++i;
        w = fp_powmod(w, int_of(p), f, p);
        FpPoly g = fp_gcd(fp_sub(w, x, p), f, p);
        if (fp_deg(g) > 0) {
            out.push_back({g, i});
            FpPoly q;
            fp_divmod(f, g, p, &q, nullptr);
            f = std::move(q);
            w = fp_rem(w, f, p);
        }
    }
    if (fp_deg(f) > 0) out.push_back({f, fp_deg(f)});
    return out;
}

// equal-degree split (Cantor-Zassenhaus, p odd): u = product of distinct
// monic irreducibles of degree d
inline void fp_edf(const FpPoly& u, int d, long long p, std::mt19937_64& rng,
                   std::vector<FpPoly>& out) {
    if (fp_deg(u) == d) {
        out.push_back(u);
        return;
    }
    const Int e = (detail::pow_ui(int_of(p), d) - 1) / 2;
    for (;;) {
        FpPoly r(fp_deg(u));
        for (auto& c : r) c = static_cast<long long>(rng() % static_cast<std::uint64_t>(p));
        fp_trim(r);
        if (fp_deg(r) < 1) continue;
        FpPoly g = fp_gcd(r, u, p);
        if (fp_deg(g) == 0) {
            FpPoly w = fp_powmod(r, e, u, p);
            if (w.empty())
                w = {p - 1};
            else
                w[0] = (w[0] + p - 1) % p;
            fp_trim(w);
            g = fp_gcd(w, u, p);
        }
        if (fp_deg(g) > 0 && fp_deg(g) < fp_deg(u)) {
            FpPoly q;
            fp_divmod(u, g, p, &q, nullptr);
            fp_edf(g, d, p, rng, out);
            fp_edf(q, d, p, rng, out);
            return;
        }
    }
}

// --------------------------- Z/m[x] helpers --------------------------------

inline IntPoly zmod(const IntPoly& f, const Int& m) {
    std::vector<Int> c(f.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i)
        mpz_fdiv_r(c[i].get_mpz_t(), f.coeff(i).get_mpz_t(), m.get_mpz_t());
    return IntPoly(std::move(c));
}

inline IntPoly zsym(const IntPoly& f, const Int& m) {
    std::vector<Int> c(f.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_fdiv_r(c[i].get_mpz_t(), f.coeff(i).get_mpz_t(), m.get_mpz_t());
        if (c[i] * 2 > m) c[i] -= m;
    }
    return IntPoly(std::move(c));
}

// long division by a monic divisor with coefficients taken mod m
inline void zdivmod_monic(const IntPoly& a, const IntPoly& b, const Int& m, IntPoly* q,
                          IntPoly* r) {
    const int db = b.degree();
    std::vector<Int> rem(a.coeffs());
    std::vector<Int> quot(a.degree() >= db ? a.degree() - db + 1 : 0);
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        Int t;
        mpz_fdiv_r(t.get_mpz_t(), rem[i].get_mpz_t(), m.get_mpz_t());
        if (t != 0) {
            quot[i - db] = t;
            for (int j = 0; j < db; ++j) rem[i - db + j] -= t * b.coeff(j);
        }
        rem[i] = 0;
    }
    rem.resize(db > 0 ? db : 0);
    if (q) *q = IntPoly(std::move(quot));
    if (r) *r = zmod(IntPoly(std::move(rem)), m);
}

// One quadratic Hensel step (m -> m^2): maintains f = g*h, s*g + t*h = 1,
// h monic, deg s < deg h, deg t < deg g.
inline void hensel_step(const IntPoly& f, IntPoly& g, IntPoly& h, IntPoly& s, IntPoly& t,
                        const Int& m) {
    const Int M = m * m;
    const IntPoly one = IntPoly::constant(1);
    IntPoly e = zmod(f - g * h, M);
    IntPoly q, r;
    zdivmod_monic(zmod(s * e, M), h, M, &q, &r);
    IntPoly g1 = zmod(g + t * e + q * g, M);
    IntPoly h1 = zmod(h + r, M);
    IntPoly b = zmod(s * g1 + t * h1 - one, M);
    IntPoly c, d;
    zdivmod_monic(zmod(s * b, M), h1, M, &c, &d);
    s = zmod(s - d, M);
    t = zmod(t - t * b - c * g1, M);
    g = std::move(g1);
    h = std::move(h1);
}

// lift f = g*h from mod p to mod p^k (h monic; g, h coprime mod p)
inline void hensel_lift_pair(const IntPoly& f, IntPoly& g, IntPoly& h, long long p,
                             unsigned long k) {
    FpPoly gg, ss, tt;
    fp_eea(fp_from(g, p), fp_from(h, p), p, &gg, &ss, &tt);
    if (fp_deg(gg) != 0) throw std::logic_error("hensel_lift_pair: factors not coprime mod p");
    auto to_int = [](const FpPoly& a) {
        std::vector<Int> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = int_of(a[i]);
        return IntPoly(std::move(c));
    };
    IntPoly s = to_int(ss), t = to_int(tt);
    Int m = int_of(p);
    unsigned long reached = 1;
    const int dg = g.degree(), dh = h.degree();
    while (reached < k) {
        hensel_step(f, g, h, s, t, m);
        if (g.degree() != dg || h.degree() != dh)
            throw std::logic_error("hensel_lift_pair: degree drifted");
        m *= m;
        reached *= 2;
    }
    const Int target = detail::pow_ui(int_of(p), k);
    g = zmod(g, target);
    h = zmod(h, target);
}

// lift every factor of the mod-p factorization of monic f to mod p^k
inline void multi_hensel(const IntPoly& f, const std::vector<FpPoly>& fac, long long p,
                         unsigned long k, std::vector<IntPoly>& out) {
    if (fac.size() == 1) {
        out.push_back(zmod(f, detail::pow_ui(int_of(p), k)));
        return;
    }
    const std::size_t half = fac.size() / 2;
    FpPoly gm = {1}, hm = {1};
    for (std::size_t i = 0; i < half; ++i) gm = fp_mul(gm, fac[i], p);
    for (std::size_t i = half; i < fac.size(); ++i) hm = fp_mul(hm, fac[i], p);
    auto to_int = [](const FpPoly& a) {
        std::vector<Int> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = int_of(a[i]);
        return IntPoly(std::move(c));
    };
    IntPoly g = to_int(gm), h = to_int(hm);
    hensel_lift_pair(f, g, h, p, k);
    multi_hensel(g, std::vector<FpPoly>(fac.begin(), fac.begin() + half), p, k, out);
    multi_hensel(h, std::vector<FpPoly>(fac.begin() + half, fac.end()), p, k, out);
}

// division in Z[x] when exact; false (and untouched quot) otherwise
inline bool try_divide(const IntPoly& A, const IntPoly& B, IntPoly* quot) {
    if (B.is_zero() || A.degree() < B.degree()) return false;
    std::vector<Int> rem(A.coeffs());
    const int dB = B.degree();
    std::vector<Int> q(A.degree() - dB + 1);
    for (int i = A.degree(); i >= dB; --i) {
        if (rem[i] != 0) {
            if (!mpz_divisible_p(rem[i].get_mpz_t(), B.lc().get_mpz_t())) return false;
            Int t = rem[i] / B.lc();
            q[i - dB] = t;
            for (int j = 0; j <= dB; ++j) rem[i - dB + j] -= t * B.coeff(j);
        }
    }
    for (const Int& c : rem)
        if (c != 0) return false;
    if (quot) *quot = IntPoly(std::move(q));
    return true;
}

template <class Fn>
inline bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (fn(idx)) return true;
        // advance the combination odometer
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return false;
        }
        if (idx[i] == i + n - k) return false;
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// factor a primitive squarefree polynomial with positive lc, deg >= 1
inline std::vector<IntPoly> factor_squarefree(const IntPoly& s) {
    const int n = s.degree();
    if (n == 1) return {s};

    // monicize: fhat(x) = b^{n-1} s(x/b) is monic over Z
    const Int b = s.lc();
    IntPoly fhat;
    {
        std::vector<Int> c(n + 1);
        c[n] = 1;
        Int pw = 1; // b^{n-1-i}, filled from the top down
        for (int i = n - 1; i >= 0; --i) {
            c[i] = s.coeff(i) * pw;
            pw *= b;
        }
        fhat = IntPoly(std::move(c));
    }

    // good odd prime: fhat stays squarefree mod p
    long long p = 0;
    for (unsigned long cand : detail::small_primes()) {
        if (cand == 2) continue;
        FpPoly fp = fp_from(fhat, static_cast<long long>(cand));
        if (fp_deg(fp) != n) continue; // cannot happen for monic fhat, kept as a guard
        FpPoly d = fp_deriv(fp, static_cast<long long>(cand));
        if (d.empty()) continue;
        if (fp_deg(fp_gcd(fp, d, static_cast<long long>(cand))) == 0) {
            p = static_cast<long long>(cand);
            break;
        }
    }
    if (p == 0) throw budget_error("factor_q: no squarefree prime below 10^5");

    // factor mod p
    std::vector<FpPoly> modular;
    {
        std::mt19937_64 rng(0x517cc1b727220a95ULL);
        for (const auto& [prod, d] : fp_ddf(fp_from(fhat, p), p)) fp_edf(prod, d, p, rng, modular);
    }
    if (modular.size() == 1) return {s};

    // lift past twice the Landau-Mignotte bound
    Int norm2 = 0;
    for (const Int& c : fhat.coeffs()) norm2 += c * c;
    const Int bound = (detail::pow_ui(Int(2), n) * (detail::isqrt(norm2) + 1)) * 2;
    unsigned long k = 1;
    Int pk = int_of(p);
    while (pk <= bound) {
        pk *= int_of(p);
        ++k;
    }
    std::vector<IntPoly> lifted;
    multi_hensel(zmod(fhat, pk), modular, p, k, lifted);

    // subset recombination against the true factors of fhat
    std::vector<std::size_t> remaining(lifted.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    IntPoly cur = fhat;
    std::vector<IntPoly> hats;
    std::size_t size = 1;
    while (2 * size <= remaining.size()) {
        bool found = for_each_combination(remaining.size(), size, [&](const std::vector<std::size_t>& idx) {
            IntPoly cand = IntPoly::constant(1);
            for (std::size_t j : idx) cand = zmod(cand * lifted[remaining[j]], pk);
            cand = zsym(cand, pk);
            if (!mpz_divisible_p(cur.coeff(0).get_mpz_t(), cand.coeff(0).get_mpz_t()))
                return false;
            IntPoly quot;
            if (!try_divide(cur, cand, &quot)) return false;
            hats.push_back(cand);
            cur = quot;
            std::vector<std::size_t> rest;
            for (std::size_t pos = 0; pos < remaining.size(); ++pos)
                if (std::find(idx.begin(), idx.end(), pos) == idx.end())
                    rest.push_back(remaining[pos]);
            remaining = std::move(rest);
            return true;
        });
        if (!found) ++size;
    }
    if (cur.degree() > 0) hats.push_back(cur);

    // undo the monicization: each monic factor ghat of fhat maps to pp(ghat(b*x))
    std::vector<IntPoly> out;
    out.reserve(hats.size());
    for (const IntPoly& gh : hats) {
        if (b == 1) {
            out.push_back(gh);
            continue;
        }
        std::vector<Int> c(gh.coeffs().size());
        Int pw = 1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = gh.coeff(i) * pw;
            pw *= b;
        }
        out.push_back(IntPoly(std::move(c)).primitive_part());
    }
    return out;
}

} // namespace detail

// Yun squarefree decomposition of a primitive polynomial with positive lc:
// pairs (squarefree part, multiplicity), product of part^mult = input.
inline std::vector<std::pair<IntPoly, unsigned long>> squarefree_decomposition(const IntPoly& f) {
    if (f.degree() < 1) return {};
    IntPoly a = poly_gcd(f, f.derivative());
    if (a.degree() == 0) return {{f, 1}};
    IntPoly bpart = poly_divide_exact(f, a);
    IntPoly cpart = poly_divide_exact(f.derivative(), a);
    IntPoly d = cpart - bpart.derivative();
    std::vector<std::pair<IntPoly, unsigned long>> out;
    unsigned long mult = 1;
    for (;;) {
        IntPoly g = poly_gcd(bpart, d);
        if (g.degree() >= 1) out.push_back({g, mult});
        IntPoly b2 = poly_divide_exact(bpart, g);
        IntPoly c2 = poly_divide_exact(d, g);
        if (b2.degree() == 0) break;
        bpart = std::move(b2);
        d = c2 - bpart.derivative();
        ++mult;
    }
    return out;
}

// Irreducible factorization over Q: primitive factors with positive leading
// coefficients and multiplicities; content(f) * product reassembles f.
// Sorted by degree, then by coefficients from the top down.
inline std::vector<std::pair<IntPoly, unsigned long>> factor_q(const IntPoly& f,
                                                               const FactorQConfig& cfg = {}) {
    if (f.degree() > cfg.max_degree)
        throw precondition_error("factor_q: degree " + std::to_string(f.degree()) +
                                 " exceeds bound " + std::to_string(cfg.max_degree));
    std::vector<std::pair<IntPoly, unsigned long>> out;
    if (f.degree() < 1) return out;
    const IntPoly fp = f.primitive_part();
    for (const auto& [part, mult] : squarefree_decomposition(fp))
        for (const IntPoly& irr : detail::factor_squarefree(part)) out.push_back({irr, mult});
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        for (int i = x.first.degree(); i >= 0; --i) {
            int c = cmp(x.first.coeff(i), y.first.coeff(i));
            if (c != 0) return c < 0;
        }
        return x.second < y.second;
    });
    return out;
}

} // namespace twists
