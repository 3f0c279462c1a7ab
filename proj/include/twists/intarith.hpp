#pragma once

// Exact integer and rational arithmetic: valuations, CRT, primality,
// factorization, squarefree parts, primitive roots. Everything here is a
// pure function of its inputs and configuration; no global mutable state.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace twists {

using Int = mpz_class;
using Rat = mpq_class;

// Effort bounds for factorization-backed operations. The rho budget counts
// Brent iterations across the whole call; exhausting it raises budget_error
// ("factorization incomplete"), never a wrong answer.
struct FactorConfig {
    std::uint64_t rho_budget = 1'000'000;
};

namespace detail {

// Primes below 10^5, sieved once. Trial-division floor for factorize and
// the squarefree shortcut.
inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 100'000;
        std::vector<bool> composite(limit, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i < limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j < limit; j += i)
                composite[j] = true;
        }
        return out;
    }();
    return primes;
}

inline Int pow_ui(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int powm(const Int& base, const Int& e, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// Exponent of p in n, n != 0 assumed, no primality check.
inline unsigned long raw_valuation(const Int& p, const Int& n) {
    Int rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

} // namespace detail

// Miller-Rabin with the fixed witness set below. The first twelve bases are
// known to give a deterministic answer for n < 3.317e24; the remaining bases
// extend the strong-probable-prime margin above that. No randomness, so the
// verdict is reproducible.
inline bool is_prime(const Int& n) {
    static const int witnesses[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                    41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    if (n < 2) return false;
    for (int w : witnesses) {
        if (n == w) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), w)) return false;
    }
    if (n < 101 * 101) return true;

    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    const Int n1 = n - 1;
    for (int w : witnesses) {
        Int x = detail::powm(Int(w), d, n);
        if (x == 1 || x == n1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// p-adic valuation ord_p(n). The infinite flag marks n = 0.
struct Valuation {
    Int prime;
    unsigned long value = 0;
    bool infinite = false;
};

inline Valuation ord_p(const Int& p, const Int& n) {
    if (!is_prime(p)) throw precondition_error("ord_p: p = " + p.get_str() + " is not prime");
    if (n == 0) return {p, 0, true};
    return {p, detail::raw_valuation(p, n), false};
}

// Least positive x with a*x == 1 (mod m).
inline Int inv_mod(const Int& a, const Int& m) {
    if (m <= 0) throw precondition_error("inv_mod: modulus must be positive");
    if (m == 1) return 1;
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw precondition_error("inv_mod: " + a.get_str() + " is not invertible mod " + m.get_str());
    if (r == 0) r = m; // only m = 1, handled above; keep the contract anyway
    return r;
}

// Least nonnegative solution of a system of congruences x == r_i (mod m_i).
// Non-coprime moduli are merged when consistent and rejected otherwise.
inline Int crt(const std::vector<std::pair<Int, Int>>& congruences) {
    Int r = 0, m = 1;
    for (const auto& [ri, mi] : congruences) {
        if (mi <= 0) throw precondition_error("crt: modulus must be positive");
        Int g = gcd(m, mi);
        Int diff = ri - r;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()))
            throw precondition_error("crt: inconsistent congruences (gcd " + g.get_str() + ")");
        // x = r + m*k with (m/g)*k == diff/g (mod mi/g); m/g is a unit there.
        Int m2 = mi / g;
        Int k = 0;
        if (m2 != 1) k = diff / g % m2 * inv_mod(m / g % m2, m2) % m2;
        Int l = m / g * mi;
        r = (r + m * k) % l;
        if (r < 0) r += l;
        m = l;
    }
    return r;
}

// Complete prime factorization of a nonzero integer.
struct Factorization {
    int sign = 1;
    std::map<Int, unsigned long> factors; // prime -> exponent, exponent >= 1

    Int value() const {
        Int v = sign;
        for (const auto& [p, e] : factors) v *= detail::pow_ui(p, e);
        return v;
    }
    bool squarefree() const {
        for (const auto& [p, e] : factors)
            if (e > 1) return false;
        return true;
    }
};

namespace detail {

// Brent's cycle-finding rho. n odd, composite, no factor below 10^5.
// Decrements *budget per iteration; throws budget_error at zero.
inline Int rho_brent(const Int& n, std::uint64_t& budget) {
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, ys, q = 1, d = 1;
        std::uint64_t r = 1;
        const std::uint64_t batch = 64;
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            for (std::uint64_t k = 0; k < r && d == 1; k += batch) {
                ys = y;
                const std::uint64_t lim = std::min(batch, r - k);
                if (budget < lim) throw budget_error("factorization incomplete: rho budget exhausted");
                budget -= lim;
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
            }
            r *= 2;
        }
        if (d == n) {
            do {
                if (budget == 0) throw budget_error("factorization incomplete: rho budget exhausted");
                --budget;
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            } while (d == 1);
        }
        if (d != n) return d;
        // cycle collapsed onto n itself; retry with the next polynomial
    }
}

inline void factor_into(Int n, std::map<Int, unsigned long>& out, std::uint64_t& budget) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        std::map<Int, unsigned long> half;
        factor_into(isqrt(n), half, budget);
        for (auto& [p, e] : half) out[p] += 2 * e;
        return;
    }
    Int d = rho_brent(n, budget);
    factor_into(d, out, budget);
    factor_into(n / d, out, budget);
}

} // namespace detail

inline Factorization factorize(const Int& n, const FactorConfig& cfg = {}) {
    if (n == 0) throw precondition_error("factorize: argument must be nonzero");
    Factorization f;
    f.sign = sgn(n);
    Int m = abs(n);
    for (std::uint32_t p : detail::small_primes()) {
        if (m == 1) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned long e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
            f.factors[Int(p)] = e;
        }
    }
    std::uint64_t budget = cfg.rho_budget;
    detail::factor_into(m, f.factors, budget);
    return f;
}

// Squarefree test with the cheap rejections done before any rho work:
// a repeated small prime or a perfect-square cofactor decides immediately.
inline bool is_squarefree(const Int& n, const FactorConfig& cfg = {}) {
    if (n == 0) return false;
    Int m = abs(n);
    if (m == 1) return true;
    for (std::uint32_t p : detail::small_primes()) {
        if (m == 1) return true;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;
        }
    }
    if (m == 1 || is_prime(m)) return true;
    if (mpz_perfect_power_p(m.get_mpz_t())) return false;
    std::map<Int, unsigned long> rest;
    std::uint64_t budget = cfg.rho_budget;
    detail::factor_into(m, rest, budget);
    for (const auto& [p, e] : rest)
        if (e > 1) return false;
    return true;
}

// The unique squarefree integer in the square class of n (sign preserved).
inline Int sqf(const Int& n, const FactorConfig& cfg = {}) {
    if (n == 0) throw precondition_error("sqf: argument must be nonzero");
    Factorization f = factorize(n, cfg);
    Int out = f.sign;
    for (const auto& [p, e] : f.factors)
        if (e % 2 == 1) out *= p;
    return out;
}

// Rational squarefree part: reduce to lowest terms, then sqf(num * den).
// For coprime num/den the product formula is exact.
inline Int sqf(const Rat& x, const FactorConfig& cfg = {}) {
    if (x == 0) throw precondition_error("sqf: argument must be nonzero");
    Rat y = x;
    y.canonicalize();
    return sqf(Int(y.get_num() * y.get_den()), cfg);
}

// Least positive generator of (Z/p)^*.
inline Int primitive_root(const Int& p) {
    if (!is_prime(p)) throw precondition_error("primitive_root: p is not prime");
    if (p == 2) return 1;
    const Int order = p - 1;
    Factorization of = factorize(order);
    for (Int g = 2;; ++g) {
        bool generates = true;
        for (const auto& [q, e] : of.factors) {
            (void)e;
            if (detail::powm(g, order / q, p) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
}

} // namespace twists
