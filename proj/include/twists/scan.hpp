#pragma once

// Empirical exploration: the residue map R(p) over integral and rational
// scan windows, and the squarefree-value density statistic.  Scans keep,
// per residue, the witness minimizing (|d|, d), with earlier scan order
// breaking ties, so partitioned runs merge to the same result.

#include <exception>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "construct.hpp"

namespace twists {

struct RpReport {
    Int p;
    std::map<long, TwistWitness> entries; // residue -> minimal witness
    std::string scanned_range;
    ShapeLabel shape = ShapeLabel::empty;
    unsigned long skipped = 0; // values the factorization budget left unsettled

    std::set<long> residues() const {
        std::set<long> out;
        for (const auto& [r, w] : entries) out.insert(r);
        return out;
    }
};

namespace detail {

// strict "better" order on witnesses for the per-residue minimum
inline bool twist_better(const TwistWitness& a, const TwistWitness& b) {
    const Int aa = abs(a.d), ab = abs(b.d);
    if (aa != ab) return aa < ab;
    return a.d < b.d;
}

inline void merge_entry(std::map<long, TwistWitness>& into, long r, const TwistWitness& w) {
    auto it = into.find(r);
    if (it == into.end())
        into.emplace(r, w);
    else if (twist_better(w, it->second))
        it->second = w;
}

// exact square root of a rational that is known to be a square
inline Rat rat_sqrt(const Rat& x) {
    Int num = isqrt(x.get_num()), den = isqrt(x.get_den());
    if (num * num != x.get_num() || den * den != x.get_den())
        throw std::logic_error("rat_sqrt: value is not a rational square");
    return Rat(num) / Rat(den);
}

template <class Body>
inline void run_partitioned(long lo, long hi, unsigned jobs, Body&& body) {
    if (hi < lo) return;
    const unsigned long span = static_cast<unsigned long>(hi - lo + 1);
    if (jobs <= 1 || span < 64) {
        body(0u, lo, hi);
        return;
    }
    if (jobs > span) jobs = static_cast<unsigned>(span);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    const unsigned long chunk = (span + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
        const long clo = lo + static_cast<long>(w * chunk);
        const long chi = std::min<long>(hi, clo + static_cast<long>(chunk) - 1);
        if (clo > hi) break;
        pool.emplace_back([&, w, clo, chi] {
            try {
                body(w, clo, chi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

// Residues { sqf(f(n)) mod p : |n| <= X, f(n) != 0, p coprime to sqf } with
// the witness points (n, y), y^2 = f(n)/d.
inline RpReport empirical_rp_integral(const IntPoly& f, const Int& p, long X, unsigned jobs = 1,
                                      const FactorConfig& cfg = {}) {
    if (!is_prime(p)) throw precondition_error("empirical_rp_integral: p is not prime");
    RpReport rep;
    rep.p = p;
    rep.scanned_range = "n in [-" + std::to_string(X) + ", " + std::to_string(X) + "]";

    struct Chunk {
        std::map<long, TwistWitness> entries;
        unsigned long skipped = 0;
    };
    std::vector<Chunk> chunks(jobs > 0 ? jobs : 1);
    detail::run_partitioned(-X, X, jobs, [&](unsigned w, long lo, long hi) {
        Chunk& c = chunks[w];
        for (long n = lo; n <= hi; ++n) {
            const Int val = f.eval(Int(n));
            if (val == 0) continue;
            Int d;
            try {
                d = sqf(val, cfg);
            } catch (const budget_error&) {
                ++c.skipped;
                continue;
            }
            const Int rm = ((d % p) + p) % p;
            if (rm == 0) continue;
            TwistWitness tw;
            tw.d = d;
            tw.kind = TwistKind::integral;
            tw.x = Rat(n);
            tw.y = Rat(detail::isqrt(val / d));
            tw.alpha = n;
            tw.beta = 1;
            detail::merge_entry(c.entries, rm.get_si(), tw);
        }
    });
    for (const Chunk& c : chunks) {
        rep.skipped += c.skipped;
        for (const auto& [r, w] : c.entries) detail::merge_entry(rep.entries, r, w);
    }
    rep.shape = classify_shape(rep.residues(), p);
    return rep;
}

// Residues of sqf(f(alpha/beta)) over coprime pairs, |alpha| <= H,
// 1 <= beta <= H; the squarefree part of a rational is taken after
// reduction to lowest terms.
inline RpReport empirical_rp_rational(const IntPoly& f, const Int& p, long H, unsigned jobs = 1,
                                      const FactorConfig& cfg = {}) {
    if (!is_prime(p)) throw precondition_error("empirical_rp_rational: p is not prime");
    if (H < 1) throw precondition_error("empirical_rp_rational: height must be positive");
    RpReport rep;
    rep.p = p;
    rep.scanned_range = "coprime alpha/beta with |alpha| <= " + std::to_string(H) +
                        ", 1 <= beta <= " + std::to_string(H);

    struct Chunk {
        std::map<long, TwistWitness> entries;
        unsigned long skipped = 0;
    };
    std::vector<Chunk> chunks(jobs > 0 ? jobs : 1);
    detail::run_partitioned(1, H, jobs, [&](unsigned w, long blo, long bhi) {
        Chunk& c = chunks[w];
        for (long beta = blo; beta <= bhi; ++beta) {
            for (long alpha = -H; alpha <= H; ++alpha) {
                if (gcd(Int(alpha), Int(beta)) != 1) continue;
                const Rat lambda = Rat(alpha) / Rat(beta);
                const Rat val = f.eval(lambda);
                if (val == 0) continue;
                Int d;
                try {
                    d = sqf(val, cfg);
                } catch (const budget_error&) {
                    ++c.skipped;
                    continue;
                }
                const Int rm = ((d % p) + p) % p;
                if (rm == 0) continue;
                TwistWitness tw;
                tw.d = d;
                tw.kind = TwistKind::rational;
                tw.x = lambda;
                tw.y = detail::rat_sqrt(val / Rat(d));
                tw.alpha = alpha;
                tw.beta = beta;
                detail::merge_entry(c.entries, rm.get_si(), tw);
            }
        }
    });
    for (const Chunk& c : chunks) {
        rep.skipped += c.skipped;
        for (const auto& [r, w] : c.entries) detail::merge_entry(rep.entries, r, w);
    }
    rep.shape = classify_shape(rep.residues(), p);
    return rep;
}

struct DensityReport {
    unsigned long count = 0;
    Rat ratio;
    unsigned long skipped = 0;
};

// Count of n in [1, B] with g(n) squarefree and nonzero; budget-unsettled
// values are excluded from the count and reported.
inline DensityReport squarefree_density(const IntPoly& g, unsigned long B,
                                        const FactorConfig& cfg = {}) {
    if (g.degree() < 1) throw precondition_error("squarefree_density: g must be nonconstant");
    if (B < 1) throw precondition_error("squarefree_density: B must be positive");
    DensityReport rep;
    for (unsigned long n = 1; n <= B; ++n) {
        const Int val = g.eval(Int(n));
        if (val == 0) continue;
        try {
            if (is_squarefree(val, cfg)) ++rep.count;
        } catch (const budget_error&) {
            ++rep.skipped;
        }
    }
    rep.ratio = Rat(rep.count, B);
    rep.ratio.canonicalize();
    return rep;
}

} // namespace twists
