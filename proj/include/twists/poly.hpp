#pragma once

// Dense integer-coefficient polynomials and the exact algebra the twist
// pipelines need: affine composition, subresultant resultants and
// discriminants, exact scalar division, roots modulo small primes, and
// homogenization to binary forms.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intarith.hpp"

namespace twists {

class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPoly(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly constant(Int v) {
        std::vector<Int> c;
        c.push_back(std::move(v));
        return IntPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const Int& lc() const {
        if (c_.empty()) throw precondition_error("lc: zero polynomial");
        return c_.back();
    }

    const Int& coeff(std::size_t i) const {
        static const Int kZero = 0;
        return i < c_.size() ? c_[i] : kZero;
    }
    const std::vector<Int>& coeffs() const { return c_; }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator-() const {
        std::vector<Int> c(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
        return IntPoly(std::move(c));
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return IntPoly(std::move(c));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Int> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const IntPoly& a, const Int& s) {
        if (s == 0) return {};
        std::vector<Int> c(a.c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] * s;
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const Int& s, const IntPoly& a) { return a * s; }

    // multiply by x^k
    IntPoly shifted(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<Int> c(c_.size() + k);
        for (std::size_t i = 0; i < c_.size(); ++i) c[i + k] = c_[i];
        return IntPoly(std::move(c));
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Int> c(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Int(static_cast<long>(i));
        return IntPoly(std::move(c));
    }

    Int eval(const Int& x) const {
        Int acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    Rat eval(const Rat& x) const {
        Rat acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rat(c_[i]);
        return acc;
    }

    // gcd of coefficients carrying the sign of the leading coefficient;
    // content of the zero polynomial is 0.
    Int content() const {
        Int g = 0;
        for (const Int& c : c_) g = gcd(g, c);
        if (!c_.empty() && c_.back() < 0) g = -g;
        return g;
    }
    IntPoly primitive_part() const;

    // Canonical text form: descending powers, explicit signs, '*' between
    // coefficient and x so the output re-parses.
    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Int& c = c_[i];
            if (c == 0) continue;
            Int a = abs(c);
            if (out.empty()) {
                out += (c < 0) ? "-" : "";
            } else {
                out += (c < 0) ? " - " : " + ";
            }
            if (i == 0) {
                out += a.get_str();
            } else {
                if (a != 1) out += a.get_str() + "*";
                out += (i == 1) ? "x" : "x^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_; // c_[i] = coefficient of x^i
};

// Exact quotient A / B in Z[x]; throws if the division is not exact.
inline IntPoly poly_divide_exact(const IntPoly& A, const IntPoly& B) {
    if (B.is_zero()) throw precondition_error("poly division by zero");
    if (A.is_zero()) return {};
    std::vector<Int> rem(A.coeffs());
    const int dB = B.degree();
    int dR = A.degree();
    if (dR < dB) throw precondition_error("poly division not exact (degree)");
    std::vector<Int> q(dR - dB + 1);
    while (dR >= dB) {
        if (rem[dR] != 0) {
            Int t;
            if (!mpz_divisible_p(rem[dR].get_mpz_t(), B.lc().get_mpz_t()))
                throw precondition_error("poly division not exact");
            t = rem[dR] / B.lc();
            q[dR - dB] = t;
            for (int i = 0; i <= dB; ++i) rem[dR - dB + i] -= t * B.coeff(i);
        }
        --dR;
    }
    for (const Int& c : rem)
        if (c != 0) throw precondition_error("poly division not exact (remainder)");
    return IntPoly(std::move(q));
}

inline IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return {};
    return poly_divide_exact(*this, IntPoly::constant(content()));
}

// Classical pseudo-remainder: the unique R with lc(B)^{degA-degB+1} * A = Q*B + R.
inline IntPoly prem(IntPoly A, const IntPoly& B) {
    const int dB = B.degree();
    const Int& lb = B.lc();
    long steps = A.degree() - dB + 1;
    while (!A.is_zero() && A.degree() >= dB) {
        const Int la = A.lc();
        const int shift = A.degree() - dB;
        A = A * lb - B.shifted(shift) * la;
        --steps;
    }
    if (steps > 0) A = A * detail::pow_ui(lb, steps);
    return A;
}

// Primitive PRS gcd; result is primitive with positive leading coefficient.
inline IntPoly poly_gcd(IntPoly A, IntPoly B) {
    if (A.is_zero()) return B.is_zero() ? IntPoly{} : B.primitive_part();
    if (B.is_zero()) return A.primitive_part();
    A = A.primitive_part();
    B = B.primitive_part();
    if (A.degree() < B.degree()) std::swap(A, B);
    while (!B.is_zero()) {
        IntPoly R = prem(A, B);
        A = std::move(B);
        B = R.is_zero() ? IntPoly{} : R.primitive_part();
    }
    return A.primitive_part();
}

// Resultant via the subresultant PRS (Cohen, Alg. 3.3.7). Exact, no
// rational arithmetic.
inline Int resultant(IntPoly A, IntPoly B) {
    if (A.is_zero() || B.is_zero()) return 0;
    if (A.degree() == 0) return detail::pow_ui(A.lc(), B.degree());
    if (B.degree() == 0) return detail::pow_ui(B.lc(), A.degree());

    Int sign = 1;
    if (A.degree() < B.degree()) {
        if (A.degree() % 2 == 1 && B.degree() % 2 == 1) sign = -sign;
        std::swap(A, B);
    }
    const Int ca = A.content(), cb = B.content();
    A = poly_divide_exact(A, IntPoly::constant(ca));
    B = poly_divide_exact(B, IntPoly::constant(cb));
    Int t = detail::pow_ui(ca, B.degree()) * detail::pow_ui(cb, A.degree());

    Int g = 1, h = 1;
    while (true) {
        const long delta = A.degree() - B.degree();
        if (A.degree() % 2 == 1 && B.degree() % 2 == 1) sign = -sign;
        IntPoly R = prem(A, B);
        A = std::move(B);
        B = R.is_zero() ? IntPoly{}
                        : poly_divide_exact(R, IntPoly::constant(g * detail::pow_ui(h, delta)));
        if (B.is_zero()) return 0; // common factor
        g = A.lc();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = poly_divide_exact(IntPoly::constant(detail::pow_ui(g, delta)),
                                  IntPoly::constant(detail::pow_ui(h, delta - 1)))
                    .coeff(0);
        }
        if (B.degree() == 0) break;
    }
    Int res = detail::pow_ui(B.lc(), A.degree());
    if (A.degree() > 1) {
        Int hp = detail::pow_ui(h, A.degree() - 1);
        res = res / hp; // exact by subresultant theory
    }
    return sign * t * res;
}

// disc f = (-1)^{d(d-1)/2} Res(f, f') / lc(f); zero iff f has a repeated
// complex root.
inline Int discriminant(const IntPoly& f) {
    const int d = f.degree();
    if (d < 1) throw precondition_error("discriminant: degree must be >= 1");
    Int res = resultant(f, f.derivative());
    Int disc = res / f.lc(); // Res(f, f') is always divisible by lc(f)
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) disc = -disc;
    return disc;
}

// Exact expansion of f(a*x + b) by Horner; degree preserved for a != 0.
inline IntPoly compose_affine(const IntPoly& f, const Int& a, const Int& b) {
    if (a == 0) throw precondition_error("compose_affine: a must be nonzero");
    if (f.is_zero()) return {};
    IntPoly lin({});
    {
        std::vector<Int> c(2);
        c[0] = b;
        c[1] = a;
        lin = IntPoly(std::move(c));
    }
    IntPoly acc = IntPoly::constant(f.coeff(f.degree()));
    for (int i = f.degree() - 1; i >= 0; --i) acc = acc * lin + IntPoly::constant(f.coeff(i));
    return acc;
}

// g with delta * g = f, if every coefficient of f is divisible by delta.
inline IntPoly exact_divide(const IntPoly& f, const Int& delta) {
    if (delta == 0) throw precondition_error("exact_divide: divisor must be nonzero");
    std::vector<Int> c(f.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!mpz_divisible_p(f.coeff(i).get_mpz_t(), delta.get_mpz_t()))
            throw precondition_error("exact_divide: not integral at index " + std::to_string(i));
        c[i] = f.coeff(i) / delta;
    }
    return IntPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Parsing.  Grammar: integer literals, x, ^ with integer powers, + - *,
// parentheses; whitespace ignored.  No implicit multiplication.
// ---------------------------------------------------------------------------

namespace detail {

struct PolyParser {
    std::string_view s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw precondition_error("parse error at position " + std::to_string(pos) + ": " + msg);
    }
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    IntPoly parse_expr() {
        IntPoly acc = parse_term();
        for (;;) {
            if (eat('+'))
                acc = acc + parse_term();
            else if (eat('-'))
                acc = acc - parse_term();
            else
                return acc;
        }
    }
    IntPoly parse_term() {
        IntPoly acc = parse_factor();
        while (eat('*')) acc = acc * parse_factor();
        return acc;
    }
    IntPoly parse_factor() {
        int sign = 1;
        for (;;) {
            if (eat('-'))
                sign = -sign;
            else if (!eat('+'))
                break;
        }
        IntPoly p = parse_power();
        return sign < 0 ? -p : p;
    }
    IntPoly parse_power() {
        IntPoly base = parse_atom();
        if (!eat('^')) return base;
        skip_ws();
        unsigned long e = parse_uint("exponent");
        if (e > 64) fail("exponent too large");
        IntPoly acc = IntPoly::constant(1);
        IntPoly sq = base;
        while (e > 0) {
            if (e & 1) acc = acc * sq;
            e >>= 1;
            if (e) sq = sq * sq;
        }
        return acc;
    }
    IntPoly parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            IntPoly inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x' || c == 'X') {
            ++pos;
            return IntPoly{0, 1};
        }
        if (c >= '0' && c <= '9') {
            std::size_t start = pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
            if (pos < s.size() && (s[pos] == '.' || s[pos] == '/')) fail("non-integer coefficient");
            Int v(std::string(s.substr(start, pos - start)), 10);
            return IntPoly::constant(v);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    unsigned long parse_uint(const char* what) {
        skip_ws();
        if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') fail(std::string("expected ") + what);
        unsigned long v = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            v = v * 10 + static_cast<unsigned long>(s[pos] - '0');
            if (v > 1'000'000) fail("exponent too large");
            ++pos;
        }
        return v;
    }
};

} // namespace detail

inline IntPoly parse_poly(std::string_view text) {
    detail::PolyParser p{text};
    IntPoly r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

// ---------------------------------------------------------------------------
// Roots modulo a prime.  Exhaustive scan; the pipeline primes are small.
// ---------------------------------------------------------------------------

struct ModRoot {
    long root;
    bool simple; // f'(root) != 0 mod q
};

inline std::vector<ModRoot> roots_mod(const IntPoly& f, const Int& q,
                                      const Int& scan_bound = Int(1'000'000)) {
    if (!is_prime(q)) throw precondition_error("roots_mod: q is not prime");
    if (q > scan_bound) throw budget_error("roots_mod: q exceeds the scan bound");
    const long qq = q.get_si();
    std::vector<long> fq(f.coeffs().size()), dq;
    bool all_zero = true;
    for (std::size_t i = 0; i < fq.size(); ++i) {
        fq[i] = mpz_fdiv_ui(f.coeff(i).get_mpz_t(), qq);
        if (fq[i] != 0) all_zero = false;
    }
    if (all_zero) throw precondition_error("roots_mod: f is identically zero mod q");
    IntPoly d = f.derivative();
    dq.resize(d.coeffs().size());
    for (std::size_t i = 0; i < dq.size(); ++i) dq[i] = mpz_fdiv_ui(d.coeff(i).get_mpz_t(), qq);

    auto horner = [qq](const std::vector<long>& c, long x) {
        long acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % qq;
        return acc;
    };
    std::vector<ModRoot> out;
    for (long a = 0; a < qq; ++a)
        if (horner(fq, a) == 0) out.push_back({a, horner(dq, a) != 0});
    return out;
}

// ---------------------------------------------------------------------------
// Binary forms F(x,y) = y^sigma * G(x,y) with G the homogenization of g.
// The total degree partial+sigma is always even.
// ---------------------------------------------------------------------------

struct BinaryForm {
    std::vector<Int> coeff; // coeff[i] multiplies x^i y^{d-i}
    int partial_degree = 0; // degree of the dehomogenized polynomial
    int sigma = 0;          // parity padding, 0 or 1

    int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

inline BinaryForm binary_form(const IntPoly& g) {
    if (g.degree() < 1) throw precondition_error("binary_form: g must be nonconstant");
    if (g.coeff(0) == 0) throw precondition_error("binary_form: g(0) must be nonzero");
    if (discriminant(g) == 0) throw precondition_error("binary_form: disc g must be nonzero");
    BinaryForm F;
    F.partial_degree = g.degree();
    F.sigma = F.partial_degree % 2;
    F.coeff.assign(F.partial_degree + F.sigma + 1, Int(0));
    for (int i = 0; i <= F.partial_degree; ++i) F.coeff[i] = g.coeff(i);
    return F;
}

inline Int eval_form(const BinaryForm& F, const Int& alpha, const Int& beta) {
    const int d = F.degree();
    Int acc = 0;
    Int ap = 1;
    std::vector<Int> bp(d + 1);
    bp[0] = 1;
    for (int i = 1; i <= d; ++i) bp[i] = bp[i - 1] * beta;
    for (int i = 0; i <= d; ++i) {
        acc += F.coeff[i] * ap * bp[d - i];
        ap *= alpha;
    }
    return acc;
}

// F(x, kx + y); total degree preserved, and so is the y^d coefficient.
inline BinaryForm shear_form(const BinaryForm& F, const Int& k) {
    const int d = F.degree();
    BinaryForm out;
    out.partial_degree = F.partial_degree;
    out.sigma = F.sigma;
    out.coeff.assign(d + 1, Int(0));
    for (int i = 0; i <= d; ++i) {
        if (F.coeff[i] == 0) continue;
        const int m = d - i; // expand (k x + y)^m
        Int kj = 1;
        for (int j = 0; j <= m; ++j) {
            Int binom;
            mpz_bin_uiui(binom.get_mpz_t(), m, j);
            out.coeff[i + j] += F.coeff[i] * binom * kj;
            kj *= k;
        }
    }
    return out;
}

// F(x, 1) as a polynomial; inverse of homogenization up to the y padding.
inline IntPoly dehomogenize(const BinaryForm& F) {
    return IntPoly(std::vector<Int>(F.coeff.begin(), F.coeff.end()));
}

} // namespace twists
