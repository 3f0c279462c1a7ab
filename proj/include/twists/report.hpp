#pragma once

// JSON views of every report type and the reverse direction: re-reading a
// report and re-checking its arithmetic claims from the document alone.
// All big integers are decimal strings; rationals are "num" or "num/den".
// Key order is fixed, so identical inputs serialize byte-identically.

#include <string>
#include <vector>

#include <json.hpp>

#include "construct.hpp"
#include "scan.hpp"

namespace twists {

using Json = nlohmann::ordered_json;

inline std::string int_str(const Int& v) { return v.get_str(); }

inline std::string rat_str(const Rat& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline Int int_from(const Json& j) { return Int(j.get<std::string>(), 10); }

inline Rat rat_from(const Json& j) {
    Rat r(j.get<std::string>());
    r.canonicalize();
    return r;
}

inline Json to_json(const PAdicShape& s) {
    return Json{{"D", int_str(s.D)},   {"eps", s.eps},          {"k", s.k},
                {"t", int_str(s.t)},   {"u", int_str(s.u)},     {"delta", int_str(s.delta)}};
}

inline Json to_json(const SWitness& w) {
    return Json{{"p", int_str(w.p)},   {"r", int_str(w.r)},   {"v", w.v},
                {"h", int_str(w.h)},   {"x0", int_str(w.x0)}, {"y0", int_str(w.y0)},
                {"z0", int_str(w.z0)}};
}

inline SWitness switness_from(const Json& j) {
    SWitness w;
    w.p = int_from(j.at("p"));
    w.r = int_from(j.at("r"));
    w.v = j.at("v").get<unsigned long>();
    w.h = int_from(j.at("h"));
    w.x0 = int_from(j.at("x0"));
    w.y0 = int_from(j.at("y0"));
    w.z0 = int_from(j.at("z0"));
    return w;
}

inline Json to_json(const TwistSetup& s) {
    Json factors = Json::array();
    for (const auto& [poly, mult] : s.factors)
        factors.push_back(Json{{"poly", poly.to_string()}, {"multiplicity", mult}});
    return Json{{"poly", s.f.to_string()},
                {"p", int_str(s.p)},
                {"disc", int_str(discriminant(s.f))},
                {"genus", s.genus},
                {"lc", int_str(s.f.lc())},
                {"shape", to_json(s.shape)},
                {"factors", factors},
                {"large_prime_ok", s.large_prime_ok},
                {"reasons", s.reasons},
                {"factor_disc_ok", s.factor_disc_ok}};
}

inline Json to_json(const TwistWitness& w) {
    Json source = w.kind == TwistKind::integral
                      ? Json{{"n", int_str(w.alpha)}}
                      : Json{{"alpha", int_str(w.alpha)}, {"beta", int_str(w.beta)}};
    return Json{{"d", int_str(w.d)},
                {"kind", w.kind == TwistKind::integral ? "integral" : "rational"},
                {"x", rat_str(w.x)},
                {"y", rat_str(w.y)},
                {"source", source}};
}

inline TwistWitness twist_from(const Json& j) {
    TwistWitness w;
    w.d = int_from(j.at("d"));
    w.kind = j.at("kind").get<std::string>() == "integral" ? TwistKind::integral
                                                           : TwistKind::rational;
    w.x = rat_from(j.at("x"));
    w.y = rat_from(j.at("y"));
    const Json& s = j.at("source");
    if (w.kind == TwistKind::integral) {
        w.alpha = int_from(s.at("n"));
        w.beta = 1;
    } else {
        w.alpha = int_from(s.at("alpha"));
        w.beta = int_from(s.at("beta"));
    }
    return w;
}

inline Json to_json(const ConstructionContext& ctx) {
    Json sides = Json::array();
    for (const SidePrime& sp : ctx.side_primes)
        sides.push_back(Json{{"s", int_str(sp.s)}, {"e", sp.e}, {"n", int_str(sp.n)}});
    Json form = Json::array();
    for (const Int& c : ctx.F.coeff) form.push_back(int_str(c));
    return Json{{"poly", ctx.f.to_string()},
                {"p", int_str(ctx.p)},
                {"r", int_str(ctx.r)},
                {"v", ctx.v},
                {"witness", to_json(ctx.witness)},
                {"shape", to_json(ctx.shape)},
                {"q", int_str(ctx.q)},
                {"m", int_str(ctx.m)},
                {"side_primes", sides},
                {"b", int_str(ctx.b)},
                {"a", int_str(ctx.a)},
                {"Delta", int_str(ctx.Delta)},
                {"g", ctx.g.to_string()},
                {"form", Json{{"coeff", form},
                              {"partial_degree", ctx.F.partial_degree},
                              {"sigma", ctx.F.sigma}}}};
}

inline Json to_json(const RpReport& rep) {
    Json entries = Json::object();
    for (const auto& [r, w] : rep.entries) entries[std::to_string(r)] = to_json(w);
    Json residues = Json::array();
    for (long r : rep.residues()) residues.push_back(r);
    return Json{{"p", int_str(rep.p)},
                {"scanned_range", rep.scanned_range},
                {"residues", residues},
                {"entries", entries},
                {"shape", shape_label_name(rep.shape)},
                {"skipped", rep.skipped}};
}

inline Json to_json(const DensityReport& rep) {
    return Json{{"count", rep.count}, {"ratio", rat_str(rep.ratio)}, {"skipped", rep.skipped}};
}

inline Json to_json(const std::vector<GreavesEntry>& entries) {
    Json out = Json::array();
    for (const GreavesEntry& e : entries)
        out.push_back(
            Json{{"l", int_str(e.l)}, {"alpha", int_str(e.alpha)}, {"beta", int_str(e.beta)}});
    return out;
}

// Re-check a full CLI report from the document alone: parse the polynomial
// back, rebuild each witness, and re-run the arithmetic identities.
inline bool verify_report(const Json& doc) {
    const std::string command = doc.at("command").get<std::string>();
    const Json& config = doc.at("config");
    const Json& result = doc.at("result");
    const IntPoly f = parse_poly(config.at("poly").get<std::string>());

    auto check_twists = [&](const Json& list, const Int& p, const Int& r) {
        for (const Json& tj : list) {
            TwistWitness w = twist_from(tj);
            if (!verify_twist(f, w)) return false;
            if ((w.d - r) % p != 0) return false;
        }
        return true;
    };

    if (command == "analyze") {
        if (int_from(result.at("disc")) != discriminant(f)) return false;
        if (int_from(result.at("shape").at("D")) != fixed_divisor(f)) return false;
        return true;
    }
    if (command == "scheck") {
        const Int p = int_from(config.at("p"));
        if (result.at("witness").is_null()) return true;
        SWitness w = switness_from(result.at("witness"));
        return verify_switness(f, p, w);
    }
    if (command == "construct" || command == "rational") {
        const Json& ctx = result.at("context");
        const Int p = int_from(config.at("p"));
        const Int r = int_from(ctx.at("r"));
        const Int a = int_from(ctx.at("a"));
        const Int b = int_from(ctx.at("b"));
        const Int Delta = int_from(ctx.at("Delta"));
        const IntPoly g = parse_poly(ctx.at("g").get<std::string>());
        if (compose_affine(f, a, b) != g * Delta) return false;
        SWitness w = switness_from(ctx.at("witness"));
        if (!verify_switness(f, p, w)) return false;
        return check_twists(result.at("twists"), p, r);
    }
    if (command == "rp") {
        const Int p = int_from(config.at("p"));
        for (const char* section : {"integral", "rational"}) {
            if (!result.contains(section)) continue;
            const Json& rep = result.at(section);
            for (const auto& [key, tj] : rep.at("entries").items()) {
                TwistWitness w = twist_from(tj);
                if (!verify_twist(f, w)) return false;
                const Int res = ((w.d % p) + p) % p;
                if (res == 0 || res.get_str() != key) return false;
            }
        }
        return true;
    }
    if (command == "density") {
        const unsigned long count = result.at("count").get<unsigned long>();
        const unsigned long B = config.at("range").get<unsigned long>();
        Rat expect(count, B);
        expect.canonicalize();
        return rat_from(result.at("ratio")) == expect;
    }
    if (command == "greaves") {
        const Json& ctx = result.at("context");
        const IntPoly g = parse_poly(ctx.at("g").get<std::string>());
        const Int pD = int_from(config.at("p")) * int_from(ctx.at("shape").at("D"));
        const Int q = int_from(ctx.at("q"));
        const BinaryForm F = binary_form(g);
        for (const Json& ej : result.at("entries")) {
            const Int l = int_from(ej.at("l"));
            const Int alpha = int_from(ej.at("alpha"));
            const Int beta = int_from(ej.at("beta"));
            if ((alpha - q) % pD != 0 || (beta - 1) % pD != 0) return false;
            if (eval_form(F, alpha, beta) % (l * l) == 0) return false;
        }
        return true;
    }
    return false;
}

} // namespace twists
