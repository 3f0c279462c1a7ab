// twistscan: search for squarefree twists d of d*y^2 = f(x) lying in a fixed
// residue class mod p, decide the local statement S(r,v), and map the
// residues reached by squarefree values of f empirically.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <twists/twists.hpp>

namespace {

using namespace twists;

struct Options {
    std::string poly;
    std::string p = "2";
    std::string r = "1";
    unsigned long v = 0;
    unsigned long count = 5;     // construct: twists to emit
    unsigned long cap = 0;       // rational: emission cap, 0 = no cap
    long range = 500;            // rp: scan bound X
    long bound = 1000;           // density: B; greaves: prime bound for l
    long height = 60;
    unsigned long q_bound = 1'000'000;
    unsigned jobs = 1;
    bool json_out = false;
};

FactorConfig factor_config_from_env() {
    FactorConfig cfg;
    if (const char* env = std::getenv("TWIST_FACTOR_BUDGET")) {
        char* end = nullptr;
        const unsigned long long val = std::strtoull(env, &end, 10);
        if (env[0] == '\0' || end == nullptr || *end != '\0' || val == 0)
            throw precondition_error("TWIST_FACTOR_BUDGET must be a positive integer");
        cfg.rho_budget = val;
    }
    return cfg;
}

Int parse_int(const std::string& text, const char* what) {
    try {
        return Int(text, 10);
    } catch (const std::invalid_argument&) {
        throw precondition_error(std::string(what) + " is not an integer: " + text);
    }
}

Int require_prime(const std::string& text) {
    const Int p = parse_int(text, "p");
    if (!is_prime(p)) throw precondition_error("p = " + text + " is not prime");
    return p;
}

void append_setup_warnings(const TwistSetup& setup, std::vector<std::string>& warnings) {
    if (!setup.large_prime_ok) {
        std::string msg = "large-prime conditions fail:";
        for (const std::string& reason : setup.reasons) msg += " [" + reason + "]";
        warnings.push_back(msg);
    }
    if (!setup.factor_disc_ok)
        warnings.push_back("no irreducible factor of f has discriminant coprime to p; "
                           "the existence guarantee behind the construction does not apply");
}

void print_shape(const PAdicShape& s) {
    std::cout << "D = " << s.D << "  (eps = " << s.eps << ", k = " << s.k << ", t = " << s.t
              << ", u = " << s.u << ", delta = " << s.delta << ")\n";
}

void print_switness(const SWitness& w) {
    std::cout << "witness: h = " << w.h << ", x0 = " << w.x0 << ", y0 = " << w.y0
              << " (z0 = " << w.z0 << ")\n";
}

void print_context(const ConstructionContext& ctx) {
    std::cout << "q = " << ctx.q << ", m = " << ctx.m << "\n";
    for (const SidePrime& sp : ctx.side_primes)
        std::cout << "side prime s = " << sp.s << ", e = " << sp.e << ", n_s = " << sp.n << "\n";
    std::cout << "b = " << ctx.b << ", a = " << ctx.a << ", Delta = " << ctx.Delta << "\n";
    std::cout << "g = " << ctx.g.to_string() << "\n";
}

void print_twist(const TwistWitness& w) {
    std::cout << "d = " << w.d << "  point (" << rat_str(w.x) << ", " << rat_str(w.y) << ")";
    if (w.kind == TwistKind::integral)
        std::cout << "  [n = " << w.alpha << "]\n";
    else
        std::cout << "  [alpha = " << w.alpha << ", beta = " << w.beta << "]\n";
}

void print_rp(const RpReport& rep) {
    std::cout << "scan: " << rep.scanned_range << "\n";
    std::cout << "residues:";
    for (long r : rep.residues()) std::cout << " " << r;
    std::cout << "\nshape: " << shape_label_name(rep.shape) << "\n";
    for (const auto& [r, w] : rep.entries) {
        std::cout << "  " << r << ": ";
        print_twist(w);
    }
    if (rep.skipped) std::cout << "skipped (factor budget): " << rep.skipped << "\n";
}

void emit(const Json& doc, bool json_out) {
    if (json_out) std::cout << doc.dump(2) << "\n";
}

int run_analyze(const Options& opt) {
    const IntPoly f = parse_poly(opt.poly);
    const Int p = require_prime(opt.p);
    const TwistSetup setup = analyze(f, p);
    std::vector<std::string> warnings;
    append_setup_warnings(setup, warnings);

    Json doc{{"command", "analyze"},
             {"config", Json{{"poly", opt.poly}, {"p", opt.p}}},
             {"result", to_json(setup)},
             {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    std::cout << "f = " << f.to_string() << ", p = " << p << "\n";
    print_shape(setup.shape);
    const Int threshold = Int(4) * setup.genus * setup.genus + Int(6) * setup.genus + 4;
    std::cout << "disc = " << discriminant(f) << ", genus = " << setup.genus
              << ", threshold 4g^2+6g+4 = " << threshold << "\n";
    std::cout << "large-prime conditions: " << (setup.large_prime_ok ? "ok" : "fail") << "\n";
    for (const std::string& reason : setup.reasons) std::cout << "  " << reason << "\n";
    std::cout << "factors:";
    for (const auto& [poly, mult] : setup.factors) {
        std::cout << " (" << poly.to_string() << ")";
        if (mult > 1) std::cout << "^" << mult;
    }
    std::cout << "\n";
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_scheck(const Options& opt) {
    const IntPoly f = parse_poly(opt.poly);
    const Int p = require_prime(opt.p);
    const Int r = parse_int(opt.r, "r");
    const auto witness = s_check(f, p, r, opt.v);

    Json result{{"statement", "S(" + r.get_str() + "," + std::to_string(opt.v) + ")"},
                {"holds", witness.has_value()},
                {"witness", witness ? to_json(*witness) : Json(nullptr)}};
    Json doc{{"command", "scheck"},
             {"config", Json{{"poly", opt.poly}, {"p", opt.p}, {"r", opt.r}, {"v", opt.v}}},
             {"result", result},
             {"warnings", Json::array()}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    std::cout << "S(" << r << "," << opt.v << ") at p = " << p << ": "
              << (witness ? "holds" : "no witness (full scan)") << "\n";
    if (witness) print_switness(*witness);
    return 0;
}

struct BuiltContext {
    bool have = false;
    ConstructionContext ctx;
};

BuiltContext make_context(const Options& opt, const FactorConfig& fcfg,
                          std::vector<std::string>& warnings) {
    const IntPoly f = parse_poly(opt.poly);
    const Int p = require_prime(opt.p);
    const Int r = parse_int(opt.r, "r");
    const auto witness = s_check(f, p, r, opt.v);
    BuiltContext out;
    if (!witness) {
        warnings.push_back("S(" + r.get_str() + "," + std::to_string(opt.v) +
                           ") has no witness; nothing to construct");
        return out;
    }
    out.ctx = build_context(f, p, r, opt.v, *witness, Int(opt.q_bound), fcfg);
    out.have = true;
    append_setup_warnings(out.ctx.setup, warnings);
    return out;
}

int run_construct(const Options& opt) {
    const FactorConfig fcfg = factor_config_from_env();
    std::vector<std::string> warnings;
    const BuiltContext built = make_context(opt, fcfg, warnings);

    Json result{{"context", Json(nullptr)}, {"twists", Json::array()}, {"skipped", 0}};
    if (built.have) {
        const TwistStream stream = integral_twists_count(built.ctx, opt.count, 1'000'000, fcfg);
        result["context"] = to_json(built.ctx);
        for (const TwistWitness& w : stream.twists) result["twists"].push_back(to_json(w));
        result["skipped"] = stream.skipped;
        if (stream.skipped)
            warnings.push_back(std::to_string(stream.skipped) +
                               " value(s) skipped: factorization budget exhausted");
    }
    Json doc{{"command", "construct"},
             {"config", Json{{"poly", opt.poly},
                             {"p", opt.p},
                             {"r", opt.r},
                             {"v", opt.v},
                             {"count", opt.count},
                             {"q_bound", opt.q_bound},
                             {"factor_budget", fcfg.rho_budget}}},
             {"result", result},
             {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    if (!built.have) {
        std::cout << "no witness for S(" << opt.r << "," << opt.v << "); nothing to construct\n";
    } else {
        print_switness(built.ctx.witness);
        print_context(built.ctx);
        for (const Json& tw : result["twists"]) {
            print_twist(twist_from(tw));
        }
        if (result["skipped"].get<unsigned long>())
            std::cout << "skipped (factor budget): " << result["skipped"] << "\n";
    }
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_rational(const Options& opt) {
    const FactorConfig fcfg = factor_config_from_env();
    std::vector<std::string> warnings;
    const BuiltContext built = make_context(opt, fcfg, warnings);

    Json result{{"context", Json(nullptr)}, {"twists", Json::array()}, {"skipped", 0}};
    if (built.have) {
        const TwistStream stream = rational_twists(built.ctx, Int(opt.height), opt.cap, fcfg);
        result["context"] = to_json(built.ctx);
        for (const TwistWitness& w : stream.twists) result["twists"].push_back(to_json(w));
        result["skipped"] = stream.skipped;
        if (stream.skipped)
            warnings.push_back(std::to_string(stream.skipped) +
                               " value(s) skipped: factorization budget exhausted");
    }
    Json doc{{"command", "rational"},
             {"config", Json{{"poly", opt.poly},
                             {"p", opt.p},
                             {"r", opt.r},
                             {"v", opt.v},
                             {"count", opt.cap},
                             {"height", opt.height},
                             {"q_bound", opt.q_bound},
                             {"factor_budget", fcfg.rho_budget}}},
             {"result", result},
             {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    if (!built.have) {
        std::cout << "no witness for S(" << opt.r << "," << opt.v << "); nothing to construct\n";
    } else {
        print_switness(built.ctx.witness);
        print_context(built.ctx);
        for (const Json& tw : result["twists"]) print_twist(twist_from(tw));
        if (result["skipped"].get<unsigned long>())
            std::cout << "skipped (factor budget): " << result["skipped"] << "\n";
    }
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_rp(const Options& opt, bool with_height) {
    const FactorConfig fcfg = factor_config_from_env();
    const IntPoly f = parse_poly(opt.poly);
    const Int p = require_prime(opt.p);
    std::vector<std::string> warnings;

    const RpReport integral = empirical_rp_integral(f, p, opt.range, opt.jobs, fcfg);
    if (integral.skipped)
        warnings.push_back(std::to_string(integral.skipped) +
                           " integral value(s) skipped: factorization budget exhausted");
    Json result{{"integral", to_json(integral)}};
    RpReport rational;
    if (with_height) {
        rational = empirical_rp_rational(f, p, opt.height, opt.jobs, fcfg);
        if (rational.skipped)
            warnings.push_back(std::to_string(rational.skipped) +
                               " rational value(s) skipped: factorization budget exhausted");
        result["rational"] = to_json(rational);
    }
    Json config{{"poly", opt.poly},
                {"p", opt.p},
                {"range", opt.range},
                {"jobs", opt.jobs},
                {"factor_budget", fcfg.rho_budget}};
    if (with_height) config["height"] = opt.height;
    Json doc{{"command", "rp"}, {"config", config}, {"result", result}, {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    std::cout << "R(" << p << ") lower bound, integral scan\n";
    print_rp(integral);
    if (with_height) {
        std::cout << "R(" << p << ") lower bound, rational scan\n";
        print_rp(rational);
    }
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_density(const Options& opt) {
    const FactorConfig fcfg = factor_config_from_env();
    const IntPoly f = parse_poly(opt.poly);
    if (opt.bound < 1) throw precondition_error("density: --range must be positive");
    const DensityReport rep =
        squarefree_density(f, static_cast<unsigned long>(opt.bound), fcfg);
    std::vector<std::string> warnings;
    if (rep.skipped)
        warnings.push_back(std::to_string(rep.skipped) +
                           " value(s) skipped: factorization budget exhausted");
    Json doc{{"command", "density"},
             {"config", Json{{"poly", opt.poly},
                             {"range", static_cast<unsigned long>(opt.bound)},
                             {"factor_budget", fcfg.rho_budget}}},
             {"result", to_json(rep)},
             {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    std::cout << rep.count << " of " << opt.bound << " values squarefree (ratio "
              << rat_str(rep.ratio) << ")\n";
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_greaves(const Options& opt) {
    const FactorConfig fcfg = factor_config_from_env();
    std::vector<std::string> warnings;
    const BuiltContext built = make_context(opt, fcfg, warnings);

    Json result{{"context", Json(nullptr)}, {"entries", Json::array()}};
    std::vector<GreavesEntry> entries;
    if (built.have) {
        entries = greaves_precheck(built.ctx, Int(opt.bound));
        result["context"] = to_json(built.ctx);
        result["entries"] = to_json(entries);
    }
    Json doc{{"command", "greaves"},
             {"config", Json{{"poly", opt.poly},
                             {"p", opt.p},
                             {"r", opt.r},
                             {"v", opt.v},
                             {"range", opt.bound},
                             {"q_bound", opt.q_bound}}},
             {"result", result},
             {"warnings", warnings}};
    if (opt.json_out) {
        emit(doc, true);
        return 0;
    }
    if (!built.have) {
        std::cout << "no witness for S(" << opt.r << "," << opt.v << "); nothing to check\n";
    } else {
        std::cout << "all primes l <= " << opt.bound << " admit pairs (alpha, beta) = (q, 1) mod p*D"
                  << " with l^2 not dividing F(alpha, beta)\n";
        std::size_t shown = 0;
        for (const GreavesEntry& e : entries) {
            if (shown++ >= 10) break;
            std::cout << "  l = " << e.l << ": alpha = " << e.alpha << ", beta = " << e.beta
                      << "\n";
        }
        if (entries.size() > shown) std::cout << "  ... " << entries.size() << " entries total\n";
    }
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"search for squarefree twists d of d*y^2 = f(x) in a residue class mod p"};
    app.require_subcommand(1);

    Options opt;
    bool saw_height = false;

    auto add_common = [&](CLI::App* cmd, bool need_p, bool need_r) {
        cmd->add_option("-f,--poly", opt.poly, "polynomial in x with integer coefficients")
            ->required();
        if (need_p) cmd->add_option("-p,--prime", opt.p, "prime modulus")->required();
        if (need_r) cmd->add_option("-r", opt.r, "target residue mod p (default 1)");
        cmd->add_flag("--json", opt.json_out, "machine-readable JSON on stdout");
    };

    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "fixed divisor, p-adic shape, large-prime conditions, factorization");
    add_common(analyze_cmd, true, false);

    CLI::App* scheck_cmd = app.add_subcommand(
        "scheck", "decide S(r,v): h*y0^2 = f(x0) mod p^{2(v+eps)+1} with h = r mod p");
    add_common(scheck_cmd, true, true);
    scheck_cmd->add_option("-v", opt.v, "level v (default 0)");

    CLI::App* construct_cmd = app.add_subcommand(
        "construct", "build the twisting context and emit integral-point twists");
    add_common(construct_cmd, true, true);
    construct_cmd->add_option("-v", opt.v, "level v (default 0)");
    construct_cmd->add_option("--count", opt.count, "number of twists to emit (default 5)");
    construct_cmd->add_option("--q-bound", opt.q_bound, "progression search bound (default 10^6)");

    CLI::App* rational_cmd = app.add_subcommand(
        "rational", "emit rational-point twists over coprime height-bounded pairs");
    add_common(rational_cmd, true, true);
    rational_cmd->add_option("-v", opt.v, "level v (default 0)");
    rational_cmd->add_option("--count", opt.cap, "cap on emitted twists (default: no cap)");
    rational_cmd->add_option("--height", opt.height, "height bound for (alpha, beta) (default 60)");
    rational_cmd->add_option("--q-bound", opt.q_bound, "progression search bound (default 10^6)");

    CLI::App* rp_cmd = app.add_subcommand(
        "rp", "empirical residue map from an integral scan (add --height for a rational scan)");
    add_common(rp_cmd, true, false);
    rp_cmd->add_option("--range", opt.range, "integral scan bound X: n in [-X, X] (default 500)");
    rp_cmd->add_option("--height", opt.height, "also scan coprime pairs up to this height")
        ->each([&](const std::string&) { saw_height = true; });
    rp_cmd->add_option("--jobs", opt.jobs, "worker threads for the scans (default 1)");

    CLI::App* density_cmd =
        app.add_subcommand("density", "count n in [1, B] with f(n) squarefree and nonzero");
    add_common(density_cmd, false, false);
    density_cmd->add_option("--range", opt.bound, "upper bound B (default 1000)");

    CLI::App* greaves_cmd = app.add_subcommand(
        "greaves",
        "per prime l, find (alpha, beta) = (q, 1) mod p*D with l^2 not dividing F(alpha, beta)");
    add_common(greaves_cmd, true, true);
    greaves_cmd->add_option("-v", opt.v, "level v (default 0)");
    greaves_cmd->add_option("--range", opt.bound, "prime bound for l (default 1000)");
    greaves_cmd->add_option("--q-bound", opt.q_bound, "progression search bound (default 10^6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) return run_analyze(opt);
        if (app.got_subcommand(scheck_cmd)) return run_scheck(opt);
        if (app.got_subcommand(construct_cmd)) return run_construct(opt);
        if (app.got_subcommand(rational_cmd)) return run_rational(opt);
        if (app.got_subcommand(rp_cmd)) return run_rp(opt, saw_height);
        if (app.got_subcommand(density_cmd)) return run_density(opt);
        if (app.got_subcommand(greaves_cmd)) return run_greaves(opt);
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
