#include "clusterkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "clusterkit/basis_builder.hpp"
#include "clusterkit/tube_algebra.hpp"

namespace clusterkit {
namespace {

struct RunConfig {
    std::string name = "kronecker";
    std::string file;
    std::string inline_json;
    std::uint64_t seed = 0;
    std::vector<long long> primes;
    int box = 2; // multiple of delta
    int horizon = 0;
    std::string format = "human";

    bool json() const { return format == "json"; }
};

Quiver load_quiver(const RunConfig& cfg) {
    if (!cfg.inline_json.empty()) return Quiver::from_json(cfg.inline_json);
    if (!cfg.file.empty()) {
        std::ifstream in(cfg.file);
        if (!in) fail(errc::usage, "cannot read quiver file " + cfg.file);
        std::stringstream buf;
        buf << in.rdbuf();
        return Quiver::from_json(buf.str());
    }
    return builtin_quiver(cfg.name);
}

CCContext make_context(const Quiver& q, const RunConfig& cfg) {
    CCOptions opts;
    opts.horizon = cfg.horizon;
    opts.seed = cfg.seed;
    EulerData ed = euler_data(q);
    if (!ed.delta.empty()) opts.box = scale(ed.delta, std::max(cfg.box, 1));
    return CCContext(q, opts);
}

nlohmann::json int_json(const mpz_class& c) {
    if (c.fits_slong_p()) return nlohmann::json(c.get_si());
    return nlohmann::json(c.get_str());
}

int exit_code_for(errc c) {
    switch (c) {
        case errc::identity_failed:
        case errc::not_in_span:
        case errc::non_integer_leading:
            return 1;
        case errc::internal:
        case errc::duplicate_dimension:
        case errc::incomplete_box:
        case errc::horizon_too_small:
        case errc::certification_failed:
            return 3;
        default:
            return 2;
    }
}

// ---- verify suites ---------------------------------------------------------

using Reports = std::vector<VerifyReport>;

VerifyReport plain_report(const std::string& identity, const std::string& params, bool pass,
                          int residual = 0) {
    VerifyReport rep;
    rep.identity = identity;
    rep.params = params;
    rep.pass = pass;
    rep.residual_terms = residual;
    return rep;
}

// Wraps a check that throws on failure into a pass/fail report.
VerifyReport guarded(const std::string& identity, const std::string& params,
                     const std::function<void()>& body) {
    try {
        body();
        return plain_report(identity, params, true);
    } catch (const ck_error& e) {
        VerifyReport rep = plain_report(identity, params, false);
        rep.params.insert(rep.params.size() - 1,
                          std::string(",\"error\":\"") + errc_name(e.code()) + "\"");
        return rep;
    }
}

Reports suite_ar(CCContext& cc) {
    Reports out;
    const int n = cc.quiver().vertices;
    for (int v = 1; v <= n; ++v)
        for (int k = 1; k <= 2; ++k) out.push_back(cc.verify_ar(Indec::preproj(v, k)));
    for (int v = 1; v <= n; ++v)
        for (int k = 0; k <= 1; ++k) out.push_back(cc.verify_ar(Indec::preinj(v, k)));
    for (int t = 1; t <= (int)cc.tubes().size(); ++t) {
        int rank = cc.tubes()[t - 1].rank;
        for (int s = 1; s <= rank; ++s)
            for (int len = 1; len <= rank; ++len)
                out.push_back(cc.verify_ar(Indec::tube(t, s, len)));
    }
    out.push_back(cc.verify_ar(Indec::generic_reg(1)));
    out.push_back(cc.verify_ar(Indec::generic_reg(2)));
    return out;
}

Reports suite_tube(CCContext& cc) {
    Reports out = chebyshev_sweep(cc, 6);
    for (int t = 1; t <= (int)cc.tubes().size(); ++t) {
        TubeContext ctx(cc, t);
        Reports sweep = product_case_sweep(ctx, 4, 1);
        out.insert(out.end(), sweep.begin(), sweep.end());
    }
    return out;
}

Reports suite_difference(CCContext& cc) {
    Reports out;
    for (int t = 1; t <= (int)cc.tubes().size(); ++t) {
        TubeContext ctx(cc, t);
        for (int i = 1; i <= ctx.rank(); ++i) {
            out.push_back(difference_check(ctx, i, ctx.rank()));
            out.push_back(difference_check(ctx, i, ctx.rank() + 2));
        }
    }
    if (!cc.tubes().empty()) {
        Reports cmp = compare_delta_variants(cc, 1);
        out.insert(out.end(), cmp.begin(), cmp.end());
    }
    return out;
}

// The central-sink D_tilde(4) generic value, written out in full.
Laurent d4_golden() {
    Laurent want = Laurent::zero(5);
    auto term = [&](std::initializer_list<int> e, int c) {
        want += Laurent::monomial(5, Exp(e.begin(), e.end()), c);
    };
    term({-2, -1, -1, -1, -1}, 1);
    term({-1, -1, -1, -1, -1}, 4);
    term({2, -1, -1, -1, -1}, 1);
    term({1, -1, -1, -1, -1}, 4);
    term({0, -1, -1, -1, -1}, 6);
    term({-2, 1, 1, 1, 1}, 1);
    term({-2, 0, 0, 0, 0}, 2);
    term({-1, 0, 0, 0, 0}, 4);
    return want;
}

Reports suite_d4(const RunConfig& cfg, std::ostream& err) {
    Quiver q = builtin_quiver("D4tilde");
    CCContext cc = make_context(q, cfg);
    Reports out;

    Laurent want = d4_golden();
    Laurent rec = cc.x_ndelta(1);
    VerifyReport golden = plain_report("d4_golden_recursion", "{\"dim\":\"delta\"}", rec == want,
                                       (int)(rec - want).term_count());
    out.push_back(golden);
    if (!cfg.json()) err << "X_delta = " << rec.pretty() << "\n";

    CountOptions co;
    co.primes = cfg.primes;
    co.min_prime = 5; // the generic regular point needs a nonempty open orbit mod p
    Laurent direct = cc_map_direct(q, module_family(q, ModuleKind::generic_delta(), cfg.seed), co);
    out.push_back(plain_report("d4_golden_direct", "{\"dim\":\"delta\"}", direct == want,
                               (int)(direct - want).term_count()));

    for (int n = 1; n <= 3; ++n) {
        Laurent lhs = cc.tube_x(1, 1, 2 * n);
        Laurent rhs = cc.x_ndelta(n) + cc.x_ndelta(n - 1);
        out.push_back(plain_report("d4_delta_variant", "{\"n\":" + std::to_string(n) + "}",
                                   lhs == rhs, (int)(lhs - rhs).term_count()));
        if (!cfg.json())
            err << "X_{" << n << "delta_1} = X_{" << n << "delta} + X_{" << n - 1
                << "delta}: " << (lhs == rhs ? "ok" : "FAILED") << "\n";
    }
    return out;
}

Reports suite_kronecker(const RunConfig& cfg) {
    Quiver q = builtin_quiver("kronecker");
    CCContext cc = make_context(q, cfg);
    Reports out;

    Laurent want = Laurent::zero(2);
    want += Laurent::monomial(2, {3, -2}, 1);
    want += Laurent::monomial(2, {1, -2}, 2);
    want += Laurent::monomial(2, {-1, -2}, 1);
    want += Laurent::monomial(2, {-1, 0}, 1);
    Laurent p1 = cc.x_of(Indec::preproj(1));
    out.push_back(plain_report("kronecker_projective_value", "{\"object\":\"P(1)\"}", p1 == want,
                               (int)(p1 - want).term_count()));

    DimVector den = cc.x_of(Indec::preproj(2, 1)).denominator_vector();
    out.push_back(plain_report("kronecker_tau_inverse_denominator",
                               "{\"object\":\"tau^-1 P(2)\"}", den == DimVector{2, 3}));

    Reports cheb = chebyshev_sweep(cc, 6);
    out.insert(out.end(), cheb.begin(), cheb.end());

    BasisCatalog cat(cc, scale(cc.euler().delta, 2), BasisFlavor::Bprime);
    BasisExpansion sq = cat.expand(cc.x_ndelta(1) * cc.x_ndelta(1));
    bool square_ok = sq.size() == 2 && sq[0].dim == DimVector{2, 2} && sq[0].coef == 1 &&
                     sq[1].dim == DimVector{0, 0} && sq[1].coef == 1;
    out.push_back(plain_report("kronecker_delta_square", "{}", square_ok));

    out.push_back(guarded("kronecker_simple_product", "{\"dim\":[1,1]}", [&] {
        BasisExpansion e = monomial_expand(q, cat, {1, 1});
        if (e.size() != 2 || e[1].dim != DimVector{-1, -1} || e[1].coef != 1)
            fail(errc::identity_failed, "unexpected monomial expansion");
    }));
    return out;
}

Reports suite_basis(CCContext& cc, const RunConfig& cfg) {
    Reports out;
    const EulerData& ed = cc.euler();
    const DimVector box = scale(ed.delta, 2);
    BasisCatalog cat(cc, box, BasisFlavor::Bprime);

    std::size_t volume = 1;
    for (int b : box) volume *= 2 * (std::size_t)b + 1;
    out.push_back(plain_report("basis_box_complete",
                               "{\"box\":" + std::to_string(2) + ",\"size\":" +
                                   std::to_string(cat.size()) + "}",
                               cat.size() == volume));

    bool alternating = true;
    {
        std::vector<int> in(cc.quiver().vertices, 0), outdeg(cc.quiver().vertices, 0);
        for (auto [a, b] : cc.quiver().arrows) ++outdeg[a], ++in[b];
        for (int v = 0; v < cc.quiver().vertices; ++v)
            if (in[v] && outdeg[v]) alternating = false;
    }
    bool dens_ok = true, corners_ok = true;
    for (const auto& el : cat.elements()) {
        const Laurent& v = cat.value(el.dim);
        dens_ok = dens_ok && v.denominator_vector() == el.dim;
        if (alternating) corners_ok = corners_ok && v.numerator_constant_term() == 1;
    }
    out.push_back(plain_report("basis_denominators", "{}", dens_ok));
    if (alternating) out.push_back(plain_report("basis_corner_terms", "{}", corners_ok));

    std::vector<const BasisElement*> small;
    for (const auto& el : cat.elements())
        if (is_nonneg(el.dim) && leq(el.dim, ed.delta)) small.push_back(&el);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
    out.push_back(guarded("basis_seeded_pairs", "{\"pairs\":50}", [&] {
        for (int trial = 0; trial < 50; ++trial) {
            const auto& a = *small[pick(rng)];
            const auto& b = *small[pick(rng)];
            BasisExpansion e = cat.expand(cat.value(a.dim) * cat.value(b.dim));
            DimVector sum = add(a.dim, b.dim);
            bool lead = false;
            for (const auto& t : e) lead = lead || (t.dim == sum && t.coef == 1);
            if (!lead) fail(errc::identity_failed, "missing unit leading term at " + show(sum));
        }
    }));

    out.push_back(guarded("basis_transition_unitriangular", "{\"box\":2}",
                          [&] { transition_matrix(cc.quiver(), box); }));

    out.push_back(guarded("basis_monomials", "{}", [&] {
        for (int v = 0; v < cc.quiver().vertices; ++v) {
            DimVector d(cc.quiver().vertices, 0);
            d[v] = 1;
            monomial_expand(cc.quiver(), cat, d);
        }
        monomial_expand(cc.quiver(), cat, ed.delta);
    }));
    return out;
}

int emit_reports(const std::string& suite, const Reports& reports, const RunConfig& cfg,
                 std::ostream& out) {
    bool all_pass = true;
    for (const auto& rep : reports) all_pass = all_pass && rep.pass;
    if (cfg.json()) {
        nlohmann::json j;
        j["suite"] = suite;
        j["pass"] = all_pass;
        auto arr = nlohmann::json::array();
        for (const auto& rep : reports) arr.push_back(nlohmann::json::parse(rep.to_json()));
        j["reports"] = std::move(arr);
        out << j.dump() << "\n";
    } else {
        for (const auto& rep : reports)
            out << (rep.pass ? "PASS " : "FAIL ") << rep.identity << " " << rep.params << "\n";
        out << (all_pass ? "OK" : "FAILED") << " " << suite << ": " << reports.size()
            << " checks\n";
    }
    return all_pass ? 0 : 1;
}

// ---- subcommands ------------------------------------------------------------

int cmd_quiver(const RunConfig& cfg, const std::string& what, std::ostream& out) {
    Quiver q = load_quiver(cfg);
    EulerData ed = euler_data(q);
    if (what == "show") {
        if (cfg.json()) {
            nlohmann::json j;
            j["quiver"] = nlohmann::json::parse(q.to_json());
            j["class"] = ed.cls.name();
            if (!ed.delta.empty()) j["delta"] = ed.delta;
            out << j.dump() << "\n";
        } else {
            out << ed.cls.name() << ", " << q.vertices << " vertices\n";
            for (auto [a, b] : q.arrows) out << "  " << a + 1 << " -> " << b + 1 << "\n";
            if (!ed.delta.empty()) out << "delta = " << show(ed.delta) << "\n";
        }
        return 0;
    }
    if (what == "roots") {
        if (ed.delta.empty()) fail(errc::not_affine, "roots listing needs an affine quiver");
        nlohmann::json arr = nlohmann::json::array();
        DimVector d(q.vertices, 0);
        while (true) {
            int c = 0;
            while (c < q.vertices && d[c] == ed.delta[c]) d[c++] = 0;
            if (c == q.vertices) break;
            ++d[c];
            if (ed.tits_q(d) == 1) {
                nlohmann::json r;
                r["dim"] = d;
                r["defect"] = ed.defect(d);
                arr.push_back(std::move(r));
            }
        }
        nlohmann::json im;
        im["dim"] = ed.delta;
        im["defect"] = 0;
        im["imaginary"] = true;
        arr.push_back(std::move(im));
        if (cfg.json()) {
            out << arr.dump() << "\n";
        } else {
            for (const auto& r : arr)
                out << show(DimVector(r["dim"].begin(), r["dim"].end())) << "  defect "
                    << (long long)r["defect"] << (r.contains("imaginary") ? "  (delta)" : "")
                    << "\n";
        }
        return 0;
    }
    if (what == "tubes") {
        if (ed.delta.empty()) fail(errc::not_affine, "tube listing needs an affine quiver");
        auto tubes = regular_simple_orbits(ed);
        if (cfg.json()) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& t : tubes) arr.push_back(nlohmann::json::parse(t.to_json()));
            out << arr.dump() << "\n";
        } else {
            for (const auto& t : tubes) {
                out << t.label << " rank " << t.rank << ":";
                for (const auto& s : t.simples) out << " " << show(s);
                out << "\n";
            }
        }
        return 0;
    }
    fail(errc::usage, "unknown quiver action '" + what + "' (show|roots|tubes)");
}

int cmd_ccvar(const RunConfig& cfg, const std::string& expr, std::ostream& out) {
    Quiver q = load_quiver(cfg);
    CCContext cc = make_context(q, cfg);
    ClusterObject obj = parse_object(expr);
    Laurent v = cc.x_of(obj);
    if (cfg.json()) {
        nlohmann::json j;
        j["object"] = show_object(obj);
        j["dim"] = cc.dim_of(obj);
        j["value"] = nlohmann::json::parse(v.to_json());
        out << j.dump() << "\n";
    } else {
        out << v.pretty() << "\n";
    }
    return 0;
}

DimVector parse_dims(const std::string& text, int n) {
    DimVector d;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        try {
            d.push_back(std::stoi(part));
        } catch (const std::exception&) {
            fail(errc::usage, "bad dimension entry '" + part + "'");
        }
    if ((int)d.size() != n)
        fail(errc::usage, "expected " + std::to_string(n) + " comma-separated entries");
    return d;
}

int cmd_oracle(const RunConfig& cfg, const std::string& dims_text, const std::string& e_text,
               std::ostream& out) {
    Quiver q = load_quiver(cfg);
    EulerData ed = euler_data(q);
    DimVector dims = parse_dims(dims_text, q.vertices);
    DimVector e = parse_dims(e_text, q.vertices);

    ModuleKind kind = ModuleKind::exceptional(dims);
    bool generic = false;
    if (!ed.delta.empty() && dims == ed.delta) {
        kind = ModuleKind::generic_delta();
        generic = true;
    } else if (!ed.delta.empty() && is_nonneg(dims) && !is_zero_vec(dims)) {
        for (int k = 2; k * ed.delta[0] <= dims[0] + 1; ++k)
            if (dims == scale(ed.delta, k)) {
                kind = ModuleKind::generic_regular(k);
                generic = true;
            }
    }
    CountOptions co;
    co.primes = cfg.primes;
    co.min_prime = generic ? 5 : 2;
    CountingPolynomial poly =
        counting_polynomial(module_family(q, kind, cfg.seed), e, co);

    if (cfg.json()) {
        nlohmann::json j;
        j["dims"] = dims;
        j["e"] = e;
        auto coeffs = nlohmann::json::array();
        for (const auto& c : poly.coeffs) coeffs.push_back(int_json(c));
        j["coeffs"] = std::move(coeffs);
        j["primes"] = poly.primes_used;
        j["chi"] = int_json(poly.chi());
        out << j.dump() << "\n";
    } else {
        out << "count(q) =";
        for (std::size_t k = 0; k < poly.coeffs.size(); ++k)
            if (poly.coeffs[k] != 0)
                out << " + " << poly.coeffs[k].get_str() << "*q^" << k;
        out << "\nchi = " << poly.chi().get_str() << "\n";
    }
    return 0;
}

int cmd_expand(const RunConfig& cfg, const std::vector<std::string>& words, std::ostream& out) {
    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined += " ";
        joined += w;
    }
    std::vector<std::string> factors;
    std::stringstream ss(joined);
    std::string part;
    while (std::getline(ss, part, '*')) factors.push_back(part);
    if (factors.empty()) fail(errc::usage, "empty object expression");

    Quiver q = load_quiver(cfg);
    CCContext cc = make_context(q, cfg);
    Laurent f = Laurent::constant(q.vertices, 1);
    for (const auto& text : factors) f *= cc.x_of(parse_object(text));

    BasisCatalog cat(cc, scale(cc.euler().delta, std::max(cfg.box, 1)), BasisFlavor::Bprime);
    out << expansion_to_json(cat.expand(f)) << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out,
               std::ostream& err) {
    auto fixed = [&](const std::string& which) -> Reports {
        if (which == "d4") return suite_d4(cfg, err);
        return suite_kronecker(cfg);
    };
    if (suite == "d4" || suite == "kronecker") return emit_reports(suite, fixed(suite), cfg, out);

    Quiver q = load_quiver(cfg);
    CCContext cc = make_context(q, cfg);
    if (suite == "ar") return emit_reports(suite, suite_ar(cc), cfg, out);
    if (suite == "tube") return emit_reports(suite, suite_tube(cc), cfg, out);
    if (suite == "difference") return emit_reports(suite, suite_difference(cc), cfg, out);
    if (suite == "basis") return emit_reports(suite, suite_basis(cc, cfg), cfg, out);
    if (suite == "all") {
        Reports all = suite_ar(cc);
        for (Reports more : {suite_tube(cc), suite_difference(cc), suite_basis(cc, cfg),
                             suite_d4(cfg, err), suite_kronecker(cfg)})
            all.insert(all.end(), more.begin(), more.end());
        return emit_reports(suite, all, cfg, out);
    }
    fail(errc::usage, "unknown verify suite '" + suite +
                          "' (ar|tube|difference|d4|kronecker|basis|all)");
}

} // namespace

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact cluster-character toolkit for affine quivers"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--quiver", cfg.name, "builtin quiver name")->capture_default_str();
    app.add_option("--quiver-file", cfg.file, "path to a quiver JSON file");
    app.add_option("--quiver-json", cfg.inline_json, "inline quiver JSON");
    app.add_option("--seed", cfg.seed, "seed for sampled base modules");
    app.add_option("--primes", cfg.primes, "explicit prime ladder for counting");
    app.add_option("--box", cfg.box, "catalog box bound as a multiple of delta")
        ->capture_default_str();
    app.add_option("--horizon", cfg.horizon, "knitting horizon override (0 = derive)");
    app.add_option("--format", cfg.format, "output format: human|json")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();

    std::string quiver_action, expr, dims_text, e_text, suite;
    std::vector<std::string> expand_words;

    CLI::App* sc_quiver = app.add_subcommand("quiver", "inspect a quiver");
    sc_quiver->add_option("action", quiver_action, "show|roots|tubes")->required();
    CLI::App* sc_ccvar = app.add_subcommand("ccvar", "print the value of an object expression");
    sc_ccvar->add_option("expr", expr, "object expression")->required();
    CLI::App* sc_oracle = app.add_subcommand("oracle", "subobject counts and chi");
    sc_oracle->add_option("dims", dims_text, "module dimension vector, comma separated")
        ->required();
    sc_oracle->add_option("e", e_text, "subobject dimension vector, comma separated")->required();
    CLI::App* sc_expand = app.add_subcommand("expand", "expand a product in the basis catalog");
    sc_expand->add_option("expr", expand_words, "object expression(s), '*' separated")
        ->required()
        ->expected(-1);
    CLI::App* sc_verify = app.add_subcommand("verify", "run a verification suite");
    sc_verify->add_option("suite", suite, "ar|tube|difference|d4|kronecker|basis|all")
        ->required();
    for (CLI::App* sc : {sc_quiver, sc_ccvar, sc_oracle, sc_expand, sc_verify})
        sc->fallthrough();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        nlohmann::json j;
        j["error"] = "Usage";
        j["message"] = e.what();
        out << j.dump() << "\n";
        err << e.what() << "\n";
        return 2;
    }

    if (const char* env_seed = std::getenv("CLUSTERKIT_SEED"))
        cfg.seed = std::strtoull(env_seed, nullptr, 10);

    try {
        if (sc_quiver->parsed()) return cmd_quiver(cfg, quiver_action, out);
        if (sc_ccvar->parsed()) return cmd_ccvar(cfg, expr, out);
        if (sc_oracle->parsed()) return cmd_oracle(cfg, dims_text, e_text, out);
        if (sc_expand->parsed()) return cmd_expand(cfg, expand_words, out);
        return cmd_verify(cfg, suite, out, err);
    } catch (const ck_error& e) {
        nlohmann::json j;
        j["error"] = errc_name(e.code());
        j["message"] = e.what();
        out << j.dump() << "\n";
        err << e.what() << "\n";
        return exit_code_for(e.code());
    }
}

} // namespace clusterkit
