#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qmhyp/qmhyp.hpp"

using namespace qmhyp;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    bool json = false;
    std::string registry_path;
    unsigned bits = kDefaultBits;
};

CMRegistry load_main_registry(const Options& o) {
    std::string path = o.registry_path;
    if (path.empty())
        if (const char* env = std::getenv("QMHYP_REGISTRY")) path = env;
    return path.empty() ? gaussian_table() : registry_load(path);
}

Roman roman_arg(const std::string& s) {
    try {
        return parse_roman(s);
    } catch (const DomainError&) {
        throw UsageError("--family must be one of I..VIII, got '" + s + "'");
    }
}

/// "x,b" or "x,b√d" / "x,b*sqrt(d)" with rational x, b and squarefree d.
std::tuple<Rational, Rational, long> parse_z(const std::string& text) {
    static const std::regex re(R"(^\s*([-+0-9/]+)\s*,\s*([0-9/]+)\s*(?:(?:\*?\s*(?:√|sqrt)\(?\s*([0-9]+)\s*\)?))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw UsageError("--z expects 'x,y' or 'x,y√d', got '" + text + "'");
    try {
        const long d = m[3].matched ? std::stol(m[3].str()) : 1;
        return {Rational::parse(m[1].str()), Rational::parse(m[2].str()), d};
    } catch (const std::exception&) {
        throw UsageError("cannot parse coordinates '" + text + "'");
    }
}

/// Resolves a point in the main registry, falling back to the other-discriminant table.
std::pair<CMRegistry, CMPoint> resolve_point(const Options& o, const std::string& label, const std::string& z) {
    CMRegistry main = load_main_registry(o);
    CMRegistry other = other_discriminant_table();
    if (!z.empty()) {
        const auto [x, b, d] = parse_z(z);
        for (const CMRegistry* r : {&main, &other})
            if (const CMPoint* p = r->find_at(x, b, d)) return {*r, *p};
        throw MissingValueError("no registry point at x=" + x.pretty() + ", y=" + b.pretty() +
                                (d == 1 ? "" : "*sqrt(" + std::to_string(d) + ")"));
    }
    for (const CMRegistry* r : {&main, &other})
        if (const CMPoint* p = r->find(label)) return {*r, *p};
    throw MissingValueError("unknown point label '" + label + "'");
}

std::string dec(const Real& x, int digits = 30) { return to_decimal(x, digits); }

void emit(const Options& o, const Json& j, const std::string& text) {
    if (o.json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

Json decomposition_json(const Decomposition& d) {
    Json terms = Json::array();
    for (const auto& t : d.terms)
        terms.push_back({{"coeff", t.coeff.pretty()},
                         {"deriv", t.deriv},
                         {"base", std::string(1, family_char(t.base))},
                         {"index", t.index},
                         {"scale", t.scale.pretty()},
                         {"twist", t.twist},
                         {"display", term_str(t)}});
    return {{"prefactor", d.prefactor.pretty()}, {"terms", terms}, {"display", decomposition_str(d)}};
}

std::string w_exponent(std::size_t k) {
    return k % 2 == 0 ? std::to_string(k / 2) : std::to_string(k) + "/2";
}

Json qmpoly_json(const QMPoly& P) {
    const std::array<std::string, 3> names =
        P.level() == 1 ? std::array<std::string, 3>{"E2", "E4", "E6"} : std::array<std::string, 3>{"E2", "G", "H"};
    Json terms = Json::array();
    for (const auto& [e, c] : P.ordered_terms()) {
        Json m = Json::object();
        for (std::size_t k = 0; k < 3; ++k) m[names[k]] = e[k];
        terms.push_back({{"monomial", m}, {"coeff", c.pretty()}});
    }
    return {{"level", P.level()}, {"terms", terms}, {"display", P.str()}};
}

QMPoly generator_arg(const std::string& s) {
    if (s == "E2") return QMPoly::E2(1);
    if (s == "G") return QMPoly::G();
    if (s == "H") return QMPoly::H();
    static const std::regex ek(R"(^E([0-9]+)$)");
    std::smatch m;
    if (std::regex_match(s, m, ek)) {
        const unsigned k = static_cast<unsigned>(std::stoul(m[1].str()));
        if (k >= 4 && k % 2 == 0) return ramanujan_E(k);
    }
    throw UsageError("--form must be E2, G, H or E<k> with even k >= 4, got '" + s + "'");
}

BootstrapForm form_arg(const std::string& s) {
    if (s == "E4") return BootstrapForm::E4;
    if (s == "E6") return BootstrapForm::E6;
    if (s == "E2") return BootstrapForm::E2;
    if (s == "G") return BootstrapForm::G;
    if (s == "H") return BootstrapForm::H;
    throw UsageError("--form must be one of E4, E6, E2, G, H, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact evaluation of reciprocal hyperbolic series at CM points"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_flag("--json", opt.json, "machine-readable output");
    app.add_option("--registry", opt.registry_path, "CM registry JSON (default: $QMHYP_REGISTRY, else built-in)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "exact closed form of a series at a CM point");
    std::string ev_family, ev_point = "i/2", ev_z;
    unsigned ev_s = 0, ev_p = 0;
    bool ev_hyp = false;
    ev->add_option("--family", ev_family)->required();
    ev->add_option("--s", ev_s)->required();
    ev->add_option("--p", ev_p)->required();
    ev->add_option("--point", ev_point, "registry label of z (q = exp(2 pi i z))");
    ev->add_option("--z", ev_z, "raw coordinates x,y or x,y√d");
    ev->add_flag("--hyperbolic", ev_hyp, "multiply by 2^s: the sum of n^p times the hyperbolic kernel");

    // decompose
    auto* de = app.add_subcommand("decompose", "Eisenstein-derivative decomposition of a series");
    std::string de_family;
    unsigned de_s = 0, de_p = 0;
    bool de_reduced = false;
    de->add_option("--family", de_family)->required();
    de->add_option("--s", de_s)->required();
    de->add_option("--p", de_p)->required();
    de->add_flag("--reduced", de_reduced, "rewrite every term through A, G and N");

    // qexpand
    auto* qe = app.add_subcommand("qexpand", "q-expansion of a roman series or a base family");
    std::string qe_family;
    unsigned qe_s = 1, qe_p = 0;
    std::size_t qe_terms = 10;
    qe->add_option("--family", qe_family, "I..VIII or a base family letter")->required();
    qe->add_option("--s", qe_s)->required();
    qe->add_option("--p", qe_p);
    qe->add_option("--terms", qe_terms, "number of powers of q (half-integral steps count half)");

    // verify
    auto* ve = app.add_subcommand("verify", "closed form against literal summation");
    std::string ve_family, ve_point = "i/2", ve_z, ve_eps = "1e-40";
    unsigned ve_s = 0, ve_p = 0;
    ve->add_option("--family", ve_family)->required();
    ve->add_option("--s", ve_s)->required();
    ve->add_option("--p", ve_p)->required();
    ve->add_option("--point", ve_point);
    ve->add_option("--z", ve_z);
    ve->add_option("--bits", opt.bits);
    ve->add_option("--eps", ve_eps, "relative tolerance");
    std::string ve_terms = "auto";
    ve->add_option("--terms", ve_terms, "only 'auto' is supported");

    // cm-table
    auto* ct = app.add_subcommand("cm-table", "CM registry values");
    bool ct_boot = false, ct_other = false, ct_log = false;
    std::string ct_out;
    ct->add_flag("--bootstrap", ct_boot, "derive the Gaussian table from E4(i), E6(i), E2*(i)");
    ct->add_flag("--other", ct_other, "the other-discriminant table");
    ct->add_flag("--log", ct_log, "print the bootstrap steps");
    ct->add_option("--out", ct_out, "write the registry JSON to this path");

    // modpoly
    auto* mp = app.add_subcommand("modpoly", "transformation polynomial of a form");
    std::string mp_form;
    long mp_n = 2;
    bool mp_phi = false;
    mp->add_option("--form", mp_form, "E4, E6, E2 (the combination nE2|V_n - E2), G or H")->required();
    mp->add_option("--n", mp_n);
    mp->add_flag("--phi", mp_phi, "rescaled polynomial for f itself");

    // fib
    auto* fb = app.add_subcommand("fib", "generalized Fibonacci zeta values");
    std::string fb_kind = "U", fb_params = "fibonacci";
    unsigned fb_p = 0, fb_s = 1;
    bool fb_direct = false, fb_lemma = false;
    long fb_terms = 0;
    fb->add_option("--kind", fb_kind, "U or V");
    fb->add_option("--p", fb_p);
    fb->add_option("--s", fb_s);
    fb->add_option("--params", fb_params, "fibonacci or silver");
    fb->add_option("--bits", opt.bits);
    fb->add_option("--sequence", fb_terms, "print the first N sequence terms instead");
    auto* fd = fb->add_flag("--direct", fb_direct, "direct summation (default)");
    fb->add_flag("--lemma", fb_lemma, "through the roman series, with the residual against direct summation")->excludes(fd);

    // derive
    auto* dv = app.add_subcommand("derive", "D^n of a generator or Eisenstein series as a polynomial");
    std::string dv_form;
    unsigned dv_times = 1;
    dv->add_option("--form", dv_form, "E2, G, H or E<k>")->required();
    dv->add_option("--times", dv_times);

    // indep-check
    auto* ic = app.add_subcommand("indep-check", "scan of the two Bernoulli inequality families");
    int ic_smax = 300;
    ic->add_option("--smax", ic_smax);

    // f468
    auto* f4 = app.add_subcommand("f468", "leading q-coefficients of f4^2 f6^-4 f8^2");
    std::size_t f4_n = 3;
    f4->add_option("--n", f4_n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ev) {
            const Roman fam = roman_arg(ev_family);
            auto [reg, pt] = resolve_point(opt, ev_point, ev_z);
            const ClosedForm v = ev_hyp ? evaluate_hyperbolic(fam, ev_s, ev_p, reg, pt) : evaluate_roman(fam, ev_s, ev_p, reg, pt);
            Json j = {{"command", "evaluate"}, {"family", roman_name(fam)}, {"s", ev_s}, {"p", ev_p},
                      {"point", pt.label}, {"hyperbolic", ev_hyp}, {"value", closedform_to_json(v, pt.field)}};
            emit(opt, j, v.str() + "\n");
        } else if (*de) {
            const Roman fam = roman_arg(de_family);
            Decomposition d = decompose_roman(fam, de_s, de_p);
            if (de_reduced) d = reduce_decomposition(d);
            Json j = {{"command", "decompose"}, {"family", roman_name(fam)}, {"s", de_s}, {"p", de_p}, {"reduced", de_reduced},
                      {"decomposition", decomposition_json(d)}};
            emit(opt, j, decomposition_str(d) + "\n");
        } else if (*qe) {
            QSeries f;
            const std::size_t prec = 2 * qe_terms;
            std::string name;
            bool roman = true;
            Roman fam{};
            try {
                fam = parse_roman(qe_family);
            } catch (const DomainError&) {
                roman = false;
            }
            if (roman) {
                f = roman_qexpansion(fam, qe_s, qe_p, prec);
                name = roman_name(fam);
            } else {
                Family base;
                try {
                    base = parse_family(qe_family);
                } catch (const DomainError&) {
                    throw UsageError("--family must be I..VIII or a base family letter, got '" + qe_family + "'");
                }
                f = family_qexpansion(base, qe_s, prec);
                name = std::string(1, family_char(base));
            }
            Json coeffs = Json::array();
            std::ostringstream os;
            for (std::size_t k = 0; k < f.prec(); ++k) {
                if (f[k].is_zero()) continue;
                coeffs.push_back({w_exponent(k), f[k].pretty()});
                os << "q^" << w_exponent(k) << "\t" << f[k].pretty() << "\n";
            }
            Json j = {{"command", "qexpand"}, {"family", name}, {"s", qe_s}, {"p", qe_p}, {"w_step", "1/2"}, {"coeffs", coeffs}};
            emit(opt, j, os.str());
        } else if (*ve) {
            if (ve_terms != "auto") throw UsageError("--terms only accepts 'auto'");
            const Roman fam = roman_arg(ve_family);
            auto [reg, pt] = resolve_point(opt, ve_point, ve_z);
            Real tol;
            {
                PrecisionScope ps(opt.bits + 32);
                try {
                    tol = Real(ve_eps);
                } catch (const std::exception&) {
                    throw UsageError("--eps must be a decimal number");
                }
            }
            const PointReport r = verify_point(fam, ve_s, ve_p, reg, pt, opt.bits, tol);
            PrecisionScope ps(opt.bits + 32);
            Json j = {{"command", "verify"},
                      {"family", r.family},
                      {"s", r.s},
                      {"p", r.p},
                      {"point", r.point},
                      {"closed_form", r.closed.str()},
                      {"closed_numeric", dec(r.closed_numeric.re, 40)},
                      {"summed", dec(r.summed.re, 40)},
                      {"residual", dec(r.residual, 6)},
                      {"residual_kind", r.absolute ? "absolute" : "relative"},
                      {"tolerance", dec(r.tolerance, 6)},
                      {"tail_bound", dec(r.tail_bound, 6)},
                      {"terms", r.terms},
                      {"bits", r.bits},
                      {"pass", r.pass}};
            std::ostringstream os;
            os << r.family << "_" << r.s << "^" << r.p << " at " << r.point << "\n"
               << "closed form: " << r.closed.str() << "\n"
               << "closed value: " << dec(r.closed_numeric.re, 40) << "\n"
               << "summed value: " << dec(r.summed.re, 40) << "\n"
               << (r.absolute ? "absolute" : "relative") << " residual: " << dec(r.residual, 6) << "\n"
               << "tail bound: " << dec(r.tail_bound, 6) << " (" << r.terms << " terms, " << r.bits << " bits)\n"
               << (r.pass ? "PASS" : "FAIL") << "\n";
            emit(opt, j, os.str());
            if (!r.pass) return 1;
        } else if (*ct) {
            CMRegistry reg;
            BootstrapLog log;
            if (ct_other) {
                reg = other_discriminant_table();
            } else if (ct_boot) {
                BootstrapResult b = cm_bootstrap_gaussian(128);
                reg = b.registry;
                log = b.log;
            } else {
                reg = load_main_registry(opt);
            }
            if (!ct_out.empty()) registry_save(reg, ct_out);
            std::ostringstream os;
            if (ct_log)
                for (const auto& l : log.lines) os << l << "\n";
            for (const auto& p : reg.points()) {
                os << p.label << ":";
                for (const auto& n : cm_value_names())
                    if (p.has(n)) os << "  " << n << " = " << p.value(n).str() << ";";
                os << "\n";
            }
            Json j = registry_to_json(reg);
            if (ct_log) j["log"] = log.lines;
            emit(opt, j, os.str());
        } else if (*mp) {
            const BootstrapForm f = form_arg(mp_form);
            TransformationPolynomial tp;
            if (f == BootstrapForm::G || f == BootstrapForm::H) {
                if (mp_n != 2) throw DomainError("the level-4 polynomials are available for n = 2 only");
                tp.n = 2;
                tp.k = f == BootstrapForm::G ? 1 : 2;
                tp.level = 4;
                tp.chi = f == BootstrapForm::G ? Character::Chi4 : Character::Trivial;
                tp.coeffs = f == BootstrapForm::G ? level4_psi_g() : level4_psi_h();
            } else if (mp_n == 2) {
                tp = level1_psi2(f);
            } else {
                if (mp_n < 2) throw DomainError("--n must be >= 2");
                const unsigned k = f == BootstrapForm::E4 ? 4 : (f == BootstrapForm::E6 ? 6 : 2);
                const std::size_t prec = static_cast<std::size_t>(mp_n) * 240 + 40;
                tp = f == BootstrapForm::E2
                         ? psi_polynomial(eisenstein_qexp(2, prec), mp_n, 2, 1, Character::Trivial, mp_n, -1)
                         : psi_polynomial(eisenstein_qexp(k, prec), mp_n, static_cast<int>(k), 1, Character::Trivial);
            }
            if (mp_phi) tp = phi_from_psi(tp);
            Json coeffs = Json::array();
            for (const auto& c : tp.coeffs) coeffs.push_back(qmpoly_json(c));
            Json j = {{"command", "modpoly"}, {"form", mp_form}, {"n", tp.n}, {"k", tp.k}, {"level", tp.level},
                      {"phi", mp_phi}, {"coeffs", coeffs}, {"display", tp.str()}};
            emit(opt, j, tp.str() + "\n");
        } else if (*fb) {
            const LucasParams lp = lucas_params_by_name(fb_params);
            const LucasKind kind = parse_lucas_kind(fb_kind);
            if (fb_terms > 0) {
                Json seq = Json::array();
                std::ostringstream os;
                for (long n = 1; n <= fb_terms; ++n) {
                    const std::string v = lucas_terms(lp, kind, n).str();
                    seq.push_back(v);
                    os << fb_kind << "_" << n << " = " << v << "\n";
                }
                emit(opt, {{"command", "fib"}, {"params", lp.name}, {"kind", fb_kind}, {"sequence", seq}}, os.str());
                return 0;
            }
            PrecisionScope ps(opt.bits + 32);
            const Real eps = pow2(-static_cast<long>(opt.bits) - 8);
            Json j = {{"command", "fib"}, {"params", lp.name}, {"kind", fb_kind}, {"p", fb_p}, {"s", fb_s}, {"bits", opt.bits}};
            std::ostringstream os;
            if (fb_lemma) {
                const LemmaValue v = zeta_via_lemma(lp, kind, fb_p, fb_s, eps, opt.bits);
                j["method"] = "lemma";
                j["value"] = dec(v.lemma, 40);
                j["direct"] = dec(v.direct, 40);
                j["residual"] = dec(v.residual, 6);
                os << "zeta = " << dec(v.lemma, 40) << "\ndirect = " << dec(v.direct, 40) << "\nresidual = " << dec(v.residual, 6) << "\n";
            } else {
                const ZetaValue v = zeta_direct(lp, kind, fb_p, fb_s, eps, opt.bits);
                j["method"] = "direct";
                j["value"] = dec(v.value, 40);
                j["tail_bound"] = dec(v.tail_bound, 6);
                j["terms"] = v.terms;
                os << "zeta = " << dec(v.value, 40) << "\ntail bound = " << dec(v.tail_bound, 6) << " (" << v.terms << " terms)\n";
            }
            emit(opt, j, os.str());
        } else if (*dv) {
            const QMPoly P = generator_arg(dv_form);
            const QMPoly d = qm_derive(P, dv_times);
            Json j = {{"command", "derive"}, {"form", dv_form}, {"times", dv_times}, {"result", qmpoly_json(d)}};
            emit(opt, j, d.str() + "\n");
        } else if (*ic) {
            const IndepScanReport r = indep_scan(ic_smax);
            auto fmt = [](const std::vector<Triple>& v) {
                std::string s = "[";
                for (std::size_t k = 0; k < v.size(); ++k) {
                    const auto [a, b, c] = v[k];
                    s += (k ? ", (" : "(") + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
                }
                return s + "]";
            };
            auto arr = [](const std::vector<Triple>& v) {
                Json a = Json::array();
                for (const auto& [x, y, z] : v) a.push_back({x, y, z});
                return a;
            };
            Json j = {{"command", "indep-check"}, {"smax", ic_smax}, {"family1", arr(r.first_family)},
                      {"family2", arr(r.second_family)}, {"checked", r.checked}, {"exact_rechecks", r.exact_rechecks}};
            emit(opt, j, "exceptions: " + fmt(r.first_family) + " (family 1)\nexceptions: " + fmt(r.second_family) + " (family 2)\n");
        } else if (*f4) {
            const auto c = f468_check(f4_n);
            Json arr = Json::array();
            std::ostringstream os;
            for (std::size_t k = 0; k < c.size(); ++k) {
                arr.push_back(c[k].pretty());
                os << "q^" << k << "\t" << c[k].pretty() << "\n";
            }
            emit(opt, {{"command", "f468"}, {"coefficients", arr}}, os.str());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
