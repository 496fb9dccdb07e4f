#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmhyp/closed_form.hpp"
#include "qmhyp/fields.hpp"

namespace qmhyp {

inline const std::vector<std::string>& cm_value_names() {
    static const std::vector<std::string> names{"E2star", "E4", "E6", "G", "H"};
    return names;
}

inline int cm_value_weight(const std::string& name) {
    if (name == "E2star") return 2;
    if (name == "E4") return 4;
    if (name == "E6") return 6;
    if (name == "G") return 1;
    if (name == "H") return 2;
    throw DomainError("unknown generator value '" + name + "'");
}

/// Real part of x reduced into (-1/2, 1/2].
inline Rational reduce_mod1(const Rational& x) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    Rational r = x - Rational(fl);
    if (r > Rational(1, 2)) r -= Rational(1);
    return r;
}

/// A CM point z = x + b sqrt(-d) with known generator values.
struct CMPoint {
    std::string label;
    Rational x;
    Rational b{1};
    long d = 1;
    long disc = -4;
    Field field;
    std::map<std::string, ClosedForm> values;

    /// Im z = b sqrt(d), as an element of the point's field.
    [[nodiscard]] FieldElement y() const {
        if (d == 1) return FieldElement(b);
        const auto r = field_sqrt(FieldElement::embed_rational(field, Rational(d)));
        if (!r) throw FieldError("sqrt(" + std::to_string(d) + ") is not in the field of point " + label);
        FieldElement s = *r;
        if (s.embed(64).re < 0) s = -s;
        return s * FieldElement(b);
    }

    [[nodiscard]] Complex z_numeric(unsigned bits) const {
        PrecisionScope ps(bits + 32);
        return {to_real(x), to_real(b) * sqrt(Real(d))};
    }

    [[nodiscard]] bool has(const std::string& name) const { return values.count(name) != 0; }

    [[nodiscard]] const ClosedForm& value(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end()) throw MissingValueError("no " + name + " value at point " + label);
        return it->second;
    }
};

/// Weight-normalized value c of a stored value c * Omega^w.
inline FieldElement normalized_value(const CMPoint& p, const std::string& name) {
    const ClosedForm& v = p.value(name);
    const int w = cm_value_weight(name);
    for (const auto& [k, c] : v.terms())
        if (k != ClosedForm::Key{w, 0}) throw DomainError(name + " at " + p.label + " is not a pure Omega^" + std::to_string(w) + " multiple");
    return v.coeff(w, 0).lifted(p.field);
}

/// E2(z) = E2*(z) + 3 / (pi Im z).
inline ClosedForm e2_full(const CMPoint& p) {
    return p.value("E2star") + ClosedForm::term(FieldElement(3) * p.y().inverse(), 0, -1);
}

/// Label for x + b i in the style "i", "2i", "i/4", "(1+i)/4", "(-1+i)/2".
inline std::string gaussian_label(const Rational& x, const Rational& b) {
    auto imag = [](const Integer& c) {
        if (c == 1) return std::string("i");
        return c.get_str() + "i";
    };
    if (x.is_zero()) {
        if (b.is_integer()) return imag(b.num());
        return imag(b.num()) + "/" + b.den().get_str();
    }
    Integer m;
    mpz_lcm(m.get_mpz_t(), x.den().get_mpz_t(), b.den().get_mpz_t());
    const Integer a = (x * Rational(m)).num(), c = (b * Rational(m)).num();
    std::string s = "(" + a.get_str() + "+" + imag(c) + ")";
    if (m != 1) s += "/" + m.get_str();
    return s;
}

class CMRegistry {
public:
    CMRegistry() = default;
    CMRegistry(std::string name, Field field) : name_(std::move(name)), field_(std::move(field)) {}

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] const std::vector<CMPoint>& points() const { return points_; }

    [[nodiscard]] const CMPoint* find(const std::string& label) const {
        for (const auto& p : points_)
            if (p.label == label) return &p;
        return nullptr;
    }
    [[nodiscard]] const CMPoint& at(const std::string& label) const {
        const CMPoint* p = find(label);
        if (!p) throw MissingValueError("registry " + name_ + " has no point " + label);
        return *p;
    }

    /// The point x + b sqrt(-d) up to integer translation.
    [[nodiscard]] const CMPoint* find_at(const Rational& x, const Rational& b, long d) const {
        const Rational rx = reduce_mod1(x);
        for (const auto& p : points_)
            if (p.d == d && p.b == b && reduce_mod1(p.x) == rx) return &p;
        return nullptr;
    }

    /// Inserts a point or merges values into an existing point with the same coordinates.
    CMPoint& upsert(const CMPoint& pt) {
        for (auto& p : points_) {
            if (p.d == pt.d && p.b == pt.b && reduce_mod1(p.x) == reduce_mod1(pt.x)) {
                for (const auto& [k, v] : pt.values) p.values[k] = v;
                return p;
            }
        }
        points_.push_back(pt);
        return points_.back();
    }

    void set_value(const Rational& x, const Rational& b, long d, const std::string& name, const ClosedForm& v) {
        CMPoint p;
        p.x = reduce_mod1(x);
        p.b = b;
        p.d = d;
        p.disc = d == 1 ? -4 : -static_cast<long>(d);
        p.field = field_;
        p.label = d == 1 ? gaussian_label(p.x, b) : "z";
        p.values[name] = v;
        upsert(p);
    }

private:
    std::string name_;
    Field field_;
    std::vector<CMPoint> points_;
};

namespace detail {

inline ClosedForm omega_term(const FieldElement& c, int w) { return ClosedForm::term(c, w, 0); }

}  // namespace detail

/// The Gaussian CM values. G(2i) carries 2^{-3/2} (the source table has 2^{-1/2}, which breaks the E2
/// bridge), and sqrt(6+4 sqrt2) is written 2+sqrt2.
inline CMRegistry gaussian_table() {
    const Field K = gaussian_field();
    const FieldElement i = FieldElement::named(K, "i");
    const FieldElement r2 = FieldElement::named(K, "sqrt2");
    const FieldElement r4 = FieldElement::named(K, "root4_2");
    auto Q = [&](long n, long d = 1) { return FieldElement::embed_rational(K, Rational(n, d)); };
    using detail::omega_term;
    CMRegistry reg("gaussian", K);
    auto add = [&](const Rational& x, const Rational& b, const std::string& label,
                   std::map<std::string, ClosedForm> values) {
        CMPoint p;
        p.label = label;
        p.x = x;
        p.b = b;
        p.d = 1;
        p.disc = -4;
        p.field = K;
        p.values = std::move(values);
        reg.upsert(p);
    };
    add(0, 1, "i",
        {{"E2star", omega_term(Q(0), 2)}, {"E4", omega_term(Q(12), 4)}, {"E6", omega_term(Q(0), 6)},
         {"G", omega_term(Q(1) + r2 * Q(1, 2), 1)}, {"H", omega_term((Q(3) - Q(2) * r2) * Q(1, 32), 2)}});
    add(0, 2, "2i",
        {{"E2star", omega_term(Q(3, 2), 2)}, {"E4", omega_term(Q(33, 4), 4)}, {"E6", omega_term(Q(189, 8), 6)},
         {"G", omega_term(r4.inverse() + r2.inverse() * Q(1, 2) + Q(1, 2), 1)},
         {"H", omega_term(pow(r4 - Q(1), 4) * Q(1, 128), 2)}});
    add(0, 4, "4i",
        {{"E2star", omega_term(Q(9, 8) + Q(3, 4) * r2, 2)},
         {"E4", omega_term(Q(45, 16) * r2 + Q(273, 64), 4)},
         {"E6", omega_term(Q(2079, 256) * r2 + Q(6237, 512), 6)}});
    add(Rational(1, 4), Rational(1, 4), "(1+i)/4",
        {{"E2star", omega_term(-Q(12) * i, 2)}, {"E4", omega_term(Q(-528), 4)}, {"E6", omega_term(Q(12096) * i, 6)}});
    add(Rational(-1, 4), Rational(1, 4), "(-1+i)/4",
        {{"E2star", omega_term(Q(12) * i, 2)}, {"E4", omega_term(Q(-528), 4)}, {"E6", omega_term(-Q(12096) * i, 6)}});
    add(0, Rational(1, 2), "i/2",
        {{"E2star", omega_term(Q(-6), 2)}, {"E4", omega_term(Q(132), 4)}, {"E6", omega_term(Q(-1512), 6)},
         {"G", omega_term(Q(2), 1)}, {"H", omega_term(Q(1, 8), 2)}});
    add(0, Rational(1, 4), "i/4",
        {{"E2star", omega_term(Q(-18) - Q(12) * r2, 2)}, {"E4", omega_term(Q(720) * r2 + Q(1092), 4)},
         {"E6", omega_term(-Q(33264) * r2 - Q(49896), 6)}, {"G", omega_term(Q(2) + r2, 1)},
         {"H", omega_term(r2 * Q(1, 2), 2)}});
    return reg;
}

/// One row of the other-discriminant table: |D|^{1/2} E2*/Omega^2, E4/Omega^4, E6/(|D|^{1/2} Omega^6).
struct DiscRow {
    std::string label;
    Rational x, b;
    long d;
    long disc;
    Rational v2, v4, v6;
};

/// The eight rows; the E2* entry at sqrt(2)i is 4 (the source has 2, which fails the ratio checks).
inline std::vector<DiscRow> other_discriminant_rows() {
    return {
        {"(1+sqrt3i)/2", Rational(1, 2), Rational(1, 2), 3, -3, 0, 0, 24},
        {"(1+sqrt7i)/2", Rational(1, 2), Rational(1, 2), 7, -7, 3, 15, 27},
        {"sqrt2i", 0, 1, 2, -8, 4, 20, 28},
        {"(1+sqrt11i)/2", Rational(1, 2), Rational(1, 2), 11, -11, 8, 32, 56},
        {"(1+sqrt19i)/2", Rational(1, 2), Rational(1, 2), 19, -19, 24, 96, 216},
        {"(1+sqrt43i)/2", Rational(1, 2), Rational(1, 2), 43, -43, 144, 960, 4536},
        {"(1+sqrt67i)/2", Rational(1, 2), Rational(1, 2), 67, -67, 456, 5280, 46872},
        {"(1+sqrt163i)/2", Rational(1, 2), Rational(1, 2), 163, -163, 8688, 640320, 40133016},
    };
}

/// Points of the other-discriminant table, each in Q(sqrt|D|) with Omega standing for Omega_K.
inline CMPoint disc_row_point(const DiscRow& r) {
    CMPoint p;
    p.label = r.label;
    p.x = r.x;
    p.b = r.b;
    p.d = r.d;
    p.disc = r.disc;
    p.field = quadratic_field(-r.disc);
    const FieldElement s = FieldElement::named(p.field, "sqrt" + std::to_string(-r.disc));
    const FieldElement inv_s = s.inverse();
    p.values["E2star"] = ClosedForm::term(inv_s * FieldElement(r.v2), 2, 0);
    p.values["E4"] = ClosedForm::term(FieldElement::embed_rational(p.field, r.v4), 4, 0);
    p.values["E6"] = ClosedForm::term(s * FieldElement(r.v6), 6, 0);
    return p;
}

inline CMRegistry other_discriminant_table() {
    CMRegistry reg("other-discriminants", nullptr);
    for (const auto& r : other_discriminant_rows()) reg.upsert(disc_row_point(r));
    return reg;
}

// ---- JSON ----

using Json = nlohmann::ordered_json;

inline Json field_to_json(const Field& f) {
    if (!f) return nullptr;
    Json mp = Json::array();
    for (const auto& c : f->min_poly()) mp.push_back(c.get_str());
    return {{"min_poly", mp}, {"embedding", {{"re", f->hint_re()}, {"im", f->hint_im()}, {"prec_bits", f->hint_bits()}}}};
}

inline Field field_from_json(const Json& j) {
    if (j.is_null()) return nullptr;
    try {
        std::vector<Integer> mp;
        for (const auto& c : j.at("min_poly")) mp.emplace_back(c.get<std::string>());
        const auto& e = j.at("embedding");
        return canonical_field(mp, e.at("re").get<std::string>(), e.at("im").get<std::string>(),
                               e.at("prec_bits").get<unsigned>());
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("bad field block: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw SchemaError(std::string("bad integer in field block: ") + ex.what());
    }
}

/// Terms as records {"omega", "pi", "coeff"} with coefficients in generator-power order.
inline Json closedform_terms_json(const ClosedForm& cf, const Field& f) {
    Json terms = Json::array();
    for (const auto& [k, c] : cf.ordered_terms()) {
        Json coeff = Json::array();
        const FieldElement lifted = c.lifted(f);
        for (const auto& x : lifted.coords()) coeff.push_back(x.str());
        terms.push_back({{"omega", k.first}, {"pi", k.second}, {"coeff", coeff}});
    }
    return terms;
}

inline Json closedform_to_json(const ClosedForm& cf, const Field& f) {
    return {{"terms", closedform_terms_json(cf, f)}, {"field", field_to_json(f)}, {"display", cf.str()}};
}

inline ClosedForm closedform_from_terms_json(const Json& terms, const Field& f) {
    ClosedForm cf;
    try {
        for (const auto& t : terms) {
            std::vector<Rational> coords;
            for (const auto& c : t.at("coeff")) coords.push_back(Rational::parse(c.get<std::string>()));
            FieldElement e = f ? FieldElement(f, coords) : FieldElement(nullptr, coords);
            cf.add_term(t.at("omega").get<int>(), t.at("pi").get<int>(), e);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("bad closed-form terms: ") + ex.what());
    } catch (const DomainError& ex) {
        throw SchemaError(std::string("bad closed-form terms: ") + ex.what());
    }
    return cf;
}

inline ClosedForm closedform_from_json(const Json& j) {
    try {
        return closedform_from_terms_json(j.at("terms"), field_from_json(j.at("field")));
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("bad closed form: ") + ex.what());
    }
}

inline Json registry_to_json(const CMRegistry& reg) {
    Json pts = Json::array();
    for (const auto& p : reg.points()) {
        Json vals = Json::object();
        for (const auto& name : cm_value_names()) {
            if (!p.has(name)) continue;
            vals[name] = {{"terms", closedform_terms_json(p.value(name), p.field)}, {"display", p.value(name).str()}};
        }
        Json jp = {{"label", p.label}, {"x", p.x.str()}, {"b", p.b.str()}, {"d", p.d}, {"disc", p.disc}};
        if (!reg.field() || !p.field || !p.field->same_as(*reg.field())) jp["field"] = field_to_json(p.field);
        jp["values"] = vals;
        pts.push_back(jp);
    }
    return {{"format", "qmhyp-cm-registry"}, {"version", 1}, {"name", reg.name()},
            {"field", field_to_json(reg.field())}, {"points", pts}};
}

inline CMRegistry registry_from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != "qmhyp-cm-registry") throw SchemaError("not a CM registry file");
        CMRegistry reg(j.at("name").get<std::string>(), field_from_json(j.at("field")));
        for (const auto& jp : j.at("points")) {
            CMPoint p;
            p.label = jp.at("label").get<std::string>();
            p.x = Rational::parse(jp.at("x").get<std::string>());
            p.b = Rational::parse(jp.at("b").get<std::string>());
            p.d = jp.at("d").get<long>();
            p.disc = jp.at("disc").get<long>();
            if (p.b.sign() <= 0 || p.d <= 0) throw SchemaError("point " + p.label + " has non-positive imaginary part");
            p.field = jp.contains("field") ? field_from_json(jp.at("field")) : reg.field();
            for (const auto& [name, v] : jp.at("values").items()) {
                cm_value_weight(name);
                p.values[name] = closedform_from_terms_json(v.at("terms"), p.field);
            }
            reg.upsert(p);
        }
        return reg;
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("malformed registry: ") + ex.what());
    } catch (const DomainError& ex) {
        throw SchemaError(std::string("malformed registry: ") + ex.what());
    }
}

inline CMRegistry registry_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open registry file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError("registry " + path + " is not valid JSON: " + ex.what());
    }
    return registry_from_json(j);
}

inline void registry_save(const CMRegistry& reg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write registry file " + path);
    out << registry_to_json(reg).dump(2) << "\n";
}

/// Exact equality of two registries' shared points and values; returns mismatch descriptions.
inline std::vector<std::string> registry_differences(const CMRegistry& expected, const CMRegistry& actual) {
    std::vector<std::string> out;
    for (const auto& p : expected.points()) {
        const CMPoint* q = actual.find_at(p.x, p.b, p.d);
        if (!q) {
            out.push_back("missing point " + p.label);
            continue;
        }
        for (const auto& [name, v] : p.values) {
            if (!q->has(name)) out.push_back("missing " + name + " at " + p.label);
            else if (!(q->value(name) == v))
                out.push_back(name + " at " + p.label + ": expected " + v.str() + ", got " + q->value(name).str());
        }
    }
    return out;
}

}  // namespace qmhyp
