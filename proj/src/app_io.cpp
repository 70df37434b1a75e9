#include "bbcf/app_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "bbcf/spectra.hpp"

namespace bbcf {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kMaxExponent = 64;

std::string at(const std::string& base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), "invalid JSON");
    }
}

mpz_class parse_integer(const Json& j, const std::string& loc) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
        return mpz_class(static_cast<long>(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
        bool digits = s.size() > start;
        for (std::size_t k = start; k < s.size(); ++k) digits = digits && s[k] >= '0' && s[k] <= '9';
        if (!digits) throw ParseError(loc, "'" + s + "' is not an integer");
        return mpz_class(s[0] == '+' ? s.substr(1) : s);
    }
    throw ParseError(loc, "expected an integer");
}

Json integer_json(const mpz_class& z) {
    if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
    return Json(z.get_str());
}

Rational parse_fraction(const Json& j, const std::string& loc) {
    if (!j.is_array() || j.size() != 2) throw ParseError(loc, "expected [numerator, denominator]");
    mpz_class num = parse_integer(j[0], loc + "[0]");
    mpz_class den = parse_integer(j[1], loc + "[1]");
    if (den == 0) throw ParseError(loc, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

ExactComplex parse_coefficient(const Json& j, const std::string& loc) {
    if (j.is_string()) {
        try {
            return ExactComplex::parse(j.get_ref<const std::string&>());
        } catch (const ParseError& e) {
            throw ParseError(loc, e.what());
        }
    }
    if (j.is_number_integer()) return ExactComplex(Rational(parse_integer(j, loc)));
    if (!j.is_array() || j.size() != 2) throw ParseError(loc, "expected [[re_num, re_den], [im_num, im_den]]");
    return ExactComplex(parse_fraction(j[0], loc + "[0]"), parse_fraction(j[1], loc + "[1]"));
}

Json coefficient_json(const ExactComplex& c) {
    auto frac = [](const Rational& q) { return Json::array({integer_json(q.get_num()), integer_json(q.get_den())}); };
    return Json::array({frac(c.re()), frac(c.im())});
}

const Json* member(const Json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = obj.find(k);
        if (it != obj.end()) return &*it;
    }
    return nullptr;
}

}  // namespace

SystemDocument parse_system_document(std::string_view text) {
    Json root = parse_json_text(text);
    if (!root.is_object()) throw ParseError("document", "expected a JSON object");
    SystemDocument doc;

    const Json* vars = member(root, {"variables"});
    if (!vars || !vars->is_array() || vars->empty()) throw ParseError("variables", "expected a non-empty list of names");
    std::set<std::string> seen;
    for (std::size_t k = 0; k < vars->size(); ++k) {
        const Json& v = (*vars)[k];
        if (!v.is_string() || v.get_ref<const std::string&>().empty())
            throw ParseError(at("variables", k), "expected a non-empty name");
        if (!seen.insert(v.get<std::string>()).second) throw ParseError(at("variables", k), "duplicate name");
        doc.variables.push_back(v.get<std::string>());
    }
    if (doc.variables.size() > Exponent::kMaxVars) throw ParseError("variables", "too many variables");

    const Json* eqs = member(root, {"equations"});
    if (!eqs || !eqs->is_array()) throw ParseError("equations", "expected a list of equations");
    for (std::size_t i = 0; i < eqs->size(); ++i) {
        std::string loc = at("equations", i);
        const Json& eq = (*eqs)[i];
        if (!eq.is_array()) throw ParseError(loc, "expected a list of monomials");
        std::vector<MonomialRecord> records;
        for (std::size_t t = 0; t < eq.size(); ++t) {
            std::string mloc = at(loc, t);
            const Json& m = eq[t];
            if (!m.is_object()) throw ParseError(mloc, "expected a monomial object");
            const Json* c = member(m, {"coefficient", "coeff"});
            const Json* e = member(m, {"exponents", "exp"});
            if (!c) throw ParseError(mloc, "missing coefficient");
            if (!e || !e->is_array()) throw ParseError(mloc, "missing exponent list");
            MonomialRecord rec;
            rec.coefficient = parse_coefficient(*c, mloc + ".coefficient");
            for (std::size_t k = 0; k < e->size(); ++k) {
                const Json& p = (*e)[k];
                std::string eloc = at(mloc + ".exponents", k);
                if (!p.is_number_integer()) throw ParseError(eloc, "expected an integer exponent");
                auto v = p.get<std::int64_t>();
                if (v < 0 || v > kMaxExponent) throw ParseError(eloc, "exponent out of range");
                rec.exponents.push_back(static_cast<int>(v));
            }
            if (rec.exponents.size() != doc.variables.size())
                throw ParseError(mloc + ".exponents", "length must equal the number of variables");
            records.push_back(std::move(rec));
        }
        doc.equations.push_back(std::move(records));
    }
    if (const Json* d = member(root, {"description"}); d && !d->is_null()) {
        if (!d->is_string()) throw ParseError("description", "expected a string");
        doc.description = d->get<std::string>();
    }
    return doc;
}

std::string emit_system_document(const SystemDocument& doc) {
    Json root;
    root["variables"] = doc.variables;
    Json eqs = Json::array();
    for (const auto& eq : doc.equations) {
        Json list = Json::array();
        for (const auto& m : eq) list.push_back({{"coefficient", coefficient_json(m.coefficient)}, {"exponents", m.exponents}});
        eqs.push_back(std::move(list));
    }
    root["equations"] = std::move(eqs);
    if (!doc.description.empty()) root["description"] = doc.description;
    return root.dump(2) + "\n";
}

namespace {

Exponent exponent_of(const std::vector<int>& powers) {
    Exponent e;
    for (std::size_t k = 0; k < powers.size(); ++k) e.set(k, powers[k]);
    return e;
}

int degree_of(const std::vector<int>& powers) {
    int d = 0;
    for (int p : powers) d += p;
    return d;
}

// One series per equation over all document variables; constant terms rejected.
std::vector<MultiSeries> equation_series(const SystemDocument& doc, int order) {
    std::vector<MultiSeries> out;
    for (std::size_t i = 0; i < doc.equations.size(); ++i) {
        MultiSeries s(doc.variables.size(), order);
        for (std::size_t t = 0; t < doc.equations[i].size(); ++t) {
            const auto& m = doc.equations[i][t];
            if (degree_of(m.exponents) == 0)
                throw ParseError(at(at("equations", i), t), "constant term: the origin must be an equilibrium");
            s.add_term(exponent_of(m.exponents), m.coefficient);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

HoloSystem to_holo_system(const SystemDocument& doc, int order, bool allow_one_dimensional) {
    std::size_t n = doc.variables.size();
    if (n > 3 || n == 0 || (n == 1 && !allow_one_dimensional))
        throw ParseError("variables", "dimension must be 2 or 3, got " + std::to_string(n));
    if (doc.equations.size() != n) throw ParseError("equations", "need one equation per variable");
    if (order < 2) throw ParseError("order", "series order must be at least 2");
    auto rhs = equation_series(doc, order);
    SmallMatrix linear(n);
    std::vector<MultiSeries> nonlinear;
    for (std::size_t i = 0; i < n; ++i) {
        MultiSeries nl(n, order);
        for (const auto& [e, c] : rhs[i].terms()) {
            if (e.degree() == 1) {
                for (std::size_t j = 0; j < n; ++j)
                    if (e[j] == 1) linear(i, j) = c;
            } else {
                nl.add_term(e, c);
            }
        }
        nonlinear.push_back(std::move(nl));
    }
    return make_holo_system(std::move(linear), std::move(nonlinear), doc.variables);
}

SystemDocument to_document(const HoloSystem& h, std::string description) {
    SystemDocument doc;
    doc.variables = h.names;
    doc.description = std::move(description);
    for (std::size_t i = 0; i < h.dim; ++i) {
        std::vector<MonomialRecord> eq;
        MultiSeries comp = h.component(i);
        for (const auto& [e, c] : comp.terms()) {
            MonomialRecord m{c, std::vector<int>(h.dim)};
            for (std::size_t k = 0; k < h.dim; ++k) m.exponents[k] = e[k];
            eq.push_back(std::move(m));
        }
        doc.equations.push_back(std::move(eq));
    }
    return doc;
}

HoloSystem parse_system(std::string_view text, int order) { return to_holo_system(parse_system_document(text), order); }

BBSystem parse_bb_system(std::string_view text, int order) {
    SystemDocument doc = parse_system_document(text);
    std::size_t n = doc.variables.size();
    if (n < 2) throw ParseError("variables", "need the independent variable and at least one unknown");
    if (doc.equations.size() != n - 1) throw ParseError("equations", "need one equation per unknown");
    if (order < 2) throw ParseError("order", "series order must be at least 2");
    auto rhs = equation_series(doc, order);
    return bb_from_rhs(rhs);
}

// ---- reports ---------------------------------------------------------------

double round_significant(double v) {
    if (!std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

namespace {

std::vector<CoordinateSeries> series_entries(const std::vector<MultiSeries>& graph, const std::vector<std::string>& names) {
    std::vector<CoordinateSeries> out;
    for (std::size_t j = 0; j < graph.size(); ++j) {
        CoordinateSeries cs{names[j], {}};
        auto coeffs = graph[j].univariate_coefficients();
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (!coeffs[k].is_zero()) cs.terms.push_back({static_cast<int>(k), coeffs[k]});
        out.push_back(std::move(cs));
    }
    return out;
}

}  // namespace

ChartEntry chart_entry(const HoloSystem& h, const CenterManifoldReport& r, bool include_series) {
    ChartEntry e;
    e.chart = r.is_origin_center() ? "origin" : h.names[r.chart];
    e.tangency = r.tangency;
    e.theorem_tag = r.theorem_tag;
    e.multiplicity = to_string(r.multiplicity);
    for (const auto& p : r.free_parameters) e.free_parameters.push_back({p.order, h.names[p.variable]});
    for (const auto& o : r.obstructions) e.obstructions.push_back({o.label, h.names[o.variable], o.order, o.value});
    e.blocking_order = r.blocking_order;
    e.omega = rational_to_string(r.omega);
    if (r.multiplicity != Multiplicity::none) {
        e.period = r.period_string();
        e.period_value = round_significant(2 * std::numbers::pi * r.period_factor.get_d());
        if (include_series) e.series = series_entries(r.graph, h.names);
    }
    return e;
}

void attach_verification(ChartEntry& entry, const VerifyResult& v) {
    entry.verification = VerificationEntry{round_significant(v.return_error), round_significant(v.residual_error),
                                           round_significant(v.predicted_period), v.starts, v.diverged, v.pass};
}

BBVerdict bb_verdict(const BBSystem& bb, const BBClassification& c, const std::vector<std::string>& variables,
                     bool include_series) {
    BBVerdict v;
    v.kind = to_string(c.kind);
    v.resonance = to_string(c.resonance);
    auto name = [&](std::size_t k) { return k + 1 < variables.size() ? variables[k + 1] : "y" + std::to_string(k + 1); };
    for (const auto& o : c.obstructions) v.obstructions.push_back({o.label, name(o.variable), o.order, o.value});
    v.blocking_order = c.blocking_order;
    if (c.solution) {
        for (const auto& p : c.solution->free_parameters) v.free_parameters.push_back({p.order, name(p.variable)});
        if (include_series) {
            std::vector<MultiSeries> comps;
            std::vector<std::string> names;
            for (std::size_t i = 0; i < bb.n; ++i) {
                comps.push_back(c.solution->component(i));
                names.push_back(name(i));
            }
            v.series = series_entries(comps, names);
        }
    }
    return v;
}

// ---- JSON form ---------------------------------------------------------------

namespace {

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

// JSON has no infinities; a diverged run is written as "inf".
Json real_json(double v) {
    if (std::isfinite(v)) return Json(v);
    return Json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
}

Json series_json(const std::vector<CoordinateSeries>& series) {
    Json out = Json::array();
    for (const auto& cs : series) {
        Json terms = Json::array();
        for (const auto& t : cs.terms) terms.push_back({{"power", t.power}, {"coefficient", t.coefficient.to_string()}});
        out.push_back({{"variable", cs.variable}, {"terms", std::move(terms)}});
    }
    return out;
}

Json obstructions_json(const std::vector<ObstructionEntry>& obs) {
    Json out = Json::array();
    for (const auto& o : obs)
        out.push_back({{"label", o.label}, {"variable", o.variable}, {"order", o.order}, {"value", o.value.to_string()}});
    return out;
}

Json free_json(const std::vector<FreeParameterEntry>& fps) {
    Json out = Json::array();
    for (const auto& p : fps) out.push_back({{"order", p.order}, {"variable", p.variable}});
    return out;
}

Json to_json(const ReportDocument& d) {
    Json root;
    root["mode"] = d.mode;
    root["order"] = d.order;
    root["description"] = d.description;
    root["variables"] = d.variables;
    root["certified"] = d.certified;
    root["diagonalizable"] = d.diagonalizable;
    root["normal_form"] = d.normal_form;
    Json spec = Json::array();
    for (const auto& s : d.spectrum) spec.push_back({{"value", s.value}, {"multiplicity", s.multiplicity}});
    root["spectrum"] = std::move(spec);
    root["basis"] = d.basis;
    root["message"] = d.message;
    Json charts = Json::array();
    for (const auto& c : d.charts) {
        Json j;
        j["chart"] = c.chart;
        j["tangency"] = c.tangency;
        j["theorem_tag"] = c.theorem_tag;
        j["multiplicity"] = c.multiplicity;
        j["free_parameter_count"] = c.free_parameters.size();
        j["free_parameters"] = free_json(c.free_parameters);
        j["obstructions"] = obstructions_json(c.obstructions);
        j["blocking_order"] = optional_int(c.blocking_order);
        j["omega"] = c.omega;
        j["period"] = c.period;
        j["period_value"] = real_json(c.period_value);
        j["series"] = series_json(c.series);
        if (c.verification) {
            const auto& v = *c.verification;
            j["verification"] = {{"return_error", real_json(v.return_error)},
                                 {"residual_error", real_json(v.residual_error)},
                                 {"predicted_period", real_json(v.predicted_period)},
                                 {"starts", v.starts},
                                 {"diverged", v.diverged},
                                 {"pass", v.pass}};
        } else {
            j["verification"] = nullptr;
        }
        charts.push_back(std::move(j));
    }
    root["charts"] = std::move(charts);
    if (d.bb) {
        const auto& b = *d.bb;
        root["bb"] = {{"kind", b.kind},
                      {"resonance", b.resonance},
                      {"obstructions", obstructions_json(b.obstructions)},
                      {"blocking_order", optional_int(b.blocking_order)},
                      {"free_parameter_count", b.free_parameters.size()},
                      {"free_parameters", free_json(b.free_parameters)},
                      {"series", series_json(b.series)}};
    } else {
        root["bb"] = nullptr;
    }
    return root;
}

const Json& field(const Json& obj, const char* key, const std::string& loc) {
    if (!obj.is_object()) throw ParseError(loc, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(loc, std::string("missing '") + key + "'");
    return *it;
}

template <class T>
T get(const Json& obj, const char* key, const std::string& loc) {
    try {
        return field(obj, key, loc).get<T>();
    } catch (const Json::exception&) {
        throw ParseError(loc + "." + key, "wrong type");
    }
}

double get_real(const Json& obj, const char* key, const std::string& loc) {
    const Json& v = field(obj, key, loc);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError(loc + "." + key, "expected a number");
}

std::optional<int> get_optional_int(const Json& obj, const char* key, const std::string& loc) {
    const Json& v = field(obj, key, loc);
    if (v.is_null()) return std::nullopt;
    return get<int>(obj, key, loc);
}

ExactComplex get_exact(const Json& obj, const char* key, const std::string& loc) {
    try {
        return ExactComplex::parse(get<std::string>(obj, key, loc));
    } catch (const ParseError& e) {
        throw ParseError(loc + "." + key, e.what());
    }
}

std::vector<CoordinateSeries> series_from(const Json& j, const std::string& loc) {
    std::vector<CoordinateSeries> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        std::string l = at(loc, k);
        CoordinateSeries cs{get<std::string>(j[k], "variable", l), {}};
        const Json& terms = field(j[k], "terms", l);
        for (std::size_t t = 0; t < terms.size(); ++t)
            cs.terms.push_back({get<int>(terms[t], "power", at(l, t)), get_exact(terms[t], "coefficient", at(l, t))});
        out.push_back(std::move(cs));
    }
    return out;
}

std::vector<ObstructionEntry> obstructions_from(const Json& j, const std::string& loc) {
    std::vector<ObstructionEntry> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        std::string l = at(loc, k);
        out.push_back({get<std::string>(j[k], "label", l), get<std::string>(j[k], "variable", l), get<int>(j[k], "order", l),
                       get_exact(j[k], "value", l)});
    }
    return out;
}

std::vector<FreeParameterEntry> free_from(const Json& j, const std::string& loc) {
    std::vector<FreeParameterEntry> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back({get<int>(j[k], "order", at(loc, k)), get<std::string>(j[k], "variable", at(loc, k))});
    return out;
}

ReportDocument from_json(const Json& root) {
    ReportDocument d;
    d.mode = get<std::string>(root, "mode", "report");
    d.order = get<int>(root, "order", "report");
    d.description = get<std::string>(root, "description", "report");
    d.variables = get<std::vector<std::string>>(root, "variables", "report");
    d.certified = get<bool>(root, "certified", "report");
    d.diagonalizable = get<bool>(root, "diagonalizable", "report");
    d.normal_form = get<std::string>(root, "normal_form", "report");
    const Json& spec = field(root, "spectrum", "report");
    for (std::size_t k = 0; k < spec.size(); ++k)
        d.spectrum.push_back({get<std::string>(spec[k], "value", at("spectrum", k)),
                              get<std::size_t>(spec[k], "multiplicity", at("spectrum", k))});
    d.basis = get<std::vector<std::vector<std::string>>>(root, "basis", "report");
    d.message = get<std::string>(root, "message", "report");
    const Json& charts = field(root, "charts", "report");
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const Json& j = charts[k];
        std::string l = at("charts", k);
        ChartEntry c;
        c.chart = get<std::string>(j, "chart", l);
        c.tangency = get<std::string>(j, "tangency", l);
        c.theorem_tag = get<std::string>(j, "theorem_tag", l);
        c.multiplicity = get<std::string>(j, "multiplicity", l);
        c.free_parameters = free_from(field(j, "free_parameters", l), l + ".free_parameters");
        if (get<std::size_t>(j, "free_parameter_count", l) != c.free_parameters.size())
            throw ParseError(l + ".free_parameter_count", "does not match the parameter list");
        c.obstructions = obstructions_from(field(j, "obstructions", l), l + ".obstructions");
        c.blocking_order = get_optional_int(j, "blocking_order", l);
        c.omega = get<std::string>(j, "omega", l);
        c.period = get<std::string>(j, "period", l);
        c.period_value = get_real(j, "period_value", l);
        c.series = series_from(field(j, "series", l), l + ".series");
        const Json& v = field(j, "verification", l);
        if (!v.is_null()) {
            std::string vl = l + ".verification";
            c.verification = VerificationEntry{get_real(v, "return_error", vl), get_real(v, "residual_error", vl),
                                               get_real(v, "predicted_period", vl), get<std::size_t>(v, "starts", vl),
                                               get<bool>(v, "diverged", vl), get<bool>(v, "pass", vl)};
        }
        d.charts.push_back(std::move(c));
    }
    const Json& bb = field(root, "bb", "report");
    if (!bb.is_null()) {
        BBVerdict b;
        b.kind = get<std::string>(bb, "kind", "bb");
        b.resonance = get<std::string>(bb, "resonance", "bb");
        b.obstructions = obstructions_from(field(bb, "obstructions", "bb"), "bb.obstructions");
        b.blocking_order = get_optional_int(bb, "blocking_order", "bb");
        b.free_parameters = free_from(field(bb, "free_parameters", "bb"), "bb.free_parameters");
        b.series = series_from(field(bb, "series", "bb"), "bb.series");
        d.bb = std::move(b);
    }
    return d;
}

// ---- text form ---------------------------------------------------------------
//
// One "path: value" line per JSON leaf, path segments joined by dots. Strings
// are written bare unless they would read back as something else.

bool bare_string_ok(const std::string& s) {
    if (s.empty() || std::isspace(static_cast<unsigned char>(s.front())) ||
        std::isspace(static_cast<unsigned char>(s.back())))
        return false;
    for (char ch : s)
        if (static_cast<unsigned char>(ch) < 0x20) return false;
    if (s.front() == '"' || s == "[]" || s == "{}") return false;
    Json probe = Json::parse(s, nullptr, false);
    return probe.is_discarded();
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
    auto join = [&](const std::string& key) { return path.empty() ? key : path + "." + key; };
    if (j.is_object()) {
        if (j.empty()) out.emplace_back(path, "{}");
        for (const auto& [k, v] : j.items()) flatten(v, join(k), out);
    } else if (j.is_array()) {
        if (j.empty()) out.emplace_back(path, "[]");
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], join(std::to_string(k)), out);
    } else if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        out.emplace_back(path, bare_string_ok(s) ? s : j.dump());
    } else {
        out.emplace_back(path, j.dump());
    }
}

std::string chart_summary(const ChartEntry& c) {
    std::string s = "# chart " + c.chart + ": " + c.multiplicity + " " + c.tangency;
    if (!c.period.empty()) s += ", period " + c.period;
    if (!c.theorem_tag.empty()) s += " [" + c.theorem_tag + "]";
    return s;
}

std::string emit_text(const ReportDocument& d) {
    std::vector<std::pair<std::string, std::string>> lines;
    flatten(to_json(d), "", lines);
    std::ostringstream os;
    os << "# center manifold report (" << d.mode << ", order " << d.order << ")\n";
    if (!d.message.empty()) os << "# " << d.message << "\n";
    std::string current;
    for (const auto& [path, value] : lines) {
        if (path.rfind("charts.", 0) == 0) {
            std::string idx = path.substr(7, path.find('.', 7) - 7);
            if (idx != current) {
                current = idx;
                os << chart_summary(d.charts[std::stoul(idx)]) << "\n";
            }
        }
        os << path << ": " << value << "\n";
    }
    return os.str();
}

Json unflatten_text(std::string_view text) {
    Json root = Json::object();
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string loc = "line " + std::to_string(lineno);
        auto colon = line.find(": ");
        if (colon == std::string::npos) throw ParseError(loc, "expected 'path: value'");
        std::string path = line.substr(0, colon), raw = line.substr(colon + 2);
        Json value;
        if (raw == "[]") {
            value = Json::array();
        } else if (raw == "{}") {
            value = Json::object();
        } else if (!raw.empty() && raw.front() == '"') {
            value = Json::parse(raw, nullptr, false);
            if (!value.is_string()) throw ParseError(loc, "malformed quoted string");
        } else {
            value = Json::parse(raw, nullptr, false);
            if (value.is_discarded()) value = raw;
        }
        std::string pointer;
        std::size_t start = 0;
        while (true) {
            auto dot = path.find('.', start);
            pointer += "/" + path.substr(start, dot - start);
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        try {
            root[Json::json_pointer(pointer)] = std::move(value);
        } catch (const Json::exception&) {
            throw ParseError(loc, "path '" + path + "' does not fit the document");
        }
    }
    return root;
}

}  // namespace

std::string emit_report(const ReportDocument& doc, ReportFormat format) {
    if (format == ReportFormat::json) return to_json(doc).dump(2) + "\n";
    return emit_text(doc);
}

ReportDocument parse_report(std::string_view text, ReportFormat format) {
    return from_json(format == ReportFormat::json ? parse_json_text(text) : unflatten_text(text));
}

// ---- pipeline ----------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> matrix_strings(const SmallMatrix& m) {
    std::vector<std::vector<std::string>> rows(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) rows[i].push_back(m(i, j).to_string());
    return rows;
}

void fill_spectrum(ReportDocument& doc, const SpectrumInfo& s) {
    doc.certified = s.certified;
    doc.diagonalizable = s.diagonalizable;
    for (const auto& e : s.eigenvalues) doc.spectrum.push_back({e.value.to_string(), e.multiplicity});
}

SpectrumInfo spectrum_of(const SmallMatrix& m, bool numeric_fallback) {
    try {
        return classify_spectrum(m);
    } catch (const UncertifiableSpectrumError&) {
        if (!numeric_fallback) throw;
        return classify_spectrum_numeric(m);
    }
}

ReportDocument bb_pipeline(std::string_view input, const PipelineOptions& opt) {
    SystemDocument sd = parse_system_document(input);
    BBSystem bb = parse_bb_system(input, opt.order);
    ReportDocument doc;
    doc.mode = "bb";
    doc.order = opt.order;
    doc.description = sd.description;
    doc.variables = sd.variables;
    fill_spectrum(doc, spectrum_of(bb.a, opt.numeric_fallback));
    BBClassification c = classify(bb, opt.order);
    doc.bb = bb_verdict(bb, c, sd.variables, true);
    return doc;
}

}  // namespace

PipelineResult run_pipeline(std::string_view input, const PipelineOptions& opt) {
    PipelineResult out;
    try {
        if (opt.mode != "classify" && opt.mode != "series" && opt.mode != "verify" && opt.mode != "bb")
            throw PreconditionError("unknown mode '" + opt.mode + "'");
        ReportDocument doc;
        if (opt.mode == "bb") {
            doc = bb_pipeline(input, opt);
        } else {
            SystemDocument sd = parse_system_document(input);
            HoloSystem h = to_holo_system(sd, opt.order);
            doc.mode = opt.mode;
            doc.order = opt.order;
            doc.description = sd.description;
            fill_spectrum(doc, spectrum_of(h.linear, opt.numeric_fallback));
            NormalizedSystem ns = normalize_system(h, opt.numeric_fallback);
            doc.certified = doc.certified && ns.certified;
            doc.variables = ns.system.names;
            doc.normal_form = to_string(ns.system.normal_form);
            if (ns.changed) doc.basis = matrix_strings(ns.basis);
            auto reports = enumerate_centers(ns.system, opt.order);
            if (reports.empty()) doc.message = "no purely imaginary eigenvalue";
            bool failed = false;
            for (const auto& r : reports) {
                ChartEntry e = chart_entry(ns.system, r, opt.mode != "classify");
                if (opt.mode == "verify" && r.multiplicity != Multiplicity::none) {
                    VerifyOptions vo;
                    vo.starts = opt.starts;
                    vo.radius = opt.radius;
                    vo.tol = opt.tol;
                    vo.step = opt.step;
                    VerifyResult v = check_isochronous(ns.system, r, vo);
                    attach_verification(e, v);
                    if (!v.pass) {
                        failed = true;
                        out.diagnostics += "verification failed on chart " + e.chart + " (return error " +
                                           std::to_string(v.return_error) + ")\n" + v.diagnostics;
                    }
                }
                doc.charts.push_back(std::move(e));
            }
            if (!doc.certified) out.diagnostics += "warning: spectrum handled numerically; results are not certified\n";
            if (failed) out.exit_code = exit_verification;
        }
        out.output = emit_report(doc, opt.format);
    } catch (const ParseError& e) {
        out.exit_code = exit_parse;
        out.diagnostics += std::string("parse error: ") + e.what() + "\n";
    } catch (const DimensionError& e) {
        out.exit_code = exit_parse;
        out.diagnostics += std::string("parse error: ") + e.what() + "\n";
    } catch (const UncertifiableSpectrumError& e) {
        out.exit_code = exit_unsupported;
        out.diagnostics += std::string("uncertifiable spectrum: ") + e.what() +
                           " (rerun with --numeric-fallback for an uncertified answer)\n";
    } catch (const Error& e) {
        out.exit_code = exit_unsupported;
        out.diagnostics += std::string("unsupported input: ") + e.what() + "\n";
    }
    return out;
}

}  // namespace bbcf
