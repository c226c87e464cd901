#pragma once

// JSON forms of the public artifacts.  Arrangement files look like
//   {"field":"Q","vars":["x","y","z"],"forms":[[1,0,0],...],"mult":[2,2,2,1,1,1]}
// and round-trip bit-exactly.  Rationals are emitted as JSON integers when
// integral (and in range), as "p/q" strings otherwise.

#include <json.hpp>

#include <string>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/derivation.hpp"
#include "x3der/extension.hpp"
#include "x3der/field.hpp"

namespace x3der {

using json = nlohmann::json;

inline json scalar_to_json(const Rat& r) {
    if (r.is_integer() && r.num().fits_slong_p()) return json(static_cast<long long>(r.num().get_si()));
    return json(r.str());
}
inline json scalar_to_json(const Fp& x) { return json(x.rep()); }

template <class F>
typename F::Scalar scalar_from_json(const F& field, const json& j) {
    if (j.is_number_integer()) return field.of_int(j.get<long long>());
    if (j.is_number_unsigned()) return field.of_int(static_cast<long long>(j.get<unsigned long long>()));
    if (j.is_string()) return field.parse(j.get<std::string>());
    throw invalid_input("expected an exact scalar (integer or string), got " + j.dump());
}

template <class F, class K = typename F::Scalar>
json arrangement_to_json(const F& field, const MultiArrangement<K>& a) {
    json j;
    j["field"] = field.name();
    std::vector<std::string> vars(default_var_names().begin(),
                                  default_var_names().begin() + a.nvars());
    j["vars"] = vars;
    json forms = json::array();
    for (int i = 0; i < a.size(); ++i) {
        json row = json::array();
        for (const auto& c : a.form(i)) row.push_back(scalar_to_json(c));
        forms.push_back(std::move(row));
    }
    j["forms"] = std::move(forms);
    j["mult"] = a.mults();
    return j;
}

template <class F, class K = typename F::Scalar>
MultiArrangement<K> arrangement_from_json(const F& field, const json& j) {
    if (!j.contains("field") || !j.contains("vars") || !j.contains("forms") || !j.contains("mult"))
        throw invalid_input("arrangement JSON needs field, vars, forms, mult");
    if (j["field"].get<std::string>() != field.name())
        throw invalid_input("arrangement field " + j["field"].get<std::string>() +
                            " does not match the requested field " + field.name());
    const int nvars = static_cast<int>(j["vars"].size());
    std::vector<std::vector<K>> forms;
    for (const auto& row : j["forms"]) {
        std::vector<K> f;
        for (const auto& c : row) f.push_back(scalar_from_json(field, c));
        forms.push_back(std::move(f));
    }
    std::vector<int> mult = j["mult"].get<std::vector<int>>();
    return MultiArrangement<K>(nvars, std::move(forms), std::move(mult));
}

template <class K>
json derivation_to_json(const Derivation<K>& th) {
    json j = json::array();
    for (const auto& p : th.coeffs) j.push_back(to_string(p));
    return j;
}

template <class K>
json verdict_to_json(const FreenessVerdict<K>& v) {
    json j;
    j["status"] = freeness_str(v.status);
    j["witness"] = v.witness;
    if (v.status == Freeness::Free) j["exponents"] = v.exponents;
    if (v.saito_scalar) {
        json cert;
        cert["saito_scalar"] = scalar_to_json(*v.saito_scalar);
        json basis = json::array();
        for (const auto& th : v.basis) basis.push_back(derivation_to_json(th));
        cert["basis"] = std::move(basis);
        j["certificate"] = std::move(cert);
    }
    if (v.minor_cols) {
        j["minor_cols"] = *v.minor_cols;
        j["minor_value"] = scalar_to_json(*v.minor_value);
    }
    return j;
}

inline json char_poly_to_json(const CharPoly& chi) {
    json j;
    j["coeffs"] = chi.coeffs;
    j["text"] = chi.str();
    if (chi.roots)
        j["integer_roots"] = *chi.roots;
    else
        j["integer_roots"] = nullptr;
    return j;
}

template <class K>
json extension_report_to_json(const ExtensionReport<K>& rep) {
    json j;
    j["ok"] = rep.ok;
    j["restriction_ok"] = rep.restriction_ok;
    if (rep.alpha) j["restriction_alpha"] = scalar_to_json(*rep.alpha);
    j["restricted_mult"] = rep.restricted_mult;
    j["restriction_classified"] = freeness_str(rep.restriction_classified);
    j["simple_restriction_free"] = rep.simple_restriction_free;
    json locals = json::array();
    for (const auto& c : rep.locals) {
        json lc;
        lc["flat"] = c.flat;
        lc["route"] = c.grid_route ? "grid-line" : "yoshinaga";
        lc["free"] = c.free;
        locals.push_back(std::move(lc));
    }
    j["locals"] = std::move(locals);
    if (!rep.failure.empty()) j["failure"] = rep.failure;
    return j;
}

inline json terao_trace_to_json(const TeraoTrace& tr) {
    json steps = json::array();
    for (const auto& s : tr.steps) {
        json st;
        st["name"] = s.name;
        st["pass"] = s.pass;
        st["detail"] = s.detail;
        steps.push_back(std::move(st));
    }
    json j;
    j["steps"] = std::move(steps);
    j["all_pass"] = tr.all_pass;
    return j;
}

}  // namespace x3der
