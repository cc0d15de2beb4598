// JSON forms of series, verification reports and identity reports, plus the
// catalog export. Coefficients are serialized as strings: they are exact
// integers of unbounded size.
#pragma once

#include <json.hpp>

#include "qseries/catalog.hpp"
#include "qseries/format.hpp"
#include "qseries/identities.hpp"

namespace qseries {

using json = nlohmann::json;

inline json terms_to_json(const std::map<HalfExp, Int>& terms) {
    json arr = json::array();
    for (const auto& [e, c] : terms) arr.push_back({{"e", e.str()}, {"c", c.get_str()}});
    return arr;
}

inline json to_json(const QPolynomial& p) { return {{"terms", terms_to_json(p.terms())}}; }

inline json to_json(const QSeries& s) {
    return {{"terms", terms_to_json(s.terms())}, {"order", s.order().str()}};
}

inline json to_json(const CoeffMismatch& m) {
    return {{"L", m.L},
            {"exponent", m.exponent.str()},
            {"lhs_coeff", m.lhs.get_str()},
            {"rhs_coeff", m.rhs.get_str()}};
}

inline json to_json(const VerifyReport& r) {
    json j{{"label", r.label},     {"eta", r.eta},
           {"l_max", r.l_max},     {"order", r.order.halves},
           {"status", r.status},   {"runtime_ms", r.runtime_ms}};
    if (r.mismatch) j["first_mismatch"] = to_json(*r.mismatch);
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

inline json to_json(const IdentityReport& r) {
    json j{{"name", r.name},       {"params", r.params},
           {"order", r.order.halves}, {"status", r.status},
           {"runtime_ms", r.runtime_ms}};
    if (r.mismatch) j["first_mismatch"] = to_json(*r.mismatch);
    if (!r.detail.empty()) j["detail"] = r.detail;
    json lead = json::array();
    int count = 0;
    for (const auto& [e, c] : r.lhs.terms()) {
        if (count++ >= 8) break;
        lead.push_back({{"e", e.str()}, {"c", c.get_str()}});
    }
    j["lhs_leading"] = lead;
    json rlead = json::array();
    count = 0;
    for (const auto& [e, c] : r.rhs.terms()) {
        if (count++ >= 8) break;
        rlead.push_back({{"e", e.str()}, {"c", c.get_str()}});
    }
    j["rhs_leading"] = rlead;
    return j;
}

inline HalfExp halfexp_from_str(const std::string& s) {
    if (auto pos = s.find('/'); pos != std::string::npos)
        return HalfExp::half_steps(std::stoll(s.substr(0, pos)));
    return HalfExp::integer(std::stoll(s));
}

inline CoeffMismatch mismatch_from_json(const json& j) {
    CoeffMismatch m;
    m.L = j.at("L").get<int>();
    m.exponent = halfexp_from_str(j.at("exponent").get<std::string>());
    m.lhs = Int(j.at("lhs_coeff").get<std::string>());
    m.rhs = Int(j.at("rhs_coeff").get<std::string>());
    return m;
}

inline VerifyReport verify_report_from_json(const json& j) {
    VerifyReport r;
    r.label = j.at("label").get<std::string>();
    r.eta = j.at("eta").get<int>();
    r.l_max = j.at("l_max").get<int>();
    r.order = HalfExp::half_steps(j.at("order").get<std::int64_t>());
    r.status = j.at("status").get<std::string>();
    r.runtime_ms = j.at("runtime_ms").get<double>();
    if (j.contains("first_mismatch")) r.mismatch = mismatch_from_json(j["first_mismatch"]);
    if (j.contains("detail")) r.detail = j["detail"].get<std::string>();
    return r;
}

// Rebuilds an identity report from its JSON form. The lhs/rhs series carry
// the serialized leading terms, so serializing again reproduces the same
// JSON: reports round-trip at the JSON level.
inline IdentityReport identity_report_from_json(const json& j) {
    IdentityReport r;
    r.name = j.at("name").get<std::string>();
    r.params = j.at("params").get<std::string>();
    r.order = HalfExp::half_steps(j.at("order").get<std::int64_t>());
    r.status = j.at("status").get<std::string>();
    r.runtime_ms = j.at("runtime_ms").get<double>();
    if (j.contains("first_mismatch")) r.mismatch = mismatch_from_json(j["first_mismatch"]);
    if (j.contains("detail")) r.detail = j["detail"].get<std::string>();
    const auto read_series = [&](const char* key) {
        QSeries s(r.order);
        for (const auto& t : j.at(key))
            s.add_term(halfexp_from_str(t.at("e").get<std::string>()),
                       Int(t.at("c").get<std::string>()));
        return s;
    };
    r.lhs = read_series("lhs_leading");
    r.rhs = read_series("rhs_leading");
    return r;
}

inline json catalog_export_json(int l_max, HalfExp order) {
    json entries = json::array();
    Catalog& cat = Catalog::instance();
    for (const std::string& label : cat.list()) {
        const CatalogEntry& e = cat.get(label);
        json item{{"label", e.label}, {"source", e.source}};
        if (e.is_bailey()) {
            const BaileyPair& p = e.bailey();
            item["kind"] = "bailey";
            item["eta"] = p.eta;
            json alphas = json::array(), betas = json::array();
            for (int L = 0; L <= l_max; ++L) {
                alphas.push_back(to_json(p.alpha(L, order).truncated(order)));
                betas.push_back(to_json(p.beta(L, order).truncated(order)));
            }
            item["alpha"] = alphas;
            item["beta"] = betas;
        } else {
            const ConjugatePair& p = e.conjugate();
            item["kind"] = "conjugate";
            item["eta"] = p.eta;
            json gammas = json::array(), deltas = json::array();
            for (int L = 0; L <= l_max; ++L) {
                gammas.push_back(to_json(p.gamma(L, order).truncated(order)));
                deltas.push_back(to_json(p.delta(L, order).truncated(order)));
            }
            item["gamma"] = gammas;
            item["delta"] = deltas;
        }
        entries.push_back(std::move(item));
    }
    return {{"entries", entries}};
}

}  // namespace qseries
