// Command-line surface: verification, chain/lattice exploration,
// configuration sums, string functions, identity suites and the catalog.
// All evaluation is deterministic; --jobs only parallelizes independent
// reports and never changes results or output order.
#pragma once

#include <CLI11.hpp>

#include <atomic>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qseries/json_io.hpp"

namespace qseries::cli {

namespace detail {

inline PPPair parse_pp(const std::string& s) {
    const auto pos = s.find(',');
    if (pos == std::string::npos) throw error("expected p,p' (e.g. 3,4), got '" + s + "'");
    return PPPair(std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1)));
}

inline std::pair<std::int64_t, std::int64_t> parse_int_pair(const std::string& s) {
    const auto pos = s.find(',');
    if (pos == std::string::npos) throw error("expected a,b (e.g. 1,1), got '" + s + "'");
    return {std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 1))};
}

// rho syntax: "inf", or "[+|-]k" for sign * q^(k/2); so "-1" is -q^(1/2).
inline RhoSpec parse_rho(const std::string& s) {
    if (s == "inf" || s == "infinity") return RhoSpec::infinity();
    std::string body = s;
    int sign = 1;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        sign = body[0] == '-' ? -1 : 1;
        body = body.substr(1);
    }
    return RhoSpec::finite_power(sign, std::stoll(body));
}

inline std::optional<int> parse_m(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::nullopt;
    return std::stoi(s);
}

template <class T>
std::vector<T> run_tasks(std::vector<std::function<T()>> tasks, int jobs) {
    std::vector<T> results(tasks.size());
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
    for (int t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                results[i] = tasks[i]();
        });
    for (auto& th : pool) th.join();
    return results;
}

inline void print_verify_text(std::ostream& out, const VerifyReport& r) {
    out << r.label << ": " << r.status << " (eta=" << r.eta << ", L<=" << r.l_max
        << ", to q^" << r.order.str();
    out << ", " << r.runtime_ms << " ms)";
    if (r.mismatch)
        out << "\n  first mismatch: L=" << r.mismatch->L << " at q^("
            << r.mismatch->exponent.str() << "): lhs=" << r.mismatch->lhs.get_str()
            << " rhs=" << r.mismatch->rhs.get_str();
    if (!r.detail.empty()) out << "\n  " << r.detail;
    out << "\n";
}

inline void print_identity_text(std::ostream& out, const IdentityReport& r) {
    out << r.name << "[" << r.params << "]: " << r.status << " (to q^" << r.order.str()
        << ", " << r.runtime_ms << " ms)";
    if (r.mismatch)
        out << "\n  first mismatch at q^(" << r.mismatch->exponent.str()
            << "): lhs=" << r.mismatch->lhs.get_str() << " rhs=" << r.mismatch->rhs.get_str();
    if (!r.detail.empty()) out << "\n  " << r.detail;
    if (r.ok()) {
        out << "\n  lhs: " << to_string(r.lhs.truncated(std::min(r.lhs.order(), HalfExp::integer(12))));
        if (r.lhs.order() > HalfExp::integer(12)) out << " + ...";
    }
    out << "\n";
}

inline void print_pair_table(std::ostream& out, const BaileyPair& p, int l_max, HalfExp order) {
    out << "Bailey pair " << p.label << " relative to q^" << p.eta << "\n";
    for (int L = 0; L <= l_max; ++L) {
        if (p.alpha_exact)
            out << "  alpha_" << L << " = " << to_string(p.alpha_exact(L)) << "\n";
        else
            out << "  alpha_" << L << " = "
                << to_string(p.alpha(L, order).truncated(order)) << " + ...\n";
    }
    for (int L = 0; L <= l_max; ++L)
        out << "  beta_" << L << "  = " << to_string(p.beta(L, order).truncated(order))
            << " + ...\n";
}

inline void print_conjugate_table(std::ostream& out, const ConjugatePair& p, int l_max,
                                  HalfExp order) {
    out << "Conjugate Bailey pair " << p.label << " relative to q^" << p.eta << "\n";
    for (int L = 0; L <= l_max; ++L)
        out << "  gamma_" << L << " = " << to_string(p.gamma(L, order).truncated(order))
            << " + ...\n";
    for (int L = 0; L <= l_max; ++L) {
        if (p.delta_exact)
            out << "  delta_" << L << " = " << to_string(p.delta_exact(L)) << "\n";
        else
            out << "  delta_" << L << " = " << to_string(p.delta(L, order).truncated(order))
                << " + ...\n";
    }
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qseries: exact Bailey-pair and q-series identity engine"};
    app.require_subcommand(1);

    std::int64_t order_halves = 60;
    int l_max = 8;
    std::string format = "text";
    int jobs = 1;
    app.add_option("--order", order_halves,
                   "truncation order in half-steps of q (60 = q^30)")
        ->capture_default_str();
    app.add_option("--lmax", l_max, "largest pair index L to check")->capture_default_str();
    app.add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads for independent reports")
        ->capture_default_str();

    // verify-pair
    std::string vp_label;
    CLI::App* vp = app.add_subcommand("verify-pair", "check a Bailey pair from the catalog");
    vp->add_option("label", vp_label, "catalog label, e.g. A(1), or 'all'")->required();

    // verify-conjugate
    std::string vc_kind, vc_m = "inf", vc_rho1 = "inf", vc_rho2 = "inf", vc_pp = "1,3";
    int vc_eta = 0, vc_ell = 0, vc_j = 0;
    CLI::App* vc = app.add_subcommand("verify-conjugate", "check a conjugate Bailey pair");
    vc->add_option("kind", vc_kind, "gdinf | saalschutz | cbp2 | K")->required();
    vc->add_option("--eta", vc_eta, "a = q^eta");
    vc->add_option("--M", vc_m, "Saalschutz M (integer or inf)");
    vc->add_option("--rho1", vc_rho1, "rho1: inf or [+-]k for sign*q^(k/2)");
    vc->add_option("--rho2", vc_rho2, "rho2: same syntax");
    vc->add_option("--pp", vc_pp, "p,p' for cbp2");
    vc->add_option("--ell", vc_ell, "ell for cbp2");
    vc->add_option("--j", vc_j, "j for the K family");

    // chain
    std::string ch_label, ch_rho1 = "inf", ch_rho2 = "inf";
    CLI::App* ch = app.add_subcommand("chain", "one Bailey chain step on a catalog pair");
    ch->add_option("label", ch_label)->required();
    ch->add_option("--rho1", ch_rho1);
    ch->add_option("--rho2", ch_rho2);

    // lattice
    std::string lt_label, lt_variant = "I", lt_rho1 = "inf", lt_rho2 = "inf";
    int lt_n = 1;
    CLI::App* lt = app.add_subcommand("lattice", "one Bailey lattice step (b = a q^N)");
    lt->add_option("label", lt_label)->required();
    lt->add_option("--variant", lt_variant)->check(CLI::IsMember({"I", "II"}));
    lt->add_option("--N", lt_n);
    lt->add_option("--rho1", lt_rho1);
    lt->add_option("--rho2", lt_rho2);

    // configsum
    std::vector<std::string> cs_args;
    CLI::App* cs = app.add_subcommand(
        "configsum", "configuration sums: X p,p' r,s L,b | F p,p' r,s L | F01 p,p' L");
    cs->add_option("query", cs_args)->expected(-1);

    // stringfn
    std::vector<std::string> sf_args;
    CLI::App* sf = app.add_subcommand("stringfn", "string functions: C p,p' m,l");
    sf->add_option("query", sf_args)->expected(-1);

    // identity
    std::string id_which, id_pair = "B(1)", id_conj = "gdinf", id_m = "inf",
                id_rho1 = "inf", id_rho2 = "inf", id_route = "direct", id_pp1 = "2,3",
                id_rs = "1,1", id_pp2 = "1,3";
    int id_i = 0, id_k = 2;
    CLI::App* id = app.add_subcommand("identity", "identity suites: rr | ag | slater | coset");
    id->add_option("which", id_which)->required()->check(CLI::IsMember({"rr", "ag", "slater", "coset"}));
    id->add_option("--i", id_i, "index i (0 = all valid)");
    id->add_option("--k", id_k, "Andrews-Gordon k");
    id->add_option("--route", id_route)->check(CLI::IsMember({"direct", "derived", "both"}));
    id->add_option("--pair", id_pair, "Bailey pair label for slater");
    id->add_option("--conj", id_conj, "gdinf | saalschutz");
    id->add_option("--M", id_m);
    id->add_option("--rho1", id_rho1);
    id->add_option("--rho2", id_rho2);
    id->add_option("--pp1", id_pp1, "first (p,p') for coset");
    id->add_option("--rs", id_rs, "(r,s) for coset");
    id->add_option("--pp2", id_pp2, "second (p,p') for coset");

    // catalog
    std::string cat_action, cat_label;
    CLI::App* cat = app.add_subcommand("catalog", "list | show <label> | export");
    cat->add_option("action", cat_action)->required()->check(CLI::IsMember({"list", "show", "export"}));
    cat->add_option("label", cat_label);

    for (CLI::App* sub : {vp, vc, ch, lt, cs, sf, id, cat}) sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("qseries");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    const HalfExp order = HalfExp::half_steps(order_halves);
    const bool as_json = format == "json";

    try {
        if (*vp) {
            std::vector<std::string> labels;
            if (vp_label == "all") {
                for (const auto& l : Catalog::instance().list())
                    if (Catalog::instance().get(l).is_bailey()) labels.push_back(l);
            } else {
                labels.push_back(vp_label);
            }
            std::vector<std::function<VerifyReport()>> tasks;
            for (const auto& l : labels)
                tasks.push_back([l, l_max, order] {
                    return verify_bailey_pair(Catalog::instance().get(l).bailey(), l_max, order);
                });
            const auto reports = detail::run_tasks(std::move(tasks), jobs);
            int rc = 0;
            json jarr = json::array();
            for (const auto& r : reports) {
                if (as_json)
                    jarr.push_back(to_json(r));
                else
                    detail::print_verify_text(out, r);
                if (!r.ok()) rc = 1;
            }
            if (as_json) out << jarr.dump(2) << "\n";
            return rc;
        }
        if (*vc) {
            ConjugatePair cp = [&]() -> ConjugatePair {
                if (vc_kind == "gdinf") return conjugate_gdinf(vc_eta);
                if (vc_kind == "saalschutz")
                    return conjugate_saalschutz(vc_eta, detail::parse_m(vc_m),
                                                detail::parse_rho(vc_rho1),
                                                detail::parse_rho(vc_rho2));
                if (vc_kind == "cbp2")
                    return conj_pair_cbp2(detail::parse_pp(vc_pp), vc_eta, vc_ell);
                if (vc_kind == "K") return conj_pair_binomial(vc_eta, vc_j);
                throw error("unknown conjugate pair kind '" + vc_kind + "'");
            }();
            const VerifyReport r = verify_conjugate_pair(cp, l_max, order);
            if (as_json)
                out << to_json(r).dump(2) << "\n";
            else
                detail::print_verify_text(out, r);
            return r.ok() ? 0 : 1;
        }
        if (*ch || *lt) {
            const std::string label = *ch ? ch_label : lt_label;
            const BaileyPair& base = Catalog::instance().get(label).bailey();
            BaileyPair derived =
                *ch ? chain_step(base, detail::parse_rho(ch_rho1), detail::parse_rho(ch_rho2))
                    : (lt_variant == "I"
                           ? lattice_step_I(base, lt_n, detail::parse_rho(lt_rho1),
                                            detail::parse_rho(lt_rho2))
                           : lattice_step_II(base, lt_n, detail::parse_rho(lt_rho1),
                                             detail::parse_rho(lt_rho2)));
            const VerifyReport r = verify_bailey_pair(derived, l_max, order);
            if (as_json) {
                out << to_json(r).dump(2) << "\n";
            } else {
                detail::print_pair_table(out, derived, std::min(l_max, 4), order);
                detail::print_verify_text(out, r);
            }
            return r.ok() ? 0 : 1;
        }
        if (*cs) {
            if (cs_args.empty()) throw error("configsum: missing query");
            const std::string& form = cs_args[0];
            QPolynomial x;
            if (form == "X") {
                if (cs_args.size() != 4) throw error("configsum: X p,p' r,s L,b");
                const PPPair pp = detail::parse_pp(cs_args[1]);
                const auto [r, s] = detail::parse_int_pair(cs_args[2]);
                const auto [L, b] = detail::parse_int_pair(cs_args[3]);
                x = x_bosonic(ConfigSumQuery(pp, static_cast<int>(r), static_cast<int>(s), L,
                                             static_cast<int>(b)));
            } else if (form == "F") {
                if (cs_args.size() != 4) throw error("configsum: F p,p' r,s L");
                const PPPair pp = detail::parse_pp(cs_args[1]);
                const auto [r, s] = detail::parse_int_pair(cs_args[2]);
                x = x_fermionic(pp, static_cast<int>(r), static_cast<int>(s),
                                std::stoll(cs_args[3]));
            } else if (form == "F01") {
                if (cs_args.size() != 3) throw error("configsum: F01 p,p' L");
                x = x_fermionic_01(detail::parse_pp(cs_args[1]), std::stoll(cs_args[2]));
            } else {
                throw error("configsum: unknown form '" + form + "' (use X, F or F01)");
            }
            if (as_json)
                out << to_json(x).dump(2) << "\n";
            else
                out << to_string(x) << "\n";
            return 0;
        }
        if (*sf) {
            if (sf_args.size() != 3 || sf_args[0] != "C")
                throw error("stringfn: expected C p,p' m,l");
            const PPPair pp = detail::parse_pp(sf_args[1]);
            const auto [m, ell] = detail::parse_int_pair(sf_args[2]);
            const QSeries c =
                string_function(StringFunctionQuery(pp, m, static_cast<int>(ell)), order);
            if (as_json)
                out << to_json(c).dump(2) << "\n";
            else
                out << to_string(c) << "\n";
            return 0;
        }
        if (*id) {
            std::vector<std::function<IdentityReport()>> tasks;
            if (id_which == "rr") {
                for (int i : {1, 2})
                    if (id_i == 0 || id_i == i)
                        tasks.push_back([i, order] { return rogers_ramanujan(i, order); });
            } else if (id_which == "ag") {
                const int k = id_k;
                for (int i = 1; i <= k; ++i) {
                    if (id_i != 0 && id_i != i) continue;
                    if (id_route == "direct" || id_route == "both")
                        tasks.push_back(
                            [k, i, order] { return andrews_gordon(k, i, order, AgRoute::direct); });
                    if (id_route == "derived" || id_route == "both")
                        tasks.push_back(
                            [k, i, order] { return andrews_gordon(k, i, order, AgRoute::derived); });
                }
            } else if (id_which == "slater") {
                SlaterConj conj;
                conj.gdinf = id_conj == "gdinf";
                conj.M = detail::parse_m(id_m);
                conj.rho1 = detail::parse_rho(id_rho1);
                conj.rho2 = detail::parse_rho(id_rho2);
                const std::string pair = id_pair;
                tasks.push_back([pair, conj, order] { return slater_identity(pair, conj, order); });
            } else {
                const PPPair pp1 = detail::parse_pp(id_pp1), pp2 = detail::parse_pp(id_pp2);
                const auto [r, s] = detail::parse_int_pair(id_rs);
                tasks.push_back([pp1, r = static_cast<int>(r), s = static_cast<int>(s), pp2,
                                 order] { return coset_identity(pp1, r, s, pp2, order); });
            }
            if (tasks.empty()) throw error("identity: no cases selected (check --i/--k)");
            const auto reports = detail::run_tasks(std::move(tasks), jobs);
            int rc = 0;
            json jarr = json::array();
            for (const auto& r : reports) {
                if (as_json)
                    jarr.push_back(to_json(r));
                else
                    detail::print_identity_text(out, r);
                if (!r.ok()) rc = 1;
            }
            if (as_json) out << jarr.dump(2) << "\n";
            return rc;
        }
        if (*cat) {
            if (cat_action == "list") {
                for (const auto& l : Catalog::instance().list()) out << l << "\n";
                return 0;
            }
            if (cat_action == "show") {
                if (cat_label.empty()) throw error("catalog show: missing label");
                const CatalogEntry& e = Catalog::instance().get(cat_label);
                if (as_json) {
                    json j{{"label", e.label}, {"source", e.source}};
                    out << j.dump(2) << "\n";
                } else if (e.is_bailey()) {
                    detail::print_pair_table(out, e.bailey(), l_max, order);
                } else {
                    detail::print_conjugate_table(out, e.conjugate(), l_max, order);
                }
                return 0;
            }
            out << catalog_export_json(l_max, order).dump(2) << "\n";
            return 0;
        }
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << app.help();
    return 2;
}

}  // namespace qseries::cli
