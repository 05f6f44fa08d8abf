#pragma once
// JSON and CSV emission for the library's value and report types.  Every JSON
// document opens with a "schema" version and keeps insertion order, so the
// same inputs always serialize to exactly the same bytes.  Non-finite values
// are emitted as the strings "inf", "-inf", "nan" rather than null, since
// divergence is a meaningful verdict here, not missing data.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlbesov/besov.hpp"
#include "rlbesov/criteria.hpp"
#include "rlbesov/harness.hpp"
#include "rlbesov/piecewise.hpp"
#include "rlbesov/wavelet.hpp"
#include "rlbesov/weights.hpp"

namespace rlbesov {

using Json = nlohmann::ordered_json;

// Doubles become JSON numbers when finite and explicit strings otherwise.
inline Json jnum(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

// Shortest exact decimal form, for CSV cells.
inline std::string num_str(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {  // try shorter forms that still round-trip
        for (int prec = 1; prec < 17; ++prec) {
            char s[40];
            std::snprintf(s, sizeof s, "%.*g", prec, v);
            std::sscanf(s, "%lf", &back);
            if (back == v) return s;
        }
    }
    return buf;
}

inline Json json_of(const Dyadic& d) { return Json::array({d.num(), d.log2den()}); }

inline Json json_of(const PiecewisePoly& f) {
    Json j;
    Json bps = Json::array();
    for (const Dyadic& b : f.bp) bps.push_back(json_of(b));
    j["breakpoints"] = std::move(bps);
    Json pieces = Json::array();
    for (const Poly& p : f.pieces) {
        Json row = Json::array();
        for (double c : p) row.push_back(jnum(c));
        pieces.push_back(std::move(row));
    }
    j["pieces"] = std::move(pieces);
    Json lt = Json::array(), rt = Json::array();
    for (double c : f.ltail) lt.push_back(jnum(c));
    for (double c : f.rtail) rt.push_back(jnum(c));
    j["ltail"] = std::move(lt);
    j["rtail"] = std::move(rt);
    return j;
}

inline Json json_of(const SeqCoeffs& lam) {
    Json entries = Json::array();
    for (const auto& [d, row] : lam.levels)
        for (const auto& [tau, v] : row)
            entries.push_back(Json{{"d", d}, {"tau", tau}, {"value", jnum(v)}});
    Json j;
    j["count"] = lam.size();
    j["top_level"] = lam.top_level();
    j["entries"] = std::move(entries);
    return j;
}

inline Json json_of(const NormEstimate& ne) {
    Json j;
    j["value"] = jnum(ne.value);
    j["verdict"] = ne.verdict;
    j["tail_ratio"] = jnum(ne.tail_ratio);
    Json lev = Json::array();
    for (double v : ne.level_contribution) lev.push_back(jnum(v));
    j["level_contribution"] = std::move(lev);
    j["tau_window_used"] = Json::array({ne.tau_lo_used, ne.tau_hi_used});
    return j;
}

inline Json json_of(const EulerConstants& ec) {
    Json j;
    j["n"] = ec.n;
    Json su = Json::array(), rho = Json::array(), r = Json::array();
    for (double v : ec.symbol_u) su.push_back(jnum(v));
    for (double v : ec.rho) rho.push_back(jnum(v));
    for (double v : ec.r) r.push_back(jnum(v));
    j["symbol_u"] = std::move(su);
    j["rho"] = std::move(rho);
    j["r"] = std::move(r);
    j["beta"] = jnum(ec.beta);
    j["gamma"] = jnum(ec.gamma);
    j["lambda_total"] = jnum(ec.lambda_total);
    return j;
}

inline Json json_of(const LambdaCoeffs& lc) {
    Json j;
    j["m"] = lc.m;
    Json raw = Json::array(), lraw = Json::array(), lam = Json::array();
    for (double v : lc.raw) raw.push_back(jnum(v));
    for (double v : lc.lambda_raw) lraw.push_back(jnum(v));
    for (double v : lc.lambda) lam.push_back(jnum(v));
    j["raw"] = std::move(raw);
    j["lambda_raw"] = std::move(lraw);
    j["scale"] = jnum(lc.scale);
    j["lambda"] = std::move(lam);
    return j;
}

inline Json json_of(const GeneralizedWavelet& gw) {
    Json j;
    j["n"] = gw.spec.n;
    j["m"] = gw.spec.m;
    j["a"] = gw.spec.a.str();
    j["s"] = gw.spec.s.str();
    j["conv"] = gw.spec.conv_flag;
    j["diff"] = gw.spec.diff_flag;
    j["alpha"] = gw.spec.alpha;
    j["support"] = Json::array({gw.support_lo.str(), gw.support_hi.str()});
    Json row = Json::array();
    for (double c : gw.coeffs.c) row.push_back(jnum(c));
    j["coeff_lo"] = gw.coeffs.lo;
    j["coeffs"] = std::move(row);
    j["fn"] = json_of(gw.fn);
    return j;
}

inline Json json_of(const ThetaOverlap& th) {
    Json j;
    j["n_star"] = th.n_star;
    j["m_star"] = th.m_star;
    j["formula"] = jnum(th.formula);
    j["via_inner"] = jnum(th.via_inner);
    j["sign"] = jnum(th.sign);
    j["overlap"] = Json::array({th.overlap_lo.str(), th.overlap_hi.str()});
    return j;
}

inline Json json_of(const MuckenhouptResult& mr) {
    Json j;
    j["value"] = jnum(mr.value);
    j["arg_d"] = mr.arg_d;
    j["arg_tau"] = mr.arg_tau;
    return j;
}

inline Json json_of(const IndexBracket& br) {
    Json j;
    j["lo"] = jnum(br.lo);
    j["hi"] = jnum(br.hi);
    j["hi_is_infinite"] = br.hi_is_infinite;
    return j;
}

inline Json json_of(const DoublingWitness& dw) {
    Json j;
    j["c1"] = jnum(dw.c1);
    j["c2"] = jnum(dw.c2);
    return j;
}

inline Json json_of(const CriterionReport& rep) {
    Json j;
    j["functional"] = rep.functional;
    j["value"] = jnum(rep.value);
    j["verdict"] = rep.verdict;
    j["tau_star"] = rep.tau_star;
    j["d_star"] = rep.d_star;
    j["windows"] = Json{{"tau", rep.tau_window}, {"series", rep.series_window},
                        {"d_max", rep.d_max}};
    j["tail_ratio"] = jnum(rep.tail_ratio);
    j["level0_part"] = jnum(rep.level0_part);
    j["dscan_part"] = jnum(rep.dscan_part);
    Json prof = Json::array();
    for (double v : rep.d_profile) prof.push_back(jnum(v));
    j["d_profile"] = std::move(prof);
    if (rep.eps_first >= 0.0) j["eps_first"] = jnum(rep.eps_first);
    if (rep.eps_second >= 0.0) j["eps_second"] = jnum(rep.eps_second);
    j["warnings"] = rep.warnings;
    return j;
}

inline Json json_of(const ReductionReport& rr) {
    Json j;
    j["kappa_opt"] = jnum(rr.kappa_opt);
    j["step_ratio"] = jnum(rr.step_ratio);
    j["level0_value"] = jnum(rr.level0_value);
    j["predicted_sup"] = jnum(rr.predicted_sup);
    j["note"] = rr.note;
    return j;
}

inline Json json_of(const IntegralFormReport& ir) {
    Json j;
    j["value"] = jnum(ir.value);
    j["tau_star"] = ir.tau_star;
    j["discrete_value"] = jnum(ir.discrete_value);
    j["ratio"] = jnum(ir.ratio);
    j["verdict"] = ir.verdict;
    j["warnings"] = ir.warnings;
    return j;
}

inline Json json_of(const EmpiricalReport& er) {
    Json j;
    j["value"] = jnum(er.value);
    j["best_index"] = er.best_index;
    j["skipped"] = er.skipped;
    j["seed"] = er.seed;
    j["family"] = er.family_label;
    Json ratios = Json::array();
    for (double v : er.ratios) ratios.push_back(jnum(v));
    j["ratios"] = std::move(ratios);
    Json notes = Json::array();
    for (const std::string& s : er.notes) notes.push_back(s);
    j["notes"] = std::move(notes);
    return j;
}

inline Json json_of(const CompareVerdict& cv) {
    Json j;
    j["pass"] = cv.pass;
    j["upper_ok"] = cv.upper_ok;
    j["lower_ok"] = cv.lower_ok;
    j["criterion"] = jnum(cv.criterion);
    j["empirical"] = jnum(cv.empirical);
    j["detail"] = cv.detail;
    return j;
}

inline Json json_of(const LowerBoundReport& lb) {
    Json j;
    j["lhs"] = jnum(lb.lhs);
    j["witness"] = jnum(lb.witness);
    j["ratio"] = jnum(lb.ratio);
    j["R"] = lb.R;
    j["nu"] = lb.nu;
    j["m_star"] = lb.m_star;
    j["alpha"] = lb.alpha;
    j["p"] = lb.p;
    return j;
}

inline Json json_of(const OverlapCheck& oc) {
    Json j;
    j["theta"] = jnum(oc.theta);
    j["formula"] = jnum(oc.formula);
    j["single"] = oc.single;
    j["overlap"] = Json::array({oc.overlap_lo.str(), oc.overlap_hi.str()});
    j["warning"] = oc.warning;
    return j;
}

// Versioned envelope: {"schema": 1, "kind": ..., <payload keys>}.
inline Json report_json(const std::string& kind, const Json& payload) {
    Json j;
    j["schema"] = 1;
    j["kind"] = kind;
    for (const auto& [k, v] : payload.items()) j[k] = v;
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV views (the plotting interface)
// ---------------------------------------------------------------------------

// Per-level profile of a criterion scan: one row per level d = 0..d_max.
inline std::string csv_d_profile(const CriterionReport& rep) {
    std::string out = "d,value\n";
    for (std::size_t d = 0; d < rep.d_profile.size(); ++d)
        out += std::to_string(d) + "," + num_str(rep.d_profile[d]) + "\n";
    return out;
}

// Sparse coefficient triplets, ordered by (d, tau).
inline std::string csv_seq_coeffs(const SeqCoeffs& lam) {
    std::string out = "d,tau,value\n";
    for (const auto& [d, row] : lam.levels)
        for (const auto& [tau, v] : row)
            out += std::to_string(d) + "," + std::to_string(tau) + "," + num_str(v) + "\n";
    return out;
}

// Member-by-member ratios of an empirical run.
inline std::string csv_empirical(const EmpiricalReport& er) {
    std::string out = "index,ratio,note\n";
    for (std::size_t i = 0; i < er.ratios.size(); ++i)
        out += std::to_string(i) + "," + num_str(er.ratios[i]) + "," +
               (i < er.notes.size() ? er.notes[i] : std::string()) + "\n";
    return out;
}

}  // namespace rlbesov
