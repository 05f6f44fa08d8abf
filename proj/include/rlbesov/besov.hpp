// Dyadic grids, wavelet coefficient extraction, and the weighted sequence-space
// norms that stand in for Besov norms.
//
// The sequence norm over coefficients lambda_{d,tau} is
//
//   ||lambda|| = ( sum_tau |lambda_{0,tau}|^p w(Q_{0,tau}) )^{1/p}
//              + ( sum_{d>=1} 2^{qds} ( sum_tau |lambda_{d,tau}|^p
//                                       w(Q_{(d-1),tau}) )^{q/p} )^{1/q},
//
// with Q_{d,tau} = [tau/2^d, (tau+1)/2^d] and the usual sup-over-levels
// modification for q = infinity.  Coefficients come from the compactly
// supported spline system: level 0 pairs against B_n(. - a - tau), levels
// d >= 1 against 2^{d/2} * Psi((d-1)-dilate, shift tau) where Psi is the
// compact semi-orthogonal wavelet divided by its total pairing constant.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rlbesov/piecewise.hpp"
#include "rlbesov/wavelet.hpp"
#include "rlbesov/weights.hpp"

namespace rlbesov {

struct SpaceParams {
    double p = 2.0;  // > 0 (criteria additionally require p > 1)
    double q = 2.0;  // in (0, inf]; infinity() selects the sup over levels
    double s = 0.0;  // smoothness
    Weight w{};      // weight; masses of dyadic intervals enter the norm
};

struct SplineSystemSpec {
    int n = 1;  // spline order of the scaling/wavelet elements
    Dyadic a;   // grid offset of the system (typically 0 or +-1/2)
};

// Sparse coefficient array: level -> (tau -> value).  Entries absent from the
// map are exactly zero.
struct SeqCoeffs {
    std::map<int, std::map<std::int64_t, double>> levels;

    void set(int d, std::int64_t tau, double v) {
        if (d < 0) throw std::invalid_argument("SeqCoeffs: negative level");
        if (v != 0.0) levels[d][tau] = v;
    }
    double get(int d, std::int64_t tau) const {
        auto it = levels.find(d);
        if (it == levels.end()) return 0.0;
        auto jt = it->second.find(tau);
        return jt == it->second.end() ? 0.0 : jt->second;
    }
    int top_level() const { return levels.empty() ? 0 : levels.rbegin()->first; }
    std::size_t size() const {
        std::size_t t = 0;
        for (const auto& [d, row] : levels) t += row.size();
        return t;
    }
};

namespace detail {

// Mother wavelet of the coefficient system: the compact semi-orthogonal
// wavelet normalized by its total pairing constant Lambda_n.
inline PiecewisePoly coeff_mother(const SplineSystemSpec& sys) {
    CompactWavelet cw = compact_wavelet(sys.n, sys.a, Dyadic(0));
    return pp_scale(cw.fn, 1.0 / euler_constants_cached(sys.n).lambda_total);
}

// Scaling element B_n(. - a - tau).
inline PiecewisePoly coeff_father(const SplineSystemSpec& sys, std::int64_t tau) {
    return pp_transform(bspline(sys.n), 1.0, sys.a + Dyadic(tau), 0);
}

// Wavelet element at level d >= 1 of the coefficient formula: the pairing
// function is 2^{(d-1)/2} mother(2^{d-1} x - tau) and the coefficient carries
// an extra 2^{d/2}; both powers are folded into one prefactor.
inline PiecewisePoly coeff_element(const PiecewisePoly& mother, int d, std::int64_t tau) {
    return pp_transform(mother, 1.0, Dyadic(tau), d - 1);
}

inline double coeff_prefactor(int d) { return std::exp2(0.5 * (2 * d - 1)); }

// Inclusive tau range at level 0 for which B_n(. - a - tau) can meet
// (lo, hi); outside it the inner product is exactly zero.
inline std::pair<std::int64_t, std::int64_t> level0_range(const SplineSystemSpec& sys,
                                                          Dyadic lo, Dyadic hi) {
    std::int64_t t_min = (lo - sys.a).floor() - sys.n - 1;
    std::int64_t t_max = (hi - sys.a).floor() + 1;
    return {t_min, t_max};
}

// Inclusive tau range at level d >= 1: supp of mother(2^{d-1} x - tau) is
// [(tau + slo)/2^{d-1}, (tau + shi)/2^{d-1}] for mother support [slo, shi].
inline std::pair<std::int64_t, std::int64_t> leveld_range(const PiecewisePoly& mother, int d,
                                                          Dyadic lo, Dyadic hi) {
    Dyadic slo = mother.support_lo(), shi = mother.support_hi();
    std::int64_t t_min = (lo.mul_pow2(d - 1) - shi).floor() - 1;
    std::int64_t t_max = (hi.mul_pow2(d - 1) - slo).floor() + 1;
    return {t_min, t_max};
}

}  // namespace detail

// Coefficients of a compactly supported function against the spline system.
// The optional level-0 window, when given, must cover every tau with a
// nonzero coefficient; otherwise the call is rejected with the required
// range.  Per-level windows are derived from the supports and are exact.
inline SeqCoeffs wavelet_coeffs(const PiecewisePoly& f, const SplineSystemSpec& sys, int d_max,
                                std::optional<std::pair<std::int64_t, std::int64_t>> window0 =
                                    std::nullopt) {
    if (d_max < 0) throw std::invalid_argument("wavelet_coeffs: negative level cap");
    SeqCoeffs out;
    if (f.is_zero()) return out;
    if (!f.compact())
        throw std::invalid_argument(
            "wavelet_coeffs: input carries polynomial tails; use besov_norm_estimate");

    Dyadic lo = f.support_lo(), hi = f.support_hi();
    auto [t_min, t_max] = detail::level0_range(sys, lo, hi);
    if (window0 && (window0->first > t_min || window0->second < t_max)) {
        throw std::invalid_argument(
            "wavelet_coeffs: window [" + std::to_string(window0->first) + ", " +
            std::to_string(window0->second) + "] insufficient; need [" + std::to_string(t_min) +
            ", " + std::to_string(t_max) + "]");
    }
    for (std::int64_t tau = t_min; tau <= t_max; ++tau)
        out.set(0, tau, pp_inner(f, detail::coeff_father(sys, tau)));

    if (d_max == 0) return out;
    PiecewisePoly mother = detail::coeff_mother(sys);
    for (int d = 1; d <= d_max; ++d) {
        auto [lo_d, hi_d] = detail::leveld_range(mother, d, lo, hi);
        double pref = detail::coeff_prefactor(d);
        for (std::int64_t tau = lo_d; tau <= hi_d; ++tau)
            out.set(d, tau, pref * pp_inner(f, detail::coeff_element(mother, d, tau)));
    }
    return out;
}

namespace detail {

// ell^q aggregation of nonnegative level norms, max-factored against
// overflow; q = infinity gives the sup.
inline double lq_aggregate(const std::vector<double>& c, double q) {
    double m = 0.0;
    for (double x : c) m = std::max(m, x);
    if (m == 0.0) return 0.0;
    if (!std::isfinite(m)) return m;
    if (std::isinf(q)) return m;
    double acc = 0.0;
    for (double x : c) acc += std::pow(x / m, q);
    return m * std::pow(acc, 1.0 / q);
}

}  // namespace detail

// Weighted sequence norm of a coefficient array.
inline double seq_norm(const SeqCoeffs& lam, const SpaceParams& sp) {
    if (!(sp.p > 0.0)) throw std::invalid_argument("seq_norm: p must be positive");
    if (!(sp.q > 0.0)) throw std::invalid_argument("seq_norm: q must be positive");
    double first = 0.0;
    std::vector<double> level_norms;
    for (const auto& [d, row] : lam.levels) {
        double S = 0.0;
        for (const auto& [tau, v] : row) {
            double cell_lo, cell_hi;
            if (d == 0) {
                cell_lo = double(tau);
                cell_hi = double(tau + 1);
            } else {
                cell_lo = std::ldexp(double(tau), -(d - 1));
                cell_hi = std::ldexp(double(tau + 1), -(d - 1));
            }
            S += std::pow(std::abs(v), sp.p) * sp.w.mass(cell_lo, cell_hi);
        }
        if (d == 0)
            first = std::pow(S, 1.0 / sp.p);
        else
            level_norms.push_back(std::exp2(double(d) * sp.s) * std::pow(S, 1.0 / sp.p));
    }
    return first + detail::lq_aggregate(level_norms, sp.q);
}

namespace detail {

inline std::string weight_cache_key(const Weight& w) {
    std::string key = weight_describe(w) + " c=" + std::to_string(w.c);
    if (w.kind == WeightKind::Table) {
        double acc = 0.0, first = 0.0, last = 0.0;
        if (!w.table_v.empty()) {
            first = w.table_v.front();
            last = w.table_v.back();
            for (double v : w.table_v) acc += v;
        }
        key += " sum=" + std::to_string(acc) + " f=" + std::to_string(first) +
               " l=" + std::to_string(last);
    }
    return key;
}

}  // namespace detail

// Stability index r_w of a weight (upper end of the bracket), memoized: the
// bracket search re-runs many dyadic scans, and norm estimates over large
// function families all query the same few weights.
inline double weight_rw_cached(const Weight& w) {
    static std::mutex mu;
    static std::map<std::string, double> cache;
    std::string key = detail::weight_cache_key(w);
    {
        std::lock_guard<std::mutex> g(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    IndexBracket br = weight_index_bracket(w);
    double rw = br.hi_is_infinite ? std::numeric_limits<double>::infinity() : br.hi;
    std::lock_guard<std::mutex> g(mu);
    cache.emplace(key, rw);
    return rw;
}

// Minimal admissible spline order for the space: the order condition
//   n >= max{0, [s]+1, [(r_w - 1)/p - s] + 1, [sigma_p(w) - s]} + 1
// with r_w the weight's stability index (upper bracket end) and
// sigma_p(w) = r_w/min{p, r_w} - 2 + r_w.
inline int besov_min_order(const SpaceParams& sp) {
    double rw = weight_rw_cached(sp.w);
    if (std::isinf(rw))
        throw std::runtime_error("besov_min_order: weight index bracket is unbounded");
    double sig = rw / std::min(sp.p, rw) - 2.0 + rw;
    double t1 = std::floor(sp.s) + 1.0;
    double t2 = std::floor((rw - 1.0) / sp.p - sp.s) + 1.0;
    double t3 = std::floor(sig - sp.s);
    double m = std::max({0.0, t1, t2, t3});
    return int(m) + 1;
}

// Norm estimate of a piecewise polynomial, with truncation diagnostics.
struct NormEstimate {
    double value = 0.0;
    std::vector<double> level_contribution;  // [0] = scaling term, [d] = 2^{ds} S_d^{1/p}
    double tail_ratio = 0.0;                 // top-level contribution / total
    std::string verdict = "converged";       // converged | inconclusive | diverging
    std::int64_t tau_lo_used = 0, tau_hi_used = 0;  // level-0 window actually evaluated
    SeqCoeffs coeffs;
};

namespace detail {

// Extend the level-0 weighted sum over a polynomial tail of f, in blocks,
// until the relative contribution is negligible, divergence is witnessed, or
// the cap is reached.  `dir` is +1 (right tail) or -1 (left tail).
struct TailScan {
    double sum = 0.0;           // added weighted p-power mass
    std::int64_t last_tau = 0;  // final tau evaluated
    std::string verdict = "converged";
};

inline TailScan scan_level0_tail(const PiecewisePoly& f, const SplineSystemSpec& sys,
                                 const SpaceParams& sp, std::int64_t start, int dir,
                                 double core_sum, std::int64_t tau_cap) {
    constexpr int kBlock = 64;
    constexpr double kRelTol = 1e-10;
    TailScan r;
    r.last_tau = start;
    double prev_block = std::numeric_limits<double>::infinity();
    std::int64_t tau = start;
    while (std::llabs(tau) < tau_cap) {
        double block = 0.0;
        double prev_term = -1.0;
        bool nondecaying = true;
        for (int i = 0; i < kBlock; ++i) {
            tau += dir;
            double lam = pp_inner(f, coeff_father(sys, tau));
            double term = std::pow(std::abs(lam), sp.p) * sp.w.mass(double(tau), double(tau + 1));
            block += term;
            if (term < prev_term) nondecaying = false;
            prev_term = term;
        }
        r.sum += block;
        r.last_tau = tau;
        double total = core_sum + r.sum;
        if (!std::isfinite(block) || (nondecaying && block > 0.0 && block >= prev_block)) {
            r.verdict = "diverging";
            r.sum = std::numeric_limits<double>::infinity();
            return r;
        }
        if (block <= kRelTol * std::max(total, std::numeric_limits<double>::min())) return r;
        prev_block = block;
    }
    r.verdict = "inconclusive";
    return r;
}

}  // namespace detail

// Sequence-norm estimate of f in the space `sp`, computed through the order-n
// spline system.  Handles polynomial tails of degree <= n exactly: wavelet
// coefficients vanish on pure-tail elements, and the level-0 window extends
// adaptively until its weighted contribution is negligible (or divergence is
// witnessed, in which case the value is +infinity).
inline NormEstimate besov_norm_estimate(const PiecewisePoly& f, const SpaceParams& sp,
                                        const SplineSystemSpec& sys, int d_max,
                                        std::int64_t tau_cap = 1 << 16) {
    if (d_max < 1) throw std::invalid_argument("besov_norm_estimate: level cap must be >= 1");
    int n_min = besov_min_order(sp);
    if (sys.n < n_min)
        throw std::invalid_argument("besov_norm_estimate: spline order " + std::to_string(sys.n) +
                                    " below minimal admissible " + std::to_string(n_min));
    NormEstimate est;
    est.level_contribution.assign(size_t(d_max) + 1, 0.0);
    if (f.is_zero()) return est;
    if (int(f.rtail.size()) > sys.n + 1 || int(f.ltail.size()) > sys.n + 1)
        throw std::invalid_argument(
            "besov_norm_estimate: tail degree exceeds the system's vanishing moments");

    Dyadic lo = f.support_lo(), hi = f.support_hi();
    PiecewisePoly mother = detail::coeff_mother(sys);

    // level 0: core window plus adaptive tail extensions
    auto [t_min, t_max] = detail::level0_range(sys, lo, hi);
    double S0 = 0.0;
    for (std::int64_t tau = t_min; tau <= t_max; ++tau) {
        double lam = pp_inner(f, detail::coeff_father(sys, tau));
        est.coeffs.set(0, tau, lam);
        S0 += std::pow(std::abs(lam), sp.p) * sp.w.mass(double(tau), double(tau + 1));
    }
    est.tau_lo_used = t_min;
    est.tau_hi_used = t_max;
    est.verdict = "converged";
    if (!f.rtail.empty()) {
        detail::TailScan ts = detail::scan_level0_tail(f, sys, sp, t_max, +1, S0, tau_cap);
        S0 += ts.sum;
        est.tau_hi_used = ts.last_tau;
        if (ts.verdict != "converged") est.verdict = ts.verdict;
    }
    if (!f.ltail.empty()) {
        detail::TailScan ts = detail::scan_level0_tail(f, sys, sp, t_min, -1, S0, tau_cap);
        S0 += ts.sum;
        est.tau_lo_used = ts.last_tau;
        if (ts.verdict != "converged" && est.verdict != "diverging") est.verdict = ts.verdict;
    }
    est.level_contribution[0] = std::pow(S0, 1.0 / sp.p);

    // levels d >= 1: windows from the breakpoint span; elements fully inside a
    // pure polynomial tail pair to exactly zero (degree <= n), asserted below.
    std::vector<double> level_norms;
    for (int d = 1; d <= d_max; ++d) {
        auto [lo_d, hi_d] = detail::leveld_range(mother, d, lo, hi);
        double pref = detail::coeff_prefactor(d);
        double S = 0.0;
        double max_abs = 0.0;
        for (std::int64_t tau = lo_d; tau <= hi_d; ++tau) {
            double lam = pref * pp_inner(f, detail::coeff_element(mother, d, tau));
            est.coeffs.set(d, tau, lam);
            max_abs = std::max(max_abs, std::abs(lam));
            S += std::pow(std::abs(lam), sp.p) *
                 sp.w.mass(std::ldexp(double(tau), -(d - 1)), std::ldexp(double(tau + 1), -(d - 1)));
        }
        if (!f.rtail.empty()) {
            double probe = pref * pp_inner(f, detail::coeff_element(mother, d, hi_d + 1));
            if (std::abs(probe) > 1e-8 * (1.0 + max_abs))
                throw std::runtime_error(
                    "besov_norm_estimate: wavelet window insufficient on the right tail");
        }
        if (!f.ltail.empty()) {
            double probe = pref * pp_inner(f, detail::coeff_element(mother, d, lo_d - 1));
            if (std::abs(probe) > 1e-8 * (1.0 + max_abs))
                throw std::runtime_error(
                    "besov_norm_estimate: wavelet window insufficient on the left tail");
        }
        double c = std::exp2(double(d) * sp.s) * std::pow(S, 1.0 / sp.p);
        est.level_contribution[size_t(d)] = c;
        level_norms.push_back(c);
    }

    est.value = est.level_contribution[0] + detail::lq_aggregate(level_norms, sp.q);
    if (est.value > 0.0 && std::isfinite(est.value))
        est.tail_ratio = est.level_contribution[size_t(d_max)] / est.value;
    if (!std::isfinite(est.value)) est.verdict = "diverging";
    if (est.verdict == "converged" && est.tail_ratio >= 1e-3) {
        // level profile still rising or flat near the cap: look at the last steps
        bool rising = d_max >= 3 &&
                      est.level_contribution[size_t(d_max)] >
                          est.level_contribution[size_t(d_max - 1)] &&
                      est.level_contribution[size_t(d_max - 1)] >
                          est.level_contribution[size_t(d_max - 2)];
        est.verdict = (rising && est.tail_ratio > 0.2) ? "diverging" : "inconclusive";
    }
    return est;
}

// Sum of the estimates over the three standard grid offsets (0, +1/2, -1/2).
inline NormEstimate besov_norm_estimate_offsets(const PiecewisePoly& f, const SpaceParams& sp,
                                                int n, int d_max) {
    NormEstimate total;
    total.level_contribution.assign(size_t(d_max) + 1, 0.0);
    for (int k = -1; k <= 1; ++k) {
        SplineSystemSpec sys{n, Dyadic(k, 1)};
        NormEstimate e = besov_norm_estimate(f, sp, sys, d_max);
        total.value += e.value;
        for (size_t i = 0; i < total.level_contribution.size(); ++i)
            total.level_contribution[i] += e.level_contribution[i];
        if (e.verdict == "diverging") total.verdict = "diverging";
        else if (e.verdict == "inconclusive" && total.verdict == "converged")
            total.verdict = "inconclusive";
    }
    if (total.value > 0.0 && std::isfinite(total.value))
        total.tail_ratio = total.level_contribution[size_t(d_max)] / total.value;
    return total;
}

}  // namespace rlbesov
