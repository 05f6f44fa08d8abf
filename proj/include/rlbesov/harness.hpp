#pragma once
// Extremal test functions derived from the sharpness constructions, empirical
// best-constant estimation over seeded families, and the comparison of
// criterion values against those empirical constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rlbesov/besov.hpp"
#include "rlbesov/bspline.hpp"
#include "rlbesov/criteria.hpp"
#include "rlbesov/dyadic.hpp"
#include "rlbesov/piecewise.hpp"
#include "rlbesov/rliouville.hpp"
#include "rlbesov/wavelet.hpp"
#include "rlbesov/weights.hpp"

namespace rlbesov {

// ---------------------------------------------------------------------------
// Extremal test functions
// ---------------------------------------------------------------------------

// Dual-mass witness: a nonnegative sum of order-m B-splines whose coefficients
// are distance powers times dual masses of the source weight,
//   f(y) = sum_{tau=-R}^{nu} (nu-tau+1)^{(alpha-1)(p'-1)} [v(Q_{0,tau})]^{1-p'}
//          B_m(y - tau + alpha).
inline PiecewisePoly make_fstar(int R, std::int64_t nu, int m_star, int alpha, double p,
                                const Weight& v) {
    if (R < 0) throw std::invalid_argument("make_fstar: R must be >= 0");
    if (nu < -std::int64_t(R)) throw std::invalid_argument("make_fstar: need nu >= -R");
    if (m_star < 0 || m_star > kMaxSplineOrder)
        throw std::invalid_argument("make_fstar: spline order out of range");
    if (alpha < 1) throw std::invalid_argument("make_fstar: alpha must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("make_fstar: need p > 1");
    double pprime = p / (p - 1.0);
    std::vector<double> coef;
    coef.reserve(std::size_t(nu + R + 1));
    for (std::int64_t tau = -R; tau <= nu; ++tau)
        coef.push_back(std::pow(double(nu - tau + 1), (alpha - 1) * (pprime - 1.0)) *
                       std::pow(v.mass(double(tau), double(tau) + 1.0), 1.0 - pprime));
    return spline_combination(m_star, coef, -std::int64_t(R) - alpha);
}

// Witness dual to the one above: plain masses of the target weight on the
// other side of the pivot,
//   g(y) = sum_{tau=nu}^{R} (tau-nu+1)^{(alpha-1)(p-1)} u(Q_{0,tau}) B_m(y - tau + alpha).
inline PiecewisePoly make_gstar(int R, std::int64_t nu, int m_star, int alpha, double p,
                                const Weight& u) {
    if (std::int64_t(R) < nu) throw std::invalid_argument("make_gstar: need R >= nu");
    if (m_star < 0 || m_star > kMaxSplineOrder)
        throw std::invalid_argument("make_gstar: spline order out of range");
    if (alpha < 1) throw std::invalid_argument("make_gstar: alpha must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("make_gstar: need p > 1");
    std::vector<double> coef;
    coef.reserve(std::size_t(R - nu + 1));
    for (std::int64_t tau = nu; tau <= std::int64_t(R); ++tau)
        coef.push_back(std::pow(double(tau - nu + 1), (alpha - 1) * (p - 1.0)) *
                       u.mass(double(tau), double(tau) + 1.0));
    return spline_combination(m_star, coef, nu - alpha);
}

// Concentrated wavelet bump at scale d0: a generalized wavelet of base order
// m, convolved with the half-shift row of order n = m + alpha and the centered
// difference of width 2*alpha, placed at s_bar = -1 - m - 4n so that exactly
// one extreme B-spline overlap survives in the pairings of the lower-bound
// argument.  The bump is h(y) = Lambda_m^{-1} W(2^{d0-1} y - tau0).
struct HStar {
    int m_star = 1, alpha = 1, n_star = 2;
    int d0 = 1;
    std::int64_t tau0 = 0;
    Dyadic s_bar;
    double lambda_inv = 1.0;  // 1 / Lambda_{m*}
    PiecewisePoly fn;
    Dyadic image_lo, image_hi;  // predicted support of the order-alpha left integral
};

inline HStar make_hstar(int m_star, int alpha, int d0, std::int64_t tau0) {
    if (m_star < 1) throw std::invalid_argument("make_hstar: order must be >= 1");
    if (alpha < 1) throw std::invalid_argument("make_hstar: alpha must be >= 1");
    if (d0 < 1) throw std::invalid_argument("make_hstar: scale must be >= 1");
    HStar h;
    h.m_star = m_star;
    h.alpha = alpha;
    h.n_star = m_star + alpha;
    h.d0 = d0;
    h.tau0 = tau0;
    std::int64_t sbar = -1 - m_star - 4 * std::int64_t(h.n_star);
    h.s_bar = Dyadic(sbar);
    GeneralizedWaveletSpec spec;
    spec.n = m_star;
    spec.m = h.n_star;
    spec.s = h.s_bar;
    spec.conv_flag = true;
    spec.diff_flag = true;
    spec.alpha = alpha;
    GeneralizedWavelet gw = generalized_wavelet(spec);
    h.lambda_inv = 1.0 / euler_constants_cached(m_star).lambda_total;
    h.fn = pp_transform(gw.fn, h.lambda_inv, Dyadic(tau0), d0 - 1);
    h.image_lo = Dyadic(2 * (tau0 + sbar) - 2 * h.n_star - m_star, d0);
    h.image_hi = Dyadic(2 * (tau0 + sbar) + 2 * h.n_star + m_star + 2, d0);
    return h;
}

// Closed form of the order-alpha left integral of the bump: the roles of the
// two orders swap and the centered difference disappears.  In the row
// normalization used here (each half-shift row of order k carries the factor
// prod_j (1+r_j)/(1-r_j) of its own order), the scalar is
//   I^alpha h = Lambda_m^{-1} 2^{-alpha d0} (scale_n / scale_m) W'(2^{d0-1} y - tau0),
// the weight-constant ratio of the books swapping places with the rows.
inline PiecewisePoly hstar_image_exact(const HStar& h) {
    GeneralizedWaveletSpec spec;
    spec.n = h.n_star;
    spec.m = h.m_star;
    spec.s = h.s_bar;
    spec.conv_flag = true;
    spec.diff_flag = false;
    spec.alpha = h.alpha;
    GeneralizedWavelet gw = generalized_wavelet(spec);
    double c = h.lambda_inv * std::exp2(double(-h.alpha * h.d0)) *
               lambda_coeffs(h.n_star).scale / lambda_coeffs(h.m_star).scale;
    return pp_transform(gw.fn, c, Dyadic(h.tau0), h.d0 - 1);
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

struct TestFamily {
    enum class Kind { FStar, GStar, HStar, RandomCombo };
    Kind kind = Kind::RandomCombo;
    std::string label;
    std::uint64_t seed = 0;  // random families record their seed
    std::vector<PiecewisePoly> members;
    std::vector<std::string> member_tags;
};

inline TestFamily family_fstar(int R_max, std::int64_t nu, int m_star, int alpha, double p,
                               const Weight& v) {
    TestFamily fam;
    fam.kind = TestFamily::Kind::FStar;
    fam.label = "fstar m=" + std::to_string(m_star) + " nu=" + std::to_string(nu);
    for (int R = std::max(0, int(-nu)); R <= R_max; ++R) {
        fam.members.push_back(make_fstar(R, nu, m_star, alpha, p, v));
        fam.member_tags.push_back("R=" + std::to_string(R));
    }
    if (fam.members.empty()) throw std::invalid_argument("family_fstar: empty range");
    return fam;
}

inline TestFamily family_gstar(int R_max, std::int64_t nu, int m_star, int alpha, double p,
                               const Weight& u) {
    TestFamily fam;
    fam.kind = TestFamily::Kind::GStar;
    fam.label = "gstar m=" + std::to_string(m_star) + " nu=" + std::to_string(nu);
    for (std::int64_t R = nu; R <= std::int64_t(R_max); ++R) {
        fam.members.push_back(make_gstar(int(R), nu, m_star, alpha, p, u));
        fam.member_tags.push_back("R=" + std::to_string(R));
    }
    if (fam.members.empty()) throw std::invalid_argument("family_gstar: empty range");
    return fam;
}

inline TestFamily family_hstar(int m_star, int alpha, int d0_max, std::int64_t tau0) {
    TestFamily fam;
    fam.kind = TestFamily::Kind::HStar;
    fam.label = "hstar m=" + std::to_string(m_star) + " tau0=" + std::to_string(tau0);
    for (int d0 = 1; d0 <= d0_max; ++d0) {
        fam.members.push_back(make_hstar(m_star, alpha, d0, tau0).fn);
        fam.member_tags.push_back("d0=" + std::to_string(d0));
    }
    return fam;
}

// Seeded random compact splines: a block of father coefficients plus a few
// dilated wavelet bumps.  `j_lo`, when given, keeps every member supported to
// the right of that integer (half-line families).
inline TestFamily family_random(std::uint64_t seed, int count, int order, int window,
                                std::optional<std::int64_t> j_lo = std::nullopt) {
    if (count < 1) throw std::invalid_argument("family_random: count must be >= 1");
    if (window < 1) throw std::invalid_argument("family_random: window must be >= 1");
    TestFamily fam;
    fam.kind = TestFamily::Kind::RandomCombo;
    fam.seed = seed;
    fam.label = "random seed=" + std::to_string(seed);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> len_dist(1, window);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    const PiecewisePoly& mother = compact_wavelet(order).fn;
    std::int64_t lo_floor = j_lo.value_or(-std::int64_t(window));
    for (int i = 0; i < count; ++i) {
        int len = len_dist(gen);
        std::uniform_int_distribution<std::int64_t> start(lo_floor,
                                                          lo_floor + 2 * window - len);
        std::int64_t j_min = start(gen);
        std::vector<double> coef(std::size_t(len), 0.0);
        for (double& cv : coef) cv = amp(gen);
        PiecewisePoly f = spline_combination(order, coef, j_min);
        int bumps = int(gen() % 3);  // 0..2 wavelet bumps
        for (int b = 0; b < bumps; ++b) {
            int d = 1 + int(gen() % 2);
            // keep the bump's support inside [lo_floor, +inf): the mother at
            // scale d-1 and shift t covers (t + [-order, order+1]) / 2^{d-1}
            std::int64_t t_lo = lo_floor * (std::int64_t(1) << (d - 1)) + order;
            std::uniform_int_distribution<std::int64_t> tdist(t_lo, t_lo + 4 * window);
            PiecewisePoly bump =
                pp_transform(mother, amp(gen), Dyadic(tdist(gen)), d - 1);
            f = pp_add(f, bump);
        }
        fam.members.push_back(std::move(f));
        fam.member_tags.push_back("member " + std::to_string(i));
    }
    return fam;
}

// Single-function dispatcher over the family kinds.
struct TestFunctionParams {
    int R = 3;
    std::int64_t nu = 0;
    int m_star = 1;
    int alpha = 1;
    double p = 2.0;
    Weight weight;  // v for the dual-mass witness, u for its dual
    int d0 = 1;
    std::int64_t tau0 = 0;
    std::uint64_t seed = 1;
    int order = 1;
    int window = 8;
};

inline PiecewisePoly make_test_function(TestFamily::Kind kind, const TestFunctionParams& prm) {
    switch (kind) {
        case TestFamily::Kind::FStar:
            return make_fstar(prm.R, prm.nu, prm.m_star, prm.alpha, prm.p, prm.weight);
        case TestFamily::Kind::GStar:
            return make_gstar(prm.R, prm.nu, prm.m_star, prm.alpha, prm.p, prm.weight);
        case TestFamily::Kind::HStar:
            return make_hstar(prm.m_star, prm.alpha, prm.d0, prm.tau0).fn;
        case TestFamily::Kind::RandomCombo:
            return family_random(prm.seed, 1, prm.order, prm.window).members.front();
    }
    throw std::invalid_argument("make_test_function: unknown kind");
}

// ---------------------------------------------------------------------------
// Empirical best constants
// ---------------------------------------------------------------------------

struct EmpiricalOptions {
    Role role = Role::Forward;
    RLSide side = RLSide::Left;
    std::optional<Dyadic> cut;  // half-line anchor for the integral operator
    int d_max = 6;
    int n_in = 1, n_out = 2;  // analysis spline orders (must satisfy the order bound)
    Dyadic a_in, a_out;       // lattice placements
    int threads = 1;
};

struct EmpiricalReport {
    double value = 0.0;
    long best_index = -1;
    std::vector<double> ratios;  // NaN where a member was skipped
    std::vector<std::string> notes;
    int skipped = 0;
    std::uint64_t seed = 0;
    std::string family_label;
};

namespace detail {

inline void empirical_member(int alpha, const SpaceParams& sp_in, const SpaceParams& sp_out,
                             const TestFamily& fam, const EmpiricalOptions& opt, std::size_t i,
                             std::vector<double>& ratios, std::vector<std::string>& notes) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const PiecewisePoly& f = fam.members[i];
        if (f.is_zero()) {
            ratios[i] = nan;
            notes[i] = "zero member - skipped";
            return;
        }
        PiecewisePoly img = rl_apply(f, alpha, opt.side, opt.cut);
        SplineSystemSpec sys_in{opt.n_in, opt.a_in};
        SplineSystemSpec sys_out{opt.n_out, opt.a_out};
        double nrm_in = besov_norm_estimate(f, sp_in, sys_in, opt.d_max).value;
        double nrm_out = besov_norm_estimate(img, sp_out, sys_out, opt.d_max).value;
        double num = opt.role == Role::Forward ? nrm_out : nrm_in;
        double den = opt.role == Role::Forward ? nrm_in : nrm_out;
        if (den == 0.0) {
            ratios[i] = nan;
            notes[i] = "zero denominator - skipped";
            return;
        }
        ratios[i] = num / den;
    } catch (const std::exception& e) {
        ratios[i] = nan;
        notes[i] = std::string("error: ") + e.what();
    }
}

}  // namespace detail

// Largest norm ratio over a family: ||I^alpha f|| / ||f|| in the forward role,
// the reciprocal in the reverse role.  Members are processed concurrently when
// threads > 1; the merge is by member index, so results do not depend on the
// thread count.
inline EmpiricalReport empirical_constant(int alpha, const SpaceParams& sp_in,
                                          const SpaceParams& sp_out, const TestFamily& fam,
                                          const EmpiricalOptions& opt = {}) {
    if (alpha < 1) throw std::invalid_argument("empirical_constant: alpha must be >= 1");
    if (fam.members.empty()) throw std::invalid_argument("empirical_constant: empty family");
    EmpiricalReport rep;
    rep.seed = fam.seed;
    rep.family_label = fam.label;
    std::size_t n = fam.members.size();
    rep.ratios.assign(n, std::numeric_limits<double>::quiet_NaN());
    rep.notes.assign(n, std::string());

    int workers = std::max(1, opt.threads);
    if (workers == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            detail::empirical_member(alpha, sp_in, sp_out, fam, opt, i, rep.ratios, rep.notes);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (n + std::size_t(workers) - 1) / std::size_t(workers);
        for (int w = 0; w < workers; ++w) {
            std::size_t lo = std::size_t(w) * chunk;
            std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi]() {
                for (std::size_t i = lo; i < hi; ++i)
                    detail::empirical_member(alpha, sp_in, sp_out, fam, opt, i, rep.ratios,
                                             rep.notes);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(rep.ratios[i])) {
            ++rep.skipped;
            continue;
        }
        if (rep.ratios[i] > rep.value) {
            rep.value = rep.ratios[i];
            rep.best_index = long(i);
        }
    }
    if (rep.skipped == int(n)) rep.value = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

// ---------------------------------------------------------------------------
// Criterion-versus-empirics comparison
// ---------------------------------------------------------------------------

struct CompareOptions {
    double k_hi = 16.0;      // empirical may exceed the criterion by at most this
    double k_lo = 16.0;      // criterion may exceed the empirical value by at most this
    double tail_slack = 0.0; // allowance for finite-family underestimation
};

struct CompareVerdict {
    bool pass = false;
    bool upper_ok = false, lower_ok = false;
    double criterion = 0.0, empirical = 0.0;
    std::string detail;
};

inline CompareVerdict compare(const CriterionReport& rep, double empirical,
                              CompareOptions copt = {}) {
    CompareVerdict v;
    v.criterion = rep.value;
    v.empirical = empirical;
    if (std::isnan(empirical)) {
        v.detail = "no usable family member";
        return v;
    }
    v.upper_ok = empirical <= copt.k_hi * rep.value;
    v.lower_ok = rep.value <= copt.k_lo * (empirical + copt.tail_slack);
    v.pass = v.upper_ok && v.lower_ok;
    v.detail = std::string(v.pass ? "PASS" : "FAIL") +
               ": criterion=" + std::to_string(rep.value) +
               " empirical=" + std::to_string(empirical) +
               (v.upper_ok ? "" : " [empirical exceeds k_hi * criterion]") +
               (v.lower_ok ? "" : " [criterion exceeds k_lo * empirical]");
    return v;
}

inline CompareVerdict compare(const CriterionReport& rep, const EmpiricalReport& emp,
                              CompareOptions copt = {}) {
    return compare(rep, emp.value, copt);
}

// ---------------------------------------------------------------------------
// Lower-bound machinery from the sharpness argument
// ---------------------------------------------------------------------------

// Feeding the dual-mass witness through the discrete image expansion must
// dominate the witness product
//   (sum_{tau >= nu} u(Q_{0,tau}))^{1/p}
//     * sum_{tau=-R}^{nu} (nu-tau+1)^{(alpha-1) p'} [v(Q_{0,tau})]^{1-p'}
// up to a constant independent of R and nu.  The left side is the weighted
// l^p norm of tau -> sum_{l <= tau} A_{tau-l}(alpha) <f, B_m(. - l + alpha)>.
struct LowerBoundReport {
    double lhs = 0.0;
    double witness = 0.0;
    double ratio = 0.0;
    int R = 0;
    std::int64_t nu = 0;
    int m_star = 1, alpha = 1;
    double p = 2.0;
};

inline LowerBoundReport hardy_lower_bound(int R, std::int64_t nu, int m_star, int alpha, double p,
                                          const Weight& u, const Weight& v,
                                          std::int64_t tail_window = 4096) {
    if (tail_window < 8) throw std::invalid_argument("hardy_lower_bound: window too small");
    LowerBoundReport rep;
    rep.R = R;
    rep.nu = nu;
    rep.m_star = m_star;
    rep.alpha = alpha;
    rep.p = p;
    double pprime = p / (p - 1.0);

    // witness coefficients c_l, l in [-R, nu]
    std::vector<double> c(std::size_t(nu + R + 1));
    for (std::int64_t l = -R; l <= nu; ++l)
        c[std::size_t(l + R)] = std::pow(double(nu - l + 1), (alpha - 1) * (pprime - 1.0)) *
                                std::pow(v.mass(double(l), double(l) + 1.0), 1.0 - pprime);

    // inner products <f, B_m(. - l + alpha)> = sum_k c_k <B_m(. - k), B_m(. - l)>
    std::int64_t ip_lo = -R - m_star, ip_hi = nu + m_star;
    std::vector<double> ip(std::size_t(ip_hi - ip_lo + 1), 0.0);
    for (std::int64_t l = ip_lo; l <= ip_hi; ++l) {
        double s = 0.0;
        for (std::int64_t k = std::max<std::int64_t>(-R, l - m_star);
             k <= std::min(nu, l + m_star); ++k)
            s += c[std::size_t(k + R)] * bspline_gram(m_star, int(k - l));
        ip[std::size_t(l - ip_lo)] = s;
    }

    std::vector<std::int64_t> A = difference_coeffs(alpha, int(tail_window - ip_lo));

    // left side: weighted l^p norm of the accumulated differences
    double lhs_p = 0.0;
    for (std::int64_t tau = ip_lo; tau <= tail_window; ++tau) {
        double b = 0.0;
        for (std::int64_t l = ip_lo; l <= std::min(tau, ip_hi); ++l)
            b += double(A[std::size_t(tau - l)]) * ip[std::size_t(l - ip_lo)];
        if (b != 0.0)
            lhs_p += u.mass(double(tau), double(tau) + 1.0) * std::pow(std::abs(b), p);
    }
    rep.lhs = std::pow(lhs_p, 1.0 / p);

    double u_tail = 0.0;
    for (std::int64_t tau = nu; tau <= tail_window; ++tau)
        u_tail += u.mass(double(tau), double(tau) + 1.0);
    double v_sum = 0.0;
    for (std::int64_t tau = -R; tau <= nu; ++tau)
        v_sum += std::pow(double(nu - tau + 1), (alpha - 1) * pprime) *
                 std::pow(v.mass(double(tau), double(tau) + 1.0), 1.0 - pprime);
    rep.witness = std::pow(u_tail, 1.0 / p) * v_sum;
    rep.ratio = rep.witness > 0.0 ? rep.lhs / rep.witness : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Overlap bookkeeping of the concentrated construction
// ---------------------------------------------------------------------------

// The placement s_bar = -1 - m - 4n makes the supports of the paired factors
// intersect in exactly one unit cell, so the pairing collapses to the extreme
// Gram value.  Verified numerically; a wider intersection is flagged.
struct OverlapCheck {
    double theta = 0.0;    // pairing computed by exact integration
    double formula = 0.0;  // signed closed form
    Dyadic overlap_lo, overlap_hi;
    bool single = false;
    std::string warning;
};

inline OverlapCheck overlap_check(int n_star, int m_star, Dyadic tau0 = Dyadic(0)) {
    ThetaOverlap th = theta_overlap(n_star, m_star, tau0);
    OverlapCheck oc;
    oc.theta = th.via_inner;
    oc.formula = th.sign * th.formula;
    oc.overlap_lo = th.overlap_lo;
    oc.overlap_hi = th.overlap_hi;
    oc.single = (th.overlap_hi.to_double() - th.overlap_lo.to_double()) == 1.0;
    if (!oc.single)
        oc.warning = "support intersection spans " +
                     std::to_string(th.overlap_hi.to_double() - th.overlap_lo.to_double()) +
                     " cells; the single-overlap reduction does not apply";
    return oc;
}

}  // namespace rlbesov
