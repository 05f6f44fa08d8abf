#pragma once
// Spline wavelet systems on a uniform grid.
//
// Everything in this header is derived from one object: the autocorrelation
// symbol of the order-n B-spline, a degree-n polynomial in u = z + 1/z whose
// roots are all real and lie left of -2.  Writing each root as -rho_j with
// rho_j = r_j + 1/r_j, the numbers r_j in (0,1) drive
//   * the orthonormal scaling function (a one-sided geometric combination of
//     integer shifts of B_n),
//   * the orthonormal spline wavelet at half-integer scale, and
//   * a family of compactly supported spline analyzers that stand in for the
//     orthonormal pair in dual pairings, at the price of a fixed constant.
//
// All functions are materialized as exact piecewise polynomials; infinite
// geometric tails are truncated at a requested coefficient tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rlbesov/bspline.hpp"
#include "rlbesov/piecewise.hpp"

namespace rlbesov {

// ---------------------------------------------------------------------------
// Integer-shift spline combinations
// ---------------------------------------------------------------------------

// F(y) = sum_i a[i] * B_n(y - (j_min + i)), assembled directly on the integer
// grid (one pass per cell, no repeated merging).
inline PiecewisePoly spline_combination(int n, const std::vector<double>& a, std::int64_t j_min) {
    if (a.empty()) return {};
    const PiecewisePoly& b = bspline(n);
    std::int64_t cells = std::int64_t(a.size()) + n;  // support spans [j_min, j_min+len+n]
    PiecewisePoly r;
    r.bp.reserve(size_t(cells) + 1);
    for (std::int64_t t = 0; t <= cells; ++t) r.bp.push_back(Dyadic(j_min + t));
    r.pieces.resize(size_t(cells));
    for (std::int64_t t = 0; t < cells; ++t) {
        Poly piece;
        // contributions from B_n(. - (j_min+i)) whose piece index t-i is in [0, n]
        std::int64_t i_lo = std::max<std::int64_t>(0, t - n);
        std::int64_t i_hi = std::min<std::int64_t>(std::int64_t(a.size()) - 1, t);
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
            if (a[size_t(i)] == 0.0) continue;
            piece = polyops::add(piece, polyops::scale(b.pieces[size_t(t - i)], a[size_t(i)]));
        }
        r.pieces[size_t(t)] = piece;
    }
    return pp_trim(std::move(r));
}

// A coefficient row over an integer index: row[i] belongs to index lo + i.
struct CoeffRow {
    std::vector<double> c;
    std::int64_t lo = 0;
};

inline CoeffRow row_convolve(const CoeffRow& a, const CoeffRow& b) {
    if (a.c.empty() || b.c.empty()) return {};
    CoeffRow r;
    r.lo = a.lo + b.lo;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

inline CoeffRow row_trim(CoeffRow r, double tol) {
    size_t lo = 0, hi = r.c.size();
    while (lo < hi && std::abs(r.c[lo]) <= tol) ++lo;
    while (hi > lo && std::abs(r.c[hi - 1]) <= tol) --hi;
    CoeffRow out;
    out.lo = r.lo + std::int64_t(lo);
    out.c.assign(r.c.begin() + std::ptrdiff_t(lo), r.c.begin() + std::ptrdiff_t(hi));
    return out;
}

// ---------------------------------------------------------------------------
// Symbol roots and the derived constants
// ---------------------------------------------------------------------------

struct EulerConstants {
    int n = 0;
    std::vector<double> symbol_u;  // autocorrelation symbol as a polynomial in u = z + 1/z
    std::vector<double> rho;       // root magnitudes: symbol_u(-rho_j) = 0, rho_j > 2, ascending
    std::vector<double> r;         // r_j in (0,1) with r_j + 1/r_j = rho_j, descending
    double beta = 1.0;             // prod (1 + r_j): scaling-function normalizer
    double gamma = 1.0;            // 2^-n * beta * prod r_j: wavelet prefactor
    double lambda_total = 1.0;     // 2^n * prod (1/r_j - r_j), > 0
};

namespace detail {

// Symbol in u: g_0 + sum_{k>=1} g_k * Q_k(u) with Q_0 = 2, Q_1 = u,
// Q_k = u Q_{k-1} - Q_{k-2} (so that Q_k(z + 1/z) = z^k + z^-k).
inline std::vector<double> gram_symbol_u(int n) {
    std::vector<double> s{bspline_gram(n, 0)};
    std::vector<double> qk_prev{2.0}, qk{0.0, 1.0};
    for (int k = 1; k <= n; ++k) {
        double g = bspline_gram(n, k);
        if (s.size() < qk.size()) s.resize(qk.size(), 0.0);
        for (size_t i = 0; i < qk.size(); ++i) s[i] += g * qk[i];
        // advance the recurrence
        std::vector<double> qn(qk.size() + 1, 0.0);
        for (size_t i = 0; i < qk.size(); ++i) qn[i + 1] += qk[i];
        for (size_t i = 0; i < qk_prev.size(); ++i) qn[i] -= qk_prev[i];
        qk_prev = std::move(qk);
        qk = std::move(qn);
    }
    return s;
}

inline double poly_eval(const std::vector<double>& p, double x) {
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

// Refine a simple real root inside [a, b] (sign change required) to full
// double precision by bisection.
inline double bisect_root(const std::vector<double>& p, double a, double b) {
    double fa = poly_eval(p, a), fb = poly_eval(p, b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw std::runtime_error("bisect_root: no sign change in bracket");
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // interval collapsed to adjacent doubles
        double fm = poly_eval(p, m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; fb = fm; }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

inline EulerConstants euler_constants(int n) {
    if (n < 0 || n > kMaxSplineOrder) throw std::invalid_argument("euler_constants: order out of range");
    EulerConstants ec;
    ec.n = n;
    ec.symbol_u = detail::gram_symbol_u(n);
    if (n == 0) return ec;  // symbol is the constant 1: no roots, all products empty

    // companion-matrix eigenvalues of the monic symbol seed the brackets
    std::vector<double> monic(ec.symbol_u);
    double lead = monic.back();
    for (double& c : monic) c /= lead;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -monic[size_t(i)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-6 * (1.0 + std::abs(ev.real())))
            throw std::runtime_error("euler_constants: unexpected complex symbol root");
        roots.push_back(ev.real());
    }
    std::sort(roots.begin(), roots.end());

    for (int i = 0; i < n; ++i) {
        double u = roots[size_t(i)];
        if (u >= -2.0) throw std::runtime_error("euler_constants: symbol root not left of -2");
        // bracket and polish; roots are simple and well separated
        double span = 1e-6 * (1.0 + std::abs(u));
        double a = u - span, b = u + span;
        while ((detail::poly_eval(ec.symbol_u, a) > 0) == (detail::poly_eval(ec.symbol_u, b) > 0)) {
            span *= 4.0;
            a = u - span;
            b = u + span;
            if (span > 1.0 + std::abs(u)) throw std::runtime_error("euler_constants: failed to bracket root");
        }
        u = detail::bisect_root(ec.symbol_u, a, b);
        ec.rho.push_back(-u);
    }
    std::sort(ec.rho.begin(), ec.rho.end());  // ascending rho

    for (double rho : ec.rho) {
        // r = (rho - sqrt(rho^2-4))/2 computed in the cancellation-free form
        double r = 2.0 / (rho + std::sqrt(rho * rho - 4.0));
        ec.r.push_back(r);  // ascending rho gives descending... r decreasing in rho
    }
    // keep r sorted descending (largest first), paired order with rho ascending
    for (double r : ec.r) {
        ec.beta *= 1.0 + r;
        ec.gamma *= r;
        ec.lambda_total *= 1.0 / r - r;
    }
    ec.gamma = std::ldexp(ec.gamma * ec.beta, -n);
    ec.lambda_total = std::ldexp(ec.lambda_total, n);
    return ec;
}

inline const EulerConstants& euler_constants_cached(int n) {
    static std::vector<EulerConstants> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (n < 0 || n > kMaxSplineOrder) throw std::invalid_argument("euler_constants: order out of range");
    if (cache.empty()) cache.resize(size_t(kMaxSplineOrder) + 1);
    if (cache[size_t(n)].symbol_u.empty()) cache[size_t(n)] = euler_constants(n);
    return cache[size_t(n)];
}

// ---------------------------------------------------------------------------
// Half-shift difference coefficients
// ---------------------------------------------------------------------------

// Expansion of prod_j (rho_j - 2 cos(w/2)) over half-integer shifts.  `raw`
// holds the signed coefficients c_sigma for sigma = -m..m (index sigma + m);
// they alternate in sign with |c_sigma| = lambda_raw[|sigma|] > 0 and the top
// entries equal (-1)^m.  `lambda` rescales lambda_raw by `scale` =
// prod (1+r_j)/(1-r_j), the unique normalization with alternating sum
// sum_sigma (-1)^sigma * lambda[|sigma|] equal to 2^-m * lambda_total.
struct LambdaCoeffs {
    int m = 0;
    std::vector<double> raw;         // size 2m+1, index sigma + m
    std::vector<double> lambda_raw;  // size m+1, index |sigma|
    double scale = 1.0;
    std::vector<double> lambda;      // scale * lambda_raw
};

inline LambdaCoeffs lambda_coeffs(int m) {
    const EulerConstants& ec = euler_constants_cached(m);
    LambdaCoeffs lc;
    lc.m = m;
    CoeffRow row{{1.0}, 0};
    for (double rho : ec.rho) row = row_convolve(row, CoeffRow{{-1.0, rho, -1.0}, -1});
    lc.raw = row.c;  // row.lo == -m by construction
    lc.lambda_raw.resize(size_t(m) + 1);
    for (int k = 0; k <= m; ++k)
        lc.lambda_raw[size_t(k)] = ((k % 2) ? -1.0 : 1.0) * lc.raw[size_t(k + m)];
    for (double r : ec.r) lc.scale *= (1.0 + r) / (1.0 - r);
    lc.lambda = lc.lambda_raw;
    for (double& v : lc.lambda) v *= lc.scale;
    return lc;
}

// ---------------------------------------------------------------------------
// Orthonormal scaling function and wavelet
// ---------------------------------------------------------------------------

// phi(x) = sum_{L>=0} coeffs[L] * B_n(x + L), a one-sided combination whose
// integer shifts are orthonormal.  coeffs[L] = beta * (-1)^L h_L(r_1..r_n)
// (complete homogeneous symmetric functions), truncated once the remaining
// L2 tail is below tol.
struct ScalingFunction {
    int n = 0;
    double beta = 1.0;
    std::vector<double> coeffs;  // index L, includes the beta factor
    PiecewisePoly fn;
};

inline ScalingFunction scaling_function(int n, double tol = 1e-14) {
    const EulerConstants& ec = euler_constants_cached(n);
    ScalingFunction sf;
    sf.n = n;
    sf.beta = ec.beta;
    double rmax = ec.r.empty() ? 0.0 : *std::max_element(ec.r.begin(), ec.r.end());
    // tail bound: sum_{L>M} h_L(r) <= sum_{L>M} binom(L+n-1, n-1) rmax^L
    int M = 0;
    if (rmax > 0.0) {
        double tail = 1.0;
        while (true) {
            // crude but safe: term_L = binom(M+n-1,n-1) rmax^M / (1-rmax) bounds the tail
            double term = std::pow(rmax, M) / (1.0 - rmax);
            double bin = 1.0;
            for (int i = 1; i < n; ++i) bin *= double(M + i) / double(i);
            tail = term * bin * double(n);  // extra slack for the growing binomial
            if (tail < tol / ec.beta || M > 4000) break;
            ++M;
        }
    }
    // iterated one-sided geometric products: c[L] <- c[L] + (-r_j) c[L-1] per j
    std::vector<double> c(size_t(M) + 1, 0.0);
    c[0] = 1.0;
    for (double r : ec.r) {
        for (size_t L = 1; L < c.size(); ++L) c[L] += -r * c[L - 1];
    }
    for (double& v : c) v *= ec.beta;
    sf.coeffs = c;
    // materialize: shifts B_n(x + L) live at integer offsets -L
    std::vector<double> rev(c.rbegin(), c.rend());
    sf.fn = spline_combination(n, rev, -std::int64_t(M));
    return sf;
}

// Orthonormal wavelet at half-integer scale:
//   psi(x) = gamma * sum_nu a_nu B_n(2(x - s) - nu)
// where the row a is the convolution of the two-scale alternating row with,
// per root, a (-1, rho_j, -1) factor and one-sided geometric rows in both
// directions.  Truncated at tol; coefficients in `coeffs` exclude gamma (the
// materialized function includes it).
struct OrthoWavelet {
    int n = 0;
    Dyadic s;
    double gamma = 1.0;
    CoeffRow coeffs;
    PiecewisePoly fn;
};

inline OrthoWavelet orthonormal_wavelet(int n, Dyadic s = Dyadic(0), double tol = 1e-14) {
    const EulerConstants& ec = euler_constants_cached(n);
    OrthoWavelet w;
    w.n = n;
    w.s = s;
    w.gamma = ec.gamma;

    CoeffRow row;
    row.lo = -n;
    for (int k = 0; k <= n + 1; ++k)
        row.c.push_back(((k % 2) ? -1.0 : 1.0) * double(binomial(n + 1, k)));
    for (double rho : ec.rho) row = row_convolve(row, CoeffRow{{-1.0, rho, -1.0}, -1});
    for (double r : ec.r) {
        CoeffRow geo;  // sum_m (-r)^m at nu = +2m
        geo.lo = 0;
        double t = 1.0;
        while (std::abs(t) > tol * 1e-2) {
            geo.c.push_back(t);
            geo.c.push_back(0.0);
            t *= -r;
        }
        geo.c.pop_back();
        row = row_convolve(row, geo);
    }
    for (double r : ec.r) {
        CoeffRow geo;  // sum_l r^{2l} at nu = -2l, stored ascending from the lowest index
        std::vector<double> tmp;
        double t = 1.0;
        while (t > tol * 1e-2) {
            tmp.push_back(t);
            tmp.push_back(0.0);
            t *= r * r;
        }
        tmp.pop_back();
        geo.c.assign(tmp.rbegin(), tmp.rend());
        geo.lo = -std::int64_t(geo.c.size() - 1);
        row = row_convolve(row, geo);
    }
    row = row_trim(std::move(row), tol * 1e-2);
    w.coeffs = row;

    PiecewisePoly unit = spline_combination(n, row.c, row.lo);
    w.fn = pp_transform(unit, ec.gamma, (s + s), 1);  // gamma * unit(2x - 2s)
    return w;
}

// ---------------------------------------------------------------------------
// Compactly supported analyzers
// ---------------------------------------------------------------------------

// The compact scaling analyzer is the plain shifted B-spline; its expansion
// against the orthonormal scaling function has coefficients e_l(r_1..r_n)
// (elementary symmetric functions), all positive, summing to beta.
struct CompactScaling {
    int n = 0;
    Dyadic a;
    std::vector<double> dual_coeffs;  // index l = 0..n
    PiecewisePoly fn;
};

inline CompactScaling compact_scaling(int n, Dyadic a = Dyadic(0)) {
    const EulerConstants& ec = euler_constants_cached(n);
    CompactScaling cs;
    cs.n = n;
    cs.a = a;
    std::vector<double> e(size_t(n) + 1, 0.0);
    e[0] = 1.0;
    for (double r : ec.r)
        for (size_t l = e.size() - 1; l >= 1; --l) e[l] += r * e[l - 1];
    cs.dual_coeffs = e;
    cs.fn = pp_transform(bspline(n), 1.0, a, 0);
    return cs;
}

// Compact wavelet analyzer:
//   Psi(x) = sum_sigma c_sigma sum_k (-1)^k binom(n+1,k) B_n(2(x-s-a) + (n-k) - sigma)
// with c_sigma the raw half-shift difference coefficients of order n.  Its
// support is exactly [s+a-n, s+a+n+1], it is orthogonal to every integer
// shift of B_n, and summing its pairings with the orthonormal wavelet over
// shifts |kappa| <= n recovers lambda_total.
struct CompactWavelet {
    int n = 0;
    Dyadic a, s;
    CoeffRow coeffs;  // combination over B_n(2x - base - j), j integer
    Dyadic base;      // 2(s + a) - n - ... folded so that j starts at coeffs.lo
    PiecewisePoly fn;
};

namespace detail {

// nu-grid coefficient row of the compact wavelet relative to B_n(2(x-s-a) - nu):
// accumulate c_sigma (-1)^k binom(n+1,k) at nu = -(n-k) + sigma.
inline CoeffRow compact_wavelet_row(int n) {
    LambdaCoeffs lc = lambda_coeffs(n);
    CoeffRow alt;
    alt.lo = -n;  // nu = -(n-k), k = 0..n+1 -> -(n) .. +1
    for (int k = 0; k <= n + 1; ++k)
        alt.c.push_back(((k % 2) ? -1.0 : 1.0) * double(binomial(n + 1, k)));
    // reverse: nu = -(n-k) means k ascending maps to nu ascending; order kept
    CoeffRow sig;
    sig.lo = -n;
    sig.c = lc.raw;
    return row_convolve(alt, sig);
}

}  // namespace detail

inline CompactWavelet compact_wavelet(int n, Dyadic a = Dyadic(0), Dyadic s = Dyadic(0)) {
    CompactWavelet cw;
    cw.n = n;
    cw.a = a;
    cw.s = s;
    cw.coeffs = detail::compact_wavelet_row(n);
    cw.base = (s + a) + (s + a);
    PiecewisePoly unit = spline_combination(n, cw.coeffs.c, cw.coeffs.lo);
    cw.fn = pp_transform(unit, 1.0, cw.base, 1);  // unit(2x - 2(s+a))
    return cw;
}

// Generalized compact wavelet: optionally convolve the coefficient row with
// the order-m difference row (conv_flag) and with the centered binomial
// difference row of order 2*alpha (diff_flag).  Both operations stay on the
// integer nu-grid, so supports remain exact dyadic intervals.
struct GeneralizedWaveletSpec {
    int n = 1;          // spline order of the building blocks
    int m = 1;          // order of the half-shift difference row (conv_flag)
    Dyadic a, s;        // placement shifts
    bool conv_flag = false;
    bool diff_flag = false;
    int alpha = 1;      // half the order of the centered difference (diff_flag)
};

struct GeneralizedWavelet {
    GeneralizedWaveletSpec spec;
    CoeffRow coeffs;
    Dyadic base;
    PiecewisePoly fn;
    Dyadic support_lo, support_hi;
};

inline GeneralizedWavelet generalized_wavelet(const GeneralizedWaveletSpec& spec) {
    if (spec.alpha < 0) throw std::invalid_argument("generalized_wavelet: negative difference order");
    GeneralizedWavelet gw;
    gw.spec = spec;
    CoeffRow row = detail::compact_wavelet_row(spec.n);
    if (spec.conv_flag) {
        LambdaCoeffs lc = lambda_coeffs(spec.m);
        CoeffRow lrow;
        lrow.lo = -spec.m;
        for (int k = -spec.m; k <= spec.m; ++k)
            lrow.c.push_back(((std::abs(k) % 2) ? -1.0 : 1.0) * lc.lambda[size_t(std::abs(k))]);
        row = row_convolve(row, lrow);
    }
    if (spec.diff_flag) {
        CoeffRow drow;
        drow.lo = -spec.alpha;
        for (int i = 0; i <= 2 * spec.alpha; ++i)
            drow.c.push_back(((i % 2) ? -1.0 : 1.0) * double(binomial(2 * spec.alpha, i)));
        row = row_convolve(row, drow);
    }
    gw.coeffs = row;
    gw.base = (spec.s + spec.a) + (spec.s + spec.a);
    PiecewisePoly unit = spline_combination(spec.n, row.c, row.lo);
    gw.fn = pp_transform(unit, 1.0, gw.base, 1);
    if (!gw.fn.is_zero()) {
        gw.support_lo = gw.fn.bp.front();
        gw.support_hi = gw.fn.bp.back();
    }
    return gw;
}

// ---------------------------------------------------------------------------
// Cross-order overlap constant
// ---------------------------------------------------------------------------

// Pairing a dilated compact wavelet of order n_star against an order-m_star
// difference combination of shifted copies of itself, placed so that exactly
// one pair of extreme B-spline factors overlaps on an interval of length one,
// evaluates in closed form to 16 * <B_ns, B_ns(. - n_star)> / (gamma_m gamma_n),
// up to the sign (-1)^(m_star + n_star + 1).
struct ThetaOverlap {
    int n_star = 0, m_star = 0;
    double formula = 0.0;        // 16 * b_intersection(n*) / (gamma_m* gamma_n*)
    double via_inner = 0.0;      // the pairing computed by exact integration
    double sign = 1.0;           // (-1)^(m*+n*+1)
    Dyadic overlap_lo, overlap_hi;  // support intersection of the two factors
};

inline ThetaOverlap theta_overlap(int n_star, int m_star, Dyadic tau0 = Dyadic(0)) {
    const EulerConstants& en = euler_constants_cached(n_star);
    const EulerConstants& em = euler_constants_cached(m_star);
    ThetaOverlap th;
    th.n_star = n_star;
    th.m_star = m_star;
    th.formula = 16.0 * b_intersection(n_star) / (em.gamma * en.gamma);
    th.sign = ((m_star + n_star + 1) % 2) ? -1.0 : 1.0;

    CompactWavelet base = compact_wavelet(n_star);
    double c = 4.0 / std::sqrt(en.gamma);
    PiecewisePoly G = pp_transform(base.fn, c, tau0, -1);  // c * Psi(x/2 - tau0)
    LambdaCoeffs lm = lambda_coeffs(m_star);
    std::int64_t sbar = -1 - m_star - 4 * std::int64_t(n_star);
    PiecewisePoly F;
    for (int r = -m_star; r <= m_star; ++r) {
        double w = lm.lambda_raw[size_t(std::abs(r))] / em.gamma * ((std::abs(r) % 2) ? -1.0 : 1.0);
        Dyadic shift = tau0 + Dyadic(sbar + r, 1);  // tau0 + (sbar + r)/2
        F = pp_add(F, pp_transform(base.fn, c * w, shift, -1));
    }
    th.via_inner = pp_inner(F, G);
    if (!F.is_zero() && !G.is_zero()) {
        th.overlap_lo = std::max(F.bp.front(), G.bp.front());
        th.overlap_hi = std::min(F.bp.back(), G.bp.back());
    }
    return th;
}

}  // namespace rlbesov
