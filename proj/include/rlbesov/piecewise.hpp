#pragma once
// Piecewise polynomials with exact dyadic breakpoints.
//
// A PiecewisePoly is zero outside its breakpoint range except for optional
// polynomial tails: `rtail` continues the function on [bp.back(), +inf)
// (antiderivatives and Riemann-Liouville images need it), `ltail` on
// (-inf, bp.front()) (right-sided images). Piece i lives on [bp[i], bp[i+1])
// and stores coefficients in the interval-relative basis (x - bp[i])^k, which
// keeps dilation by powers of two exact and magnitudes tame. Values are
// immutable once built; every operation returns a fresh object.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dyadic.hpp"

namespace rlbesov {

using Poly = std::vector<double>;  // coefficients, constant term first

namespace polyops {

inline double eval(const Poly& p, double t) {
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * t + p[i];
    return v;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline Poly scale(Poly p, double c) {
    for (double& v : p) v *= c;
    return p;
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Rewrite sum c_k (x-a)^k as sum c'_k (x-b)^k with h = b-a: shift t -> t+h.
inline Poly recenter(const Poly& p, double h) {
    if (h == 0.0) return p;
    Poly r(p.size(), 0.0);
    for (size_t k = 0; k < p.size(); ++k) {
        // c_k (t+h)^k: contributes c_k binom(k,j) h^j to degree k-j
        double binom = 1.0, hp = 1.0;
        for (size_t j = 0; j <= k; ++j) {
            r[k - j] += p[k] * binom * hp;
            binom = binom * double(k - j) / double(j + 1);
            hp *= h;
        }
    }
    return r;
}

inline double integrate(const Poly& p, double h) {  // integral over [0, h]
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = (v + p[i] / double(i + 1)) * h;
    return v;
}

inline Poly antiderivative(const Poly& p, double c0) {
    Poly r(p.size() + 1, 0.0);
    r[0] = c0;
    for (size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i] / double(i + 1);
    return r;
}

inline Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly r(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * double(i);
    return r;
}

inline bool is_zero(const Poly& p) {
    for (double v : p) if (v != 0.0) return false;
    return true;
}

inline double max_abs(const Poly& p) {
    double m = 0.0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace polyops

struct PiecewisePoly {
    std::vector<Dyadic> bp;          // strictly increasing; size = pieces.size()+1, or empty
    std::vector<Poly> pieces;        // pieces[i] on [bp[i], bp[i+1]) about bp[i]
    Poly rtail;                      // on [bp.back(), +inf) about bp.back(); empty = zero
    Poly ltail;                      // on (-inf, bp.front()) about bp.front(); empty = zero

    bool is_zero() const { return bp.empty(); }
    bool compact() const { return rtail.empty() && ltail.empty(); }

    Dyadic support_lo() const {
        if (bp.empty()) throw std::logic_error("support of zero function");
        return bp.front();
    }
    Dyadic support_hi() const {
        if (bp.empty()) throw std::logic_error("support of zero function");
        return bp.back();
    }

    int degree() const {
        size_t d = 0;
        for (const Poly& p : pieces) d = std::max(d, p.size());
        d = std::max({d, rtail.size(), ltail.size()});
        return d == 0 ? -1 : int(d) - 1;
    }

    double eval(double x) const {
        if (bp.empty()) return 0.0;
        double lo = bp.front().to_double();
        if (x < lo) return ltail.empty() ? 0.0 : polyops::eval(ltail, x - lo);
        double hi = bp.back().to_double();
        if (x >= hi) return rtail.empty() ? 0.0 : polyops::eval(rtail, x - hi);
        // find last breakpoint <= x
        size_t a = 0, b = bp.size() - 1;
        while (b - a > 1) {
            size_t m = (a + b) / 2;
            if (bp[m].to_double() <= x) a = m; else b = m;
        }
        return polyops::eval(pieces[a], x - bp[a].to_double());
    }

    double operator()(double x) const { return eval(x); }
};

namespace detail {

// Polynomial of f valid on [a, b), recentered about a. [a, b) must not
// straddle a breakpoint of f.
inline Poly segment(const PiecewisePoly& f, Dyadic a) {
    if (f.bp.empty()) return {};
    if (a < f.bp.front()) {
        return f.ltail.empty() ? Poly{} : polyops::recenter(f.ltail, (a - f.bp.front()).to_double());
    }
    if (a >= f.bp.back()) {
        return f.rtail.empty() ? Poly{} : polyops::recenter(f.rtail, (a - f.bp.back()).to_double());
    }
    size_t lo = 0, hi = f.bp.size() - 1;
    while (hi - lo > 1) {
        size_t m = (lo + hi) / 2;
        if (f.bp[m] <= a) lo = m; else hi = m;
    }
    return polyops::recenter(f.pieces[lo], (a - f.bp[lo]).to_double());
}

inline std::vector<Dyadic> merge_breakpoints(const std::vector<Dyadic>& a, const std::vector<Dyadic>& b) {
    std::vector<Dyadic> r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) r.push_back(a[i++]);
        else if (i == a.size() || b[j] < a[i]) r.push_back(b[j++]);
        else { r.push_back(a[i]); ++i; ++j; }
    }
    return r;
}

}  // namespace detail

// Drop leading/trailing pieces that are exactly zero (tails must already be
// empty or zero for the affected side).
inline PiecewisePoly pp_trim(PiecewisePoly f) {
    if (f.bp.empty()) return f;
    if (polyops::is_zero(f.ltail)) f.ltail.clear();
    if (polyops::is_zero(f.rtail)) f.rtail.clear();
    size_t lo = 0, hi = f.pieces.size();
    if (f.ltail.empty()) while (lo < hi && polyops::is_zero(f.pieces[lo])) ++lo;
    if (f.rtail.empty()) while (hi > lo && polyops::is_zero(f.pieces[hi - 1])) --hi;
    if (lo == hi && f.ltail.empty() && f.rtail.empty()) return {};
    PiecewisePoly r;
    r.bp.assign(f.bp.begin() + lo, f.bp.begin() + hi + 1);
    r.pieces.assign(f.pieces.begin() + lo, f.pieces.begin() + hi);
    r.ltail = f.ltail;
    r.rtail = f.rtail;
    return r;
}

// Zero out pieces and tails whose coefficients are all below tol in absolute
// value, then trim. Used to discard roundoff residue after cancellations.
inline PiecewisePoly pp_trim_tol(PiecewisePoly f, double tol) {
    for (Poly& p : f.pieces) if (polyops::max_abs(p) <= tol) p.assign(p.size(), 0.0);
    if (polyops::max_abs(f.ltail) <= tol) f.ltail.clear();
    if (polyops::max_abs(f.rtail) <= tol) f.rtail.clear();
    return pp_trim(std::move(f));
}

inline PiecewisePoly pp_scale(PiecewisePoly f, double c) {
    if (c == 0.0) return {};
    for (Poly& p : f.pieces) p = polyops::scale(std::move(p), c);
    f.rtail = polyops::scale(std::move(f.rtail), c);
    f.ltail = polyops::scale(std::move(f.ltail), c);
    return f;
}

inline PiecewisePoly pp_add(const PiecewisePoly& f, const PiecewisePoly& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    PiecewisePoly r;
    r.bp = detail::merge_breakpoints(f.bp, g.bp);
    r.pieces.resize(r.bp.size() - 1);
    for (size_t i = 0; i + 1 < r.bp.size(); ++i)
        r.pieces[i] = polyops::add(detail::segment(f, r.bp[i]), detail::segment(g, r.bp[i]));
    auto tail_sum = [](const PiecewisePoly& a, const PiecewisePoly& b, bool right, Dyadic at) {
        Poly ta, tb;
        if (right) {
            if (!a.rtail.empty()) ta = polyops::recenter(a.rtail, (at - a.bp.back()).to_double());
            if (!b.rtail.empty()) tb = polyops::recenter(b.rtail, (at - b.bp.back()).to_double());
        } else {
            if (!a.ltail.empty()) ta = polyops::recenter(a.ltail, (at - a.bp.front()).to_double());
            if (!b.ltail.empty()) tb = polyops::recenter(b.ltail, (at - b.bp.front()).to_double());
        }
        return polyops::add(ta, tb);
    };
    r.rtail = tail_sum(f, g, true, r.bp.back());
    r.ltail = tail_sum(f, g, false, r.bp.front());
    return pp_trim(std::move(r));
}

inline PiecewisePoly pp_sub(const PiecewisePoly& f, const PiecewisePoly& g) {
    return pp_add(f, pp_scale(g, -1.0));
}

// g(x) = c * f(2^dlog2 * x - shift). Breakpoints map through (b+shift)/2^dlog2,
// staying dyadic; piece coefficients pick up exact powers of two.
inline PiecewisePoly pp_transform(const PiecewisePoly& f, double c, Dyadic shift, int dlog2) {
    if (f.is_zero() || c == 0.0) return {};
    PiecewisePoly r;
    r.bp.reserve(f.bp.size());
    for (const Dyadic& b : f.bp) r.bp.push_back((b + shift).mul_pow2(-dlog2));
    auto map_poly = [&](const Poly& p) {
        Poly q(p.size());
        for (size_t k = 0; k < p.size(); ++k) q[k] = c * std::ldexp(p[k], dlog2 * int(k));
        return q;
    };
    r.pieces.reserve(f.pieces.size());
    for (const Poly& p : f.pieces) r.pieces.push_back(map_poly(p));
    r.rtail = map_poly(f.rtail);
    r.ltail = map_poly(f.ltail);
    return r;
}

// g(x) = f(-x). Breakpoints reverse; continuity side at breakpoints flips,
// which no integral-based consumer observes.
inline PiecewisePoly pp_reflect(const PiecewisePoly& f) {
    if (f.is_zero()) return {};
    PiecewisePoly r;
    r.bp.reserve(f.bp.size());
    for (size_t i = f.bp.size(); i-- > 0;) r.bp.push_back(-f.bp[i]);
    r.pieces.resize(f.pieces.size());
    for (size_t i = 0; i < f.pieces.size(); ++i) {
        // piece on [a,b) about a becomes piece on [-b,-a) about -b:
        // f(-x) = sum c_k (-x - a)^k = sum c_k ((b-a) - t)^k, t = x + b
        const Poly& p = f.pieces[i];
        double h = (f.bp[i + 1] - f.bp[i]).to_double();
        Poly flipped(p.size());
        for (size_t k = 0; k < p.size(); ++k) flipped[k] = (k % 2 == 0) ? p[k] : -p[k];
        r.pieces[f.pieces.size() - 1 - i] = polyops::recenter(flipped, -h);
    }
    auto flip_tail = [](const Poly& p) {
        Poly q(p.size());
        for (size_t k = 0; k < p.size(); ++k) q[k] = (k % 2 == 0) ? p[k] : -p[k];
        return q;
    };
    r.rtail = flip_tail(f.ltail);
    r.ltail = flip_tail(f.rtail);
    return r;
}

inline PiecewisePoly pp_derivative(const PiecewisePoly& f) {
    PiecewisePoly r = f;
    for (Poly& p : r.pieces) p = polyops::derivative(p);
    r.rtail = polyops::derivative(r.rtail);
    r.ltail = polyops::derivative(r.ltail);
    return pp_trim(std::move(r));
}

// F(x) = integral of f from -inf (equivalently from any base point at or left
// of the support) to x. Gains a constant right tail equal to the total mass.
inline PiecewisePoly pp_antiderivative(const PiecewisePoly& f) {
    if (f.is_zero()) return {};
    if (!f.ltail.empty()) throw std::invalid_argument("antiderivative: left tail is not integrable");
    PiecewisePoly r;
    r.bp = f.bp;
    r.pieces.resize(f.pieces.size());
    double acc = 0.0;
    for (size_t i = 0; i < f.pieces.size(); ++i) {
        r.pieces[i] = polyops::antiderivative(f.pieces[i], acc);
        acc = polyops::eval(r.pieces[i], (f.bp[i + 1] - f.bp[i]).to_double());
    }
    r.rtail = polyops::antiderivative(f.rtail, acc);
    return r;
}

// Convolution with the unit box: (f * box)(x) = F(x) - F(x-1). The constant
// tails of F cancel exactly, so the result is compact when f is.
inline PiecewisePoly pp_convolve_box(const PiecewisePoly& f) {
    if (f.is_zero()) return {};
    PiecewisePoly F = pp_antiderivative(f);
    PiecewisePoly r = pp_sub(F, pp_transform(F, 1.0, Dyadic(1), 0));
    return pp_trim(std::move(r));
}

// Integral of f*g. At most one factor may have tails; the overlap is finite
// whenever the other factor is compact.
inline double pp_inner(const PiecewisePoly& f, const PiecewisePoly& g) {
    if (f.is_zero() || g.is_zero()) return 0.0;
    if (!f.compact() && !g.compact())
        throw std::invalid_argument("pp_inner: both factors have unbounded support");
    const PiecewisePoly& cpt = f.compact() ? f : g;
    const PiecewisePoly& oth = f.compact() ? g : f;
    Dyadic lo = cpt.bp.front();
    if (oth.ltail.empty()) lo = std::max(lo, oth.bp.front());
    Dyadic hi = cpt.bp.back();
    if (oth.rtail.empty()) hi = std::min(hi, oth.bp.back());
    if (!(lo < hi)) return 0.0;
    std::vector<Dyadic> grid = detail::merge_breakpoints(f.bp, g.bp);
    std::vector<Dyadic> cells;
    cells.push_back(lo);
    for (const Dyadic& x : grid) if (lo < x && x < hi) cells.push_back(x);
    cells.push_back(hi);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cells.size(); ++i) {
        Poly prod = polyops::mul(detail::segment(f, cells[i]), detail::segment(g, cells[i]));
        total += polyops::integrate(prod, (cells[i + 1] - cells[i]).to_double());
    }
    return total;
}

// Restriction of f to [cut, +inf); the left tail (if any) is dropped entirely
// when cut >= bp.front().
inline PiecewisePoly pp_restrict_right(const PiecewisePoly& f, Dyadic cut) {
    if (f.is_zero()) return {};
    if (cut <= f.bp.front()) {
        PiecewisePoly r = f;
        if (cut < f.bp.front() && !f.ltail.empty()) {
            // keep the tail segment between cut and the first breakpoint as a piece
            r.pieces.insert(r.pieces.begin(), polyops::recenter(f.ltail, (cut - f.bp.front()).to_double()));
            r.bp.insert(r.bp.begin(), cut);
        }
        r.ltail.clear();
        return r;
    }
    PiecewisePoly r;
    if (cut >= f.bp.back()) {
        if (f.rtail.empty()) return {};
        // pure-tail object: single breakpoint, no pieces
        r.bp = {cut};
        r.rtail = polyops::recenter(f.rtail, (cut - f.bp.back()).to_double());
        return r;
    }
    r.bp.push_back(cut);
    for (const Dyadic& x : f.bp) if (cut < x) r.bp.push_back(x);
    r.pieces.reserve(r.bp.size() - 1);
    for (size_t i = 0; i + 1 < r.bp.size(); ++i) r.pieces.push_back(detail::segment(f, r.bp[i]));
    r.rtail = f.rtail;
    return pp_trim(std::move(r));
}

}  // namespace rlbesov
