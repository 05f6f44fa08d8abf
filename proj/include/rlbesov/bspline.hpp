#pragma once
// Cardinal B-splines and the exact integer combinatorics around them.
//
// B_0 is the indicator of [0,1); B_n = B_{n-1} * B_0 has support [0, n+1],
// degree n and n-1 continuous derivatives. Construction goes through the
// exact box convolution, so piece coefficients are correct to roundoff.

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "piecewise.hpp"

namespace rlbesov {

inline constexpr int kMaxSplineOrder = 10;

/// Exact binomial coefficient; overflow in int64 is rejected.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // r * (n-k+i) always divides evenly by i at this point
        std::int64_t t;
        if (__builtin_mul_overflow(r, n - k + i, &t)) throw std::overflow_error("binomial: int64 overflow");
        r = t / i;
    }
    return r;
}

/// B-spline of order n, cached; order outside [0, 10] is rejected.
inline const PiecewisePoly& bspline(int n) {
    if (n < 0 || n > kMaxSplineOrder) throw std::invalid_argument("bspline: order must be in [0,10]");
    static std::vector<PiecewisePoly> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (cache.empty()) {
        PiecewisePoly box;
        box.bp = {Dyadic(0), Dyadic(1)};
        box.pieces = {Poly{1.0}};
        cache.push_back(box);
    }
    while (int(cache.size()) <= n) cache.push_back(pp_convolve_box(cache.back()));
    return cache[n];
}

/// Signed coefficients c_l = (-1)^l binom(k,l) with
/// B_n^(k) = sum_l c_l B_{n-k}(. - l); requires 0 <= k <= n.
inline std::vector<std::int64_t> bspline_derivative_expansion(int n, int k) {
    if (n < 0 || n > kMaxSplineOrder) throw std::invalid_argument("derivative expansion: bad order");
    if (k < 0 || k > n) throw std::invalid_argument("derivative expansion: need 0 <= k <= n");
    std::vector<std::int64_t> c(k + 1);
    for (int l = 0; l <= k; ++l) c[l] = (l % 2 == 0 ? 1 : -1) * binomial(k, l);
    return c;
}

/// Difference coefficients A_0..A_R for natural order alpha:
/// A_0 = 1, A_r = sum_{j=1}^{r} (-1)^(j-1) A_{r-j} binom(alpha, j).
/// Exact in int64; overflow is rejected.
inline std::vector<std::int64_t> difference_coeffs(int alpha, int R) {
    if (alpha < 1) throw std::invalid_argument("difference_coeffs: alpha must be >= 1");
    if (R < 0) throw std::invalid_argument("difference_coeffs: R must be >= 0");
    std::vector<std::int64_t> A(R + 1);
    A[0] = 1;
    for (int r = 1; r <= R; ++r) {
        std::int64_t acc = 0;
        for (int j = 1; j <= std::min(r, alpha); ++j) {
            std::int64_t term;
            if (__builtin_mul_overflow(A[r - j], binomial(alpha, j), &term))
                throw std::overflow_error("difference_coeffs: int64 overflow");
            if (j % 2 == 0) term = -term;
            if (__builtin_add_overflow(acc, term, &acc))
                throw std::overflow_error("difference_coeffs: int64 overflow");
        }
        A[r] = acc;
    }
    return A;
}

/// Chu-Vandermonde: returns binom(r+s,k) after asserting it equals
/// sum_n binom(r,n) binom(s,k-n) in exact arithmetic.
inline std::int64_t chu_vandermonde(int r, int s, int k) {
    if (r < 0 || s < 0 || k < 0) throw std::invalid_argument("chu_vandermonde: negative input");
    std::int64_t lhs = binomial(r + s, k);
    std::int64_t rhs = 0;
    for (int n = std::max(0, k - s); n <= std::min(r, k); ++n) {
        std::int64_t term;
        if (__builtin_mul_overflow(binomial(r, n), binomial(s, k - n), &term))
            throw std::overflow_error("chu_vandermonde: int64 overflow");
        if (__builtin_add_overflow(rhs, term, &rhs))
            throw std::overflow_error("chu_vandermonde: int64 overflow");
    }
    if (lhs != rhs) throw std::runtime_error("chu_vandermonde: identity failed (internal)");
    return lhs;
}

/// Gram value <B_n, B_n(. - offset)>; zero when |offset| > n.
inline double bspline_gram(int n, int offset) {
    const PiecewisePoly& b = bspline(n);
    if (offset < 0) offset = -offset;
    if (offset > n) return 0.0;
    return pp_inner(b, pp_transform(b, 1.0, Dyadic(offset), 0));
}

/// Extreme overlap <B_n, B_n(. - n)>, positive for all n >= 0.
inline double b_intersection(int n) { return bspline_gram(n, n); }

}  // namespace rlbesov
