#pragma once
// Fractional integration of natural order, exact on piecewise polynomials.
//
// The order-alpha integral from the left,
//   (I_left^alpha f)(x) = (1/(alpha-1)!) * integral_{-inf}^x (x-y)^(alpha-1) f(y) dy,
// is computed as the alpha-fold iterated antiderivative (the two agree by the
// Cauchy iterated-integral formula, normalization included).  Images of
// compactly supported functions carry an exact polynomial right tail of
// degree < alpha.  The right-sided operator with kernel (y-x)^(alpha-1) is
// conjugation by reflection.  An optional dyadic cut restricts the domain of
// integration to [cut, inf) (left) or (-inf, cut] (right) first.

#include <optional>
#include <stdexcept>

#include "rlbesov/piecewise.hpp"

namespace rlbesov {

enum class RLSide { Left, Right };

inline PiecewisePoly rl_apply(const PiecewisePoly& f, int alpha, RLSide side = RLSide::Left,
                              std::optional<Dyadic> cut = std::nullopt) {
    if (alpha < 0) throw std::invalid_argument("rl_apply: negative order");
    PiecewisePoly g = f;
    if (side == RLSide::Right) {
        g = pp_reflect(g);
        if (cut) g = pp_restrict_right(g, -*cut);
    } else if (cut) {
        g = pp_restrict_right(g, *cut);
    }
    for (int i = 0; i < alpha; ++i) g = pp_antiderivative(g);
    if (side == RLSide::Right) g = pp_reflect(g);
    return g;
}

// |<I_left^alpha f, g^(alpha)> - (-1)^alpha <f, g>| for compactly supported
// f, g: the integration-by-parts pairing that pins the normalization.
inline double rl_duality_residual(const PiecewisePoly& f, const PiecewisePoly& g, int alpha) {
    if (alpha < 0) throw std::invalid_argument("rl_duality_residual: negative order");
    PiecewisePoly lhs_f = rl_apply(f, alpha);
    PiecewisePoly dg = g;
    for (int i = 0; i < alpha; ++i) dg = pp_derivative(dg);
    double lhs = pp_inner(lhs_f, dg);
    double rhs = ((alpha % 2) ? -1.0 : 1.0) * pp_inner(f, g);
    return std::abs(lhs - rhs);
}

}  // namespace rlbesov
