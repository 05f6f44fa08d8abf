#pragma once
// Weight functions on the line with exact interval masses.
//
// Four kinds are supported, all closed under raising to a real power (the
// operation needed to form conjugate-exponent masses exactly):
//   constant c            value c > 0 everywhere
//   power    (1+|x-h|)^p  centered at a dyadic h
//   homog    |x|^z        scale-invariant; masses touching 0 diverge for z <= -1
//   table    piecewise constant from a text file, edge values extended
//
// On top of the mass arithmetic sit the Muckenhoupt-type scans: the A_rho
// functional over a finite dyadic family, a bracket for the critical index
// r_w, and empirical doubling witnesses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlbesov/dyadic.hpp"

namespace rlbesov {

enum class WeightKind { Constant, Power, Homog, Table };

struct Weight {
    WeightKind kind = WeightKind::Constant;
    double c = 1.0;        // Constant: the value
    double p = 0.0;        // Power: exponent of (1 + |x - h|)
    Dyadic h;              // Power: center
    double z = 0.0;        // Homog: exponent of |x|
    std::vector<double> table_x;  // Table: breakpoints, ascending
    std::vector<double> table_v;  // Table: value on [x_i, x_{i+1}); edges extended

    double value(double x) const {
        switch (kind) {
            case WeightKind::Constant: return c;
            case WeightKind::Power: return std::pow(1.0 + std::abs(x - h.to_double()), p);
            case WeightKind::Homog: return std::pow(std::abs(x), z);
            case WeightKind::Table: {
                if (x < table_x.front()) return table_v.front();
                size_t i = size_t(std::upper_bound(table_x.begin(), table_x.end(), x) -
                                  table_x.begin());
                if (i == 0) return table_v.front();
                return table_v[std::min(i - 1, table_v.size() - 1)];
            }
        }
        return c;
    }

    // integral of the weight over [a, b], exact per kind; +infinity when the
    // integral genuinely diverges (homog with z <= -1 touching the origin)
    double mass(double a, double b) const {
        if (!(a <= b)) throw std::invalid_argument("weight mass: interval reversed");
        switch (kind) {
            case WeightKind::Constant: return c * (b - a);
            case WeightKind::Power: {
                double hh = h.to_double();
                return power_half_mass(std::max(a, hh) - hh, std::max(b, hh) - hh) +
                       power_half_mass(hh - std::min(b, hh), hh - std::min(a, hh));
            }
            case WeightKind::Homog: {
                return homog_half_mass(std::max(a, 0.0), std::max(b, 0.0)) +
                       homog_half_mass(-std::min(b, 0.0), -std::min(a, 0.0));
            }
            case WeightKind::Table: {
                double total = 0.0;
                // walk the cells of the table that intersect [a, b]
                std::vector<double> cuts{a, b};
                for (double x : table_x)
                    if (x > a && x < b) cuts.push_back(x);
                std::sort(cuts.begin(), cuts.end());
                for (size_t i = 0; i + 1 < cuts.size(); ++i)
                    total += value(0.5 * (cuts[i] + cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
                return total;
            }
        }
        return 0.0;
    }

    // essential infimum over [a, b] (kinds here are piecewise monotone)
    double essinf(double a, double b) const {
        if (!(a <= b)) throw std::invalid_argument("weight essinf: interval reversed");
        switch (kind) {
            case WeightKind::Constant: return c;
            case WeightKind::Power: {
                double hh = h.to_double();
                double near = (a <= hh && hh <= b) ? 0.0 : std::min(std::abs(a - hh), std::abs(b - hh));
                double far = std::max(std::abs(a - hh), std::abs(b - hh));
                return std::pow(1.0 + (p >= 0 ? near : far), p);
            }
            case WeightKind::Homog: {
                double near = (a <= 0.0 && 0.0 <= b) ? 0.0 : std::min(std::abs(a), std::abs(b));
                double far = std::max(std::abs(a), std::abs(b));
                if (z >= 0) return std::pow(near, z);  // 0^0 = 1 for z == 0
                return far == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(far, z);
            }
            case WeightKind::Table: {
                double m = std::numeric_limits<double>::infinity();
                m = std::min(m, value(a));
                for (size_t i = 0; i < table_x.size(); ++i)
                    if (table_x[i] >= a && table_x[i] < b)
                        m = std::min(m, value(table_x[i]));
                if (b > table_x.back()) m = std::min(m, table_v.back());
                return m;
            }
        }
        return c;
    }

    // the weight raised to a real power (closed for every kind)
    Weight pow(double e) const {
        Weight w = *this;
        switch (kind) {
            case WeightKind::Constant: w.c = std::pow(c, e); break;
            case WeightKind::Power: w.p = p * e; break;
            case WeightKind::Homog: w.z = z * e; break;
            case WeightKind::Table:
                for (double& v : w.table_v) v = std::pow(v, e);
                break;
        }
        return w;
    }

    // translate the weight by k: returns x -> w(x + k)
    Weight translate(Dyadic k) const {
        Weight w = *this;
        switch (kind) {
            case WeightKind::Power: w.h = h - k; break;
            case WeightKind::Homog:
                if (!(k == Dyadic(0)))
                    throw std::invalid_argument("weight translate: homogeneous kind is origin-pinned");
                break;
            case WeightKind::Table: {
                double kk = k.to_double();
                for (double& x : w.table_x) x -= kk;
                break;
            }
            case WeightKind::Constant: break;
        }
        return w;
    }

  private:
    // integral of (1+x)^p over [a, b] with 0 <= a <= b (one side of the center)
    double power_half_mass(double a, double b) const {
        if (b <= a) return 0.0;
        if (p == -1.0) return std::log1p(b) - std::log1p(a);
        return (std::pow(1.0 + b, p + 1.0) - std::pow(1.0 + a, p + 1.0)) / (p + 1.0);
    }
    // integral of x^z over [a, b] with 0 <= a <= b
    double homog_half_mass(double a, double b) const {
        if (b <= a) return 0.0;
        if (z <= -1.0 && a == 0.0) return std::numeric_limits<double>::infinity();
        if (z == -1.0) return std::log(b) - std::log(a);
        return (std::pow(b, z + 1.0) - std::pow(a, z + 1.0)) / (z + 1.0);
    }
};

// ---------------------------------------------------------------------------
// Descriptor grammar
// ---------------------------------------------------------------------------

// "constant 1" | "power t=3 delta=0 shift=0" | "homog zeta=2" | "table file=w.txt"
// The power kind exposes its exponent as -t + delta.
inline Weight weight_parse(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    Weight w;
    auto kv = [&](std::string tok, const std::string& key, double& out) {
        if (tok.rfind(key + "=", 0) != 0) return false;
        out = std::stod(tok.substr(key.size() + 1));
        return true;
    };
    if (kind == "constant") {
        w.kind = WeightKind::Constant;
        if (!(in >> w.c)) throw std::invalid_argument("weight: constant needs a value");
        if (!(w.c > 0)) throw std::invalid_argument("weight: constant must be positive");
    } else if (kind == "power") {
        w.kind = WeightKind::Power;
        double t = 0, delta = 0;
        std::string tok, shift_text;
        while (in >> tok) {
            double tmp;
            if (kv(tok, "t", tmp)) t = tmp;
            else if (kv(tok, "delta", tmp)) delta = tmp;
            else if (tok.rfind("shift=", 0) == 0) shift_text = tok.substr(6);
            else throw std::invalid_argument("weight: unknown power parameter: " + tok);
        }
        w.p = -t + delta;
        w.h = shift_text.empty() ? Dyadic(0) : Dyadic::parse(shift_text);
    } else if (kind == "homog") {
        w.kind = WeightKind::Homog;
        std::string tok;
        bool have = false;
        while (in >> tok) {
            double tmp;
            if (kv(tok, "zeta", tmp)) { w.z = tmp; have = true; }
            else throw std::invalid_argument("weight: unknown homog parameter: " + tok);
        }
        if (!have) throw std::invalid_argument("weight: homog needs zeta=");
        if (w.z <= -1.0) throw std::invalid_argument("weight: homog exponent must exceed -1");
    } else if (kind == "table") {
        w.kind = WeightKind::Table;
        std::string tok, file;
        while (in >> tok) {
            if (tok.rfind("file=", 0) == 0) file = tok.substr(5);
            else throw std::invalid_argument("weight: unknown table parameter: " + tok);
        }
        if (file.empty()) throw std::invalid_argument("weight: table needs file=");
        std::ifstream f(file);
        if (!f) throw std::invalid_argument("weight: cannot open table file: " + file);
        double x, v;
        while (f >> x >> v) {
            if (!(v > 0)) throw std::invalid_argument("weight: table values must be positive");
            if (!w.table_x.empty() && x <= w.table_x.back())
                throw std::invalid_argument("weight: table breakpoints must increase");
            w.table_x.push_back(x);
            w.table_v.push_back(v);
        }
        if (w.table_x.size() < 2) throw std::invalid_argument("weight: table needs at least two rows");
    } else {
        throw std::invalid_argument("weight: unknown kind: " + kind);
    }
    return w;
}

inline std::string weight_describe(const Weight& w) {
    std::ostringstream out;
    switch (w.kind) {
        case WeightKind::Constant: out << "constant " << w.c; break;
        case WeightKind::Power: out << "power exponent=" << w.p << " shift=" << w.h.str(); break;
        case WeightKind::Homog: out << "homog zeta=" << w.z; break;
        case WeightKind::Table:
            out << "table cells=" << (w.table_x.size() - 1);
            break;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Muckenhoupt-type scans
// ---------------------------------------------------------------------------

struct MuckenhouptResult {
    double value = 0.0;  // sup over the scanned family
    int arg_d = 0;       // dyadic level attaining the sup
    std::int64_t arg_tau = 0;
};

// A_rho over dyadic intervals Q = [tau/2^d, (tau+1)/2^d]:
//   rho = 1:  (w(Q)/|Q|) / essinf_Q w
//   rho > 1:  (w(Q)/|Q|) * (w^{1-rho'}(Q)/|Q|)^{rho-1},  rho' = rho/(rho-1)
// The scan covers levels 0..d_max (short intervals; |Q| <= 1) and, when
// include_long is set, levels down to -d_max as well; shifts keep |x| <= x_window.
inline MuckenhouptResult muckenhoupt_constant(const Weight& w, double rho, int d_max = 8,
                                              double x_window = 20.0, bool include_long = false) {
    if (rho < 1.0) throw std::invalid_argument("muckenhoupt: rho must be >= 1");
    Weight conj;  // only used for rho > 1
    if (rho > 1.0) conj = w.pow(1.0 - rho / (rho - 1.0));
    MuckenhouptResult best;
    int d_lo = include_long ? -d_max : 0;
    for (int d = d_lo; d <= d_max; ++d) {
        double len = std::ldexp(1.0, -d);
        std::int64_t span = std::max<std::int64_t>(1, std::int64_t(std::ceil(x_window / len)));
        for (std::int64_t tau = -span; tau < span; ++tau) {
            double a = double(tau) * len, b = double(tau + 1) * len;
            double ratio = w.mass(a, b) / len;
            double val;
            if (rho == 1.0) {
                double inf = w.essinf(a, b);
                val = inf > 0 ? ratio / inf : std::numeric_limits<double>::infinity();
            } else {
                val = ratio * std::pow(conj.mass(a, b) / len, rho - 1.0);
            }
            if (val > best.value) {
                best.value = val;
                best.arg_d = d;
                best.arg_tau = tau;
            }
        }
    }
    return best;
}

// Bracket for the critical index r_w = inf { rho >= 1 : the A_rho scan is
// stable }.  Stability heuristic: the sup over the full window stays within
// 5% of the sup over the halved window and the halved level range.
struct IndexBracket {
    double lo = 1.0;
    double hi = 1.0;
    bool hi_is_infinite = false;  // no stable rho found up to the cap
};

inline bool muckenhoupt_scan_stable(const Weight& w, double rho, int d_max = 8,
                                    double x_window = 20.0) {
    double full = muckenhoupt_constant(w, rho, d_max, x_window).value;
    double half = muckenhoupt_constant(w, rho, std::max(1, d_max - 2), x_window / 2.0).value;
    if (!std::isfinite(full)) return false;
    return full <= half * 1.05;
}

inline IndexBracket weight_index_bracket(const Weight& w, double rho_cap = 8.0,
                                         double tol = 1.0 / 64.0) {
    IndexBracket br;
    if (muckenhoupt_scan_stable(w, 1.0)) {
        br.lo = br.hi = 1.0;
        return br;
    }
    double lo = 1.0, hi = 2.0;
    while (hi < rho_cap && !muckenhoupt_scan_stable(w, hi)) {
        lo = hi;
        hi *= 2.0;
    }
    if (hi >= rho_cap && !muckenhoupt_scan_stable(w, hi)) {
        br.lo = lo;
        br.hi = rho_cap;
        br.hi_is_infinite = true;
        return br;
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (muckenhoupt_scan_stable(w, mid)) hi = mid; else lo = mid;
    }
    br.lo = lo;
    br.hi = hi;
    return br;
}

// sigma_p(w) = r_w / min{p, r_w} - 2 + r_w, evaluated at the conservative
// (upper) end of the index bracket.
inline double sigma_p_of_weight(const Weight& w, double p) {
    IndexBracket br = weight_index_bracket(w);
    double rw = br.hi;
    return rw / std::min(p, rw) - 2.0 + rw;
}

// Empirical doubling witnesses over nested dyadic pairs within the window:
//   c1 = sup over B inside F of (|F|/|B|)^rho       * w(B)/w(F)
//   c2 = sup over E inside B of (w(E)/w(B)) * (|B|/|E|)^rho_star
// For w == constant and rho == 1 the first sup equals 1 exactly.
struct DoublingWitness {
    double c1 = 0.0;
    double c2 = 0.0;
};

inline DoublingWitness doubling_check(const Weight& w, double rho, double rho_star,
                                      int d_max = 6, double x_window = 16.0) {
    DoublingWitness dw;
    for (int d = 1; d <= d_max; ++d) {
        double len = std::ldexp(1.0, -d);
        std::int64_t span = std::max<std::int64_t>(1, std::int64_t(std::ceil(x_window / len)));
        for (std::int64_t tau = -span; tau < span; ++tau) {
            double a = double(tau) * len, b = double(tau + 1) * len;
            double wb = w.mass(a, b);
            // ancestors F of B at coarser levels j < d
            std::int64_t up = tau;
            for (int j = d - 1; j >= 0; --j) {
                up = (up >= 0) ? up / 2 : (up - 1) / 2;
                double fl = std::ldexp(1.0, -j);
                double fa = double(up) * fl, fb = double(up + 1) * fl;
                double wf = w.mass(fa, fb);
                if (wf > 0.0 && std::isfinite(wb))
                    dw.c1 = std::max(dw.c1, std::pow(fl / len, rho) * wb / wf);
                // here the level-d interval plays E inside its ancestor B
                if (wf > 0.0 && std::isfinite(wb))
                    dw.c2 = std::max(dw.c2, (wb / wf) * std::pow(fl / len, rho_star));
            }
        }
    }
    return dw;
}

}  // namespace rlbesov
