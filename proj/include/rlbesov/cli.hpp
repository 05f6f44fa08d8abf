#pragma once
// Command-line front end: subcommand tree, configuration file handling, and
// report emission.  `run` is the whole program; the binary's main() only
// forwards to it, which keeps every code path drivable from tests.
//
// Exit codes: 0 success, 1 precondition/usage error, 2 numeric failure,
// 3 comparison verdict FAIL.

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlbesov/besov.hpp"
#include "rlbesov/bspline.hpp"
#include "rlbesov/criteria.hpp"
#include "rlbesov/dyadic.hpp"
#include "rlbesov/harness.hpp"
#include "rlbesov/io.hpp"
#include "rlbesov/piecewise.hpp"
#include "rlbesov/rliouville.hpp"
#include "rlbesov/wavelet.hpp"
#include "rlbesov/weights.hpp"

namespace rlbesov {
namespace cli {

// ---------------------------------------------------------------------------
// Function descriptors
// ---------------------------------------------------------------------------

// "bspline n=N [shift=DY]"            basis spline B_N(. - shift)
// "combo n=N lo=J c=v0,v1,..."        sum_i v_i B_N(. - J - i)
// "wavelet n=N [d=D] [tau=T] [amp=A]" amp * W_N(2^{D-1} x - T)
inline PiecewisePoly parse_function(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    auto want = [&](const std::string& tok, const char* key) {
        return tok.rfind(std::string(key) + "=", 0) == 0;
    };
    auto val = [&](const std::string& tok) {
        return tok.substr(tok.find('=') + 1);
    };
    if (kind == "bspline") {
        int n = 1;
        Dyadic shift(0);
        std::string tok;
        while (in >> tok) {
            if (want(tok, "n")) n = std::stoi(val(tok));
            else if (want(tok, "shift")) shift = Dyadic::parse(val(tok));
            else throw std::invalid_argument("function: unknown bspline parameter: " + tok);
        }
        return pp_transform(bspline(n), 1.0, shift, 0);
    }
    if (kind == "combo") {
        int n = 1;
        std::int64_t lo = 0;
        std::vector<double> c;
        std::string tok;
        while (in >> tok) {
            if (want(tok, "n")) n = std::stoi(val(tok));
            else if (want(tok, "lo")) lo = std::stoll(val(tok));
            else if (want(tok, "c")) {
                std::istringstream cs(val(tok));
                std::string item;
                while (std::getline(cs, item, ',')) c.push_back(std::stod(item));
            } else throw std::invalid_argument("function: unknown combo parameter: " + tok);
        }
        if (c.empty()) throw std::invalid_argument("function: combo needs c=v0,v1,...");
        return spline_combination(n, c, lo);
    }
    if (kind == "wavelet") {
        int n = 1, d = 1;
        std::int64_t tau = 0;
        double amp = 1.0;
        std::string tok;
        while (in >> tok) {
            if (want(tok, "n")) n = std::stoi(val(tok));
            else if (want(tok, "d")) d = std::stoi(val(tok));
            else if (want(tok, "tau")) tau = std::stoll(val(tok));
            else if (want(tok, "amp")) amp = std::stod(val(tok));
            else throw std::invalid_argument("function: unknown wavelet parameter: " + tok);
        }
        if (d < 1) throw std::invalid_argument("function: wavelet level must be >= 1");
        return pp_transform(compact_wavelet(n).fn, amp, Dyadic(tau), d - 1);
    }
    throw std::invalid_argument("function: unknown kind: " + kind +
                                " (expected bspline | combo | wavelet)");
}

// ---------------------------------------------------------------------------
// Shared run state
// ---------------------------------------------------------------------------

namespace detail {

constexpr const char* kFunctionHelp =
    "function descriptor: 'bspline n=N [shift=DY]' | 'combo n=N lo=J c=v0,v1,...' | "
    "'wavelet n=N [d=D] [tau=T] [amp=A]'";
constexpr const char* kWeightHelp =
    "weight descriptor: 'constant C' | 'power t=T delta=D shift=DY' | 'homog zeta=Z' | "
    "'table file=PATH'";

struct State {
    // global flags
    std::string out_path;
    std::string format = "auto";  // auto | json | csv | plain
    int threads = 1;
    std::int64_t tau_window = 512;
    std::int64_t series_window = 4096;
    int d_max = 20;
    std::int64_t tau_cap = std::int64_t(1) << 16;
    double trim_tol = 0.0;
    CLI::Option* opt_tau = nullptr;
    CLI::Option* opt_series = nullptr;
    CLI::Option* opt_dmax = nullptr;

    // result of the dispatched subcommand
    std::string output;
    int exit_code = 0;

    EvalWindows windows() const { return EvalWindows{tau_window, series_window, d_max}; }

    // Windows with per-command defaults: a global flag wins only when the
    // user actually set it.
    EvalWindows windows_or(EvalWindows def) const {
        EvalWindows w = def;
        if (opt_tau && opt_tau->count() > 0) w.tau_window = tau_window;
        if (opt_series && opt_series->count() > 0) w.series_window = series_window;
        if (opt_dmax && opt_dmax->count() > 0) w.d_max = d_max;
        return w;
    }

    std::string resolve(const std::string& fallback) const {
        return format == "auto" ? fallback : format;
    }

    void emit_scalar(const std::string& kind, double v) {
        std::string f = resolve("plain");
        if (f == "plain" || f == "csv") {
            output = num_str(v) + "\n";
        } else if (f == "json") {
            Json payload;
            payload["value"] = jnum(v);
            output = dump_json(report_json(kind, payload));
        } else {
            throw std::invalid_argument("unknown format: " + f);
        }
    }

    void emit_report(const std::string& kind, const Json& payload,
                     const std::string& csv = std::string()) {
        std::string f = resolve("json");
        if (f == "json") {
            output = dump_json(report_json(kind, payload));
        } else if (f == "csv") {
            if (csv.empty())
                throw std::invalid_argument("format csv is not available for " + kind);
            output = csv;
        } else {
            throw std::invalid_argument("format " + f + " is not available for " + kind);
        }
    }
};

inline Side parse_side(const std::string& s) {
    if (s == "plus") return Side::Plus;
    if (s == "minus") return Side::Minus;
    throw std::invalid_argument("side must be plus or minus, got: " + s);
}

inline Style parse_style(const std::string& s) {
    if (s == "old") return Style::Old;
    if (s == "new") return Style::New;
    throw std::invalid_argument("style must be old or new, got: " + s);
}

inline Role parse_role(const std::string& s) {
    if (s == "forward") return Role::Forward;
    if (s == "reverse") return Role::Reverse;
    throw std::invalid_argument("role must be forward or reverse, got: " + s);
}

inline int natural_alpha(double alpha) {
    int a = int(alpha);
    if (alpha < 1.0 || double(a) != alpha)
        throw std::invalid_argument(
            "the empirical comparison applies the operator exactly and needs a natural "
            "order, got alpha = " + std::to_string(alpha));
    return a;
}

// shared inputs of `verify forward` / `verify reverse`
struct VerifyParams {
    double alpha = 1.0, kappa = 0.0, p = 2.0, q = 2.0, s = 2.0;
    std::string u_text, other_text;
    std::string style = "new", side = "plus";
    std::optional<std::string> cut;  // dyadic; engages the half-line variants
    std::uint64_t seed = 812;
    int count = 50, order = 1, window = 6;
    std::optional<std::int64_t> j_lo;
    int emp_d_max = 6;
    int n_in = 0, n_out = 0;  // 0 = derive the minimal admissible order
    double k_hi = 16.0, k_lo = 16.0, slack = 0.0;
};

inline void add_verify_options(CLI::App* c, VerifyParams& prm, const char* other_flag,
                               const char* other_help) {
    c->add_option("--alpha", prm.alpha, "operator order (natural)");
    c->add_option("--kappa", prm.kappa, "level prefactor exponent");
    c->add_option("--p", prm.p, "integrability index (> 1)");
    c->add_option("--q", prm.q, "level aggregation index");
    c->add_option("--s", prm.s, "target smoothness (source space has s - alpha)");
    c->add_option("--u", prm.u_text, std::string("target weight; ") + kWeightHelp)->required();
    c->add_option(other_flag, prm.other_text, other_help)->required();
    c->add_option("--style", prm.style, "aggregate style: old | new");
    c->add_option("--side", prm.side, "side: plus | minus");
    c->add_option("--c", prm.cut, "half-line anchor (dyadic); omit for the full line");
    c->add_option("--seed", prm.seed, "family seed");
    c->add_option("--count", prm.count, "family size");
    c->add_option("--order", prm.order, "spline order of family members");
    c->add_option("--window", prm.window, "placement window of family members");
    c->add_option("--j-lo", prm.j_lo, "support floor for family members");
    c->add_option("--emp-d-max", prm.emp_d_max, "level cap of the norm estimates");
    c->add_option("--n-in", prm.n_in, "analysis order, source side (0 = minimal)");
    c->add_option("--n-out", prm.n_out, "analysis order, target side (0 = minimal)");
    c->add_option("--k-hi", prm.k_hi, "allowed factor of empirical over criterion");
    c->add_option("--k-lo", prm.k_lo, "allowed factor of criterion over empirical");
    c->add_option("--slack", prm.slack, "additive allowance for finite families");
}

struct VerifyOutcome {
    CriterionReport crit;
    EmpiricalReport emp;
    CompareVerdict cv;
};

inline VerifyOutcome run_verify(Role role, const VerifyParams& prm, const State& st,
                                EvalWindows win) {
    Style style = parse_style(prm.style);
    Side side = parse_side(prm.side);
    Weight u = weight_parse(prm.u_text);
    Weight other = weight_parse(prm.other_text);

    std::optional<Dyadic> cut;
    std::optional<double> halfline_c;
    if (prm.cut) {
        cut = Dyadic::parse(*prm.cut);
        halfline_c = cut->to_double();
    }

    VerifyOutcome out;
    out.crit = role == Role::Forward
                   ? criterion_forward(style, side, prm.alpha, prm.kappa, prm.p, u, other, win,
                                       halfline_c)
                   : criterion_reverse(style, side, prm.alpha, prm.kappa, prm.p, u, other, win,
                                       halfline_c);

    int ialpha = natural_alpha(prm.alpha);
    SpaceParams sp_in;
    sp_in.p = prm.p;
    sp_in.q = prm.q;
    sp_in.s = prm.s - prm.alpha;
    sp_in.w = other;  // forward: source weight v; reverse: source weight w
    SpaceParams sp_out;
    sp_out.p = prm.p;
    sp_out.q = prm.q;
    sp_out.s = prm.s;
    sp_out.w = u;

    EmpiricalOptions eopt;
    eopt.role = role;
    eopt.cut = cut;
    eopt.d_max = prm.emp_d_max;
    eopt.n_in = prm.n_in > 0 ? prm.n_in : besov_min_order(sp_in);
    eopt.n_out = prm.n_out > 0 ? prm.n_out : besov_min_order(sp_out);
    eopt.threads = st.threads;

    std::optional<std::int64_t> floor = prm.j_lo;
    if (!floor && cut) floor = cut->floor();  // keep members inside the half line
    TestFamily fam = family_random(prm.seed, prm.count, prm.order, prm.window, floor);
    out.emp = empirical_constant(ialpha, sp_in, sp_out, fam, eopt);

    CompareOptions copt;
    copt.k_hi = prm.k_hi;
    copt.k_lo = prm.k_lo;
    copt.tail_slack = prm.slack;
    out.cv = compare(out.crit, out.emp, copt);
    return out;
}

inline Json json_of_outcome(const VerifyOutcome& vo) {
    Json j;
    j["criterion"] = json_of(vo.crit);
    j["empirical"] = json_of(vo.emp);
    j["compare"] = json_of(vo.cv);
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& os, std::ostream& es) {
    using detail::State;
    State st;

    CLI::App app{
        "Spline wavelet systems, weighted sequence-space norms, one-sided integral\n"
        "operators on splines, and boundedness-criteria functionals.\n"
        "CSV columns: criteria reports 'd,value'; besov coeffs 'd,tau,value';\n"
        "verify empirical ratios 'index,ratio,note'."};
    app.name("rlbesov");
    app.fallthrough();  // global flags may appear after the subcommand
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.add_option("--out", st.out_path, "write the report to this path instead of stdout");
    app.add_option("--format", st.format, "output format: auto | json | csv | plain")
        ->check(CLI::IsMember({"auto", "json", "csv", "plain"}));
    app.add_option("--threads", st.threads, "worker cap for family evaluation")
        ->check(CLI::PositiveNumber);
    st.opt_tau = app.add_option("--tau-window", st.tau_window, "sup scan window over shifts");
    st.opt_series =
        app.add_option("--series-window", st.series_window, "series truncation distance");
    st.opt_dmax = app.add_option("--d-max", st.d_max, "level cap of criteria scans");
    app.add_option("--tau-cap", st.tau_cap, "hard cap of adaptive level-0 windows");
    app.add_option("--trim-tol", st.trim_tol, "drop pieces below this magnitude in rl apply");

    // ---- spline ----
    CLI::App* spline = app.add_subcommand("spline", "basis spline evaluation and Gram values");
    spline->require_subcommand(1);
    {
        struct P { int n = 1; double x = 0.0; };
        auto prm = std::make_shared<P>();
        CLI::App* c = spline->add_subcommand("eval", "value of the order-n basis spline at x");
        c->add_option("--n", prm->n, "spline order")->required();
        c->add_option("--x", prm->x, "evaluation point")->required();
        c->callback([&st, prm] { st.emit_scalar("spline-eval", bspline(prm->n).eval(prm->x)); });
    }
    {
        struct P { int n = 1; int offset = 0; };
        auto prm = std::make_shared<P>();
        CLI::App* c = spline->add_subcommand(
            "gram", "inner product of the order-n spline with its integer shift");
        c->add_option("--n", prm->n, "spline order")->required();
        c->add_option("--offset", prm->offset, "integer shift")->required();
        c->callback(
            [&st, prm] { st.emit_scalar("spline-gram", bspline_gram(prm->n, prm->offset)); });
    }

    // ---- wavelet ----
    CLI::App* wavelet =
        app.add_subcommand("wavelet", "orthonormalization constants and wavelet construction");
    wavelet->require_subcommand(1);
    {
        struct P { int n = 1; };
        auto prm = std::make_shared<P>();
        CLI::App* c = wavelet->add_subcommand(
            "constants", "symbol roots, normalizers, and half-shift rows of order n");
        c->add_option("--n", prm->n, "spline order")->required();
        c->callback([&st, prm] {
            Json payload;
            payload["euler"] = json_of(euler_constants_cached(prm->n));
            payload["lambda"] = json_of(lambda_coeffs(prm->n));
            st.emit_report("wavelet-constants", payload);
        });
    }
    {
        struct P {
            int n = 1, m = 0, alpha = 1;
            std::string a = "0", s = "0";
            bool conv = false, diff = false;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = wavelet->add_subcommand(
            "build", "compact wavelet of order n, optionally convolved with the order-m "
                     "half-shift row (--conv) and a centered difference of width 2*alpha "
                     "(--diff)");
        c->add_option("--n", prm->n, "spline order")->required();
        c->add_option("--m", prm->m, "half-shift row order (default: n)");
        c->add_option("--alpha", prm->alpha, "half the centered-difference width");
        c->add_option("--a", prm->a, "grid offset (dyadic)");
        c->add_option("--s", prm->s, "placement shift (dyadic)");
        c->add_flag("--conv", prm->conv, "convolve with the half-shift row");
        c->add_flag("--diff", prm->diff, "apply the centered difference");
        c->callback([&st, prm] {
            GeneralizedWaveletSpec spec;
            spec.n = prm->n;
            spec.m = prm->m > 0 ? prm->m : prm->n;
            spec.a = Dyadic::parse(prm->a);
            spec.s = Dyadic::parse(prm->s);
            spec.conv_flag = prm->conv;
            spec.diff_flag = prm->diff;
            spec.alpha = prm->alpha;
            st.emit_report("wavelet-build", json_of(generalized_wavelet(spec)));
        });
    }
    {
        struct P { int n_star = 1, m_star = 1; std::string tau0 = "0"; };
        auto prm = std::make_shared<P>();
        CLI::App* c = wavelet->add_subcommand(
            "theta", "overlap pairing of the concentrated construction against its closed form");
        c->add_option("--n-star", prm->n_star, "order of the first factor")->required();
        c->add_option("--m-star", prm->m_star, "order of the second factor")->required();
        c->add_option("--tau0", prm->tau0, "placement shift (dyadic)");
        c->callback([&st, prm] {
            st.emit_report("wavelet-theta",
                           json_of(overlap_check(prm->n_star, prm->m_star,
                                                 Dyadic::parse(prm->tau0))));
        });
    }

    // ---- weights ----
    CLI::App* weights = app.add_subcommand("weights", "weight masses and class scans");
    weights->require_subcommand(1);
    {
        struct P { std::string w; double a = 0.0, b = 1.0; };
        auto prm = std::make_shared<P>();
        CLI::App* c = weights->add_subcommand("mass", "weight mass of the interval [a, b]");
        c->add_option("--w", prm->w, detail::kWeightHelp)->required();
        c->add_option("--a", prm->a, "left endpoint")->required();
        c->add_option("--b", prm->b, "right endpoint")->required();
        c->callback([&st, prm] {
            st.emit_scalar("weights-mass", weight_parse(prm->w).mass(prm->a, prm->b));
        });
    }
    {
        struct P {
            std::string w;
            double rho = 1.0, x_window = 20.0;
            int scan_d_max = 8;
            bool include_long = false, bracket = false;
            std::optional<double> p;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = weights->add_subcommand(
            "muckenhoupt", "averaged-oscillation constant over dyadic intervals");
        c->add_option("--w", prm->w, detail::kWeightHelp)->required();
        c->add_option("--rho", prm->rho, "class index (>= 1)")->required();
        c->add_option("--scan-d-max", prm->scan_d_max, "finest dyadic level scanned");
        c->add_option("--x-window", prm->x_window, "scan window |x| <= x_window");
        c->add_flag("--include-long", prm->include_long, "scan intervals longer than 1 as well");
        c->add_flag("--bracket", prm->bracket, "also bracket the critical index");
        c->add_option("--p", prm->p, "also report the norm-shift exponent for this p");
        c->callback([&st, prm] {
            Weight w = weight_parse(prm->w);
            Json payload;
            payload["constant"] = json_of(muckenhoupt_constant(w, prm->rho, prm->scan_d_max,
                                                               prm->x_window, prm->include_long));
            if (prm->bracket) payload["index_bracket"] = json_of(weight_index_bracket(w));
            if (prm->p) payload["sigma_p"] = jnum(sigma_p_of_weight(w, *prm->p));
            st.emit_report("weights-muckenhoupt", payload);
        });
    }
    {
        struct P {
            std::string w;
            double rho = 1.0, rho_star = 1.0, x_window = 16.0;
            int scan_d_max = 6;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = weights->add_subcommand(
            "doubling", "empirical doubling witnesses over nested dyadic pairs");
        c->add_option("--w", prm->w, detail::kWeightHelp)->required();
        c->add_option("--rho", prm->rho, "forward comparison exponent")->required();
        c->add_option("--rho-star", prm->rho_star, "reverse comparison exponent")->required();
        c->add_option("--scan-d-max", prm->scan_d_max, "finest dyadic level scanned");
        c->add_option("--x-window", prm->x_window, "scan window |x| <= x_window");
        c->callback([&st, prm] {
            st.emit_report("weights-doubling",
                           json_of(doubling_check(weight_parse(prm->w), prm->rho, prm->rho_star,
                                                  prm->scan_d_max, prm->x_window)));
        });
    }

    // ---- rl ----
    CLI::App* rl = app.add_subcommand("rl", "one-sided repeated-integration operators");
    rl->require_subcommand(1);
    {
        struct P {
            std::string f;
            int alpha = 1;
            std::string side = "left";
            std::optional<std::string> cut;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = rl->add_subcommand("apply", "image of a spline under the order-alpha "
                                                  "one-sided integral");
        c->add_option("--f", prm->f, detail::kFunctionHelp)->required();
        c->add_option("--alpha", prm->alpha, "operator order (natural)")->required();
        c->add_option("--side", prm->side, "left | right")
            ->check(CLI::IsMember({"left", "right"}));
        c->add_option("--cut", prm->cut, "half-line anchor (dyadic); omit for the full line");
        c->callback([&st, prm] {
            PiecewisePoly f = parse_function(prm->f);
            RLSide side = prm->side == "left" ? RLSide::Left : RLSide::Right;
            std::optional<Dyadic> cut;
            if (prm->cut) cut = Dyadic::parse(*prm->cut);
            PiecewisePoly img = rl_apply(f, prm->alpha, side, cut);
            if (st.trim_tol > 0.0) img = pp_trim_tol(img, st.trim_tol);
            Json payload;
            payload["alpha"] = prm->alpha;
            payload["side"] = prm->side;
            payload["cut"] = prm->cut ? Json(*prm->cut) : Json(nullptr);
            payload["image"] = json_of(img);
            st.emit_report("rl-image", payload);
        });
    }
    {
        struct P { std::string f, g; int alpha = 1; };
        auto prm = std::make_shared<P>();
        CLI::App* c = rl->add_subcommand(
            "duality",
            "integration-by-parts residual |<I^a f, g^(a)> - (-1)^a <f, g>|; "
            "meaningful when g has at least a-1 continuous derivatives (degree >= a)");
        c->add_option("--f", prm->f, detail::kFunctionHelp)->required();
        c->add_option("--g", prm->g, detail::kFunctionHelp)->required();
        c->add_option("--alpha", prm->alpha, "operator order (natural)")->required();
        c->callback([&st, prm] {
            st.emit_scalar("rl-duality",
                           rl_duality_residual(parse_function(prm->f), parse_function(prm->g),
                                               prm->alpha));
        });
    }

    // ---- besov ----
    CLI::App* besov =
        app.add_subcommand("besov", "coefficients against the spline system and sequence norms");
    besov->require_subcommand(1);
    {
        struct P { std::string f, a = "0"; int n = 1, d_max = 8; };
        auto prm = std::make_shared<P>();
        CLI::App* c = besov->add_subcommand(
            "coeffs", "coefficient triplets (d, tau, value) of a spline. csv: d,tau,value");
        c->add_option("--f", prm->f, detail::kFunctionHelp)->required();
        c->add_option("--n", prm->n, "analysis spline order")->required();
        c->add_option("--a", prm->a, "grid offset (dyadic)");
        c->add_option("--level-max", prm->d_max, "finest level extracted");
        c->callback([&st, prm] {
            SplineSystemSpec sys{prm->n, Dyadic::parse(prm->a)};
            SeqCoeffs lam = wavelet_coeffs(parse_function(prm->f), sys, prm->d_max);
            st.emit_report("besov-coeffs", json_of(lam), csv_seq_coeffs(lam));
        });
    }
    {
        struct P {
            std::string f, w, a = "0";
            double p = 2.0, q = 2.0, s = 0.0;
            int n = 0, d_max = 8;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = besov->add_subcommand("norm", "sequence-space norm estimate of a spline");
        c->add_option("--f", prm->f, detail::kFunctionHelp)->required();
        c->add_option("--p", prm->p, "integrability index");
        c->add_option("--q", prm->q, "level aggregation index (inf for the sup)");
        c->add_option("--s", prm->s, "smoothness");
        c->add_option("--w", prm->w, detail::kWeightHelp)->required();
        c->add_option("--n", prm->n, "analysis spline order (0 = minimal admissible)");
        c->add_option("--a", prm->a, "grid offset (dyadic)");
        c->add_option("--level-max", prm->d_max, "finest level of the estimate");
        c->callback([&st, prm] {
            SpaceParams sp;
            sp.p = prm->p;
            sp.q = prm->q;
            sp.s = prm->s;
            sp.w = weight_parse(prm->w);
            SplineSystemSpec sys{prm->n > 0 ? prm->n : besov_min_order(sp),
                                 Dyadic::parse(prm->a)};
            NormEstimate ne =
                besov_norm_estimate(parse_function(prm->f), sp, sys, prm->d_max, st.tau_cap);
            Json payload = json_of(ne);
            payload["analysis_order"] = sys.n;
            st.emit_report("besov-norm", payload);
        });
    }

    // ---- criteria ----
    CLI::App* criteria =
        app.add_subcommand("criteria", "boundedness-criteria functionals. csv: d,value");
    criteria->require_subcommand(1);
    {
        struct P {
            std::string role = "forward", style = "new", side = "plus";
            double alpha = 1.0, kappa = 0.0, p = 2.0;
            std::string u, v;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = criteria->add_subcommand(
            "full-line", "criterion aggregate for the full-line operator");
        c->add_option("--role", prm->role, "forward | reverse");
        c->add_option("--style", prm->style, "old | new");
        c->add_option("--side", prm->side, "plus | minus");
        c->add_option("--alpha", prm->alpha, "operator order");
        c->add_option("--kappa", prm->kappa, "level prefactor exponent");
        c->add_option("--p", prm->p, "integrability index (> 1)");
        c->add_option("--u", prm->u, std::string("target weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--v", prm->v, std::string("source weight; ") + detail::kWeightHelp)
            ->required();
        c->callback([&st, prm] {
            CriterionReport rep = criterion_full_line(
                detail::parse_role(prm->role), detail::parse_style(prm->style),
                detail::parse_side(prm->side), prm->alpha, prm->kappa, prm->p,
                weight_parse(prm->u), weight_parse(prm->v), st.windows());
            st.emit_report("criterion-full-line", json_of(rep), csv_d_profile(rep));
        });
    }
    {
        struct P {
            std::string role = "forward", style = "new", side = "plus";
            double alpha = 1.0, kappa = 0.0, p = 2.0, c = 0.0;
            std::string u, v;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = criteria->add_subcommand(
            "half-line", "criterion aggregate for the operator anchored at c");
        c->add_option("--role", prm->role, "forward | reverse");
        c->add_option("--style", prm->style, "old | new");
        c->add_option("--side", prm->side, "plus | minus");
        c->add_option("--alpha", prm->alpha, "operator order");
        c->add_option("--kappa", prm->kappa, "level prefactor exponent");
        c->add_option("--p", prm->p, "integrability index (> 1)");
        c->add_option("--c", prm->c, "half-line anchor")->required();
        c->add_option("--u", prm->u, std::string("target weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--v", prm->v, std::string("source weight; ") + detail::kWeightHelp)
            ->required();
        c->callback([&st, prm] {
            CriterionReport rep = criterion_half_line(
                detail::parse_role(prm->role), detail::parse_style(prm->style),
                detail::parse_side(prm->side), prm->alpha, prm->kappa, prm->p,
                weight_parse(prm->u), weight_parse(prm->v), prm->c, st.windows());
            st.emit_report("criterion-half-line", json_of(rep), csv_d_profile(rep));
        });
    }
    {
        struct P {
            std::string side = "plus";
            double kappa = 0.0, p = 2.0;
            std::string s1, s2;
            std::optional<double> c;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = criteria->add_subcommand(
            "lower", "two-weight ratio aggregate bounding the constants from below");
        c->add_option("--side", prm->side, "plus | minus");
        c->add_option("--kappa", prm->kappa, "level prefactor exponent");
        c->add_option("--p", prm->p, "integrability index (> 1)");
        c->add_option("--sigma1", prm->s1, std::string("numerator weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--sigma2", prm->s2,
                      std::string("denominator weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--c", prm->c, "half-line anchor; omit for the full line");
        c->callback([&st, prm] {
            CriterionReport rep =
                criterion_lower(weight_parse(prm->s1), weight_parse(prm->s2), prm->kappa, prm->p,
                                detail::parse_side(prm->side), prm->c, st.windows());
            st.emit_report("criterion-lower", json_of(rep), csv_d_profile(rep));
        });
    }
    {
        struct P {
            std::string side = "plus";
            double theta = 1.0, eps = 0.5, p = 2.0;
            std::string u, v;
            std::optional<double> c;
            int res_log2 = 4;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = criteria->add_subcommand(
            "integral-form", "continuous counterpart of the level-0 series aggregate");
        c->add_option("--side", prm->side, "plus | minus");
        c->add_option("--theta", prm->theta, "series exponent (> 1)");
        c->add_option("--eps", prm->eps, "split parameter in [0, 1]");
        c->add_option("--p", prm->p, "integrability index (> 1)");
        c->add_option("--u", prm->u, std::string("target weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--v", prm->v, std::string("source weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--c", prm->c, "half-line anchor; omit for the full line");
        c->add_option("--res-log2", prm->res_log2, "quadrature resolution exponent");
        c->callback([&st, prm] {
            IntegralFormReport rep = integral_form_series0(
                detail::parse_side(prm->side), prm->theta, prm->eps, prm->p,
                weight_parse(prm->u), weight_parse(prm->v), prm->c,
                st.windows_or(EvalWindows{64, 512, 1}), prm->res_log2);
            st.emit_report("integral-form", json_of(rep));
        });
    }
    {
        struct P {
            std::string side = "plus";
            double kappa = 0.0, p = 2.0;
            std::string s1, s2;
            std::optional<double> c;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = criteria->add_subcommand(
            "reduce", "level collapse of the ratio aggregate for homogeneous weights");
        c->add_option("--side", prm->side, "plus | minus");
        c->add_option("--kappa", prm->kappa, "level prefactor exponent");
        c->add_option("--p", prm->p, "integrability index (> 1)");
        c->add_option("--sigma1", prm->s1, std::string("numerator weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--sigma2", prm->s2,
                      std::string("denominator weight; ") + detail::kWeightHelp)
            ->required();
        c->add_option("--c", prm->c, "half-line anchor; omit for the full line");
        c->callback([&st, prm] {
            ReductionReport rep =
                homogeneity_reduction(weight_parse(prm->s1), weight_parse(prm->s2), prm->kappa,
                                      prm->p, detail::parse_side(prm->side), prm->c,
                                      st.windows());
            st.emit_report("reduction", json_of(rep));
        });
    }

    // ---- verify ----
    CLI::App* verify = app.add_subcommand(
        "verify", "criterion value versus the empirical best constant of a seeded family; "
                  "exits 3 on FAIL");
    verify->require_subcommand(1);
    {
        auto prm = std::make_shared<detail::VerifyParams>();
        CLI::App* c = verify->add_subcommand(
            "forward", "operator norm direction: ||I^a f||_target <= C ||f||_source");
        detail::add_verify_options(c, *prm, "--v",
                                   (std::string("source weight; ") + detail::kWeightHelp).c_str());
        c->callback([&st, prm] {
            detail::VerifyOutcome vo =
                detail::run_verify(Role::Forward, *prm, st, st.windows());
            Json payload = detail::json_of_outcome(vo);
            payload["pass"] = vo.cv.pass;
            st.emit_report("verify-forward", payload, csv_empirical(vo.emp));
            if (!vo.cv.pass) st.exit_code = 3;
        });
    }
    {
        auto prm = std::make_shared<detail::VerifyParams>();
        CLI::App* c = verify->add_subcommand(
            "reverse", "embedding direction: ||f||_source <= C ||I^a f||_target");
        detail::add_verify_options(c, *prm, "--w",
                                   (std::string("source weight; ") + detail::kWeightHelp).c_str());
        c->callback([&st, prm] {
            detail::VerifyOutcome vo =
                detail::run_verify(Role::Reverse, *prm, st, st.windows());
            Json payload = detail::json_of_outcome(vo);
            payload["pass"] = vo.cv.pass;
            st.emit_report("verify-reverse", payload, csv_empirical(vo.emp));
            if (!vo.cv.pass) st.exit_code = 3;
        });
    }
    {
        struct P {
            double p = 2.0, q = 2.0, alpha = 1.0, s = 2.0, t = 3.0, delta = 1.0;
            std::uint64_t seed = 812;
            int count = 50;
        };
        auto prm = std::make_shared<P>();
        CLI::App* c = verify->add_subcommand(
            "example-ex1",
            "worked half-line example: decaying target weight (1+|x|)^-t, growing source "
            "weight (1+|x|)^delta, anchored at 0; runs the forward comparison and the "
            "same-weight reverse comparison");
        c->add_option("--p", prm->p, "integrability index");
        c->add_option("--q", prm->q, "level aggregation index");
        c->add_option("--alpha", prm->alpha, "operator order");
        c->add_option("--s", prm->s, "target smoothness");
        c->add_option("--t", prm->t, "target weight decay exponent");
        c->add_option("--delta", prm->delta, "source weight growth exponent");
        c->add_option("--seed", prm->seed, "family seed");
        c->add_option("--count", prm->count, "family size");
        c->callback([&st, prm] {
            EvalWindows win = st.windows_or(EvalWindows{256, 2048, 12});
            detail::VerifyParams fwd;
            fwd.alpha = prm->alpha;
            fwd.p = prm->p;
            fwd.q = prm->q;
            fwd.s = prm->s;
            fwd.u_text = "power t=" + std::to_string(prm->t);
            fwd.other_text = "power delta=" + std::to_string(prm->delta);
            fwd.cut = "0";
            fwd.seed = prm->seed;
            fwd.count = prm->count;
            detail::VerifyOutcome fo = detail::run_verify(Role::Forward, fwd, st, win);

            detail::VerifyParams rev = fwd;
            rev.other_text = fwd.u_text;  // same-weight embedding direction
            detail::VerifyOutcome ro = detail::run_verify(Role::Reverse, rev, st, win);

            bool pass = fo.cv.pass && ro.cv.pass;
            Json payload;
            payload["forward"] = detail::json_of_outcome(fo);
            payload["reverse"] = detail::json_of_outcome(ro);
            payload["pass"] = pass;
            payload["verdict"] = pass ? "PASS" : "FAIL";
            st.emit_report("verify-example-ex1", payload);
            if (!pass) st.exit_code = 3;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, os, es);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, os, es);
    } catch (const CLI::ParseError& e) {
        app.exit(e, os, es);
        return 1;
    } catch (const std::invalid_argument& e) {
        es << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        es << "numeric failure: " << e.what() << "\n";
        return 2;
    }

    if (!st.out_path.empty()) {
        std::ofstream f(st.out_path);
        if (!f) {
            es << "error: cannot write " << st.out_path << "\n";
            return 1;
        }
        f << st.output;
    } else {
        os << st.output;
    }
    return st.exit_code;
}

}  // namespace cli
}  // namespace rlbesov
