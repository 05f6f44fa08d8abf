// Two-weight criteria functionals: brute-force oracles for every family and
// variant, exact structural identities, divergence witnesses, aggregate
// comparisons, homogeneity reduction, and the integral forms.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <optional>

#include "rlbesov/criteria.hpp"
#include "rlbesov/weights.hpp"

#include "testutil.hpp"

using namespace rlbesov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Weight power_weight(double exponent, double shift_num = 0.0, int shift_log2den = 0) {
    Weight w;
    w.kind = WeightKind::Power;
    w.p = exponent;
    w.h = Dyadic(std::int64_t(shift_num), shift_log2den);
    return w;
}

double cell_mass(const Weight& w, int lvl, double c, std::int64_t r) {
    double s = std::exp2(double(-lvl));
    return w.mass((double(r) + c) * s, (double(r) + 1.0 + c) * s);
}

// Literal transcription of the series functionals.
double oracle_series(Side side, bool tilde, double c, int lvl, double pref, double mult,
                     double eps, double p, const Weight& u, const Weight& v, std::int64_t T,
                     std::int64_t W) {
    double pp = p / (p - 1.0);
    double best = 0.0;
    std::int64_t t_lo = (tilde && side == Side::Plus) ? 0 : -T;
    std::int64_t t_hi = (tilde && side == Side::Minus) ? 0 : T;
    for (std::int64_t tau = t_lo; tau <= t_hi; ++tau) {
        double A = 0.0, B = 0.0;
        if (side == Side::Plus) {
            for (std::int64_t r = tau; r <= tau + W; ++r)
                A += std::pow(double(r - tau + 1), p * mult * eps) * cell_mass(u, lvl, c, r);
            for (std::int64_t r = tau; r >= tau - W; --r) {
                if (tilde && r < 0) break;
                B += std::pow(double(tau - r + 1), pp * mult * (1.0 - eps)) *
                     std::pow(cell_mass(v, lvl, c, r), 1.0 - pp);
            }
        } else {
            for (std::int64_t r = tau; r >= tau - W; --r)
                A += std::pow(double(tau - r + 1), p * mult * eps) * cell_mass(u, lvl, c, r);
            for (std::int64_t r = tau; r <= tau + W; ++r) {
                if (tilde && r > 0) break;
                B += std::pow(double(r - tau + 1), pp * mult * (1.0 - eps)) *
                     std::pow(cell_mass(v, lvl, c, r), 1.0 - pp);
            }
        }
        best = std::max(best, pref * std::pow(A, 1.0 / p) * std::pow(B, 1.0 / pp));
    }
    return best;
}

// Literal transcription of the finite-window functionals.
double oracle_finite(Side side, bool tilde, double c, int lvl, double pref, double mult,
                     double eps, double p, const Weight& w, const Weight& u, std::int64_t T,
                     std::int64_t theta) {
    double pp = p / (p - 1.0);
    double best = 0.0;
    std::int64_t t_lo = (tilde && side == Side::Plus) ? 0 : -T;
    std::int64_t t_hi = (tilde && side == Side::Minus) ? 0 : T;
    for (std::int64_t tau = t_lo; tau <= t_hi; ++tau) {
        double A = 0.0, B = 0.0;
        if (side == Side::Plus) {
            for (std::int64_t r = tau - theta; r <= tau; ++r)
                A += std::pow(double(tau - r + 1), -p * mult * eps) * cell_mass(w, lvl, c, r);
            for (std::int64_t r = tau; r <= tau + theta; ++r)
                B += std::pow(double(r - tau + 1), -pp * mult * (1.0 - eps)) *
                     std::pow(cell_mass(u, lvl, c, r), 1.0 - pp);
        } else {
            for (std::int64_t r = tau; r <= tau + theta; ++r)
                A += std::pow(double(r - tau + 1), -p * mult * eps) * cell_mass(w, lvl, c, r);
            for (std::int64_t r = tau - theta; r <= tau; ++r)
                B += std::pow(double(tau - r + 1), -pp * mult * (1.0 - eps)) *
                     std::pow(cell_mass(u, lvl, c, r), 1.0 - pp);
        }
        best = std::max(best, pref * std::pow(A, 1.0 / p) * std::pow(B, 1.0 / pp));
    }
    return best;
}

}  // namespace

TEST_CASE("series level-0 functional matches its literal transcription") {
    // decay/growth chosen so every tested (eps, p) keeps both series summable
    Weight u = power_weight(-4.5, 1.0);
    Weight v = power_weight(5.0, -1.0);
    EvalWindows win{4, 16, 1};
    for (Side side : {Side::Plus, Side::Minus}) {
        for (double eps : {0.0, 0.3, 1.0}) {
            for (double p : {2.0, 2.5}) {
                FunctionalSpec fs;
                fs.family = FunctionalSpec::Family::SeriesLevel0;
                fs.side = side;
                fs.theta = 2.0;
                fs.epsilon = eps;
                fs.p = p;
                fs.sigma1 = u;
                fs.sigma2 = v;
                FunctionalResult got = eval_functional(fs, win);
                double want =
                    oracle_series(side, false, 0.0, 0, 1.0, fs.theta - 1.0, eps, p, u, v, 4, 16);
                REQUIRE(std::isfinite(got.value));
                CHECK_THAT(got.value, WithinRel(want, 1e-12));
            }
        }
    }
}

TEST_CASE("series level-d functional matches its literal transcription") {
    Weight u = power_weight(-5.0);
    Weight v = power_weight(5.0, 1.0, 1);  // shift 1/2
    EvalWindows win{4, 16, 4};
    for (Side side : {Side::Plus, Side::Minus}) {
        FunctionalSpec fs;
        fs.family = FunctionalSpec::Family::SeriesLevelD;
        fs.side = side;
        fs.theta = 1.5;
        fs.epsilon = 0.7;
        fs.d = 2;
        fs.kappa = 0.3;
        fs.p = 2.2;
        fs.sigma1 = u;
        fs.sigma2 = v;
        FunctionalResult got = eval_functional(fs, win);
        double want = oracle_series(side, false, 0.0, 1, std::exp2(-2 * 0.3),
                                    2.0 * fs.theta - 1.0, fs.epsilon, fs.p, u, v, 4, 16);
        REQUIRE(std::isfinite(got.value));
        CHECK_THAT(got.value, WithinRel(want, 1e-12));
    }
}

TEST_CASE("finite-window functionals match their literal transcription") {
    Weight w = power_weight(-2.0, -1.0);
    Weight u = power_weight(1.5);
    EvalWindows win{5, 16, 4};
    for (Side side : {Side::Plus, Side::Minus}) {
        FunctionalSpec fs;
        fs.family = FunctionalSpec::Family::FiniteLevel0;
        fs.side = side;
        fs.theta = 2.0;
        fs.epsilon = 0.25;
        fs.p = 2.0;
        fs.sigma1 = w;
        fs.sigma2 = u;
        FunctionalResult got = eval_functional(fs, win);
        double want =
            oracle_finite(side, false, 0.0, 0, 1.0, fs.theta + 1.0, fs.epsilon, fs.p, w, u, 5, 2);
        CHECK_THAT(got.value, WithinRel(want, 1e-12));

        fs.family = FunctionalSpec::Family::FiniteLevelD;
        fs.theta = 1.0;
        fs.epsilon = 0.75;
        fs.d = 3;
        fs.kappa = 0.4;
        fs.p = 3.0;
        FunctionalResult gotd = eval_functional(fs, win);
        double wantd = oracle_finite(side, false, 0.0, 2, std::exp2(-3 * 0.4),
                                     2.0 * fs.theta + 1.0, fs.epsilon, fs.p, w, u, 5, 1);
        CHECK_THAT(gotd.value, WithinRel(wantd, 1e-12));
    }
}

TEST_CASE("half-line variants: clamped dual sums, shifted cells, restricted sup") {
    Weight u = power_weight(-4.5);
    Weight v = power_weight(5.0);
    EvalWindows win{4, 16, 4};
    double c = 0.25;
    for (Side side : {Side::Plus, Side::Minus}) {
        FunctionalSpec fs;
        fs.family = FunctionalSpec::Family::SeriesLevel0;
        fs.side = side;
        fs.theta = 2.0;
        fs.epsilon = 0.4;
        fs.p = 2.0;
        fs.sigma1 = u;
        fs.sigma2 = v;
        fs.halfline_c = c;
        FunctionalResult got = eval_functional(fs, win);
        double want = oracle_series(side, true, c, 0, 1.0, 1.0, 0.4, 2.0, u, v, 4, 16);
        CHECK_THAT(got.value, WithinRel(want, 1e-12));

        // the level-d distance exponents are steeper; a faster-decaying target
        // weight keeps the clamped sup interior
        Weight u8 = power_weight(-8.0);
        fs.family = FunctionalSpec::Family::SeriesLevelD;
        fs.sigma1 = u8;
        fs.d = 2;
        fs.kappa = 0.5;
        FunctionalResult gotd = eval_functional(fs, win);
        double wantd =
            oracle_series(side, true, c, 1, std::exp2(-1.0), 3.0, 0.4, 2.0, u8, v, 4, 16);
        CHECK_THAT(gotd.value, WithinRel(wantd, 1e-12));
        fs.sigma1 = u;

        FunctionalSpec ff;
        ff.family = FunctionalSpec::Family::FiniteLevel0;
        ff.side = side;
        ff.theta = 2.0;
        ff.epsilon = 0.25;
        ff.p = 2.0;
        ff.sigma1 = u;
        ff.sigma2 = v;
        ff.halfline_c = c;
        FunctionalResult gotf = eval_functional(ff, win);
        double wantf = oracle_finite(side, true, c, 0, 1.0, 3.0, 0.25, 2.0, u, v, 4, 2);
        CHECK_THAT(gotf.value, WithinRel(wantf, 1e-12));
    }
}

TEST_CASE("mass-ratio functional: transcription, and exact unity on equal weights") {
    // equal decay rates keep the cell-mass ratio bounded over the lattice
    Weight s1 = power_weight(-3.0, 1.0);
    Weight s2 = power_weight(-3.0);
    EvalWindows win{6, 16, 6};
    for (int d : {0, 3}) {
        FunctionalSpec fs;
        fs.family = FunctionalSpec::Family::Ratio;
        fs.d = d;
        fs.kappa = 0.6;
        fs.p = 2.0;
        fs.sigma1 = s1;
        fs.sigma2 = s2;
        double best = 0.0;
        int lvl = d == 0 ? 0 : d - 1;
        double pref = d == 0 ? 1.0 : std::exp2(-0.6 * d);
        for (std::int64_t tau = -6; tau <= 6; ++tau) {
            double m1 = cell_mass(s1, lvl, 0.0, tau), m2 = cell_mass(s2, lvl, 0.0, tau);
            best = std::max(best, pref * std::pow(m2 / m1, 0.5));
        }
        CHECK_THAT(eval_functional(fs, win).value, WithinRel(best, 1e-12));
    }

    // equal weights: every cell gives exactly 1 at kappa = 0
    for (const char* txt : {"power t=3 delta=0 shift=0", "constant 2"}) {
        Weight w = weight_parse(txt);
        CriterionReport rep = criterion_lower(w, w, 0.0, 2.0, Side::Plus, std::nullopt, win);
        CHECK(rep.value == 1.0);
        for (int d = 0; d <= win.d_max; ++d) CHECK(rep.d_profile[size_t(d)] == 1.0);
        CHECK(rep.verdict == "converged");
    }
}

TEST_CASE("flat weights make the series sums diverge, with a witness") {
    Weight one = weight_parse("constant 1");
    FunctionalSpec fs;
    fs.family = FunctionalSpec::Family::SeriesLevel0;
    fs.theta = 1.0;
    fs.epsilon = 1.0;
    fs.p = 2.0;
    fs.sigma1 = one;
    fs.sigma2 = one;
    FunctionalResult r = eval_functional(fs, EvalWindows{16, 64, 1});
    CHECK(std::isinf(r.value));
    CHECK(r.verdict == "diverging");

    CriterionReport rep = criterion_forward(Style::Old, Side::Plus, 1.0, 0.0, 2.0, one, one,
                                            EvalWindows{16, 64, 4});
    CHECK(rep.verdict == "diverging");
    CHECK(std::isinf(rep.value));
}

TEST_CASE("reflection symmetry across the two sides for even weights") {
    // growth 5 pins the sup at an interior cell, where the lattice reflection
    // r -> -1-r maps window points to window points
    Weight u = power_weight(-4.0);
    Weight v = power_weight(5.0);
    EvalWindows win{64, 256, 1};
    FunctionalSpec fs;
    fs.family = FunctionalSpec::Family::SeriesLevel0;
    fs.theta = 2.0;
    fs.epsilon = 0.8;
    fs.p = 2.0;
    fs.sigma1 = u;
    fs.sigma2 = v;
    fs.side = Side::Plus;
    double plus = eval_functional(fs, win).value;
    fs.side = Side::Minus;
    double minus = eval_functional(fs, win).value;
    REQUIRE(std::isfinite(plus));
    CHECK_THAT(plus, WithinRel(minus, 1e-12));
}

TEST_CASE("scaling a weight scales the finite functionals exactly") {
    Weight w = weight_parse("constant 1");
    Weight u = weight_parse("constant 3");
    FunctionalSpec fs;
    fs.family = FunctionalSpec::Family::FiniteLevel0;
    fs.theta = 2.0;
    fs.epsilon = 0.5;
    fs.p = 2.0;
    fs.sigma1 = w;
    fs.sigma2 = u;
    EvalWindows win{8, 16, 1};
    double base = eval_functional(fs, win).value;
    fs.sigma1 = weight_parse("constant 2");
    CHECK_THAT(eval_functional(fs, win).value, WithinRel(std::sqrt(2.0) * base, 1e-14));
    fs.sigma1 = w;
    fs.sigma2 = weight_parse("constant 6");
    CHECK_THAT(eval_functional(fs, win).value, WithinRel(base / std::sqrt(2.0), 1e-14));
}

TEST_CASE("shifting the half-line start is the same as translating the weights") {
    Weight u = power_weight(-4.5, 1.0);
    Weight v = power_weight(2.5, -1.0);
    EvalWindows win{16, 64, 4};
    FunctionalSpec fs;
    fs.family = FunctionalSpec::Family::SeriesLevel0;
    fs.theta = 2.0;
    fs.epsilon = 0.6;
    fs.p = 2.0;
    fs.sigma1 = u;
    fs.sigma2 = v;
    fs.halfline_c = 1.25;
    double shifted = eval_functional(fs, win).value;
    fs.halfline_c = 0.25;
    fs.sigma1 = u.translate(Dyadic(1));
    fs.sigma2 = v.translate(Dyadic(1));
    double translated = eval_functional(fs, win).value;
    CHECK_THAT(shifted, WithinRel(translated, 1e-12));

    CriterionReport a = criterion_lower(u, v, 0.3, 2.0, Side::Plus, 1.25, win);
    CriterionReport b = criterion_lower(u.translate(Dyadic(1)), v.translate(Dyadic(1)), 0.3, 2.0,
                                        Side::Plus, 0.25, win);
    CHECK_THAT(a.value, WithinRel(b.value, 1e-12));
}

TEST_CASE("worked half-line pair: new-style criteria converge and the ratio part is unity") {
    // target and recovered weight (1+|x|)^{-3}, source weight (1+|x|)^{+1}
    Weight u = weight_parse("power t=3 delta=0 shift=0");
    Weight v = weight_parse("power t=0 delta=1 shift=0");
    EvalWindows win{256, 2048, 12};

    CriterionReport fwd =
        criterion_forward(Style::New, Side::Plus, 1.0, 0.0, 2.0, u, v, win, 0.0);
    CHECK(std::isfinite(fwd.value));
    CHECK(fwd.value > 0.0);
    CHECK(fwd.verdict == "converged");

    CriterionReport rev =
        criterion_reverse(Style::New, Side::Plus, 1.0, 0.0, 2.0, u, u, win, 0.0);
    CHECK(rev.value == 1.0);
    for (int d = 0; d <= win.d_max; ++d) CHECK(rev.d_profile[size_t(d)] == 1.0);
    CHECK(rev.verdict == "converged");
}

TEST_CASE("full-line variant of the worked pair at a strictly admissible decay") {
    // decay 2.5 keeps the dual series summable over the whole line
    Weight u = weight_parse("power t=2.5 delta=0 shift=0");
    Weight v = weight_parse("power t=0 delta=1.5 shift=0");
    EvalWindows win{256, 8192, 12};
    CriterionReport fwd = criterion_forward(Style::New, Side::Plus, 1.0, 0.0, 2.0, u, v, win);
    CHECK(std::isfinite(fwd.value));
    CHECK(fwd.value > 0.0);
    CHECK(fwd.verdict == "converged");
    CriterionReport rev = criterion_reverse(Style::New, Side::Plus, 1.0, 0.0, 2.0, u, u, win);
    CHECK(rev.value == 1.0);
}

TEST_CASE("mischosen level exponent on equal weights is flagged as divergent") {
    Weight u = weight_parse("power t=3 delta=0 shift=0");
    CriterionReport rep =
        criterion_lower(u, u, -0.5, 2.0, Side::Plus, std::nullopt, EvalWindows{16, 64, 10});
    CHECK(rep.verdict == "diverging");
    CHECK(std::isinf(rep.value));
    // raw profile still carries the truncated geometric growth
    CHECK_THAT(rep.d_profile[10] / rep.d_profile[9], WithinRel(std::exp2(0.5), 1e-12));
}

TEST_CASE("older aggregates dominate the newer ones on matching windows") {
    struct Pair {
        Weight u, v;
        double kappa;
    };
    std::vector<Pair> pairs = {
        {power_weight(-4.0), power_weight(2.0), 2.0},
        {power_weight(-5.0), power_weight(2.5), 2.0},
        {power_weight(-4.5, 1.0), power_weight(1.5, -1.0), 2.0},
        {power_weight(-6.0), power_weight(3.0), 2.5},
        {power_weight(-5.0, 2.0), power_weight(2.0, 2.0), 2.0},
        {power_weight(-4.0), power_weight(2.0), 1.5},
        {weight_parse("constant 1"), weight_parse("constant 1"), 0.0},
        {power_weight(-3.0), power_weight(1.0), 0.0},
        {power_weight(-4.0), power_weight(-4.0), 0.5},
        {power_weight(-2.5), power_weight(1.5), 0.0},
    };
    EvalWindows win{64, 256, 6};
    for (const Pair& pr : pairs) {
        CriterionReport fo =
            criterion_forward(Style::Old, Side::Plus, 1.0, pr.kappa, 2.0, pr.u, pr.v, win);
        CriterionReport fn =
            criterion_forward(Style::New, Side::Plus, 1.0, pr.kappa, 2.0, pr.u, pr.v, win);
        double old_raw = fo.level0_part + fo.dscan_part;
        double new_raw = fn.level0_part + fn.dscan_part;
        INFO("forward pair kappa=" << pr.kappa << " old=" << old_raw << " new=" << new_raw);
        CHECK(old_raw >= new_raw * (1.0 - 1e-12));

        CriterionReport ro =
            criterion_reverse(Style::Old, Side::Plus, 1.0, pr.kappa, 2.0, pr.u, pr.v, win);
        CriterionReport rn =
            criterion_reverse(Style::New, Side::Plus, 1.0, pr.kappa, 2.0, pr.u, pr.v, win);
        double old_rev = ro.level0_part + ro.dscan_part;
        double new_rev = rn.dscan_part;
        INFO("reverse pair kappa=" << pr.kappa << " old=" << old_rev << " new=" << new_rev);
        CHECK(old_rev >= new_rev * (1.0 - 1e-12));
    }
}

TEST_CASE("homogeneous weights collapse the level scan exactly") {
    Weight s1, s2;
    s1.kind = s2.kind = WeightKind::Homog;
    s1.z = 1.5;
    s2.z = 0.5;
    EvalWindows win{32, 64, 8};
    double kappa_opt = (s1.z - s2.z) / 2.0;

    ReductionReport red =
        homogeneity_reduction(s1, s2, kappa_opt, 2.0, Side::Plus, 0.0, win);
    CHECK_THAT(red.kappa_opt, WithinAbs(0.5, 1e-15));
    CHECK_THAT(red.step_ratio, WithinRel(1.0, 1e-15));

    CriterionReport direct = criterion_lower(s1, s2, kappa_opt, 2.0, Side::Plus, 0.0, win);
    CHECK_THAT(direct.d_profile[0], WithinRel(red.level0_value, 1e-12));
    for (int d = 1; d <= win.d_max; ++d)
        CHECK_THAT(direct.d_profile[size_t(d)],
                   WithinRel(std::exp2(-kappa_opt) * red.level0_value, 1e-10));
    CHECK_THAT(direct.value, WithinRel(red.predicted_sup, 1e-10));
    CHECK(direct.verdict == "converged");

    // off the optimum the profile moves by 2^{kappa_opt - kappa} per level
    double kappa = 0.2;
    CriterionReport off = criterion_lower(s1, s2, kappa, 2.0, Side::Plus, 0.0, win);
    for (int d = 2; d <= win.d_max; ++d)
        CHECK_THAT(off.d_profile[size_t(d)] / off.d_profile[size_t(d - 1)],
                   WithinRel(std::exp2(kappa_opt - kappa), 1e-10));
    ReductionReport red_off = homogeneity_reduction(s1, s2, kappa, 2.0, Side::Plus, 0.0, win);
    CHECK(std::isinf(red_off.predicted_sup));
    CHECK(off.verdict == "diverging");

    CHECK_THROWS_AS(
        homogeneity_reduction(power_weight(-2.0), s2, 0.0, 2.0, Side::Plus, 0.0, win),
        std::invalid_argument);
}

TEST_CASE("integral form tracks the discrete functional for smooth weights") {
    Weight u = power_weight(-2.5);
    Weight v = power_weight(1.5);
    IntegralFormReport rep = integral_form_series0(Side::Plus, 1.0, 0.5, 2.0, u, v, std::nullopt,
                                                   EvalWindows{32, 256, 1});
    REQUIRE(std::isfinite(rep.value));
    CHECK(rep.value > 0.0);
    CHECK(rep.ratio > 1.0 / 8.0);
    CHECK(rep.ratio < 8.0);
    CHECK(rep.warnings.empty());

    IntegralFormReport tilde = integral_form_series0(Side::Plus, 1.0, 0.5, 2.0, u, v, 0.0,
                                                     EvalWindows{32, 256, 1});
    REQUIRE(std::isfinite(tilde.value));
    CHECK(tilde.ratio > 1.0 / 8.0);
    CHECK(tilde.ratio < 8.0);
}

TEST_CASE("sub-cell oscillation triggers the unit-scale warning") {
    Weight spiky;
    spiky.kind = WeightKind::Table;
    // high at integer knots, tiny at half-integer knots: unit-cell integrals sit
    // near 2 while the midpoint sample reads 0.01
    for (int k = -40; k <= 40; ++k) {
        spiky.table_x.push_back(0.5 * k);
        spiky.table_v.push_back(k % 2 == 0 ? 4.0 : 0.01);
    }
    Weight v = power_weight(1.5);
    IntegralFormReport rep = integral_form_series0(Side::Plus, 1.0, 0.5, 2.0, spiky, v,
                                                   std::nullopt, EvalWindows{8, 32, 1});
    CHECK(!rep.warnings.empty());
    CHECK(rep.warnings.find("unit-scale") != std::string::npos);
}

TEST_CASE("precondition violations are rejected") {
    Weight one = weight_parse("constant 1");
    FunctionalSpec fs;
    fs.sigma1 = one;
    fs.sigma2 = one;
    fs.p = 1.0;
    CHECK_THROWS_AS(eval_functional(fs), std::invalid_argument);
    fs.p = 2.0;
    fs.epsilon = 1.5;
    CHECK_THROWS_AS(eval_functional(fs), std::invalid_argument);
    fs.epsilon = 0.5;
    fs.family = FunctionalSpec::Family::SeriesLevelD;
    fs.d = 0;
    CHECK_THROWS_AS(eval_functional(fs), std::invalid_argument);
    fs.family = FunctionalSpec::Family::FiniteLevel0;
    fs.theta = 1.5;
    CHECK_THROWS_AS(eval_functional(fs), std::invalid_argument);
}

TEST_CASE("reports echo their windows and profile sizes") {
    Weight u = power_weight(-4.0);
    Weight v = power_weight(2.0);
    EvalWindows win{32, 128, 5};
    CriterionReport rep = criterion_full_line(Role::Forward, Style::New, Side::Minus, 1.0, 2.0,
                                              2.0, u, v, win);
    CHECK(rep.tau_window == 32);
    CHECK(rep.series_window == 128);
    CHECK(rep.d_max == 5);
    CHECK(rep.d_profile.size() == 6);
    CHECK(rep.functional.find("forward-new-") != std::string::npos);
    CriterionReport rep2 = criterion_half_line(Role::Reverse, Style::Old, Side::Plus, 1.0, 0.5,
                                               2.0, u, u, 0.25, win);
    CHECK(rep2.functional.find("halfline") != std::string::npos);
    CHECK(rep2.eps_first >= 0.0);
    CHECK(rep2.eps_second >= 0.0);
}
