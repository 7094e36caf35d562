#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "invmet/complex_vec.hpp"
#include "invmet/disks.hpp"
#include "invmet/domains.hpp"
#include "invmet/errors.hpp"

namespace invmet {

// Closed-form regime classifiers and constants for the Kobayashi metric at
// the base points of the model domains, plus the boundary-growth exponent
// catalogue. Everything here is formula-level; the estimates they certify
// are cross-checked against the optimizer in the harness.

// ---------------------------------------------------------------------------
// Bounds at p_delta = (-delta, 0) on G = {Re z < |w|^2} cap D^2 for the
// direction nu = (alpha, beta), split by the slope c = |alpha| / (sqrt(delta) |beta|).
// ---------------------------------------------------------------------------

inline constexpr double kLemkobUpperOnlyMin = 2.0;
inline const double kLemkobTangentialMax = 2.0 * std::numbers::sqrt2;
inline constexpr double kLemkobTwoSidedMin = 7.0;
inline constexpr double kLemkobLowerFactor = 1.0 / 38.0;

enum class LemkobRegime { Tangential, UpperOnly, Intermediate, TwoSided };

inline const char* to_string(LemkobRegime r) {
    switch (r) {
        case LemkobRegime::Tangential: return "tangential";
        case LemkobRegime::UpperOnly: return "upper-only";
        case LemkobRegime::Intermediate: return "intermediate";
        case LemkobRegime::TwoSided: return "two-sided";
    }
    return "?";
}

struct LemkobResult {
    LemkobRegime regime = LemkobRegime::Tangential;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double c = 0.0; // |alpha| / (sqrt(delta) |beta|), +inf when beta = 0
    bool asymptotic_only = false;
};

/// gamma(c0) = sqrt((c0/sqrt2 - 2)/10), the liminf constant of the
/// intermediate regime. Vacuous (rejected) at or below 2 sqrt 2.
inline double lemkob_gamma(double c0) {
    if (!(c0 > kLemkobTangentialMax))
        throw parameter_error("lemkob_gamma: bound is vacuous for c0 <= 2 sqrt 2");
    return std::sqrt((c0 / std::numbers::sqrt2 - 2.0) / 10.0);
}

inline LemkobResult lemkob_bounds(double delta, cplx alpha, cplx beta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw parameter_error("lemkob_bounds: need 0 < delta < 1");
    if (alpha == cplx(0, 0) && beta == cplx(0, 0))
        throw parameter_error("lemkob_bounds: direction must be nonzero");

    LemkobResult r;
    double a = std::abs(alpha), b = std::abs(beta);
    r.c = b > 0.0 ? a / (std::sqrt(delta) * b) : std::numeric_limits<double>::infinity();
    double case2_upper = std::numbers::sqrt2 * a / std::pow(delta, 0.75);

    if (r.c < kLemkobUpperOnlyMin) {
        r.regime = LemkobRegime::Tangential;
        r.lower = r.upper = b; // exact value
    } else if (r.c < kLemkobTangentialMax) {
        // Both the exact tangential value and the case-(2) upper apply;
        // report the tighter upper (the exact value, for any delta < 1).
        r.regime = LemkobRegime::UpperOnly;
        r.lower = b;
        r.upper = std::min(b, case2_upper);
    } else if (r.c <= kLemkobTwoSidedMin) {
        r.regime = LemkobRegime::Intermediate;
        // liminf delta^{1/6} K >= gamma(c) |beta|: a slope target, not a
        // pointwise bound.
        r.lower = r.c > kLemkobTangentialMax
                      ? lemkob_gamma(r.c) * b / std::cbrt(std::sqrt(delta))
                      : 0.0;
        r.upper = case2_upper;
        r.asymptotic_only = true;
    } else {
        r.regime = LemkobRegime::TwoSided;
        r.lower = kLemkobLowerFactor * a / std::pow(delta, 0.75);
        r.upper = case2_upper;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Constants of the lower bound on Omega_xi = {Re z < |w|^xi + |Im z|^xi} cap D^2.
//
// C1 is the threshold making the |lambda|^xi r1^{xi-1} term of the derivative
// estimate carry less than half of |lambda alpha|/(xi 2^xi); propagating the
// remaining half through r1 = (2 xi / (xi - 1)) delta / |lambda alpha| gives
// |lambda alpha| < C2' delta^{(2 xi - 1)/(2 xi)}, and the metric lower bound
// constant is C2 = 1/C2'.
// ---------------------------------------------------------------------------

struct ModepsConstants {
    double xi = 2.0;
    double C0 = 1.0;
    double C1 = 0.0;
    double C2 = 0.0;
};

inline ModepsConstants modeps_constants(double xi, double C0) {
    if (!(xi > 1.0)) throw parameter_error("modeps_constants: xi must be > 1");
    if (!(C0 > 0.0)) throw parameter_error("modeps_constants: C0 must be > 0");
    ModepsConstants k;
    k.xi = xi;
    k.C0 = C0;
    double ratio = 2.0 * xi / (xi - 1.0);
    k.C1 = std::pow(2.0 * xi * std::pow(2.0, xi) * (1.0 + std::pow(C0, xi)) *
                        std::pow(ratio, xi - 1.0),
                    1.0 / xi);
    double c2prime =
        std::pow(xi * std::pow(2.0, 2.0 * xi + 2.0) * std::pow(ratio, 2.0 * xi - 1.0),
                 1.0 / (2.0 * xi));
    k.C2 = 1.0 / c2prime;
    return k;
}

/// K lower bound C2 |alpha| / delta^{1 - 1/(2 xi)} when the direction is
/// steep enough (|alpha| > C1 delta^{(xi-1)/xi} |beta|) but not too steep
/// (|alpha| <= C0 |beta|); otherwise not applicable.
inline std::optional<double> modeps_lower(double xi, double C0, double delta, cplx alpha,
                                          cplx beta) {
    if (!(delta > 0.0)) throw parameter_error("modeps_lower: delta must be > 0");
    ModepsConstants k = modeps_constants(xi, C0);
    double a = std::abs(alpha), b = std::abs(beta);
    if (!(a > k.C1 * std::pow(delta, (xi - 1.0) / xi) * b)) return std::nullopt;
    if (!(a <= C0 * b)) return std::nullopt;
    return k.C2 * a / std::pow(delta, 1.0 - 1.0 / (2.0 * xi));
}

// ---------------------------------------------------------------------------
// Growth lemma for holomorphic functions vanishing at 0:
// sup_{|t|=r} Re f0(t) >= |a1| r / 2.
// ---------------------------------------------------------------------------

struct RealfReport {
    double M = 0.0;     // sampled sup of Re f0 on |t| = r
    double bound = 0.0; // |a1| r / 2
    bool holds = false;
};

namespace detail {
inline cplx poly_eval(const std::vector<cplx>& coeffs, cplx t) {
    cplx v(0, 0);
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * t + coeffs[j];
    return v;
}
} // namespace detail

/// coeffs holds a_0..a_N of f0; a_0 must vanish. M is computed by dense
/// angular sampling plus golden-section refinement around the best angle.
inline RealfReport realf_bound(const std::vector<cplx>& coeffs, double r,
                               int angular_samples = 4096) {
    if (!(r > 0.0 && r < 1.0)) throw parameter_error("realf_bound: need r in (0,1)");
    if (coeffs.empty() || coeffs[0] != cplx(0, 0))
        throw parameter_error("realf_bound: constant coefficient must be zero");
    auto re_at = [&](double th) { return detail::poly_eval(coeffs, std::polar(r, th)).real(); };

    double best_th = 0.0, best = -std::numeric_limits<double>::infinity();
    const double step = 2.0 * std::numbers::pi / angular_samples;
    for (int i = 0; i < angular_samples; ++i) {
        double v = re_at(i * step);
        if (v > best) best = v, best_th = i * step;
    }
    // Golden-section refinement on the bracketing interval.
    double lo = best_th - step, hi = best_th + step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = re_at(x1), f2 = re_at(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = re_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = re_at(x1);
        }
    }
    RealfReport rep;
    rep.M = std::max(best, std::max(f1, f2));
    rep.bound = coeffs.size() > 1 ? std::abs(coeffs[1]) * r / 2.0 : 0.0;
    rep.holds = rep.M >= rep.bound - 1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// The basic inequality of the Omega_xi lower-bound proof, evaluated on a
// concrete admissible disk.
// ---------------------------------------------------------------------------

struct BasicInequalityReport {
    struct Item {
        std::string name;
        double slack = 0.0;
    };
    std::vector<Item> items;
    double phi_r = 0.0;
    bool pass = false;
};

/// Checks, on a certified disk Phi = (f, g) into Omega_xi with jet
/// (p_delta, lambda (alpha, 1)): the Schwarz tail bound |g - lambda t| <= 2|t|^2,
/// the growth lemma sup Re f >= |lambda alpha| r/2 - delta, the two circle
/// sup estimates, phi(r) > 0, the derivative floor phi'(1/2) > 8 xi - |lambda alpha|,
/// and the Schwarz ceiling |lambda alpha| < 8. Slacks are reported per item;
/// pass requires all of them nonnegative (to 1e-12). Admissible disks cannot
/// violate the Schwarz ceiling, so require_certificate = false exists for
/// probing synthetic coefficient sets against the inequality chain.
inline BasicInequalityReport verify_basic_inequality(double xi, double C0,
                                                     const AnalyticDisk& disk, double r,
                                                     bool require_certificate = true) {
    if (!(r > 0.0 && r < 0.5))
        throw parameter_error("verify_basic_inequality: need r in (0, 1/2)");
    if (disk.dim() != 2) throw precondition_error("verify_basic_inequality: disk must map to C^2");
    if (disk.radius < 1.0 - 1e-12)
        throw precondition_error("verify_basic_inequality: disk must be defined on the unit disk");

    ModelDomain omega = ModelDomain::omega_xi(xi);
    if (require_certificate && !certify_containment(disk, omega).valid)
        throw precondition_error("verify_basic_inequality: disk containment in Omega_xi "
                                 "is not certified");

    auto [value, deriv] = jet_at_zero(disk);
    double delta = -value[0].real();
    if (!(delta > 0.0) || std::abs(value[0].imag()) > 1e-12 || std::abs(value[1]) > 1e-12)
        throw precondition_error("verify_basic_inequality: disk is not centered at p_delta");
    cplx lambda = deriv[1];
    cplx lambda_alpha = deriv[0];
    double la = std::abs(lambda_alpha);
    double lm = std::abs(lambda);

    BasicInequalityReport rep;
    const int circle_samples = 2048;

    // |g(t) - lambda t| <= 2 |t|^2 for |t| < 1/2 (Schwarz + Cauchy tail).
    double gtilde_slack = std::numeric_limits<double>::infinity();
    for (double rr : {0.1, 0.2, 0.3, 0.4, 0.499}) {
        for (int i = 0; i < 256; ++i) {
            cplx t = std::polar(rr, 2.0 * std::numbers::pi * i / 256);
            double gt = std::abs(eval_disk(disk, t)[1] - lambda * t);
            gtilde_slack = std::min(gtilde_slack, 2.0 * rr * rr - gt);
        }
    }
    rep.items.push_back({"gtilde_cauchy", gtilde_slack});

    // Circle suprema at radius r.
    double sup_re_f = -std::numeric_limits<double>::infinity();
    double sup_g = 0.0, sup_im_f = 0.0;
    for (int i = 0; i < circle_samples; ++i) {
        ComplexVector z = eval_disk(disk, std::polar(r, 2.0 * std::numbers::pi * i / circle_samples));
        sup_re_f = std::max(sup_re_f, z[0].real());
        sup_g = std::max(sup_g, std::abs(z[1]));
        sup_im_f = std::max(sup_im_f, std::abs(z[0].imag()));
    }
    rep.items.push_back({"realf_growth", sup_re_f - (la * r / 2.0 - delta)});
    double pow2 = std::pow(2.0, xi - 1.0);
    rep.items.push_back({"g_circle_sup", pow2 * (std::pow(lm * r, xi) +
                                                 std::pow(2.0, xi) * std::pow(r, 2.0 * xi)) -
                                             std::pow(sup_g, xi)});
    rep.items.push_back(
        {"imf_circle_sup", pow2 * (std::pow(C0 * lm * r, xi) +
                                   std::pow(2.0, xi) * std::pow(r, 2.0 * xi)) -
                               std::pow(sup_im_f, xi)});

    // phi(r) = 2^{2xi+1} r^{2xi} + 2^xi (1 + C0^xi) |lambda|^xi r^xi
    //          - |lambda alpha| r + 2 delta > 0.
    double c0x = std::pow(C0, xi);
    rep.phi_r = std::pow(2.0, 2.0 * xi + 1.0) * std::pow(r, 2.0 * xi) +
                std::pow(2.0, xi) * (1.0 + c0x) * std::pow(lm, xi) * std::pow(r, xi) -
                la * r + 2.0 * delta;
    rep.items.push_back({"basic_phi", rep.phi_r});

    double phi_prime_half =
        xi * std::pow(2.0, 2.0 * xi + 2.0) * std::pow(0.5, 2.0 * xi - 1.0) +
        xi * std::pow(2.0, xi) * (1.0 + c0x) * std::pow(lm, xi) * std::pow(0.5, xi - 1.0) - la;
    rep.items.push_back({"phi_prime_half", phi_prime_half - (8.0 * xi - la)});
    rep.items.push_back({"schwarz_ceiling", 8.0 - la});

    rep.pass = true;
    for (const auto& item : rep.items) rep.pass = rep.pass && item.slack >= -1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary growth exponent catalogue. rate_exponent returns the negated
// growth exponent: a metric growing like d(z)^{-e} along the approach maps
// to e.
// ---------------------------------------------------------------------------

enum class RateScenario {
    KobNormalNonSemipos,    // K(z; nu) ~ d^{-3/4}
    SibonyNormalNonSemipos, // S(z; nu) ~ d^{-1/2}
    CaraNormalNonSemipos,   // C(z; nu) ~ 1
    LowerSmooth,            // C^{1,eps}: exponent 1 - 1/(1+eps)
    LowerSemipositive,      // semipositive C^{2,eps}: 1 - 1/(2+eps)
    KobepsRate,             // near-tangent C^{1,eps}: 1 - 1/(2(1+eps))
    ModepsRate,             // Omega_xi lower bound: 1 - 1/(2 xi)
    IntermediateLiminf,     // delta^{-1/6} liminf regime
    DichotomyLargeC         // X_delta family, large c: delta^{-1/4}
};

inline RateScenario parse_scenario(const std::string& s) {
    if (s == "kob-normal") return RateScenario::KobNormalNonSemipos;
    if (s == "sibony-normal") return RateScenario::SibonyNormalNonSemipos;
    if (s == "cara-normal") return RateScenario::CaraNormalNonSemipos;
    if (s == "lower-smooth") return RateScenario::LowerSmooth;
    if (s == "lower-semipositive") return RateScenario::LowerSemipositive;
    if (s == "kobeps") return RateScenario::KobepsRate;
    if (s == "modeps") return RateScenario::ModepsRate;
    if (s == "intermediate-liminf") return RateScenario::IntermediateLiminf;
    if (s == "dichotomy-large-c") return RateScenario::DichotomyLargeC;
    throw configuration_error("unknown rate scenario '" + s + "'");
}

inline double rate_exponent(RateScenario sc, double param = std::numeric_limits<double>::quiet_NaN()) {
    auto need_eps = [&] {
        if (!(param >= 0.0 && param <= 1.0))
            throw parameter_error("rate_exponent: scenario needs eps in [0,1]");
        return param;
    };
    switch (sc) {
        case RateScenario::KobNormalNonSemipos: return 0.75;
        case RateScenario::SibonyNormalNonSemipos: return 0.5;
        case RateScenario::CaraNormalNonSemipos: return 0.0;
        case RateScenario::LowerSmooth: return 1.0 - 1.0 / (1.0 + need_eps());
        case RateScenario::LowerSemipositive: return 1.0 - 1.0 / (2.0 + need_eps());
        case RateScenario::KobepsRate: {
            if (!(param > 0.0 && param <= 1.0))
                throw parameter_error("rate_exponent: scenario needs eps in (0,1]");
            return 1.0 - 1.0 / (2.0 * (1.0 + param));
        }
        case RateScenario::ModepsRate: {
            if (!(param > 1.0)) throw parameter_error("rate_exponent: scenario needs xi > 1");
            return 1.0 - 1.0 / (2.0 * param);
        }
        case RateScenario::IntermediateLiminf: return 1.0 / 6.0;
        case RateScenario::DichotomyLargeC: return 0.25;
    }
    throw configuration_error("rate_exponent: unknown scenario");
}

} // namespace invmet
