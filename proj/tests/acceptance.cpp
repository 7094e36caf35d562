// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "invmet/invmet.hpp"

using namespace invmet;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

KobConfig cfg_with(int degree, int starts, int iterations, std::uint64_t seed) {
    KobConfig c;
    c.degree = degree;
    c.starts = starts;
    c.iterations = iterations;
    c.seed = seed;
    return c;
}

double timed_upper(const ModelDomain& dom, const ComplexVector& p, const ComplexVector& X,
                   const KobConfig& cfg, double& ms) {
    auto t0 = std::chrono::steady_clock::now();
    MetricEstimate e = kob_upper(dom, p, X, cfg);
    auto t1 = std::chrono::steady_clock::now();
    ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return e.upper;
}

// 1. kob_upper within 2% of the Poincare values on the disk and 5% of the
//    closed forms at the bidisk/ball centers, bracketed below by the
//    functional family within 5%; at most 10 s per point.
void criterion_1() {
    bool pass = true;
    std::ostringstream detail;
    struct Case {
        const char* spec;
        ComplexVector p, X;
        double oracle, tol;
        int degree;
    };
    const Case cases[] = {
        {"disk", ComplexVector{cplx(0, 0)}, ComplexVector{cplx(1, 0)}, 1.0, 0.02, 6},
        {"disk", ComplexVector{cplx(0.5, 0)}, ComplexVector{cplx(1, 0)}, 4.0 / 3.0, 0.02, 10},
        {"polydisk:n=2,r=1", ComplexVector(2), ComplexVector{cplx(1, 0), cplx(1, 0)}, 1.0, 0.05,
         6},
        {"ball:n=2,r=1", ComplexVector(2), ComplexVector{cplx(1, 0), cplx(0, 0)}, 1.0, 0.05, 6},
    };
    for (const Case& c : cases) {
        ModelDomain dom = parse_domain(c.spec);
        double ms = 0.0;
        double upper = timed_upper(dom, c.p, c.X, cfg_with(c.degree, 4, 800, 1), ms);
        double lower =
            caratheodory_lower(dom, c.p, c.X, default_functional_family(dom, c.p, 5, 32)).lower;
        bool ok = upper <= (1.0 + c.tol) * c.oracle && upper >= c.oracle * (1.0 - 1e-9) &&
                  lower >= 0.95 * c.oracle && lower <= c.oracle * (1.0 + 1e-9) && ms <= 10000.0;
        pass = pass && ok;
        detail << c.spec << " upper=" << fmt(upper) << " lower=" << fmt(lower) << " ("
               << fmt(ms) << " ms) ";
    }
    report(1, "oracle agreement on disk, bidisk, ball", pass, detail.str());
}

// 2. Tangential exact value on G: quad disk certified, kob_upper <= 1.01,
//    schwarz lower = 1, bracket width <= 1%.
void criterion_2() {
    ModelDomain g = ModelDomain::half_parab();
    bool pass = true;
    std::ostringstream detail;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        cplx alpha(std::sqrt(delta), 0), beta(1, 0);
        AnalyticDisk quad = make_quad_disk(delta, alpha, beta);
        ContainmentCertificate cert =
            certify_containment(with_radius(quad, 0.995 * quad.radius), g);
        ComplexVector p = base_point(g, delta);
        ComplexVector X{alpha, beta};
        double upper = kob_upper(g, p, X, cfg_with(3, 2, 200, 2)).upper;
        double lower = schwarz_lower(g, p, X, 1);
        bool ok = cert.valid && upper <= 1.01 && std::abs(lower - 1.0) < 1e-12 &&
                  (upper - lower) <= 0.01;
        pass = pass && ok;
        detail << "delta=" << fmt(delta) << " cert=" << (cert.valid ? "ok" : "BAD")
               << " upper=" << fmt(upper) << " ";
    }
    report(2, "tangential exact value (quad disk)", pass, detail.str());
}

// 3. Normal-direction upper on G: the lambda disk at 0.99 of the admissible
//    threshold is certified and kob_upper <= 1.02 sqrt2 delta^{-3/4}.
void criterion_3() {
    ModelDomain g = ModelDomain::half_parab();
    bool pass = true;
    std::ostringstream detail;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        cplx alpha(1, 0), beta(0, 0);
        double lam = 0.99 * std::pow(delta, 0.75) / std::numbers::sqrt2;
        AnalyticDisk ld = make_lambda_disk(delta, alpha, beta, cplx(lam, 0));
        ContainmentCertificate cert = certify_containment(ld, g);
        double upper =
            kob_upper(g, base_point(g, delta), ComplexVector{alpha, beta}, cfg_with(3, 2, 200, 3))
                .upper;
        double reference = std::numbers::sqrt2 * std::pow(delta, -0.75);
        bool ok = cert.valid && upper <= 1.02 * reference;
        pass = pass && ok;
        detail << "delta=" << fmt(delta) << " upper/ref=" << fmt(upper / reference) << " ";
    }
    report(3, "normal-direction upper (lambda disk)", pass, detail.str());
}

// 4. Two-sided regime: certificate lower never exceeds the certified upper
//    on 200 seeded random configurations with c > 7.
void criterion_4() {
    ModelDomain g = ModelDomain::half_parab();
    Rng rng(2026);
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
        double delta = rng.log_uniform(1e-5, 1e-2);
        double c = rng.uniform(7.001, 120.0);
        cplx beta = rng.unit_phase() * rng.uniform(0.2, 1.5);
        cplx alpha = rng.unit_phase() * (c * std::sqrt(delta) * std::abs(beta));
        LemkobResult lr = lemkob_bounds(delta, alpha, beta);
        double upper = kob_upper(g, base_point(g, delta), ComplexVector{alpha, beta},
                                 cfg_with(2, 1, 60, 4000 + static_cast<std::uint64_t>(trial)))
                           .upper;
        worst = std::min(worst, upper - lr.lower);
        if (!(lr.lower <= upper * (1.0 + 1e-9))) ++violations;
    }
    report(4, "two-sided certificate never crosses the upper", violations == 0,
           "200 trials, violations=" + std::to_string(violations) +
               ", worst slack=" + fmt(worst));
}

// 5. Normal-approach exponent on G: fitted upper slope in [-0.80, -0.70],
//    certificate-lower slope exactly -3/4.
void criterion_5() {
    ScanConfig cfg;
    cfg.domain = "g";
    cfg.deltas = log_spaced_deltas(1e-5, 1e-2, 8);
    cfg.direction.fixed = ComplexVector{cplx(1, 0), cplx(0, 0)};
    cfg.kinds = {MetricKind::Kobayashi};
    cfg.optimizer = cfg_with(3, 2, 200, 5);
    cfg.seed = 5;
    auto rows = run_scan(cfg);
    FitResult up = fit_exponent(rows, FitField::Upper);
    FitResult lo = fit_exponent(rows, FitField::Lower);
    bool pass = up.slope >= -0.80 && up.slope <= -0.70 && std::abs(lo.slope + 0.75) < 1e-12;
    report(5, "normal-approach exponent -3/4 on G", pass,
           "upper slope=" + fmt(up.slope) + " lower slope=" + fmt(lo.slope) +
               " r2=" + fmt(up.r_squared));
}

// 6. Model-family rate: the certified figure gauge has slope exactly -1/2,
//    every figure grid disk certifies down to delta = 1e-5, and the chain
//    check over {C, K^, K~, K} rows is empty.
void criterion_6() {
    std::vector<double> deltas = {1e-2, 1e-3, 1e-4, 1e-5};
    ComplexVector X{cplx(1, 0), cplx(0, 0), cplx(0, 0)};
    std::vector<double> values;
    bool figures_ok = true;
    std::string figure_err;
    for (double d : deltas) {
        try {
            HartogsFigure fig = hartogs_polydisk(2.0, 2.0, d, 0.998);
            values.push_back(ktilde_upper(fig, X));
        } catch (const error& e) {
            figures_ok = false;
            figure_err = e.what();
            break;
        }
    }
    bool slope_ok = false;
    double slope = 0.0;
    if (figures_ok) {
        FitResult f = fit_powerlaw(deltas, values);
        slope = f.slope;
        slope_ok = std::abs(f.slope + 0.5) < 1e-12;
    }

    ScanConfig cfg;
    cfg.domain = "geps:m=2,k=2,n=3,eps=2";
    cfg.deltas = deltas;
    cfg.direction.fixed = X;
    cfg.kinds = {MetricKind::Caratheodory, MetricKind::KobBuseman, MetricKind::KTilde,
                 MetricKind::Kobayashi};
    cfg.optimizer = cfg_with(2, 1, 80, 6);
    cfg.indicatrix_directions = 24;
    cfg.seed = 6;
    auto rows = run_scan(cfg);
    bool rows_ok = true;
    for (const ScanRow& r : rows) rows_ok = rows_ok && r.error.empty();
    auto violations = chain_check(rows);
    bool pass = figures_ok && slope_ok && rows_ok && violations.empty();
    report(6, "model-family figure rate -1/2 and chain consistency", pass,
           (figures_ok ? "figures certified to 1e-5, slope=" + fmt(slope)
                       : "figure failed: " + figure_err) +
               ", chain violations=" + std::to_string(violations.size()));
}

// 7. Dichotomy of the slope family X_delta = (c sqrt(delta), 1).
void criterion_7() {
    ScanConfig cfg;
    cfg.domain = "g";
    cfg.deltas = log_spaced_deltas(1e-5, 1e-2, 8);
    cfg.kinds = {MetricKind::Kobayashi};
    cfg.optimizer = cfg_with(3, 2, 200, 7);
    cfg.seed = 7;

    cfg.direction.family_c = 1.0;
    auto tangential = run_scan(cfg);
    FitResult tu = fit_exponent(tangential, FitField::Upper);
    double max_upper = 0.0;
    for (const ScanRow& r : tangential) max_upper = std::max(max_upper, r.upper);
    bool tang_ok = std::abs(tu.slope) <= 0.05 && max_upper <= 1.05;

    cfg.direction.family_c = 100.0;
    auto steep = run_scan(cfg);
    FitResult su = fit_exponent(steep, FitField::Upper);
    FitResult sl = fit_exponent(steep, FitField::Lower);
    bool steep_ok = std::abs(sl.slope + 0.25) < 1e-12 && std::abs(su.slope + 0.25) <= 0.05;

    report(7, "slope-family dichotomy (bounded vs delta^{-1/4})", tang_ok && steep_ok,
           "c=1: upper slope=" + fmt(tu.slope) + " max upper=" + fmt(max_upper) +
               "; c=100: lower slope=" + fmt(sl.slope) + " upper slope=" + fmt(su.slope));
}

// 8. Omega_xi constants against the propagation oracle, and no crossing of
//    the lower bound over 50 seeded configurations.
void criterion_8() {
    ModepsConstants k = modeps_constants(2.0, 1.0);
    bool constants_ok = std::abs(k.C1 - std::sqrt(128.0)) < 1e-9 &&
                        std::abs(1.0 / k.C2 - std::pow(8192.0, 0.25)) < 1e-9;
    ModelDomain omega = ModelDomain::omega_xi(2.0);
    Rng rng(88);
    int checked = 0, violations = 0;
    for (int trial = 0; checked < 50 && trial < 2000; ++trial) {
        double delta = rng.log_uniform(1e-5, 1e-2);
        double a = rng.uniform(0.05, 1.0);
        auto v = modeps_lower(2.0, 1.0, delta, cplx(a, 0), cplx(1, 0));
        if (!v) continue;
        ++checked;
        double upper = kob_upper(omega, base_point(omega, delta),
                                 ComplexVector{cplx(a, 0), cplx(1, 0)},
                                 cfg_with(2, 1, 60, 8000 + static_cast<std::uint64_t>(trial)))
                           .upper;
        if (!(*v <= upper * (1.0 + 1e-9))) ++violations;
    }
    bool pass = constants_ok && checked == 50 && violations == 0;
    report(8, "Omega_xi constants and non-crossing lower bound", pass,
           std::string("C1=") + fmt(k.C1) + " C2=" + fmt(k.C2) +
               ", configs=" + std::to_string(checked) +
               ", violations=" + std::to_string(violations));
}

// 9. Fuzz campaigns: growth lemma, basic inequality, balancedness and
//    homogeneity, product property, exhaustion.
void criterion_9() {
    VerifyReport realf = verify_lemma("realf", 1000, 9);
    VerifyReport basic = verify_lemma("basic", 100, 10);

    // Balancedness (8 phases) and homogeneity (|c| in {2, 1/3}) within 2%.
    ModelDomain g = ModelDomain::half_parab();
    ComplexVector p = base_point(g, 0.04);
    ComplexVector X{cplx(0.2, 0), cplx(1, 0)};
    KobConfig kcfg = cfg_with(3, 2, 200, 11);
    double base = kob_upper(g, p, X, kcfg).upper;
    bool homo_ok = true;
    for (int j = 0; j < 8; ++j) {
        cplx c = std::polar(1.0, 2.0 * std::numbers::pi * j / 8);
        double v = kob_upper(g, p, c * X, kcfg).upper;
        homo_ok = homo_ok && std::abs(v - base) <= 0.02 * base;
    }
    for (double m : {2.0, 1.0 / 3.0}) {
        double v = kob_upper(g, p, cplx(m, 0) * X, kcfg).upper;
        homo_ok = homo_ok && std::abs(v - m * base) <= 0.02 * m * base;
    }

    VerifyReport product = verify_lemma("product", 6, 12);
    VerifyReport exhaustion = verify_lemma("exhaustion", 5, 13);

    bool pass = realf.failures == 0 && basic.failures == 0 && basic.trials == 100 && homo_ok &&
                product.failures == 0 && exhaustion.failures == 0;
    report(9, "fuzz suites (growth, basic inequality, balancedness, product, exhaustion)", pass,
           "realf=" + std::to_string(realf.failures) + "/1000, basic=" +
               std::to_string(basic.failures) + "/" + std::to_string(basic.trials) +
               ", homogeneity=" + (homo_ok ? "ok" : "BAD") +
               ", product=" + std::to_string(product.failures) +
               ", exhaustion=" + std::to_string(exhaustion.failures));
}

// 10. Determinism and certification soundness.
void criterion_10() {
    ScanConfig cfg;
    cfg.domain = "g";
    cfg.deltas = log_spaced_deltas(1e-4, 1e-2, 6);
    cfg.direction.family_c = 30.0;
    cfg.kinds = {MetricKind::Kobayashi, MetricKind::Caratheodory};
    cfg.optimizer = cfg_with(3, 2, 150, 14);
    cfg.seed = 14;
    std::ostringstream a, b;
    write_rows_csv(a, run_scan(cfg));
    cfg.threads = 2;
    write_rows_csv(b, run_scan(cfg));
    bool deterministic = a.str() == b.str() && !a.str().empty();

    Rng rng(15);
    ModelDomain doms[] = {ModelDomain::half_parab(), ModelDomain::ball(2, 1.0),
                          ModelDomain::omega_xi(2.0)};
    int checked = 0, broken = 0;
    while (checked < 100) {
        ModelDomain& dom = doms[rng.next_u64() % 3];
        AnalyticDisk d;
        d.center = ComplexVector(static_cast<std::size_t>(dom.dim()));
        d.center[0] = cplx(-rng.uniform(0.1, 0.4), 0.0);
        d.coeffs.resize(d.center.size());
        double scale = rng.uniform(0.01, 0.12);
        int deg = 1 + static_cast<int>(rng.uniform() * 4);
        for (std::size_t c = 0; c < d.center.size(); ++c)
            for (int k = 0; k < deg; ++k)
                d.coeffs[c].push_back(scale * rng.gaussian_cplx() / static_cast<double>(k + 1));
        d.radius = rng.uniform(0.3, 1.0);
        ContainmentCertificate cert = certify_containment(d, dom, 16, 32, Margin(1e-7));
        if (!cert.valid) continue;
        ++checked;
        ContainmentCertificate dense = certify_containment(d, dom, 32, 64, Margin(1e-7));
        if (!dense.valid) ++broken;
    }
    bool pass = deterministic && broken == 0;
    report(10, "determinism and certificate soundness", pass,
           std::string("byte-identical=") + (deterministic ? "yes" : "NO") +
               ", 4x-density failures=" + std::to_string(broken) + "/100");
}

} // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    auto t1 = std::chrono::steady_clock::now();
    std::printf("%s — %d/10 criteria passed in %.1f s\n", g_failures == 0 ? "PASS" : "FAIL",
                10 - g_failures, std::chrono::duration<double>(t1 - t0).count());
    return g_failures == 0 ? 0 : 1;
}
