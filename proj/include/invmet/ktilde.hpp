#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "invmet/complex_vec.hpp"
#include "invmet/disks.hpp"
#include "invmet/domains.hpp"
#include "invmet/errors.hpp"
#include "invmet/metrics.hpp"
#include "invmet/rng.hpp"
#include "invmet/simplex_lp.hpp"

namespace invmet {

// Indicatrix sampling, the convex-gauge Kobayashi-Buseman estimate via a
// small LP, and the Hartogs product-figure upper bound for the
// pseudoconvex-indicatrix metric on the model family.

struct IndicatrixEntry {
    ComplexVector direction; // unit vector u
    double value = 0.0;      // certified upper bound for K(base; u)
};

struct IndicatrixSample {
    ComplexVector base;
    std::vector<IndicatrixEntry> entries;
    std::string domain;
    int phase_count = 8;
    KobConfig config;
};

inline constexpr std::size_t kMaxIndicatrixEntries = 4096;

/// Sample K upper bounds over quasi-uniform unit directions, replicated over
/// a phase orbit: the indicatrix is balanced, so K(p; e^{i theta} u) = K(p; u)
/// and each direction buys the whole circle of entries.
inline IndicatrixSample indicatrix_sample(const ModelDomain& dom, const ComplexVector& p,
                                          int direction_count, const KobConfig& cfg = {},
                                          int phases = 8) {
    if (direction_count < 1 || phases < 1)
        throw parameter_error("indicatrix_sample: counts must be >= 1");
    if (static_cast<std::size_t>(direction_count * phases) > kMaxIndicatrixEntries)
        throw parameter_error("indicatrix_sample: entry cap exceeded");
    IndicatrixSample sample;
    sample.base = p;
    sample.domain = domain_spec(dom);
    sample.phase_count = phases;
    sample.config = cfg;
    auto dirs = quasi_unit_directions(p.size(), static_cast<std::size_t>(direction_count));
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        KobConfig c = cfg;
        c.seed = cfg.seed + 1000003 * (i + 1);
        MetricEstimate est = kob_upper(dom, p, dirs[i], c);
        if (!std::isfinite(est.upper)) continue;
        for (int j = 0; j < phases; ++j) {
            double th = 2.0 * std::numbers::pi * j / phases;
            sample.entries.push_back({std::polar(1.0, th) * dirs[i], est.upper});
        }
    }
    return sample;
}

/// Gauge of the convex hull of the sampled indicatrix boundary points
/// u_i / value_i: the LP min sum t_i s.t. sum t_i (u_i/value_i) = X, t >= 0.
/// An upper bound for the Kobayashi-Buseman metric at X up to sampling
/// resolution; +inf (infeasible) flags insufficient direction coverage.
inline double khat_gauge(const IndicatrixSample& sample, const ComplexVector& X) {
    if (sample.entries.empty()) throw parameter_error("khat_gauge: empty sample");
    const std::size_t n = X.size();
    if (sample.base.size() != n) throw dimension_error("khat_gauge: dimension mismatch");
    std::vector<const IndicatrixEntry*> pts;
    for (const IndicatrixEntry& e : sample.entries)
        if (std::isfinite(e.value) && e.value > 0.0) pts.push_back(&e);
    if (pts.empty()) throw parameter_error("khat_gauge: no finite entries");

    const std::size_t m = 2 * n;
    const std::size_t cols = pts.size();
    std::vector<double> A(m * cols), b(m), c(cols, 1.0);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            cplx pk = pts[j]->direction[k] / pts[j]->value;
            A[(2 * k) * cols + j] = pk.real();
            A[(2 * k + 1) * cols + j] = pk.imag();
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        b[2 * k] = X[k].real();
        b[2 * k + 1] = X[k].imag();
    }
    LpResult res = simplex_solve_min(c, A, b, m, cols);
    if (res.status != LpResult::Status::Optimal)
        return std::numeric_limits<double>::infinity();
    return res.objective;
}

// ---------------------------------------------------------------------------
// Hartogs product figure on the model family.
// ---------------------------------------------------------------------------

/// Certified polydisk c1 d^{1-1/m} D x D x c d^{1/k-1/m} D^{n-2} inside the
/// indicatrix at P_delta, with c^k = c1 = safety/2 < 1/2. Every grid disk of
/// the figure's skeleton is a certified linear disk; the full polydisk then
/// sits inside the pseudoconvex indicatrix by Hartogs completion of the
/// skeleton with the axis disk.
struct HartogsFigure {
    double m = 2.0, k = 2.0, delta = 0.0;
    double c = 0.0, c1 = 0.0;
    std::array<double, 3> radii{0.0, 0.0, 0.0};
    int grid_disks = 0;
    double worst_slack = 0.0;
};

inline HartogsFigure hartogs_polydisk(double m, double k, double delta, double safety, int n = 3,
                                      int magnitude_grid = 5) {
    if (!(m >= 1.0)) throw parameter_error("hartogs: m must be >= 1");
    if (!(k > 0.0 && k <= m)) throw parameter_error("hartogs: need 0 < k <= m");
    if (!(delta > 0.0)) throw parameter_error("hartogs: delta must be > 0");
    if (!(safety > 0.0 && safety < 1.0))
        throw parameter_error("hartogs: safety must lie strictly inside (0,1): c^k < 1/2 is strict");
    if (n < 2) throw parameter_error("hartogs: n must be >= 2");

    HartogsFigure fig;
    fig.m = m;
    fig.k = k;
    fig.delta = delta;
    fig.c1 = 0.5 * safety;
    fig.c = std::pow(fig.c1, 1.0 / k);
    fig.radii = {fig.c1 * std::pow(delta, 1.0 - 1.0 / m), 1.0,
                 fig.c * std::pow(delta, 1.0 / k - 1.0 / m)};

    ModelDomain dom = ModelDomain::g_epsilon(2.0, m, k, n);
    ComplexVector P = base_point(dom, delta);

    // The defining pieces depend only on coordinate moduli for linear disks
    // through P_delta (phases rotate away), so a magnitude grid over
    // |X_1| <= r1, |X_2| = 1, |X'| <= r3 covers the skeleton.
    fig.worst_slack = std::numeric_limits<double>::infinity();
    for (int i1 = 0; i1 < magnitude_grid; ++i1) {
        double x1 = fig.radii[0] * i1 / (magnitude_grid - 1);
        for (int i3 = 0; i3 < (n >= 3 ? magnitude_grid : 1); ++i3) {
            ComplexVector X(static_cast<std::size_t>(n));
            X[0] = cplx(x1, 0.0);
            X[1] = cplx(1.0, 0.0);
            if (n >= 3) {
                double x3 = fig.radii[2] * i3 / (magnitude_grid - 1);
                for (int c = 2; c < n; ++c) X[static_cast<std::size_t>(c)] = cplx(x3, 0.0);
            }
            AnalyticDisk disk = make_linear_disk(P, X);
            ContainmentCertificate cert = certify_containment(disk, dom);
            ++fig.grid_disks;
            if (!cert.valid)
                throw construction_error(
                    "hartogs_polydisk: grid disk failed certification at |X1|=" +
                    std::to_string(x1) + ", delta=" + std::to_string(delta) +
                    " (" + cert.diagnostic + ")");
            fig.worst_slack = std::min(fig.worst_slack, cert.slack);
        }
    }
    return fig;
}

/// Gauge of the certified figure: a certified upper bound at P_delta for the
/// pseudoconvex-indicatrix metric, hence for every metric below it in the
/// chain. max(|X1|/r1, |X2|/r2, |X'|_sup/r3).
inline double ktilde_upper(const HartogsFigure& fig, const ComplexVector& X) {
    if (X.size() < 2) throw dimension_error("ktilde_upper: need at least two coordinates");
    double v = std::max(std::abs(X[0]) / fig.radii[0], std::abs(X[1]) / fig.radii[1]);
    double sup = 0.0;
    for (std::size_t c = 2; c < X.size(); ++c) sup = std::max(sup, std::abs(X[c]));
    if (X.size() > 2) v = std::max(v, sup / fig.radii[2]);
    return v;
}

/// Convenience: build the figure for the model domain and evaluate the gauge.
inline double ktilde_upper(const ModelDomain& dom, double delta, const ComplexVector& X,
                           double safety = 0.998) {
    if (dom.kind() != DomainKind::GEpsilon)
        throw configuration_error("ktilde_upper: certified figure exists on the model family only");
    if (static_cast<int>(X.size()) != dom.dim())
        throw dimension_error("ktilde_upper: dimension mismatch");
    HartogsFigure fig = hartogs_polydisk(dom.m(), dom.k(), delta, safety, dom.dim());
    return ktilde_upper(fig, X);
}

} // namespace invmet
