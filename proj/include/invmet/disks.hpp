#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "invmet/complex_vec.hpp"
#include "invmet/domains.hpp"
#include "invmet/errors.hpp"

namespace invmet {

inline constexpr int kMaxDiskDegree = 12;

/// Polynomial analytic disk phi(t) = center + sum_k a_k t^k on |t| <= radius.
/// coeffs[c][k-1] multiplies t^k in coordinate c. The K upper bound carried
/// by an admissible disk with phi'(0) = X is 1/radius, so the radius is part
/// of the object rather than normalized away.
struct AnalyticDisk {
    ComplexVector center;
    std::vector<std::vector<cplx>> coeffs;
    double radius = 1.0;

    std::size_t dim() const { return center.size(); }

    int degree() const {
        std::size_t n = 0;
        for (const auto& cs : coeffs) n = std::max(n, cs.size());
        return static_cast<int>(n);
    }
};

inline void validate_disk(const AnalyticDisk& d, int max_degree = kMaxDiskDegree) {
    if (!(d.radius > 0.0) || !std::isfinite(d.radius))
        throw parameter_error("disk radius must be finite and > 0");
    if (!d.center.is_finite()) throw parameter_error("disk center must be finite");
    if (d.coeffs.size() != d.dim())
        throw dimension_error("disk needs one coefficient list per coordinate");
    if (d.degree() > max_degree)
        throw parameter_error("disk degree " + std::to_string(d.degree()) + " exceeds max " +
                              std::to_string(max_degree));
    for (const auto& cs : d.coeffs)
        for (const cplx& a : cs)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw parameter_error("disk coefficients must be finite");
}

namespace detail {

/// Horner pass returning phi_c(t) and phi_c'(t) for one coordinate.
inline std::pair<cplx, cplx> horner_with_derivative(cplx center, const std::vector<cplx>& cs,
                                                    cplx t) {
    // p(t) = center + c1 t + ... + cN t^N evaluated together with p'.
    cplx p(0.0, 0.0), dp(0.0, 0.0);
    for (std::size_t j = cs.size(); j-- > 0;) {
        dp = dp * t + p;
        p = p * t + cs[j];
    }
    // Now p = c1 + c2 t + ... (the factored tail), dp its derivative.
    return {center + t * p, p + t * dp};
}

} // namespace detail

inline ComplexVector eval_disk(const AnalyticDisk& d, cplx t) {
    if (std::abs(t) > d.radius * (1.0 + 1e-12))
        throw disk_domain_error("eval_disk: |t| exceeds the disk radius");
    ComplexVector z(d.dim());
    for (std::size_t c = 0; c < d.dim(); ++c)
        z[c] = detail::horner_with_derivative(d.center[c], d.coeffs[c], t).first;
    return z;
}

inline ComplexVector eval_disk_derivative(const AnalyticDisk& d, cplx t) {
    if (std::abs(t) > d.radius * (1.0 + 1e-12))
        throw disk_domain_error("eval_disk_derivative: |t| exceeds the disk radius");
    ComplexVector w(d.dim());
    for (std::size_t c = 0; c < d.dim(); ++c)
        w[c] = detail::horner_with_derivative(d.center[c], d.coeffs[c], t).second;
    return w;
}

/// (phi(0), phi'(0)).
inline std::pair<ComplexVector, ComplexVector> jet_at_zero(const AnalyticDisk& d) {
    ComplexVector deriv(d.dim());
    for (std::size_t c = 0; c < d.dim(); ++c)
        deriv[c] = d.coeffs[c].empty() ? cplx(0.0, 0.0) : d.coeffs[c][0];
    return {d.center, deriv};
}

/// phi(t) = P + t X on the unit disk.
inline AnalyticDisk make_linear_disk(const ComplexVector& P, const ComplexVector& X) {
    P.require_same_size(X);
    AnalyticDisk d;
    d.center = P;
    d.coeffs.resize(P.size());
    for (std::size_t c = 0; c < P.size(); ++c) d.coeffs[c] = {X[c]};
    d.radius = 1.0;
    validate_disk(d);
    return d;
}

/// Phi(t) = (-delta + alpha t - alpha^2 t^2 / (8 delta), beta t) on
/// |t| <= 1/|beta|. The tangential-regime disk on G.
inline AnalyticDisk make_quad_disk(double delta, cplx alpha, cplx beta) {
    if (!(delta > 0.0)) throw parameter_error("quad disk: delta must be > 0");
    if (beta == cplx(0.0, 0.0))
        throw parameter_error("quad disk: beta must be nonzero (use the lambda disk)");
    AnalyticDisk d;
    d.center = ComplexVector{cplx(-delta, 0.0), cplx(0.0, 0.0)};
    d.coeffs = {{alpha, -alpha * alpha / (8.0 * delta)}, {beta}};
    d.radius = 1.0 / std::abs(beta);
    validate_disk(d);
    return d;
}

/// Phi(t) = (-delta + lambda alpha t, lambda beta t + t^2/2) on the unit
/// disk; requires |lambda alpha|, |lambda beta| < 1/2 so the image stays in
/// the bidisk. The normal-regime disk on G.
inline AnalyticDisk make_lambda_disk(double delta, cplx alpha, cplx beta, cplx lambda) {
    if (!(delta > 0.0)) throw parameter_error("lambda disk: delta must be > 0");
    if (!(std::abs(lambda * alpha) < 0.5 && std::abs(lambda * beta) < 0.5))
        throw parameter_error("lambda disk: need |lambda alpha|, |lambda beta| < 1/2");
    AnalyticDisk d;
    d.center = ComplexVector{cplx(-delta, 0.0), cplx(0.0, 0.0)};
    d.coeffs = {{lambda * alpha}, {lambda * beta, cplx(0.5, 0.0)}};
    d.radius = 1.0;
    validate_disk(d);
    return d;
}

inline AnalyticDisk with_radius(AnalyticDisk d, double radius) {
    if (!(radius > 0.0)) throw parameter_error("with_radius: radius must be > 0");
    d.radius = radius;
    return d;
}

/// Reparameterize so that phi'(0) equals X exactly: psi(s) = phi(s/mu) with
/// mu the scalar aligning the jet. Requires the existing derivative to be a
/// (nonzero) scalar multiple of X.
inline AnalyticDisk reparameterize_jet(const AnalyticDisk& d, const ComplexVector& X) {
    auto [value, deriv] = jet_at_zero(d);
    double xx = X.norm_sq();
    if (xx == 0.0) throw parameter_error("reparameterize_jet: X must be nonzero");
    cplx mu = hermitian_inner(X, deriv) / xx;
    if (std::abs(mu) == 0.0 || (deriv - mu * X).norm() > 1e-9 * deriv.norm())
        throw parameter_error("reparameterize_jet: jet derivative is not parallel to X");
    AnalyticDisk out;
    out.center = d.center;
    out.coeffs.resize(d.coeffs.size());
    for (std::size_t c = 0; c < d.coeffs.size(); ++c) {
        cplx mu_k = mu;
        out.coeffs[c].resize(d.coeffs[c].size());
        for (std::size_t k = 0; k < d.coeffs[c].size(); ++k) {
            out.coeffs[c][k] = d.coeffs[c][k] / mu_k;
            mu_k *= mu;
        }
    }
    out.radius = d.radius * std::abs(mu);
    return out;
}

// ---------------------------------------------------------------------------
// Certified containment.
//
// The check walks a polar cell decomposition of the closed disk |t| <= radius.
// For each cell with center s and circumradius h it bounds every defining
// piece u over the whole cell by
//
//     u(phi(t)) <= u(phi(s)) + |grad_t (u . phi)(s)| h + (1/2) H+ h^2,
//
// where H+ is a one-sided curvature bound assembled from region bounds:
// H+ = lam_max+(Hess u) * sup|phi'|^2 + sqrt(2) * sup|grad u| * sup|phi''|.
// Concave defining terms contribute nothing to lam_max+, which is what keeps
// the explicit model-domain disks (whose clearance shrinks like delta)
// certifiable at desk-scale grids; a plain Lipschitz-times-mesh certificate
// cannot resolve them. Pieces with unbounded curvature (powers below 2) fall back
// to a first-order bound per cell. Cells whose bound is not conclusive are
// split in four; a sampled violation at any cell center is a hard failure.
// ---------------------------------------------------------------------------

struct ContainmentCertificate {
    bool valid = false;
    double margin = 0.0; // worst sampled defining value, sign-flipped
    std::pair<int, int> grid{0, 0};
    double slack = 0.0; // certified clearance beyond the requested margin; valid <=> slack > 0
    long cells_evaluated = 0;
    std::string diagnostic;
};

struct CertifyConfig {
    int max_depth = 30;
    long max_cells = 400000;
};

/// Max sampled defining value on a polar grid; returns early once the max
/// exceeds stop_above. The cheap screen used inside optimizer loops.
inline double max_defining_on_grid(const AnalyticDisk& disk, const ModelDomain& dom, int radial,
                                   int angular,
                                   double stop_above = std::numeric_limits<double>::infinity()) {
    double best = defining_value(dom, eval_disk(disk, cplx(0.0, 0.0)));
    if (best > stop_above) return best;
    for (int ir = 1; ir <= radial; ++ir) {
        double r = disk.radius * ir / radial;
        for (int ia = 0; ia < angular; ++ia) {
            double th = 2.0 * std::numbers::pi * ia / angular;
            double v = defining_value(dom, eval_disk(disk, std::polar(r, th)));
            if (v > best) {
                best = v;
                if (best > stop_above) return best;
            }
        }
    }
    return best;
}

inline ContainmentCertificate certify_containment(const AnalyticDisk& disk,
                                                  const ModelDomain& dom, int radial_count,
                                                  int angular_count, Margin margin,
                                                  const CertifyConfig& cfg = {}) {
    if (radial_count < 8 || angular_count < 8)
        throw parameter_error("certify_containment: grid counts must be >= 8");
    if (static_cast<int>(disk.dim()) != dom.dim())
        throw dimension_error("certify_containment: disk/domain dimension mismatch");
    validate_disk(disk);

    const double rho = disk.radius;

    // Region bounds for the disk map over |t| <= rho.
    double img_sq = 0.0, d1_sq = 0.0, d2_sq = 0.0;
    for (std::size_t c = 0; c < disk.dim(); ++c) {
        double a0 = std::abs(disk.center[c]), a1 = 0.0, a2 = 0.0, rk = 1.0;
        for (std::size_t k = 0; k < disk.coeffs[c].size(); ++k) {
            double ak = std::abs(disk.coeffs[c][k]);
            double kk = static_cast<double>(k + 1);
            a0 += ak * rk * rho;                               // |a_k| rho^k
            a1 += kk * ak * rk;                                // k |a_k| rho^{k-1}
            if (k >= 1) a2 += kk * (kk - 1.0) * ak * rk / rho; // k(k-1)|a_k| rho^{k-2}
            rk *= rho;
        }
        img_sq += a0 * a0;
        d1_sq += a1 * a1;
        d2_sq += a2 * a2;
    }
    const double R_img = std::sqrt(img_sq);
    const double L1 = std::sqrt(d1_sq);
    const double L2 = std::sqrt(d2_sq);

    const int pieces = piece_count(dom);
    std::vector<double> H_plus(static_cast<std::size_t>(pieces));
    std::vector<double> Lip(static_cast<std::size_t>(pieces));
    for (int i = 0; i < pieces; ++i) {
        double G = piece_grad_bound(dom, i, R_img);
        double lam = piece_hess_plus_bound(dom, i, R_img);
        Lip[static_cast<std::size_t>(i)] = G * L1;
        H_plus[static_cast<std::size_t>(i)] =
            std::isfinite(lam) && std::isfinite(G)
                ? lam * L1 * L1 + std::numbers::sqrt2 * G * L2
                : std::numeric_limits<double>::infinity();
        if (!std::isfinite(G) && !std::isfinite(lam)) {
            ContainmentCertificate cert;
            cert.grid = {radial_count, angular_count};
            cert.diagnostic = "defining piece has unbounded gradient; containment not certifiable";
            cert.slack = -std::numeric_limits<double>::infinity();
            return cert;
        }
    }

    struct Cell {
        double r0, r1, th0, th1;
        int depth;
    };
    std::vector<Cell> stack;
    stack.reserve(1024);
    for (int ir = 0; ir < radial_count; ++ir)
        for (int ia = 0; ia < angular_count; ++ia)
            stack.push_back({rho * ir / radial_count, rho * (ir + 1) / radial_count,
                             2.0 * std::numbers::pi * ia / angular_count,
                             2.0 * std::numbers::pi * (ia + 1) / angular_count, 0});

    ContainmentCertificate cert;
    cert.grid = {radial_count, angular_count};
    double max_value = -std::numeric_limits<double>::infinity();
    double min_slack = std::numeric_limits<double>::infinity();

    ComplexVector z(disk.dim()), dz(disk.dim());
    while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        ++cert.cells_evaluated;

        const double rc = 0.5 * (cell.r0 + cell.r1);
        const double thc = 0.5 * (cell.th0 + cell.th1);
        const double half_dth = 0.5 * (cell.th1 - cell.th0);
        const cplx t = std::polar(rc, thc);
        // Circumradius: corners are the farthest cell points from the center.
        // Half-angle form keeps the angular extent alive at deep refinement,
        // where 1 - cos collapses to zero.
        const double sh = std::sin(0.5 * half_dth);
        auto corner = [&](double r) {
            double d = r - rc;
            return std::sqrt(d * d + 4.0 * r * rc * sh * sh);
        };
        const double h = std::max(corner(cell.r0), corner(cell.r1));

        for (std::size_t c = 0; c < disk.dim(); ++c) {
            auto [v, dv] = detail::horner_with_derivative(disk.center[c], disk.coeffs[c], t);
            z[c] = v;
            dz[c] = dv;
        }

        double value = -std::numeric_limits<double>::infinity();
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < pieces; ++i) {
            double v = piece_value(dom, i, z);
            value = std::max(value, v);
            double b;
            if (std::isfinite(H_plus[static_cast<std::size_t>(i)])) {
                ComplexVector w = piece_wirtinger(dom, i, z);
                cplx pair(0.0, 0.0);
                for (std::size_t c = 0; c < disk.dim(); ++c) pair += w[c] * dz[c];
                double g = 2.0 * std::abs(pair);
                b = v + g * h + 0.5 * H_plus[static_cast<std::size_t>(i)] * h * h;
            } else {
                b = v + Lip[static_cast<std::size_t>(i)] * h;
            }
            worst = std::max(worst, b);
        }
        max_value = std::max(max_value, value);

        if (worst < -margin.value) {
            min_slack = std::min(min_slack, -worst - margin.value);
            continue;
        }
        if (value > -margin.value) {
            cert.valid = false;
            cert.margin = -max_value;
            cert.slack = -value - margin.value;
            cert.diagnostic = "sampled defining value " + std::to_string(value) +
                              " violates the margin at |t|=" + std::to_string(rc);
            return cert;
        }
        if (cell.depth >= cfg.max_depth || cert.cells_evaluated >= cfg.max_cells) {
            cert.valid = false;
            cert.margin = -max_value;
            cert.slack = -worst - margin.value;
            cert.diagnostic = cell.depth >= cfg.max_depth ? "refinement depth exhausted"
                                                          : "cell budget exhausted";
            return cert;
        }
        const double rm = 0.5 * (cell.r0 + cell.r1);
        const double thm = 0.5 * (cell.th0 + cell.th1);
        stack.push_back({cell.r0, rm, cell.th0, thm, cell.depth + 1});
        stack.push_back({cell.r0, rm, thm, cell.th1, cell.depth + 1});
        stack.push_back({rm, cell.r1, cell.th0, thm, cell.depth + 1});
        stack.push_back({rm, cell.r1, thm, cell.th1, cell.depth + 1});
    }

    cert.valid = min_slack > 0.0 && std::isfinite(min_slack);
    cert.margin = -max_value;
    cert.slack = min_slack;
    return cert;
}

inline constexpr int kDefaultCertRadial = 64;
inline constexpr int kDefaultCertAngular = 256;
inline constexpr double kDefaultCertMargin = 1e-7;

inline ContainmentCertificate certify_containment(const AnalyticDisk& disk,
                                                  const ModelDomain& dom) {
    return certify_containment(disk, dom, kDefaultCertRadial, kDefaultCertAngular,
                               Margin(kDefaultCertMargin));
}

} // namespace invmet
