#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "invmet/complex_vec.hpp"
#include "invmet/domains.hpp"
#include "invmet/errors.hpp"
#include "invmet/pattern_search.hpp"
#include "invmet/rng.hpp"

namespace invmet {

/// Boundary data attached to an interior point z: nearest boundary point
/// (the foot a'), the unit inward normal nu_{a'}, the distance d(z), and the
/// gradient of the distance function at z. For the euclidean distance the
/// gradient is the unit vector from the foot toward z, so it coincides with
/// the inward normal; both fields are kept because callers use them in
/// different roles.
struct BoundaryFrame {
    ComplexVector foot;
    ComplexVector inward_normal;
    double distance = 0.0;
    ComplexVector gradient;
};

/// Thrown when the nearest-point refinement stalls; carries the best frame
/// found so far.
class frame_convergence_error : public convergence_error {
public:
    frame_convergence_error(const std::string& what, BoundaryFrame best)
        : convergence_error(what), best_frame(std::move(best)) {}
    BoundaryFrame best_frame;
};

/// X = normal_part * nu + tangential, with <nu, tangential> = 0.
inline std::pair<cplx, ComplexVector> normal_decompose(const BoundaryFrame& frame,
                                                       const ComplexVector& X) {
    cplx normal_part = hermitian_inner(frame.inward_normal, X);
    ComplexVector tangential = X - normal_part * frame.inward_normal;
    return {normal_part, tangential};
}

struct NearestConfig {
    int coarse_directions = 10000;
    int march_steps = 128;
    int bisect_iters = 70;
    double refine_tol = 1e-9;
    int refine_evals = 4000;
};

namespace detail {

/// First boundary crossing along z + t*u, t > 0 (u a unit direction).
/// Marches to bracket the first sign change, then bisects. Returns +inf if
/// no crossing was bracketed (cannot happen for bounded domains with sane
/// step counts, kept as a guard).
inline double first_boundary_hit(const ModelDomain& d, const ComplexVector& z,
                                 const ComplexVector& u, const NearestConfig& cfg) {
    const double t_max = 2.0 * d.bounding_radius() + z.norm() + 1.0;
    const double dt = t_max / cfg.march_steps;
    double t_lo = 0.0;
    double t_hi = -1.0;
    for (int i = 1; i <= cfg.march_steps; ++i) {
        double t = dt * i;
        if (defining_value(d, z + cplx(t, 0.0) * u) >= 0.0) {
            t_lo = dt * (i - 1);
            t_hi = t;
            break;
        }
    }
    if (t_hi < 0.0) return std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.bisect_iters; ++i) {
        double mid = 0.5 * (t_lo + t_hi);
        if (defining_value(d, z + cplx(mid, 0.0) * u) >= 0.0)
            t_hi = mid;
        else
            t_lo = mid;
    }
    return 0.5 * (t_lo + t_hi);
}

inline BoundaryFrame frame_from_foot(const ComplexVector& z, const ComplexVector& foot) {
    BoundaryFrame f;
    f.foot = foot;
    f.distance = distance(z, foot);
    f.inward_normal = normalized(z - foot);
    f.gradient = f.inward_normal;
    return f;
}

/// Real orthonormal basis of the orthogonal complement of u in R^{2n},
/// expressed as complex vectors (Gram-Schmidt against the coordinate frame).
inline std::vector<ComplexVector> real_tangent_basis(const ComplexVector& u) {
    const std::size_t n = u.size();
    auto real_dot = [&](const ComplexVector& a, const ComplexVector& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        return s;
    };
    std::vector<ComplexVector> basis;
    basis.reserve(2 * n - 1);
    for (std::size_t j = 0; j < 2 * n && basis.size() < 2 * n - 1; ++j) {
        ComplexVector e(n);
        e[j / 2] = (j % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        ComplexVector v = e - real_dot(e, u) * u;
        for (const ComplexVector& b : basis) v -= cplx(real_dot(v, b), 0.0) * b;
        double nv = v.norm();
        if (nv > 1e-8) v *= cplx(1.0 / nv, 0.0), basis.push_back(v);
    }
    return basis;
}

} // namespace detail

/// Nearest boundary point of z, as a BoundaryFrame. Disk/polydisk/ball
/// variants use their closed forms; the curved variants use coarse
/// direction sampling followed by derivative-free refinement over the
/// direction sphere. When the minimizer is not unique the returned foot is
/// the refinement of the best coarse sample, so it can change under
/// sampling-density changes.
inline BoundaryFrame nearest_boundary_frame(const ModelDomain& d, const ComplexVector& z,
                                            const NearestConfig& cfg = {}) {
    if (static_cast<int>(z.size()) != d.dim())
        throw dimension_error("nearest_boundary_frame: dimension mismatch");
    if (!(defining_value(d, z) < 0.0))
        throw geometry_error("nearest_boundary_frame: point not strictly inside");

    switch (d.kind()) {
        case DomainKind::UnitDisk:
        case DomainKind::Ball: {
            double r = d.kind() == DomainKind::Ball ? d.radius() : 1.0;
            ComplexVector dir = z.is_zero() ? [&] {
                ComplexVector e(z.size());
                e[0] = cplx(1.0, 0.0);
                return e;
            }() : normalized(z);
            return detail::frame_from_foot(z, cplx(r, 0.0) * dir);
        }
        case DomainKind::Polydisk: {
            std::size_t best = 0;
            double best_gap = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < z.size(); ++c) {
                double gap = d.radii()[c] - std::abs(z[c]);
                if (gap < best_gap) best_gap = gap, best = c;
            }
            ComplexVector foot = z;
            cplx zc = z[best];
            cplx phase = std::abs(zc) > 0.0 ? zc / std::abs(zc) : cplx(1.0, 0.0);
            foot[best] = d.radii()[best] * phase;
            return detail::frame_from_foot(z, foot);
        }
        default: break;
    }

    // Coarse pass over quasi-uniform directions.
    const std::size_t n = z.size();
    auto dirs = quasi_unit_directions(n, static_cast<std::size_t>(cfg.coarse_directions));
    ComplexVector best_u = dirs.front();
    double best_t = std::numeric_limits<double>::infinity();
    for (const ComplexVector& u : dirs) {
        double t = detail::first_boundary_hit(d, z, u, cfg);
        if (t < best_t) best_t = t, best_u = u;
    }
    if (!std::isfinite(best_t))
        throw geometry_error("nearest_boundary_frame: no boundary crossing found");

    // Refine over tangent offsets of the direction.
    auto basis = detail::real_tangent_basis(best_u);
    auto objective = [&](const std::vector<double>& w) {
        ComplexVector u = best_u;
        for (std::size_t i = 0; i < basis.size(); ++i) u += cplx(w[i], 0.0) * basis[i];
        u = normalized(u);
        return -detail::first_boundary_hit(d, z, u, cfg);
    };
    std::vector<double> w0(basis.size(), 0.0);
    std::vector<double> steps(basis.size(), 0.05);
    auto r = pattern_search_maximize(objective, w0, steps, cfg.refine_evals, 1e-11);

    ComplexVector u = best_u;
    for (std::size_t i = 0; i < basis.size(); ++i) u += cplx(r.x[i], 0.0) * basis[i];
    u = normalized(u);
    double t = detail::first_boundary_hit(d, z, u, cfg);
    BoundaryFrame frame = detail::frame_from_foot(z, z + cplx(t, 0.0) * u);
    if (!r.converged)
        throw frame_convergence_error("nearest_boundary_frame: refinement hit its evaluation "
                                      "budget before reaching tolerance",
                                      frame);
    return frame;
}

/// Random boundary point, by shooting a random ray from an interior point.
/// Test-side oracle for minimality checks; exposed because the CLI uses it too.
inline ComplexVector random_boundary_point(const ModelDomain& d, Rng& rng,
                                           const NearestConfig& cfg = {}) {
    ComplexVector origin = d.center_heuristic();
    for (int i = 0; i < 1000; ++i) {
        ComplexVector u = rng.unit_vector(static_cast<std::size_t>(d.dim()));
        double t = detail::first_boundary_hit(d, origin, u, cfg);
        if (std::isfinite(t)) return origin + cplx(t, 0.0) * u;
    }
    throw convergence_error("random_boundary_point: no crossing found");
}

} // namespace invmet
