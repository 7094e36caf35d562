#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "invmet/complex_vec.hpp"
#include "invmet/errors.hpp"
#include "invmet/rng.hpp"

namespace invmet {

// Parametric model domains. Each variant is described by one or more smooth
// defining pieces r_i(z); the domain is { z : max_i r_i(z) < 0 }. Keeping the
// pieces explicit (values, Wirtinger gradients, gradient and curvature bounds)
// is what makes sampled containment checks certifiable.

enum class DomainKind {
    UnitDisk,  // { |z| < 1 } in C
    Polydisk,  // product of disks of given radii
    Ball,      // euclidean ball of given radius
    HalfParab, // G = { Re z < |w|^2 } cap D^2
    GEpsilon,  // B_n(0,eps) cap { Re z1 - |z2|^m + |z'|_sup^k < 0 }
    OmegaXi    // { Re z < |w|^xi + |Im z|^xi } cap D^2
};

struct Margin {
    double value = 0.0;
    Margin() = default;
    explicit Margin(double v) : value(v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw parameter_error("margin must be finite and >= 0");
    }
};

class ModelDomain {
public:
    static ModelDomain unit_disk() {
        ModelDomain d;
        d.kind_ = DomainKind::UnitDisk;
        d.dim_ = 1;
        return d.validated();
    }

    static ModelDomain polydisk(int n, std::vector<double> radii) {
        if (n < 1) throw parameter_error("polydisk: n must be >= 1");
        if (radii.size() == 1) radii.assign(static_cast<std::size_t>(n), radii[0]);
        if (static_cast<int>(radii.size()) != n)
            throw parameter_error("polydisk: need one radius or n radii");
        for (double r : radii)
            if (!(r > 0.0)) throw parameter_error("polydisk: radii must be > 0");
        ModelDomain d;
        d.kind_ = DomainKind::Polydisk;
        d.dim_ = n;
        d.radii_ = std::move(radii);
        return d.validated();
    }

    static ModelDomain ball(int n, double radius) {
        if (n < 1) throw parameter_error("ball: n must be >= 1");
        if (!(radius > 0.0)) throw parameter_error("ball: radius must be > 0");
        ModelDomain d;
        d.kind_ = DomainKind::Ball;
        d.dim_ = n;
        d.radius_ = radius;
        return d.validated();
    }

    static ModelDomain half_parab() {
        ModelDomain d;
        d.kind_ = DomainKind::HalfParab;
        d.dim_ = 2;
        return d.validated();
    }

    static ModelDomain g_epsilon(double eps, double m, double k, int n) {
        if (!(eps > 0.0)) throw parameter_error("geps: eps must be > 0");
        if (!(m >= 1.0)) throw parameter_error("geps: m must be >= 1");
        if (!(k > 0.0 && k <= m)) throw parameter_error("geps: need 0 < k <= m");
        if (n < 2) throw parameter_error("geps: n must be >= 2");
        ModelDomain d;
        d.kind_ = DomainKind::GEpsilon;
        d.dim_ = n;
        d.eps_ = eps;
        d.m_ = m;
        d.k_ = k;
        return d.validated();
    }

    static ModelDomain omega_xi(double xi) {
        if (!(xi > 1.0)) throw parameter_error("omega: xi must be > 1");
        ModelDomain d;
        d.kind_ = DomainKind::OmegaXi;
        d.dim_ = 2;
        d.xi_ = xi;
        return d.validated();
    }

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<double>& radii() const { return radii_; }
    double radius() const { return radius_; }
    double eps() const { return eps_; }
    double m() const { return m_; }
    double k() const { return k_; }
    double xi() const { return xi_; }

    /// Canonical interior point, used by samplers and the construction check.
    ComplexVector center_heuristic() const {
        ComplexVector p(static_cast<std::size_t>(dim_));
        switch (kind_) {
            case DomainKind::UnitDisk:
            case DomainKind::Polydisk:
            case DomainKind::Ball: return p;
            case DomainKind::HalfParab:
            case DomainKind::GEpsilon:
            case DomainKind::OmegaXi: p[0] = cplx(-0.25, 0.0); return p;
        }
        return p;
    }

    /// Radius of a euclidean ball centered at 0 containing the domain.
    double bounding_radius() const {
        switch (kind_) {
            case DomainKind::UnitDisk: return 1.0;
            case DomainKind::Polydisk: {
                double s = 0.0;
                for (double r : radii_) s += r * r;
                return std::sqrt(s);
            }
            case DomainKind::Ball: return radius_;
            case DomainKind::HalfParab: return std::sqrt(2.0);
            case DomainKind::GEpsilon: return eps_;
            case DomainKind::OmegaXi: return std::sqrt(2.0);
        }
        return 1.0;
    }

    /// Per-coordinate sup of |z_c| over the domain (closed form per variant).
    double coordinate_sup(std::size_t c) const {
        check_coord(c);
        switch (kind_) {
            case DomainKind::UnitDisk: return 1.0;
            case DomainKind::Polydisk: return radii_[c];
            case DomainKind::Ball: return radius_;
            case DomainKind::HalfParab: return 1.0;
            case DomainKind::GEpsilon: return eps_;
            case DomainKind::OmegaXi: return 1.0;
        }
        return 1.0;
    }

private:
    ModelDomain validated() const {
        // Nonempty at the canonical interior point.
        ModelDomain d = *this;
        ComplexVector p = d.center_heuristic();
        if (!(d.defining_value_impl(p) < 0.0))
            throw parameter_error("domain is empty at its canonical interior point");
        return d;
    }

    void check_coord(std::size_t c) const {
        if (c >= static_cast<std::size_t>(dim_))
            throw dimension_error("coordinate index out of range");
    }

    friend double defining_value(const ModelDomain&, const ComplexVector&);
    friend int piece_count(const ModelDomain&);
    friend double piece_value(const ModelDomain&, int, const ComplexVector&);
    friend ComplexVector piece_wirtinger(const ModelDomain&, int, const ComplexVector&);
    friend double piece_grad_bound(const ModelDomain&, int, double);
    friend double piece_hess_plus_bound(const ModelDomain&, int, double);

    double defining_value_impl(const ComplexVector& z) const;

    DomainKind kind_ = DomainKind::UnitDisk;
    int dim_ = 1;
    std::vector<double> radii_;
    double radius_ = 1.0;
    double eps_ = 2.0, m_ = 2.0, k_ = 2.0;
    double xi_ = 2.0;
};

// ---------------------------------------------------------------------------
// Defining pieces.
//
// Piece enumeration per variant:
//   UnitDisk:  |z1|^2 - 1
//   Polydisk:  |z_c|^2 - r_c^2                          (one per coordinate)
//   Ball:      |z|^2 - r^2
//   HalfParab: Re z1 - |z2|^2, |z1|^2 - 1, |z2|^2 - 1
//   GEpsilon:  Re z1 - |z2|^m + |z_j|^k  (one per j >= 3; a single q-free
//              piece when n = 2), then |z|^2 - eps^2.
//              The sup-norm q distributes over the max, so each j gives a
//              smooth piece.
//   OmegaXi:   Re z1 - |z2|^xi - |Im z1|^xi, |z1|^2 - 1, |z2|^2 - 1
// ---------------------------------------------------------------------------

inline int piece_count(const ModelDomain& d) {
    switch (d.kind_) {
        case DomainKind::UnitDisk: return 1;
        case DomainKind::Polydisk: return d.dim_;
        case DomainKind::Ball: return 1;
        case DomainKind::HalfParab: return 3;
        case DomainKind::GEpsilon: return (d.dim_ >= 3 ? d.dim_ - 2 : 1) + 1;
        case DomainKind::OmegaXi: return 3;
    }
    return 0;
}

namespace detail {
inline double pow_abs(double a, double p) { return a <= 0.0 ? 0.0 : std::pow(a, p); }
}

inline double piece_value(const ModelDomain& d, int i, const ComplexVector& z) {
    if (static_cast<int>(z.size()) != d.dim_)
        throw dimension_error("point dimension does not match domain");
    switch (d.kind_) {
        case DomainKind::UnitDisk: return std::norm(z[0]) - 1.0;
        case DomainKind::Polydisk: return std::norm(z[static_cast<std::size_t>(i)]) -
                                          d.radii_[static_cast<std::size_t>(i)] * d.radii_[static_cast<std::size_t>(i)];
        case DomainKind::Ball: return z.norm_sq() - d.radius_ * d.radius_;
        case DomainKind::HalfParab:
            if (i == 0) return z[0].real() - std::norm(z[1]);
            if (i == 1) return std::norm(z[0]) - 1.0;
            return std::norm(z[1]) - 1.0;
        case DomainKind::GEpsilon: {
            int qpieces = d.dim_ >= 3 ? d.dim_ - 2 : 1;
            if (i < qpieces) {
                double q = d.dim_ >= 3 ? detail::pow_abs(std::abs(z[static_cast<std::size_t>(i + 2)]), d.k_) : 0.0;
                return z[0].real() - detail::pow_abs(std::abs(z[1]), d.m_) + q;
            }
            return z.norm_sq() - d.eps_ * d.eps_;
        }
        case DomainKind::OmegaXi:
            if (i == 0)
                return z[0].real() - detail::pow_abs(std::abs(z[1]), d.xi_) -
                       detail::pow_abs(std::abs(z[0].imag()), d.xi_);
            if (i == 1) return std::norm(z[0]) - 1.0;
            return std::norm(z[1]) - 1.0;
    }
    throw configuration_error("unknown domain kind");
}

/// Wirtinger gradient (d/dz_c of the piece, as a ComplexVector). For a real
/// function u, the real gradient paired against a holomorphic perturbation
/// phi'(t) is 2 | sum_c du/dz_c * phi_c'(t) |.
inline ComplexVector piece_wirtinger(const ModelDomain& d, int i, const ComplexVector& z) {
    ComplexVector g(z.size());
    auto dz_abs_pow = [](cplx zc, double p) -> cplx {
        // d/dz |z|^p = (p/2) |z|^(p-2) conj(z); the limit at 0 is 0 for p > 1.
        double a = std::abs(zc);
        if (a == 0.0) return cplx(0.0, 0.0);
        return 0.5 * p * detail::pow_abs(a, p - 2.0) * std::conj(zc);
    };
    switch (d.kind_) {
        case DomainKind::UnitDisk: g[0] = std::conj(z[0]); return g;
        case DomainKind::Polydisk: g[static_cast<std::size_t>(i)] = std::conj(z[static_cast<std::size_t>(i)]); return g;
        case DomainKind::Ball:
            for (std::size_t c = 0; c < z.size(); ++c) g[c] = std::conj(z[c]);
            return g;
        case DomainKind::HalfParab:
            if (i == 0) {
                g[0] = cplx(0.5, 0.0);
                g[1] = -std::conj(z[1]);
            } else if (i == 1) {
                g[0] = std::conj(z[0]);
            } else {
                g[1] = std::conj(z[1]);
            }
            return g;
        case DomainKind::GEpsilon: {
            int qpieces = d.dim_ >= 3 ? d.dim_ - 2 : 1;
            if (i < qpieces) {
                g[0] = cplx(0.5, 0.0);
                g[1] = -dz_abs_pow(z[1], d.m_);
                if (d.dim_ >= 3) g[static_cast<std::size_t>(i + 2)] = dz_abs_pow(z[static_cast<std::size_t>(i + 2)], d.k_);
            } else {
                for (std::size_t c = 0; c < z.size(); ++c) g[c] = std::conj(z[c]);
            }
            return g;
        }
        case DomainKind::OmegaXi:
            if (i == 0) {
                double im = z[0].imag();
                double sgn = im > 0.0 ? 1.0 : (im < 0.0 ? -1.0 : 0.0);
                // d/dz Re z = 1/2 and d/dz Im z = -i/2, so the piece
                // Re z1 - |z2|^xi - |Im z1|^xi has
                // d/dz1 = 1/2 + (i/2) xi |Im z1|^{xi-1} sgn(Im z1).
                g[0] = cplx(0.5, 0.5 * d.xi_ * detail::pow_abs(std::abs(im), d.xi_ - 1.0) * sgn);
                g[1] = -dz_abs_pow(z[1], d.xi_);
            } else if (i == 1) {
                g[0] = std::conj(z[0]);
            } else {
                g[1] = std::conj(z[1]);
            }
            return g;
    }
    throw configuration_error("unknown domain kind");
}

/// Bound on the real gradient norm of a piece over { |z| <= R }.
inline double piece_grad_bound(const ModelDomain& d, int i, double R) {
    auto pow_term = [R](double p) {
        if (p < 1.0) return std::numeric_limits<double>::infinity();
        return p * detail::pow_abs(R, p - 1.0);
    };
    switch (d.kind_) {
        case DomainKind::UnitDisk:
        case DomainKind::Polydisk: return 2.0 * R;
        case DomainKind::Ball: return 2.0 * R;
        case DomainKind::HalfParab: return i == 0 ? 1.0 + 2.0 * R : 2.0 * R;
        case DomainKind::GEpsilon: {
            int qpieces = d.dim_ >= 3 ? d.dim_ - 2 : 1;
            if (i < qpieces) {
                double q = d.dim_ >= 3 ? pow_term(d.k_) : 0.0;
                return 1.0 + pow_term(d.m_) + q;
            }
            return 2.0 * R;
        }
        case DomainKind::OmegaXi: return i == 0 ? 1.0 + 2.0 * pow_term(d.xi_) : 2.0 * R;
    }
    throw configuration_error("unknown domain kind");
}

/// One-sided curvature bound: an upper bound for the largest eigenvalue of
/// the real Hessian of the piece over { |z| <= R }. Concave terms (-|z|^m,
/// m >= 1) contribute zero; convex power terms |z|^k contribute
/// k*max(k-1,1)*R^{k-2} for k >= 2 and are unbounded near 0 for k < 2
/// (returns +inf, callers fall back to a first-order bound).
inline double piece_hess_plus_bound(const ModelDomain& d, int i, double R) {
    auto convex_pow = [R](double p) {
        if (p == 2.0) return 2.0;
        if (p < 2.0) return std::numeric_limits<double>::infinity();
        return p * std::max(p - 1.0, 1.0) * detail::pow_abs(R, p - 2.0);
    };
    switch (d.kind_) {
        case DomainKind::UnitDisk:
        case DomainKind::Polydisk:
        case DomainKind::Ball: return 2.0;
        case DomainKind::HalfParab: return i == 0 ? 0.0 : 2.0;
        case DomainKind::GEpsilon: {
            int qpieces = d.dim_ >= 3 ? d.dim_ - 2 : 1;
            if (i < qpieces) return d.dim_ >= 3 ? convex_pow(d.k_) : 0.0;
            return 2.0;
        }
        case DomainKind::OmegaXi: return i == 0 ? 0.0 : 2.0;
    }
    throw configuration_error("unknown domain kind");
}

inline double ModelDomain::defining_value_impl(const ComplexVector& z) const {
    double v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < piece_count(*this); ++i) v = std::max(v, piece_value(*this, i, z));
    return v;
}

/// Signed defining value: negative strictly inside, zero on the boundary,
/// positive outside. For intersected variants this is the max of the pieces.
inline double defining_value(const ModelDomain& d, const ComplexVector& z) {
    return d.defining_value_impl(z);
}

enum class Membership { Inside, Boundary, Outside };

inline Membership membership(const ModelDomain& d, const ComplexVector& z, Margin margin) {
    double v = defining_value(d, z);
    if (v <= -margin.value) return Membership::Inside;
    if (std::abs(v) < margin.value) return Membership::Boundary;
    return Membership::Outside;
}

/// L with |r(z) - r(z')| <= L |z - z'| for |z|,|z'| <= region_radius, from
/// closed-form gradient bounds of the pieces. Fractional powers below 1 are
/// not Lipschitz near the axis and are rejected.
inline double lipschitz_bound(const ModelDomain& d, double region_radius) {
    if (!(region_radius > 0.0)) throw parameter_error("region_radius must be > 0");
    double L = 0.0;
    for (int i = 0; i < piece_count(d); ++i) {
        double g = piece_grad_bound(d, i, region_radius);
        if (!std::isfinite(g))
            throw configuration_error("lipschitz_bound: defining piece has unbounded gradient "
                                      "(power below 1)");
        L = std::max(L, g);
    }
    return L;
}

/// P_delta = (-delta, 0, ..., 0). Must sit inside with margin delta/2.
inline ComplexVector base_point(const ModelDomain& d, double delta) {
    if (!(delta > 0.0)) throw parameter_error("base_point: delta must be > 0");
    ComplexVector p(static_cast<std::size_t>(d.dim()));
    p[0] = cplx(-delta, 0.0);
    if (membership(d, p, Margin(delta / 2.0)) != Membership::Inside)
        throw geometry_error("base_point: delta too large for this domain");
    return p;
}

/// Uniform-ish random interior point via rejection from the bounding box.
inline ComplexVector random_interior(const ModelDomain& d, Rng& rng, double margin = 0.0) {
    double R = d.bounding_radius();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        ComplexVector z(static_cast<std::size_t>(d.dim()));
        for (int c = 0; c < d.dim(); ++c) {
            double bound = std::min(R, d.coordinate_sup(static_cast<std::size_t>(c)));
            z[static_cast<std::size_t>(c)] = cplx(rng.uniform(-bound, bound), rng.uniform(-bound, bound));
        }
        if (defining_value(d, z) <= -margin) return z;
    }
    throw convergence_error("random_interior: rejection sampling failed");
}

// ---------------------------------------------------------------------------
// Domain spec text format:
//   g | disk | polydisk:n=2,r=1 | ball:n=2,r=1 | geps:m=2,k=2,n=3,eps=2 | omega:xi=2
// ---------------------------------------------------------------------------

inline ModelDomain parse_domain(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

    std::vector<std::pair<std::string, double>> kv;
    if (!args.empty()) {
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw configuration_error("domain spec: expected key=value, got '" + item + "'");
            std::string key = item.substr(0, eq);
            try {
                kv.emplace_back(key, std::stod(item.substr(eq + 1)));
            } catch (const std::exception&) {
                throw configuration_error("domain spec: bad value for key '" + key + "'");
            }
        }
    }
    auto get = [&](const std::string& key, std::optional<double> def = std::nullopt) {
        for (auto& [k, v] : kv)
            if (k == key) return v;
        if (def) return *def;
        throw configuration_error("domain spec: missing key '" + key + "'");
    };
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (auto& [k, v] : kv) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || (k == a);
            if (!ok) throw configuration_error("domain spec: unknown key '" + k + "'");
        }
    };

    if (head == "disk") {
        check_keys({});
        return ModelDomain::unit_disk();
    }
    if (head == "g") {
        check_keys({});
        return ModelDomain::half_parab();
    }
    if (head == "polydisk") {
        check_keys({"n", "r"});
        return ModelDomain::polydisk(static_cast<int>(get("n", 2.0)), {get("r", 1.0)});
    }
    if (head == "ball") {
        check_keys({"n", "r"});
        return ModelDomain::ball(static_cast<int>(get("n", 2.0)), get("r", 1.0));
    }
    if (head == "geps") {
        check_keys({"m", "k", "n", "eps"});
        return ModelDomain::g_epsilon(get("eps", 2.0), get("m"), get("k"), static_cast<int>(get("n", 3.0)));
    }
    if (head == "omega") {
        check_keys({"xi"});
        return ModelDomain::omega_xi(get("xi"));
    }
    throw configuration_error("domain spec: unknown domain '" + head + "'");
}

inline std::string domain_spec(const ModelDomain& d) {
    std::ostringstream os;
    switch (d.kind()) {
        case DomainKind::UnitDisk: return "disk";
        case DomainKind::HalfParab: return "g";
        case DomainKind::Polydisk:
            os << "polydisk:n=" << d.dim() << ",r=" << d.radii()[0];
            return os.str();
        case DomainKind::Ball:
            os << "ball:n=" << d.dim() << ",r=" << d.radius();
            return os.str();
        case DomainKind::GEpsilon:
            os << "geps:m=" << d.m() << ",k=" << d.k() << ",n=" << d.dim() << ",eps=" << d.eps();
            return os.str();
        case DomainKind::OmegaXi:
            os << "omega:xi=" << d.xi();
            return os.str();
    }
    return "?";
}

} // namespace invmet
