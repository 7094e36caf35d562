#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "invmet/errors.hpp"

namespace invmet {

using cplx = std::complex<double>;

/// Point / tangent vector in complex n-space. The universal coordinate
/// carrier: domain points z, directions X, normals nu all use it.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : c_(n, cplx(0.0, 0.0)) {}
    ComplexVector(std::initializer_list<cplx> init) : c_(init) {}
    explicit ComplexVector(std::vector<cplx> components) : c_(std::move(components)) {}

    std::size_t size() const { return c_.size(); }
    bool empty() const { return c_.empty(); }

    cplx& operator[](std::size_t i) { return c_[i]; }
    const cplx& operator[](std::size_t i) const { return c_[i]; }

    const std::vector<cplx>& components() const { return c_; }

    bool is_finite() const {
        for (const cplx& z : c_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& z : c_) s += std::norm(z);
        return s;
    }

    double norm() const { return std::sqrt(norm_sq()); }

    /// Sup-norm over coordinates, the |.| of the q(z') term.
    double sup_norm() const {
        double s = 0.0;
        for (const cplx& z : c_) s = std::max(s, std::abs(z));
        return s;
    }

    bool is_zero() const {
        for (const cplx& z : c_)
            if (z != cplx(0.0, 0.0)) return false;
        return true;
    }

    ComplexVector& operator+=(const ComplexVector& r) {
        require_same_size(r);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += r.c_[i];
        return *this;
    }
    ComplexVector& operator-=(const ComplexVector& r) {
        require_same_size(r);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= r.c_[i];
        return *this;
    }
    ComplexVector& operator*=(cplx s) {
        for (cplx& z : c_) z *= s;
        return *this;
    }

    friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
    friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
    friend ComplexVector operator*(cplx s, ComplexVector a) { return a *= s; }
    friend ComplexVector operator*(ComplexVector a, cplx s) { return a *= s; }

    void require_same_size(const ComplexVector& r) const {
        if (c_.size() != r.c_.size())
            throw dimension_error("vector length mismatch: " + std::to_string(c_.size()) +
                                  " vs " + std::to_string(r.c_.size()));
    }

private:
    std::vector<cplx> c_;
};

/// Standard hermitian product, conjugate-linear in the FIRST argument:
///   <X,Y> = sum conj(X_i) * Y_i.
/// The convention is fixed here once; everything else in the library uses it.
inline cplx hermitian_inner(const ComplexVector& x, const ComplexVector& y) {
    x.require_same_size(y);
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline ComplexVector normalized(const ComplexVector& v) {
    double n = v.norm();
    if (n == 0.0) throw parameter_error("cannot normalize the zero vector");
    ComplexVector out = v;
    out *= cplx(1.0 / n, 0.0);
    return out;
}

inline double distance(const ComplexVector& a, const ComplexVector& b) {
    return (a - b).norm();
}

} // namespace invmet
