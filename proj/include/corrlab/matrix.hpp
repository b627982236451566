// Dense complex matrices for small Hilbert spaces (dim <= 8) and a
// cyclic-Jacobi eigensolver for Hermitian matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlab {

using cplx = std::complex<double>;

class Matrix {
public:
    Matrix() : n_(0) {}
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, cplx{0.0, 0.0}) {
        if (n < 1) throw std::invalid_argument("Matrix: dimension must be >= 1, got " + std::to_string(n));
    }
    Matrix(int n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
        if (n < 1) throw std::invalid_argument("Matrix: dimension must be >= 1, got " + std::to_string(n));
        if (a_.size() != static_cast<size_t>(n) * n)
            throw std::invalid_argument("Matrix: entry count does not match dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    Matrix operator+(const Matrix& o) const {
        check_same_dim(o, "+");
        Matrix r(n_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_dim(o, "-");
        Matrix r(n_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        check_same_dim(o, "*");
        Matrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }
    Matrix operator*(cplx s) const {
        Matrix r(n_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
        return r;
    }
    friend Matrix operator*(cplx s, const Matrix& m) { return m * s; }

    Matrix adjoint() const {
        Matrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    // Kronecker product; row index of the result is i*o.n + k.
    Matrix tensor(const Matrix& o) const {
        Matrix r(n_ * o.n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < o.n_; ++k)
                    for (int l = 0; l < o.n_; ++l)
                        r(i * o.n_ + k, j * o.n_ + l) = (*this)(i, j) * o(k, l);
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    bool is_hermitian(double tol) const {
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    double hermiticity_defect() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

private:
    void check_same_dim(const Matrix& o, const char* op) const {
        if (n_ != o.n_)
            throw std::invalid_argument(std::string("Matrix") + op + ": dimension mismatch " +
                                        std::to_string(n_) + " vs " + std::to_string(o.n_));
    }

    int n_;
    std::vector<cplx> a_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi for Hermitian matrices. Each rotation U = diag-phase * Givens
// annihilates one off-diagonal pair; sweeps continue until the off-diagonal
// norm drops below off_tol (relative to the matrix scale).
inline EigenSystem hermitian_eigensystem(Matrix a, double off_tol = 1e-12) {
    const int n = a.dim();
    if (!a.is_hermitian(1e-9))
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian (defect " +
                                    std::to_string(a.hermiticity_defect()) + ")");
    Matrix v = Matrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());
    const double threshold = off_tol * scale;

    for (int sweep = 0; sweep < 100 && detail::off_diagonal_norm(a) > threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) continue;
                const cplx phase = a(p, q) / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // Plane rotation R: R(p,p)=c*phase, R(p,q)=s*phase, R(q,p)=-s, R(q,q)=c.
                const cplx rp = c * phase, rq = s * phase;
                for (int k = 0; k < n; ++k) {  // A <- A R, V <- V R
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * rp - akq * s;
                    a(k, q) = akp * rq + akq * c;
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * rp - vkq * s;
                    v(k, q) = vkp * rq + vkq * c;
                }
                for (int k = 0; k < n; ++k) {  // A <- R^H A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(rp) * apk - s * aqk;
                    a(q, k) = std::conj(rq) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    EigenSystem es;
    es.values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });
    es.vectors = Matrix(n);
    for (int k = 0; k < n; ++k) {
        es.values[k] = diag[order[k]];
        for (int i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
    }
    return es;
}

}  // namespace corrlab
