#pragma once

// Dense complex linear algebra for the small matrices used throughout the
// library (at most 64x64): Kronecker products, partial traces, a cyclic
// Jacobi Hermitian eigensolver, PSD square roots and 3x3 singular values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "qbcast/error.hpp"

namespace qbcast {

using cplx = std::complex<double>;
using Real3 = std::array<double, 3>;
using Real3x3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kMatrixTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdClamp = 1e-10;

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() : ComplexMatrix(1, 1) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) throw Error("bad-dimension", "matrix must be at least 1x1");
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows == 0 || cols == 0 || data_.size() != rows * cols)
            throw Error("bad-dimension", "entry count does not match shape");
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.begin()->size() : 0;
        std::vector<cplx> entries;
        entries.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw Error("bad-dimension", "ragged initializer");
            entries.insert(entries.end(), row.begin(), row.end());
        }
        return ComplexMatrix(r, c, std::move(entries));
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static ComplexMatrix diagonal(std::initializer_list<double> d) {
        return diagonal(std::span<const double>(d.begin(), d.size()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cplx> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
        return out;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out = *this;
        for (auto& z : out.data_) z = std::conj(z);
        return out;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& z : data_) z *= s;
        return *this;
    }
    ComplexMatrix& operator/=(cplx s) {
        for (auto& z : data_) z /= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator/(ComplexMatrix a, cplx s) { return a /= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw Error("bad-dimension", "matrix product shape mismatch");
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    /// Largest entrywise absolute difference; shapes must agree.
    double max_abs_diff(const ComplexMatrix& o) const {
        require_same_shape(o);
        double d = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) d = std::max(d, std::abs(data_[i] - o.data_[i]));
        return d;
    }

    bool approx_equal(const ComplexMatrix& o, double tol = kMatrixTol) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && max_abs_diff(o) <= tol;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("bad-dimension", "shape mismatch");
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

/// Normalized pure state on a power-of-two dimensional space.
class StateVector {
public:
    explicit StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        const std::size_t n = amps_.size();
        if (n == 0 || (n & (n - 1)) != 0) throw Error("bad-dimension", "state dimension must be a power of two");
        double norm2 = 0.0;
        for (const auto& a : amps_) norm2 += std::norm(a);
        if (!(norm2 > 0.0)) throw Error("zero-norm");
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& a : amps_) a *= inv;
    }

    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    ComplexMatrix projector() const {
        const std::size_t n = amps_.size();
        ComplexMatrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
        return p;
    }

private:
    std::vector<cplx> amps_;
};

inline std::vector<cplx> apply(const ComplexMatrix& m, std::span<const cplx> v) {
    if (m.cols() != v.size()) throw Error("bad-dimension", "matrix-vector shape mismatch");
    std::vector<cplx> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
    std::vector<cplx> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

/// Traces out every subsystem not listed in `keep`. Subsystem 0 is the most
/// significant digit of the row index. Kept subsystems stay in their
/// original relative order regardless of the order they are listed in.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> subsystem_dims,
                                   std::span<const std::size_t> keep) {
    if (!m.is_square()) throw Error("bad-partition", "matrix is not square");
    const std::size_t n_sub = subsystem_dims.size();
    std::size_t total = 1;
    for (auto d : subsystem_dims) {
        if (d == 0) throw Error("bad-partition", "zero subsystem dimension");
        total *= d;
    }
    if (total != m.rows()) throw Error("bad-partition", "subsystem dimensions do not multiply to matrix size");

    std::vector<bool> kept(n_sub, false);
    for (auto k : keep) {
        if (k >= n_sub || kept[k]) throw Error("bad-partition", "invalid or repeated kept subsystem");
        kept[k] = true;
    }

    // stride of each subsystem in the full index
    std::vector<std::size_t> stride(n_sub, 1);
    for (std::size_t s = n_sub; s-- > 1;) stride[s - 1] = stride[s] * subsystem_dims[s];

    std::size_t keep_dim = 1, trace_dim = 1;
    for (std::size_t s = 0; s < n_sub; ++s) (kept[s] ? keep_dim : trace_dim) *= subsystem_dims[s];

    // offset in the full index contributed by each kept / traced multi-index
    auto offsets = [&](bool want_kept, std::size_t count) {
        std::vector<std::size_t> out(count, 0);
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::size_t rem = idx, off = 0;
            for (std::size_t s = n_sub; s-- > 0;) {
                if (kept[s] != want_kept) continue;
                off += (rem % subsystem_dims[s]) * stride[s];
                rem /= subsystem_dims[s];
            }
            out[idx] = off;
        }
        return out;
    };
    const auto keep_off = offsets(true, keep_dim);
    const auto trace_off = offsets(false, trace_dim);

    ComplexMatrix out(keep_dim, keep_dim);
    for (std::size_t i = 0; i < keep_dim; ++i)
        for (std::size_t j = 0; j < keep_dim; ++j) {
            cplx acc = 0.0;
            for (auto t : trace_off) acc += m(keep_off[i] + t, keep_off[j] + t);
            out(i, j) = acc;
        }
    return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::initializer_list<std::size_t> subsystem_dims,
                                   std::initializer_list<std::size_t> keep) {
    return partial_trace(m, std::span<const std::size_t>(subsystem_dims.begin(), subsystem_dims.size()),
                         std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

struct EigenDecomposition {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column k belongs to values[k]
};

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot, then applies the real symmetric Jacobi rotation.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
    if (!is_hermitian(m)) throw Error("not-hermitian");
    const std::size_t n = m.rows();
    ComplexMatrix a = (m + m.adjoint()) * 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= 1e-13 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const cplx phase = apq / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx s_ph = s * phase;
                const cplx s_phc = s * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s_phc * akq;
                    a(k, q) = s_ph * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s_ph * aqk;
                    a(q, k) = s_phc * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s_phc * vkq;
                    v(k, q) = s_ph * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// V diag(f(lambda)) V^dagger
template <class F>
ComplexMatrix spectral_apply(const EigenDecomposition& eig, F&& f) {
    const std::size_t n = eig.values.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(eig.values[k]);
        if (fk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eig.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
        }
    }
    return out;
}

/// Square root of a Hermitian PSD matrix. Eigenvalues in [-1e-10, 0) are
/// treated as round-off and clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    const auto eig = hermitian_eig(m);
    if (eig.values.back() < -kPsdClamp) throw Error("not-psd", "smallest eigenvalue " + std::to_string(eig.values.back()));
    return spectral_apply(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// One-sided (Hestenes) Jacobi SVD; returns s1 >= s2 >= s3 >= 0.
inline Real3 singular_values_3x3(const Real3x3& t) {
    // work on columns
    std::array<Real3, 3> col{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) col[j][i] = t[i][j];

    auto dot = [](const Real3& x, const Real3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; };

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < 2; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double alpha = dot(col[i], col[i]);
                const double beta = dot(col[j], col[j]);
                const double gamma = dot(col[i], col[j]);
                if (std::abs(gamma) <= 1e-17 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double tn = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + tn * tn);
                const double s = c * tn;
                for (int k = 0; k < 3; ++k) {
                    const double xi = col[i][k], xj = col[j][k];
                    col[i][k] = c * xi - s * xj;
                    col[j][k] = s * xi + c * xj;
                }
            }
        if (!rotated) break;
    }

    Real3 sv{std::sqrt(dot(col[0], col[0])), std::sqrt(dot(col[1], col[1])), std::sqrt(dot(col[2], col[2]))};
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace qbcast
