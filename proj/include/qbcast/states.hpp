#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "qbcast/error.hpp"
#include "qbcast/qmath.hpp"

namespace qbcast {

namespace pauli {

inline const ComplexMatrix& identity() {
    static const ComplexMatrix m = ComplexMatrix::identity(2);
    return m;
}
inline const ComplexMatrix& x() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    return m;
}
inline const ComplexMatrix& y() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}});
    return m;
}
inline const ComplexMatrix& z() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    return m;
}
/// sigma_1, sigma_2, sigma_3 = x, y, z for j = 1, 2, 3; j = 0 is the identity.
inline const ComplexMatrix& sigma(int j) {
    switch (j) {
        case 0: return identity();
        case 1: return x();
        case 2: return y();
        case 3: return z();
        default: throw Error("bad-index", "pauli index must be 0..3");
    }
}

}  // namespace pauli

/// A validated two-qubit state: 4x4, Hermitian, unit trace and PSD.
class DensityMatrix {
public:
    const ComplexMatrix& matrix() const noexcept { return m_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    friend DensityMatrix validate_density(const ComplexMatrix& m);

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

inline DensityMatrix validate_density(const ComplexMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) throw Error("bad-dimension", "two-qubit state must be 4x4");
    if (!is_hermitian(m, kHermitianTol)) throw Error("not-hermitian");
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > 1e-10) throw Error("bad-trace", "trace = " + std::to_string(tr.real()));
    const auto eig = hermitian_eig(m);
    if (eig.values.back() < -kPsdClamp)
        throw Error("not-psd", "smallest eigenvalue " + std::to_string(eig.values.back()));
    return DensityMatrix(m);
}

/// Two-qubit state with support only on the diagonal and anti-diagonal.
struct XState {
    double rho11 = 0, rho22 = 0, rho33 = 0, rho44 = 0;
    cplx rho14 = 0, rho23 = 0;

    /// Unit trace, non-negative populations, PSD 2x2 blocks.
    bool is_valid(double tol = 1e-12) const {
        if (std::abs(rho11 + rho22 + rho33 + rho44 - 1.0) > tol) return false;
        if (rho11 < -tol || rho22 < -tol || rho33 < -tol || rho44 < -tol) return false;
        return std::norm(rho14) <= rho11 * rho44 + tol && std::norm(rho23) <= rho22 * rho33 + tol;
    }

    ComplexMatrix matrix() const {
        ComplexMatrix m(4, 4);
        m(0, 0) = rho11;
        m(1, 1) = rho22;
        m(2, 2) = rho33;
        m(3, 3) = rho44;
        m(0, 3) = rho14;
        m(3, 0) = std::conj(rho14);
        m(1, 2) = rho23;
        m(2, 1) = std::conj(rho23);
        return m;
    }

    DensityMatrix density() const { return validate_density(matrix()); }
};

inline XState as_x_state(const DensityMatrix& rho, double tol = 1e-10) {
    static constexpr std::array<std::pair<int, int>, 8> kOffX{
        {{0, 1}, {0, 2}, {1, 0}, {1, 3}, {2, 0}, {2, 3}, {3, 1}, {3, 2}}};
    for (auto [r, c] : kOffX)
        if (std::abs(rho(r, c)) > tol)
            throw Error("not-x-state", "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") is nonzero");
    return XState{rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(3, 3).real(), rho(0, 3), rho(1, 2)};
}

/// Local Bloch vectors r, s and correlation matrix T, Pauli order (x, y, z).
struct FanoForm {
    Real3 r{};
    Real3 s{};
    Real3x3 t{};
};

namespace detail {

/// sigma_m x sigma_n for m, n in 0..3 (0 = identity).
inline const std::array<std::array<ComplexMatrix, 4>, 4>& pauli_products() {
    static const auto table = [] {
        std::array<std::array<ComplexMatrix, 4>, 4> t;
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) t[m][n] = kron(pauli::sigma(m), pauli::sigma(n));
        return t;
    }();
    return table;
}

}  // namespace detail

inline FanoForm fano_decompose(const DensityMatrix& rho) {
    const auto& ops = detail::pauli_products();
    // Tr(rho A) for Hermitian A
    auto expect = [&](const ComplexMatrix& a) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) acc += (rho(i, j) * a(j, i)).real();
        return acc;
    };
    FanoForm f;
    for (int j = 1; j <= 3; ++j) {
        f.r[j - 1] = expect(ops[j][0]);
        f.s[j - 1] = expect(ops[0][j]);
        for (int n = 1; n <= 3; ++n) f.t[j - 1][n - 1] = expect(ops[j][n]);
    }
    return f;
}

inline DensityMatrix fano_compose(const FanoForm& f) {
    const auto& ops = detail::pauli_products();
    ComplexMatrix m = ComplexMatrix::identity(4);
    for (int j = 1; j <= 3; ++j) {
        m += f.r[j - 1] * ops[j][0];
        m += f.s[j - 1] * ops[0][j];
        for (int n = 1; n <= 3; ++n) m += f.t[j - 1][n - 1] * ops[j][n];
    }
    return validate_density(m * 0.25);
}

/// alpha|00> + beta|11>
struct PureTwoQubit {
    cplx alpha;
    cplx beta;

    PureTwoQubit(cplx a, cplx b) : alpha(a), beta(b) {
        if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) throw Error("not-normalized");
    }

    /// beta is taken real and non-negative.
    static PureTwoQubit from_alpha(cplx a) {
        const double a2 = std::norm(a);
        if (a2 > 1.0 + 1e-12) throw Error("alpha-out-of-range", "|alpha| must be <= 1");
        return PureTwoQubit(a, std::sqrt(std::max(0.0, 1.0 - a2)));
    }

    double abs_alpha() const { return std::abs(alpha); }
    double abs_beta() const { return std::abs(beta); }
    std::array<cplx, 4> amplitudes() const { return {alpha, 0.0, 0.0, beta}; }
};

inline DensityMatrix pure_projector(const PureTwoQubit& psi) {
    const auto a = psi.amplitudes();
    return validate_density(StateVector({a.begin(), a.end()}).projector());
}

using QubitState = std::array<cplx, 2>;

/// Haar-uniform pure qubit: normalized complex Gaussian vector.
inline QubitState sample_haar_qubit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        QubitState v{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
        const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        if (n < 1e-150) continue;
        v[0] /= n;
        v[1] /= n;
        return v;
    }
}

}  // namespace qbcast
