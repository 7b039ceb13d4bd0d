#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "qbcast/qmath.hpp"
#include "qbcast/states.hpp"

namespace qbcast {

/// Which term of the concurrence maximum was active.
///  - zero:         the state is separable
///  - diagonal:     |rho14| - sqrt(rho22 rho33), coherence inside span{|00>,|11>}
///  - antidiagonal: |rho23| - sqrt(rho11 rho44), coherence inside span{|01>,|10>}
///  - spectral:     general (non-X) Wootters evaluation, positive result
enum class ConcurrenceBranch { zero, antidiagonal, diagonal, spectral };

struct ConcurrenceResult {
    double value = 0.0;
    ConcurrenceBranch branch = ConcurrenceBranch::zero;
};

inline const ComplexMatrix& sigma_y_sigma_y() {
    static const ComplexMatrix m = kron(pauli::y(), pauli::y());
    return m;
}

/// rho' = (sigma_y x sigma_y) rho* (sigma_y x sigma_y)
inline ComplexMatrix spin_flip(const ComplexMatrix& rho) {
    const auto& yy = sigma_y_sigma_y();
    return yy * rho.conjugate() * yy;
}
inline ComplexMatrix spin_flip(const DensityMatrix& rho) { return spin_flip(rho.matrix()); }

/// 2|ad - bc| for a|00> + b|01> + c|10> + d|11>.
inline double concurrence_pure(const std::array<cplx, 4>& psi) {
    return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}
inline double concurrence_pure(const PureTwoQubit& psi) { return concurrence_pure(psi.amplitudes()); }

/// Square roots sqrt(nu_1) >= ... >= sqrt(nu_4) of the eigenvalues of rho rho'.
///
/// These are the singular values of M = sqrt(rho) sqrt(rho'), since
/// M M^dagger = sqrt(rho) rho' sqrt(rho). They are read off as the upper half
/// of the spectrum of the Hermitian embedding [[0, M], [M^dagger, 0]], which
/// keeps small values accurate to machine precision instead of to its square
/// root.
inline std::array<double, 4> wootters_lambdas(const DensityMatrix& rho) {
    const ComplexMatrix sq = psd_sqrt(rho.matrix());
    const ComplexMatrix sq_flip = spin_flip(sq);
    const ComplexMatrix m = sq * sq_flip;

    ComplexMatrix h(8, 8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            h(i, 4 + j) = m(i, j);
            h(4 + j, i) = std::conj(m(i, j));
        }
    const auto eig = hermitian_eig(h);
    std::array<double, 4> lam{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (eig.values[k] < -kPsdClamp) throw Error("not-psd", "negative Wootters eigenvalue");
        lam[k] = std::max(0.0, eig.values[k]);
    }
    return lam;
}

inline ConcurrenceResult concurrence_general(const DensityMatrix& rho) {
    const auto lam = wootters_lambdas(rho);
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    if (c > 0.0) return {std::min(c, 1.0), ConcurrenceBranch::spectral};
    return {0.0, ConcurrenceBranch::zero};
}

/// 2 max{0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33)}
inline ConcurrenceResult concurrence_x(const XState& x) {
    const double anti = std::abs(x.rho23) - std::sqrt(std::max(0.0, x.rho11 * x.rho44));
    const double diag = std::abs(x.rho14) - std::sqrt(std::max(0.0, x.rho22 * x.rho33));
    if (anti <= 0.0 && diag <= 0.0) return {0.0, ConcurrenceBranch::zero};
    if (diag >= anti) return {2.0 * diag, ConcurrenceBranch::diagonal};
    return {2.0 * anti, ConcurrenceBranch::antidiagonal};
}

/// Partial transpose on the second qubit.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho) {
    ComplexMatrix out(4, 4);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
    return out;
}

inline bool is_ppt(const DensityMatrix& rho, double tol = 1e-10) {
    return hermitian_eig(partial_transpose(rho.matrix())).values.back() >= -tol;
}

}  // namespace qbcast
