#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lpres/grid.hpp"
#include "lpres/hardy.hpp"

namespace lpres {

/**
 * Functional calculus of one Hermitian operator A with spectrum in [0, 1].
 *
 * Two storage forms. Generic keeps the complex eigenvectors. Structured is
 * used for the half-line block of the exact Fourier projector: in weighted
 * coordinates that block is T = I/2 + (i/2) K with K real antisymmetric and
 * supported on odd index differences. After an even/odd reordering,
 * K = [[0, B], [-B^T, 0]], so one real SVD B = U S V^T diagonalizes T with
 * eigenvalues (1 +/- s_k)/2.
 */
class SpectralFactor {
public:
    using Fn = std::function<double(double)>;

    static std::shared_ptr<const SpectralFactor> generic(const CMat& hermitian);

    /// Factor of the size-n Fourier half block; memoized per n.
    static std::shared_ptr<const SpectralFactor> structured(int n);

    int n() const { return n_; }
    bool is_structured() const { return structured_; }

    /// Eigenvalues clipped to [0, 1], ascending.
    Vec eigenvalues() const;

    /// Eigenvalues before clipping.
    Vec raw_eigenvalues() const;

    /// h(A) x for a column block X (one column per state).
    CMat apply(const Fn& h, const CMat& x) const;
    CVec apply(const Fn& h, const CVec& x) const;

    /// Dense h(A).
    CMat matrix(const Fn& h) const;

private:
    SpectralFactor() = default;
    void even_odd(const Fn& h, Vec& he, Vec& ho) const;

    int n_ = 0;
    bool structured_ = false;
    // generic
    CMat q_;
    Vec lambda_;
    // structured
    Mat u_;
    Mat v_;
    Vec sigma_;
};

enum class LyapOp {
    MF,         ///< M_F
    MB,         ///< M_B = I - M_F
    LambdaF,    ///< M_F^{1/2}
    LambdaB,    ///< M_B^{1/2}
    LambdaFInv, ///< M_F^{-1/2} on eigenvalues above eigen_floor, 0 below
    OneMinusLambdaB,
};

/// Smallest M_F eigenvalue kept by the regularized inverse: (pi / n)^2.
double eigen_floor(int n);

/**
 * M_F, M_B and their square roots on a half-line grid.
 *
 * All four are functions of one spectral factor of M_F, so they commute
 * exactly and M_F + M_B = I holds to rounding. Dense matrices are built on
 * first request; applications go through the factor.
 */
class LyapunovPair {
public:
    const GridPtr& grid() const;
    const HardyProjector& projector() const;
    const SpectralFactor& factor() const;
    double eigen_floor() const;

    CVec apply_weighted(LyapOp op, const CVec& x) const;
    CMat apply_weighted(LyapOp op, const CMat& x) const;
    StateVector apply(LyapOp op, const StateVector& psi) const;

    const OperatorMatrix& m_f() const;
    const OperatorMatrix& m_b() const;
    const OperatorMatrix& lambda_f() const;
    const OperatorMatrix& lambda_b() const;

    /// Largest over smallest retained eigenvalue of Lambda_F.
    double lambda_f_condition() const;

    struct Impl;

private:
    friend LyapunovPair build_lyapunov_pair(const HardyProjector&, const GridPtr&, const Tolerances&);
    std::shared_ptr<Impl> impl_;
};

/// Uses the structured factor for exact projectors, a dense eigendecomposition otherwise.
LyapunovPair build_lyapunov_pair(const HardyProjector& hp, const GridPtr& half,
                                 const Tolerances& tol = {});

/// Half-line block of P_+, symmetrized and clipped to [0, 1].
OperatorMatrix build_m_f(const HardyProjector& hp, const GridPtr& half);

/// Half-line block of P_-, symmetrized and clipped on its own eigendecomposition.
OperatorMatrix build_m_b(const HardyProjector& hp, const GridPtr& half);

/// Half-line sigma: (M_F, M_B). Full-line sigma: (P_+, P_-) as stored in hp.
std::pair<OperatorMatrix, OperatorMatrix> build_m_general(const HardyProjector& hp,
                                                          const GridPtr& sigma);

/// Spectral square root; requires SelfAdjoint and Positive flags.
OperatorMatrix sqrt_operator(const OperatorMatrix& m);

/// tau(t_k) = (psi(t_k), M psi(t_k)) with psi(t) = exp(-iEt) psi.
std::vector<double> lyapunov_trace(const OperatorMatrix& m, const StateVector& psi,
                                   std::span<const double> times);
std::vector<double> lyapunov_trace(const LyapunovPair& pair, LyapOp op, const StateVector& psi,
                                   std::span<const double> times);

/**
 * Positivity of the exact Fourier half block without floating point.
 *
 * T = A^* A with A the n x n Vandermonde matrix on distinct roots of unity,
 * so det T = N^{-n} prod_{j<l} |2 sin(pi (l - j) / N)|^2 > 0, and since all
 * eigenvalues are at most 1, lambda_min >= det T.
 */
struct InjectivityCertificate {
    int n = 0;
    double log10_det = 0.0;
    double log10_lambda_min_lower = 0.0;
    bool injective = false;
};

InjectivityCertificate injectivity_certificate(int n);

} // namespace lpres
