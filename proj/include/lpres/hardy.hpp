#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpres/grid.hpp"

namespace lpres {

/**
 * Construction of the Hardy projection on a full-line grid.
 *
 * Fourier: exact orthogonal projection. On uniform and Cayley grids the
 * samples are equispaced in a variable theta, and H^2_+ is spanned by the
 * nonnegative Fourier modes in theta after a half-bin phase twist. The
 * projector is applied with an FFT and is idempotent and self-adjoint to
 * rounding.
 * PvKernel: P_+ = (I + iH)/2 with H the principal-value Cauchy matrix,
 * diagonal fixed by zero row sums. Works on any grid, not a projection.
 * Regularized: kernel (1/2 pi i) w_j / (E_j - E_i - i eta), eta twice the
 * local spacing. Works on any grid, not a projection.
 *
 * Convention: a function with its only pole in the lower half-plane
 * belongs to H^2_+ (the range of P_+).
 */
enum class PvScheme { Fourier, PvKernel, Regularized };

PvScheme parse_pv_scheme(std::string_view id);
std::string to_string(PvScheme s);

struct OracleCase {
    cplx pole;
    bool expect_member = false; ///< pole in C^- means P_+ f = f
    bool resolved = true;       ///< |Im pole| meets the resolution rule
    double residual = 0.0;
};

struct OracleReport {
    std::vector<OracleCase> cases;
    double max_residual = 0.0; ///< over resolved cases
    double band = 0.0;         ///< |E| above this is excluded
};

class HardyProjector {
public:
    const GridPtr& grid() const;
    PvScheme scheme() const;
    bool exact() const { return scheme() == PvScheme::Fourier; }

    /// P_+ / P_- on weighted samples.
    CVec plus_weighted(const CVec& x) const;
    CVec minus_weighted(const CVec& x) const;

    StateVector plus(const StateVector& psi) const;
    StateVector minus(const StateVector& psi) const;

    /// Discrete Hilbert transform, H = -i (2 P_+ - I).
    StateVector hilbert(const StateVector& psi) const;

    /// Dense matrices, built on first use.
    const OperatorMatrix& p_plus() const;
    const OperatorMatrix& p_minus() const;

    /// Square diagonal block of P_+ (or P_-) starting at `offset`, weighted coordinates.
    CMat plus_block(int offset, int size) const;
    CMat minus_block(int offset, int size) const;

    /// Max relative residual of the default oracle suite, NaN if no pole is resolved.
    double oracle_residual() const;

    struct Impl;

private:
    friend HardyProjector build_hardy_projectors(const GridPtr&, PvScheme, const Tolerances&);
    std::shared_ptr<Impl> impl_;
};

/// Throws UsageError for half-line grids and for Fourier on Gauss-Legendre grids.
HardyProjector build_hardy_projectors(const GridPtr& full, PvScheme scheme = PvScheme::Fourier,
                                      const Tolerances& tol = {});

StateVector apply_projector(const OperatorMatrix& p, const StateVector& psi);

/// {1-0.1i, 1+0.1i, -1-0.1i, -1+0.1i, 3-0.5i, 3+0.5i, -3-0.5i, -3+0.5i}
std::vector<cplx> default_oracle_poles();

/// Relative L2 error of P_+[1/(E - z)] against its analytic image outside the boundary band.
OracleReport hardy_oracle(const HardyProjector& hp, std::span<const cplx> poles,
                          const Tolerances& tol = {});

struct ProjectorDefects {
    double complementarity = 0.0;
    double idempotence = 0.0;
    double self_adjointness = 0.0;
};

/// Relative defects measured on `probes` seeded random vectors (matrix free).
ProjectorDefects probe_projector(const HardyProjector& hp, int probes, unsigned long long seed);

} // namespace lpres
