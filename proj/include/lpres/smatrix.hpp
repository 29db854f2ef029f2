#pragma once

#include <string>
#include <vector>

#include "lpres/grid.hpp"

namespace lpres {

/// Resonance pole mu = e0 - i gamma.
struct ResonanceParams {
    double e0 = 1.0;
    double gamma = 0.1;

    /// Throws ParameterError unless e0 > 0 and gamma > 0.
    ResonanceParams(double e0_, double gamma_);
    ResonanceParams() = default;

    cplx mu() const { return {e0, -gamma}; }
    double sharpness() const { return gamma / e0; }
};

/**
 * S(E) = b_mu(E) * prod_k b_{mu_k}(E) * exp(i a E), b_z(E) = (E - conj z) / (E - z).
 *
 * The factors after b_mu form S_1, which is regular at mu.
 */
struct SMatrixModel {
    ResonanceParams pole;
    std::vector<ResonanceParams> extra_poles;
    double phase_a = 0.0;
    std::string name = "pure";
};

SMatrixModel pure_model(const ResonanceParams& p);

/// One extra pole at 4 - 0.8i and phase_a = 0.05.
SMatrixModel perturbed_model(const ResonanceParams& p);

cplx blaschke(cplx z, double e);
cplx eval_smatrix(const SMatrixModel& s, double e);

/// S_1(E) = S(E) (E - mu) / (E - conj mu), evaluated without the cancelling factor.
cplx eval_inner_factor(const SMatrixModel& s, double e);

/// S (or conj S when `conjugate`) sampled on the grid nodes.
CVec smatrix_samples(const SMatrixModel& s, const EnergyGrid& g, bool conjugate = false);

/// Diagonal operator flagged Unitary.
OperatorMatrix multiplication_operator(const SMatrixModel& s, const GridPtr& g, bool conjugate);

/// |1 - S(E_i) (E_i - mu) / (E_i - conj mu)| on the grid nodes.
Vec deviation_integrand(const SMatrixModel& s, const EnergyGrid& g);

} // namespace lpres
