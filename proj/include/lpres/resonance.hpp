#pragma once

#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpres/evolution.hpp"
#include "lpres/lyapunov.hpp"
#include "lpres/smatrix.hpp"

namespace lpres {

/// Constant of the resonance estimate as reported: 1 + sqrt 2 + 1 / sqrt 2.
inline constexpr double kEstimateConstant = 1.0 + std::numbers::sqrt2 + 1.0 / std::numbers::sqrt2;

/// Constant obtained by adding up the intermediate estimates: 2 (1 + sqrt 2) + 1 / sqrt 2.
inline constexpr double kChainConstant =
    2.0 * (1.0 + std::numbers::sqrt2) + 1.0 / std::numbers::sqrt2;

struct ResonanceStates {
    ResonanceParams params;
    StateVector psi_app; ///< 1 / (E - mu) on the half line
    StateVector psi_res; ///< Lambda_F^{-1} psi_app
    double norm_app2 = 0.0;
    double norm_res2 = 0.0;
    double r = 0.0;            ///< norm_app2 / norm_res2
    double conditioning = 0.0; ///< eigen floor of the inverse
    double lambda_f_condition = 0.0;

    /// (1 / gamma) (pi / 2 + atan(e0 / gamma))
    double norm_app2_exact() const;
    /// pi / gamma
    double norm_res2_limit() const;
    /// 1 / 2 + atan(e0 / gamma) / pi
    double r_exact() const;
};

/// Throws PreconditionError when the pole is unresolved or too close to e_max.
void check_resonance_preconditions(const EnergyGrid& g, const ResonanceParams& p,
                                   const Tolerances& tol = {});

ResonanceStates build_resonance_states(const LyapunovPair& pair, const ResonanceParams& p,
                                       const Tolerances& tol = {});

/// Lambda_F psi = b + coeff psi_res with coeff = (psi_app, psi) / ||psi_res||^2.
struct LambdaPlusDecomposition {
    StateVector b;
    cplx coeff;
};

LambdaPlusDecomposition decompose_lambda_plus(const ResonanceStates& states,
                                              const LyapunovPair& pair, const StateVector& psi);

struct SurvivalRecord {
    double t = 0.0;
    cplx amplitude;
    cplx pole_term;
    cplx background;
};

/// amplitude(t) = (psi_app, u(t) psi_app) / ||psi_app||^2 by quadrature; background = amplitude - exp(-i mu t).
std::vector<SurvivalRecord> survival_decomposition(const ResonanceStates& states,
                                                   std::span<const double> times);

/// (1 / r^2 - 1)^{1/2}
double background_bound(double r);

/**
 * One checked relation lhs (<=, >= or ==) rhs_total.
 *
 * "<=" passes when lhs <= rhs_total (1 + tolerance).
 * ">=" passes when lhs >= rhs_total (1 - tolerance).
 * "==" passes when |lhs - rhs_total| <= tolerance max(|lhs|, |rhs_total|) + 1e-12.
 */
struct BoundReport {
    std::string name;
    std::string relation = "<=";
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double rhs_total = 0.0;
    double constant_c = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int n = 0;
    double e_max = 0.0;
    std::string scheme;
    std::string model;
    double t = 0.0;

    double slack() const { return rhs_total - lhs; }
    void judge();
};

/// ||Z_app(t) x - exp(-i mu t) x|| <= ||x - Z_app(0) x|| with x = psi_res / ||psi_res||.
std::vector<BoundReport> eigenvector_deviation(const ResonanceStates& states,
                                               const LyapunovPair& pair, const SMatrixModel& s,
                                               std::span<const double> times,
                                               const Tolerances& tol = {});

struct EigenRelationSample {
    double t = 0.0;
    double lift = 0.0;   ///< relative residual of z_forward_lift
    double direct = 0.0; ///< relative residual of Lambda_F u(t) Lambda_F^{-1}
};

/// ||Z_F(t) psi_res - exp(-i mu t) psi_res|| / ||psi_res|| by both routes.
std::vector<EigenRelationSample> eigen_relation_residual(const ResonanceStates& states,
                                                         const LyapunovPair& pair,
                                                         std::span<const double> times);

/// lhs = ||x - Z_app(0) x||, rhs = C (1 - r)^{1/2} + term2 with C = kEstimateConstant.
BoundReport theorem5_report(const ResonanceStates& states, const LyapunovPair& pair,
                            const SMatrixModel& s, const Tolerances& tol = {});

/// Intermediate estimates behind theorem5_report, ending with the summed chain (C = kChainConstant).
std::vector<BoundReport> proof_chain_report(const ResonanceStates& states, const LyapunovPair& pair,
                                            const SMatrixModel& s, const Tolerances& tol = {});

} // namespace lpres
