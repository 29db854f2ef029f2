#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lpres/grid.hpp"
#include "lpres/hardy.hpp"
#include "lpres/lyapunov.hpp"
#include "lpres/smatrix.hpp"

namespace lpres {

/// psi(t) = exp(-i E t) psi, pointwise.
StateVector evolve(const StateVector& psi, double t);
CVec evolve_weighted(const EnergyGrid& g, const CVec& x, double t);

/// Columns exp(-i E t_k) x, one per time.
CMat evolve_columns(const EnergyGrid& g, const CVec& x, std::span<const double> times);

/// Normalized Gaussian exp(-(E - center)^2 / (2 width^2)).
StateVector smooth_peaked_state(const GridPtr& g, double center, double width);

/// Normalized sum of three Gaussian packets with random centers in [lo, hi],
/// widths in [0.2, 0.6] (relative to the unit energy) and complex amplitudes.
StateVector random_packet_state(const GridPtr& g, std::uint64_t seed, double lo, double hi);

/// Z_F(t) acting on Lambda_F phi: returns Lambda_F u(t) phi. Requires t >= 0.
StateVector z_forward(const LyapunovPair& pair, const StateVector& phi, double t);

/// Z_B(t) acting on Lambda_B phi: returns Lambda_B u(t) phi. Requires t <= 0.
StateVector z_backward(const LyapunovPair& pair, const StateVector& phi, double t);

/// Z_app(t) = Lambda_F S exp(-iEt) Lambda_B S^* as a dense matrix. Requires t >= 0.
OperatorMatrix build_z_app(const LyapunovPair& pair, const SMatrixModel& s, double t);

/// Matrix-free Z_app(t) x on weighted samples.
CVec apply_z_app(const LyapunovPair& pair, const SMatrixModel& s, const CVec& x, double t);

/// Z_app(t_k) x for all times in one batched application.
CMat apply_z_app(const LyapunovPair& pair, const SMatrixModel& s, const CVec& x,
                 std::span<const double> times);

struct SemigroupDefectReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double defect = 0.0; ///< ||Z(t1) Z(t2) psi - Z(t1 + t2) psi||
    bool contraction_ok = true;
};

SemigroupDefectReport semigroup_defect(const LyapunovPair& pair, const SMatrixModel& s,
                                       const StateVector& psi, double t1, double t2,
                                       const Tolerances& tol = {});

/// Composition defect of Z_F on Lambda_F phi; zero up to rounding by construction.
SemigroupDefectReport z_forward_defect(const LyapunovPair& pair, const StateVector& phi, double t1,
                                       double t2, const Tolerances& tol = {});

enum class Direction { Forward, Backward };

/// Forward: (Lambda_F psi(t), (I - Lambda_F) psi(t)). Backward: ((I - Lambda_B) psi(t), Lambda_B psi(t)).
std::pair<StateVector, StateVector> transition_decompose(const LyapunovPair& pair,
                                                         const StateVector& psi, double t,
                                                         Direction dir);

/**
 * Z_F(t) on the half line through the full-line projector:
 * Lambda_F^{-1} R P_+ u(t) P_+ J Lambda_F^{-1} x, with J zero extension and R
 * restriction. Agrees with Lambda_F u(t) Lambda_F^{-1} on ran Lambda_F in the
 * continuum but does not amplify the regularized inverse twice.
 */
CVec z_forward_lift(const LyapunovPair& pair, const CVec& x, double t);

struct IntertwiningResidual {
    double t = 0.0;
    double residual = 0.0;    ///< ||Lambda_F U - Z_F^mat Lambda_F||
    double eigen_floor = 0.0;
    double bound = 0.0;       ///< sqrt(eigen_floor)
};

/// Dense diagnostic with Z_F^mat = Lambda_F U Lambda_F^{-1} (floored inverse).
IntertwiningResidual intertwining_residual(const LyapunovPair& pair, double t);

/// `count` times on [0, 40 / gamma]: half geometric from 0.01 / gamma, half linear.
std::vector<double> default_times(double gamma, int count = 64);

struct LpLimitReport {
    int n = 0;
    double e_max = 0.0;
    double idempotence = 0.0;      ///< ||M_+^2 - M_+|| (operator norm)
    double complementarity = 0.0;  ///< ||M_+ + M_- - I||
    double semigroup_defect = 0.0; ///< max relative ||Z(t1) Z(t2) psi - Z(t1 + t2) psi||
    double time_step = 0.0;        ///< pi / e_max
    int states = 0;
};

/**
 * Full-line limit on a uniform grid. Times are multiples of pi / e_max, where
 * u(t) is an exact cyclic shift of the projector's Fourier modes, and test
 * states are Gaussian packets narrow enough in time that the cyclic wrap is
 * below rounding.
 */
LpLimitReport lp_limit_report(int n, double e_max = 50.0, unsigned long long seed = 1,
                              int states = 8);

/// Throws PreconditionError when the time period pi n / e_max cannot hold the test packets.
void check_lp_limit_preconditions(int n, double e_max);

} // namespace lpres
