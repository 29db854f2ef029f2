#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lpres {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Numerical tolerances shared by the builders and verifiers.
struct Tolerances {
    double build_tol = 1e-12;        ///< complementarity of constructed pairs
    double hermiticity_tol = 1e-12;  ///< entrywise self-adjointness defect
    double proj_tol = 1e-6;          ///< idempotence / self-adjointness of projectors
    double spec_tol = 1e-8;          ///< spectral containment in [0, 1]
    double sqrt_tol = 1e-8;          ///< square-root reconstruction and commutation
    double report_tol = 1e-3;        ///< relative slack on inequality verdicts
    double oracle_tol = 1e-3;        ///< Hardy rational oracle
    double boundary_band = 0.05;     ///< excluded fraction of e_max in oracle norms
    double pole_resolution = 1.0;    ///< required gamma / local node spacing
    double truncation_widths = 10.0; ///< required (e_max - e0) / gamma
};

} // namespace lpres
