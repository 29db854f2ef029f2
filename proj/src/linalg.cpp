#include "lpres/linalg.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lpres::linalg {

EigH eigh(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigh: eigensolver did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

Vec eigvalsh(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigvalsh: eigensolver did not converge");
    }
    return es.eigenvalues();
}

RealSvd svd(const Mat& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("svd: square input expected");
    }
    Eigen::BDCSVD<Mat> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (s.info() != Eigen::Success) {
        throw std::runtime_error("svd: no convergence");
    }
    return {s.matrixU(), s.singularValues(), s.matrixV()};
}

Vec singular_values(const CMat& a) {
    Eigen::BDCSVD<CMat> s(a);
    if (s.info() != Eigen::Success) {
        throw std::runtime_error("singular_values: no convergence");
    }
    return s.singularValues();
}

double opnorm(const CMat& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return singular_values(a)(0);
}

double hermiticity_defect(const CMat& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMat hermitian_part(const CMat& a) {
    CMat h = 0.5 * (a + a.adjoint());
    return h;
}

CMat reassemble(const CMat& q, const Vec& f) {
    CMat scaled = q * f.asDiagonal();
    return scaled * q.adjoint();
}

} // namespace lpres::linalg
