#pragma once

#include "lpres/types.hpp"

namespace lpres::linalg {

struct EigH {
    Vec values; // ascending
    CMat vectors;
};

/// Hermitian eigendecomposition from the lower triangle.
EigH eigh(const CMat& a);
Vec eigvalsh(const CMat& a);

struct RealSvd {
    Mat u;
    Vec s; // descending
    Mat v;
};

/// Square real SVD.
RealSvd svd(const Mat& a);

/// Singular values of a complex matrix, descending.
Vec singular_values(const CMat& a);

double opnorm(const CMat& a);

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMat& a);

/// (A + A^*) / 2
CMat hermitian_part(const CMat& a);

/// Q diag(f) Q^*
CMat reassemble(const CMat& q, const Vec& f);

} // namespace lpres::linalg
