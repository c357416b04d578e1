#pragma once

// Dense matrix types and the few linear-algebra routines the rest of the
// library builds on.

#include <Eigen/Dense>

#include <complex>

namespace repcol {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Matrix exponential by scaling and squaring with a diagonal Pade
// approximant of degree 3..13, chosen from the 1-norm.
CMatrix expm(const CMatrix& a);
RMatrix expm(const RMatrix& a);

// exp(g) for anti-Hermitian g via the eigendecomposition of the Hermitian
// matrix i*g. Independent of the Pade route; used to cross-check it.
CMatrix expm_antihermitian(const CMatrix& g);

// Eigenvalues of the Hermitian part of m, ascending.
RVector hermitian_eigenvalues(const CMatrix& m);

// Tr(h * m) for Hermitian h, as a conjugated dot product of the storage.
cplx trace_hermitian_product(const CMatrix& h, const CMatrix& m);

// max_ij |m_ij - conj(m_ji)|
double hermiticity_defect(const CMatrix& m);

bool is_diagonal(const CMatrix& m, double tol = 0.0);

}  // namespace repcol
