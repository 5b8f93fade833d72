// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace twrs {

using cdouble = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

/// Eigendecomposition A = U diag(values) U^H of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending. Eigenvector columns are unit norm and
/// follow a fixed phase convention: the first component whose modulus is not
/// negligible is made real and positive, so repeated runs (and platforms)
/// produce the same factors.
struct HermitianEigResult {
    rvec eigenvalues;
    cmat eigenvectors;
};

/// Top eigenpair of the Hermitian pencil (q, p): the largest eigenvalue of
/// p^{-1/2} q p^{-1/2} and the back-transformed vector v = p^{-1/2} u,
/// normalized to ||v|| = 1.
struct MaxEigPair {
    double value;
    cvec vector;
};

/// Kronecker product a (x) b, dimensions (rows_a*rows_b, cols_a*cols_b).
cmat kron(const cmat& a, const cmat& b);

/// Column-major stacking of a into a vector of length rows*cols.
cvec vec(const cmat& a);

/// Inverse of vec: reshape v (column-major) into a rows x cols matrix.
cmat unvec(const cvec& v, Eigen::Index rows, Eigen::Index cols);

/// Hermitian eigendecomposition. The input is symmetrized as (a + a^H)/2
/// before factoring; non-square input throws std::invalid_argument.
HermitianEigResult hermitian_eig(const cmat& a);

/// Hermitian PSD square root S with S*S == a. Eigenvalues slightly below
/// zero (roundoff) are clamped; an eigenvalue below -1e-9 * ||a||_F throws
/// NotPsdError.
cmat psd_sqrt(const cmat& a);

/// Largest generalized eigenpair of (q, p) with p Hermitian positive
/// definite, computed through the symmetrized pencil. Throws
/// IllConditionedError when min_eig(p) <= 1e-14 * max_eig(p).
MaxEigPair generalized_max_eig(const cmat& q, const cmat& p);

}  // namespace twrs
