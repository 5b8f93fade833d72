// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/numkernel.hpp"

#include <cmath>
#include <stdexcept>

#include "twrs/errors.hpp"

namespace twrs {

cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

cvec vec(const cmat& a) {
    // Eigen stores column-major, so stacking is a plain copy.
    return cvec(Eigen::Map<const cvec>(a.data(), a.size()));
}

cmat unvec(const cvec& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw std::invalid_argument("unvec: vector length does not match rows*cols");
    }
    return cmat(Eigen::Map<const cmat>(v.data(), rows, cols));
}

namespace {

// Rotate each column so its first non-negligible component is real positive.
void fix_column_phases(cmat& u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        const double scale = u.col(c).cwiseAbs().maxCoeff();
        if (scale <= 0.0) continue;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const double mag = std::abs(u(r, c));
            if (mag > 1e-12 * scale) {
                u.col(c) *= std::conj(u(r, c)) / mag;
                break;
            }
        }
    }
}

}  // namespace

HermitianEigResult hermitian_eig(const cmat& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    }
    const cmat sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigendecomposition failed to converge");
    }
    HermitianEigResult result;
    result.eigenvalues = solver.eigenvalues();
    result.eigenvectors = solver.eigenvectors();
    fix_column_phases(result.eigenvectors);
    return result;
}

cmat psd_sqrt(const cmat& a) {
    const HermitianEigResult eig = hermitian_eig(a);
    const double norm_a = a.norm();
    rvec clamped = eig.eigenvalues;
    for (Eigen::Index i = 0; i < clamped.size(); ++i) {
        if (clamped(i) < -1e-9 * norm_a) {
            throw NotPsdError("psd_sqrt: matrix has a significantly negative eigenvalue");
        }
        if (clamped(i) < 0.0) clamped(i) = 0.0;
    }
    const cmat root = eig.eigenvectors * clamped.cwiseSqrt().asDiagonal() *
                      eig.eigenvectors.adjoint();
    return 0.5 * (root + root.adjoint());
}

MaxEigPair generalized_max_eig(const cmat& q, const cmat& p) {
    if (q.rows() != q.cols() || p.rows() != p.cols() || q.rows() != p.rows()) {
        throw std::invalid_argument("generalized_max_eig: q and p must be square and same size");
    }
    const HermitianEigResult pe = hermitian_eig(p);
    const double max_eig = pe.eigenvalues(pe.eigenvalues.size() - 1);
    const double min_eig = pe.eigenvalues(0);
    if (min_eig <= 1e-14 * max_eig) {
        throw IllConditionedError("generalized_max_eig: p is numerically singular");
    }
    const cmat inv_root =
        pe.eigenvectors * pe.eigenvalues.cwiseInverse().cwiseSqrt().asDiagonal() *
        pe.eigenvectors.adjoint();
    const HermitianEigResult me = hermitian_eig(inv_root * q * inv_root);
    const Eigen::Index top = me.eigenvalues.size() - 1;
    MaxEigPair pair;
    pair.value = me.eigenvalues(top);
    pair.vector = inv_root * me.eigenvectors.col(top);
    pair.vector /= pair.vector.norm();
    return pair;
}

}  // namespace twrs
