// Copyright 2026 The qdac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace qdac {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;

namespace tol {
// Tolerances used throughout the library and its tests.
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd = 1e-10;          // eigensolvers lose a digit or two near degeneracy
inline constexpr double entropy_cutoff = 1e-14;
inline constexpr double structure = 1e-12;    // basis-projector / diagonality detection
}  // namespace tol

inline Matrix2 identity2() { return Matrix2::Identity(); }

inline Matrix2 projector0() {
    Matrix2 p = Matrix2::Zero();
    p(0, 0) = 1.0;
    return p;
}

inline Matrix2 projector1() {
    Matrix2 p = Matrix2::Zero();
    p(1, 1) = 1.0;
    return p;
}

inline Matrix2 basis_projector(int bit) { return bit ? projector1() : projector0(); }

inline Matrix2 projector_plus() {
    Matrix2 p;
    p << 0.5, 0.5, 0.5, 0.5;
    return p;
}

inline Matrix2 pauli_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix2 pauli_y() {
    Matrix2 m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix2 pauli_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix2 hadamard2() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix2 m;
    m << s, s, s, -s;
    return m;
}

/// H f H without going through 1/sqrt(2): halving is exact in binary, so
/// dyadic inputs stay dyadic.
inline Matrix2 hadamard_conjugate(const Matrix2& f) {
    Matrix2 out;
    out(0, 0) = (f(0, 0) + f(0, 1) + f(1, 0) + f(1, 1)) * 0.5;
    out(0, 1) = (f(0, 0) - f(0, 1) + f(1, 0) - f(1, 1)) * 0.5;
    out(1, 0) = (f(0, 0) + f(0, 1) - f(1, 0) - f(1, 1)) * 0.5;
    out(1, 1) = (f(0, 0) - f(0, 1) - f(1, 0) + f(1, 1)) * 0.5;
    return out;
}

/// Kronecker product, row-major block convention: result block (i,j) is a(i,j)*b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double eps) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= eps;
}

inline double hermiticity_defect(const Matrix& m) {
    return max_abs_diff(m, m.adjoint());
}

/// Identifies a 2x2 factor as |0><0| or |1><1|; returns -1 if it is neither.
inline int classify_basis_projector(const Matrix2& f, double eps = tol::structure) {
    if (std::abs(f(0, 1)) > eps || std::abs(f(1, 0)) > eps) return -1;
    if (std::abs(f(0, 0) - 1.0) <= eps && std::abs(f(1, 1)) <= eps) return 0;
    if (std::abs(f(1, 1) - 1.0) <= eps && std::abs(f(0, 0)) <= eps) return 1;
    return -1;
}

/// Binary entropy in bits, with the 0 log 0 = 0 convention.
inline double binary_entropy(double x) {
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x);
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

}  // namespace qdac
