// Copyright 2026 The gausstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Symplectic linear algebra in the xxpp ordering q = [x_1..x_M, p_1..p_M].
// Convention: [x, p] = 2i, vacuum covariance = identity.

#include "gausstomo/linalg.hpp"

namespace gausstomo {

/// The symplectic form [[0, I], [-I, 0]] for `modes` modes.
Matrix omega(int modes);

/// Cayley map S = (I + Omega T / 2)(I - Omega T / 2)^{-1}. T is symmetrized
/// first. Throws SingularParametrization when the condition number of
/// (I - Omega T / 2) exceeds 1e12.
Matrix cayley_symplectic(const Matrix &T);

struct CayleyFactors {
    Matrix S;
    Matrix inverse;  // (I - Omega T / 2)^{-1}
};

/// Cayley map plus the resolvent needed for its derivative,
/// dS = (I - Omega T/2)^{-1} Omega dT (I - Omega T/2)^{-1}.
CayleyFactors cayley_factors(const Matrix &T);

/// Inverse Cayley map: T = -2 Omega (S + I)^{-1} (S - I). Throws
/// SingularParametrization when S has eigenvalue -1.
Matrix cayley_inverse(const Matrix &S);

/// ||S Omega S^T - Omega||_max <= tol. Throws InvalidShape on odd dimension.
bool is_symplectic(const Matrix &S, double tol);

/// Orthogonal and symplectic, with the [[X, -Y], [Y, X]] block layout.
bool is_ortho_symplectic(const Matrix &O, double tol);

/// Symplectic eigenvalues of a symmetric positive-definite V, descending.
Vector symplectic_eigenvalues(const Matrix &V);

struct WilliamsonResult {
    Matrix S;
    Vector lambdas;  // descending
};

/// V = S diag(lambdas, lambdas) S^T with S symplectic.
WilliamsonResult williamson(const Matrix &V);

struct BlochMessiahResult {
    Matrix O2;
    Vector squeezing;  // r_1 >= ... >= r_M >= 0
    Matrix O1;
};

/// S = O2 diag(e^r, e^-r) O1 with O1, O2 orthogonal-symplectic.
BlochMessiahResult bloch_messiah(const Matrix &S);

/// diag(e^r_1..e^r_M, e^-r_1..e^-r_M).
Matrix squeezing_matrix(const Vector &r);

/// U = X - iY for O = [[X, -Y], [Y, X]]. Columns are the mode-basis vectors.
ComplexMatrix ortho_to_modebasis(const Matrix &O);

/// Rotation of (x_mode, p_mode) by phi: x -> x cos(phi) + p sin(phi),
/// p -> -x sin(phi) + p cos(phi). `mode` is 0-based.
Matrix phase_shift_symplectic(int modes, int mode, double phi);

}  // namespace gausstomo
