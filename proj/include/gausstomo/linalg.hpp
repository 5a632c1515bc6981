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

#include <complex>

#include <Eigen/Dense>

namespace gausstomo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Number of modes of a 2M x 2M matrix. Throws InvalidShape for non-square
/// or odd-dimensioned input.
int mode_count(const Matrix &m);

/// Largest absolute entry.
inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Relative Frobenius distance ||a - b|| / max(||b||, tiny).
double rel_frobenius(const Matrix &a, const Matrix &b);

/// Returns (m + m^T) / 2.
inline Matrix symmetrized(const Matrix &m) { return 0.5 * (m + m.transpose()); }

}  // namespace gausstomo
