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

#include <cstdint>
#include <random>

#include "gausstomo/covariance.hpp"
#include "gausstomo/symplectic.hpp"

namespace testutil {

using gausstomo::Matrix;
using gausstomo::Vector;

inline Matrix random_symmetric(int n, double scale, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
    return a;
}

/// Symplectic matrix from a product of random Cayley factors, so it is not
/// itself a single Cayley image.
inline Matrix random_symplectic(int modes, double scale, std::mt19937_64 &rng) {
    Matrix S = Matrix::Identity(2 * modes, 2 * modes);
    for (int k = 0; k < 2; ++k) S = S * gausstomo::cayley_symplectic(random_symmetric(2 * modes, scale, rng));
    return S;
}

/// V = S diag(L, L) S^T with L in [lo, hi].
inline gausstomo::CovarianceMatrix random_physical(int modes, std::mt19937_64 &rng, double lo = 1.0,
                                                   double hi = 3.0, double scale = 0.4) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector d(2 * modes);
    for (int m = 0; m < modes; ++m) d(m) = d(m + modes) = u(rng);
    const Matrix S = random_symplectic(modes, scale, rng);
    return gausstomo::CovarianceMatrix(S * d.asDiagonal() * S.transpose());
}

inline double max_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testutil
