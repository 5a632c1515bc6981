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

#include "gausstomo/linalg.hpp"

namespace gausstomo {

/// Real symmetric 2M x 2M second-moment matrix in units of vacuum variance
/// (vacuum = identity). Symmetry is validated to 1e-10 absolute and then
/// enforced exactly. Positive definiteness is not required here; a direct
/// reconstruction may legitimately produce an indefinite estimate.
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(Matrix mat);

    static CovarianceMatrix vacuum(int modes);

    int modes() const noexcept { return modes_; }
    const Matrix &mat() const noexcept { return mat_; }

    double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

  private:
    Matrix mat_;
    int modes_;
};

}  // namespace gausstomo
