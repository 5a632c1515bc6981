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

#include "gausstomo/covariance.hpp"
#include "gausstomo/measurement.hpp"

namespace gausstomo {

/// Linear-inversion estimate. V_hat is symmetric but may be unphysical or
/// even indefinite; it is reported as-is.
struct DirectReport {
    CovarianceMatrix V_hat;
    double lambda_min;
    bool physical;
};

/// Single-homodyne estimator. Needs theta = 0 settings for every pair
/// m <= n; duplicates are pooled. Phase-scanned data is rejected.
DirectReport direct_single(const SufficientStats &stats);

/// Joint-homodyne estimator. Every phase must be 0, pi/2 or pi/4.
/// Off-diagonal entries are equal-weight averages over qualifying settings;
/// an entry no setting measures directly is recovered from the pi/4 setting's
/// cross-covariance when the other three terms are known.
DirectReport direct_joint(const SufficientStats &stats);

DirectReport direct_reconstruct(const SufficientStats &stats);

}  // namespace gausstomo
