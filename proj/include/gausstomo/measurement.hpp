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
#include <optional>
#include <string>
#include <vector>

#include "gausstomo/covariance.hpp"

namespace gausstomo {

enum class Scheme { Single, Joint };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string &name);

/// Single-homodyne setting: measures (q_m(theta) + q_n(theta)) / sqrt(2), or
/// q_m(theta) when m == n. Indices are 0-based into [x_1..x_M, p_1..p_M].
struct SingleSetting {
    int m = 0;
    int n = 0;
    double theta = 0.0;

    bool operator==(const SingleSetting &) const = default;
};

/// Joint-homodyne setting: per-mode phases theta_1..theta_M.
struct JointSetting {
    std::vector<double> thetas;

    bool operator==(const JointSetting &) const = default;
};

/// Ordered list of settings for one scheme.
struct MeasurementPlan {
    Scheme scheme = Scheme::Single;
    int modes = 0;
    std::vector<SingleSetting> single;
    std::vector<JointSetting> joint;

    std::size_t size() const noexcept { return scheme == Scheme::Single ? single.size() : joint.size(); }
    /// Outcomes per shot: 1 for single, M for joint.
    int width() const noexcept { return scheme == Scheme::Single ? 1 : modes; }
};

/// All pairs m <= n over 2M quadratures at theta = 0, lexicographic.
MeasurementPlan single_plan(int modes);

/// floor(log2 M) + 3 settings: all-x, one row per codeword bit, pi/4.
/// Reproduces the eight-mode reference table row for row.
MeasurementPlan joint_plan(int modes);

MeasurementPlan make_plan(Scheme scheme, int modes);

/// Unit coefficient vector c with xi = c . q.
Vector single_coefficients(const SingleSetting &s, int modes);

/// M x 2M projection [cos(theta) | sin(theta)].
Matrix joint_projection(const JointSetting &s);

/// Sigma_theta = P V P^T.
Matrix reduced_covariance(const Matrix &V, const JointSetting &s);

/// Outcome record. outcomes[k] is N_r x width for setting k.
struct QuadratureDataset {
    MeasurementPlan plan;
    std::vector<Matrix> outcomes;
    std::optional<std::uint64_t> seed;

    int n_rep() const noexcept { return outcomes.empty() ? 0 : static_cast<int>(outcomes.front().rows()); }
    /// N_r N_s for single, M N_r N_s for joint.
    long long n_total() const noexcept {
        return static_cast<long long>(n_rep()) * static_cast<long long>(plan.size()) * plan.width();
    }
};

/// Throws DataFormat when shapes disagree with the plan.
void validate(const QuadratureDataset &data);

/// Zero-mean Gaussian outcomes for every setting. Each setting draws from its
/// own generator seeded by derive_seed(seed, k), so the result does not depend
/// on `threads`.
QuadratureDataset sample_dataset(const CovarianceMatrix &V, const MeasurementPlan &plan, int n_rep,
                                 std::uint64_t seed, int threads = 1);

/// Per-setting summary. For the single scheme vectors/matrices are 1x1.
struct SettingStats {
    long long count = 0;
    Vector mean;
    Matrix second_moment;  // sum_k z_k z_k^T
    Matrix scatter;        // sum_k (z_k - mean)(z_k - mean)^T
};

struct SufficientStats {
    MeasurementPlan plan;
    std::vector<SettingStats> settings;
};

SufficientStats compress(const QuadratureDataset &data);

/// Statistics an infinite zero-mean sample would produce with count n_rep:
/// scatter = second_moment = n_rep * Sigma. Used for exactness checks.
SufficientStats population_stats(const CovarianceMatrix &V, const MeasurementPlan &plan, long long n_rep);

}  // namespace gausstomo
