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

#include <optional>
#include <vector>

#include "gausstomo/covariance.hpp"
#include "gausstomo/measurement.hpp"

namespace gausstomo {

/// Physical parametrization V = S diag(L, L) S^T with L_m = kappa_m^2 + 1 and
/// S the Cayley image of the symmetric matrix T.
struct MleParams {
    Vector kappa;
    Matrix T;

    int modes() const noexcept { return static_cast<int>(kappa.size()); }

    static MleParams vacuum(int modes);

    /// 2M(M + 1): kappa followed by the upper triangle of T, row by row.
    static int count(int modes) noexcept { return 2 * modes * (modes + 1); }
    Vector pack() const;
    static MleParams unpack(const Vector &u, int modes);
};

CovarianceMatrix cov_from_params(const MleParams &params);

/// Parameters reproducing a physical V (Williamson plus inverse Cayley map).
MleParams params_from_cov(const CovarianceMatrix &V);

/// Log-likelihood of the mean-centered data under covariance V, evaluated
/// from sufficient statistics. Throws Domain if a model variance is not
/// positive.
double loglik(const Matrix &V, const SufficientStats &stats);

double loglik_single(const MleParams &params, const SufficientStats &stats);
double loglik_joint(const MleParams &params, const SufficientStats &stats);

struct LoglikGradient {
    double value;
    Vector grad;  // packed like MleParams::pack()
};

/// Analytic gradient with respect to the packed parameters.
LoglikGradient gradient(const MleParams &params, const SufficientStats &stats);

struct AdamOptions {
    double eta = 0.02;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    Vector m;
    Vector v;
    long t = 0;
    AdamOptions hyper;

    AdamState(int n, AdamOptions opts) : m(Vector::Zero(n)), v(Vector::Zero(n)), hyper(opts) {}
};

/// Advances the moments with `grad` and returns the ascent step
/// eta * mhat / sqrt(vhat + eps) (epsilon inside the root).
Vector adam_advance(AdamState &adam, const Vector &grad);

/// u <- u + adam_advance(adam, grad).
void adam_step(Vector &u, AdamState &adam, const Vector &grad);

struct MleOptions {
    /// Defaults to 500 (single) or 200 (joint).
    std::optional<int> t_max;
    AdamOptions adam;
    double kappa_init = 1e-3;
    /// Stop once the log-likelihood changes by less than 1e-9 |loglik| over
    /// 50 iterations.
    bool plateau_stop = false;
};

struct MleReport {
    CovarianceMatrix V_hat;
    MleParams params;
    std::vector<double> loglik_trace;
    int iterations;
    double lambda_min;
    AdamOptions hyper;
};

int default_t_max(Scheme scheme) noexcept;

MleReport reconstruct_mle(const SufficientStats &stats, const MleOptions &opts = {});

}  // namespace gausstomo
