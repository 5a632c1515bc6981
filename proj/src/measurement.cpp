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

#include "gausstomo/measurement.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gausstomo/errors.hpp"
#include "gausstomo/parallel.hpp"
#include "gausstomo/seed.hpp"
#include "gausstomo/states.hpp"

namespace gausstomo {

std::string to_string(Scheme scheme) { return scheme == Scheme::Single ? "single" : "joint"; }

Scheme parse_scheme(const std::string &name) {
    if (name == "single") return Scheme::Single;
    if (name == "joint") return Scheme::Joint;
    fail(ErrorKind::DataFormat, "unknown scheme '" + name + "' (valid: single, joint)");
}

MeasurementPlan single_plan(int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    MeasurementPlan plan{Scheme::Single, modes, {}, {}};
    for (int m = 0; m < 2 * modes; ++m)
        for (int n = m; n < 2 * modes; ++n) plan.single.push_back({m, n, 0.0});
    return plan;
}

namespace {

// Nonzero, distinct per-mode codewords. For M a power of two this is
// (m - 1) with an extra always-set top bit, i.e. the reference table layout.
unsigned mode_code(int m1, int top) {
    const unsigned m = static_cast<unsigned>(m1);
    const unsigned half = 1u << top;
    return m <= half ? (m - 1) + half : m - half;
}

}  // namespace

MeasurementPlan joint_plan(int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    const int top = std::bit_width(static_cast<unsigned>(modes)) - 1;  // floor(log2 M)
    MeasurementPlan plan{Scheme::Joint, modes, {}, {}};
    plan.joint.push_back({std::vector<double>(modes, 0.0)});
    for (int bit = 0; bit <= top; ++bit) {
        std::vector<double> th(modes);
        for (int m = 1; m <= modes; ++m) th[m - 1] = ((mode_code(m, top) >> bit) & 1u) ? std::numbers::pi / 2 : 0.0;
        plan.joint.push_back({std::move(th)});
    }
    plan.joint.push_back({std::vector<double>(modes, std::numbers::pi / 4)});
    return plan;
}

MeasurementPlan make_plan(Scheme scheme, int modes) {
    return scheme == Scheme::Single ? single_plan(modes) : joint_plan(modes);
}

Vector single_coefficients(const SingleSetting &s, int modes) {
    const int n2 = 2 * modes;
    if (s.m < 0 || s.n < s.m || s.n >= n2) {
        fail(ErrorKind::InvalidArgument, "single setting indices (" + std::to_string(s.m + 1) + "," +
                                             std::to_string(s.n + 1) + ") invalid for " + std::to_string(modes) +
                                             " modes");
    }
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    // q_k(theta): x_k cos + p_k sin for k < M; p cos - x sin for k >= M.
    auto rotated = [&](int k) {
        Vector e = Vector::Zero(n2);
        if (k < modes) {
            e(k) = c;
            e(k + modes) = sn;
        } else {
            e(k) = c;
            e(k - modes) = -sn;
        }
        return e;
    };
    if (s.m == s.n) return rotated(s.m);
    return (rotated(s.m) + rotated(s.n)) / std::numbers::sqrt2;
}

Matrix joint_projection(const JointSetting &s) {
    const Eigen::Index M = static_cast<Eigen::Index>(s.thetas.size());
    Matrix P = Matrix::Zero(M, 2 * M);
    for (Eigen::Index m = 0; m < M; ++m) {
        P(m, m) = std::cos(s.thetas[m]);
        P(m, m + M) = std::sin(s.thetas[m]);
    }
    return P;
}

Matrix reduced_covariance(const Matrix &V, const JointSetting &s) {
    if (static_cast<Eigen::Index>(2 * s.thetas.size()) != V.rows()) {
        fail(ErrorKind::InvalidShape, "joint setting has " + std::to_string(s.thetas.size()) +
                                          " phases for a " + std::to_string(V.rows()) + "-dimensional covariance");
    }
    const Matrix P = joint_projection(s);
    return symmetrized(P * V * P.transpose());
}

void validate(const QuadratureDataset &data) {
    const auto &plan = data.plan;
    if (plan.modes < 1) fail(ErrorKind::DataFormat, "dataset has no modes");
    if (data.outcomes.size() != plan.size()) {
        fail(ErrorKind::DataFormat, "dataset has " + std::to_string(data.outcomes.size()) + " outcome blocks for " +
                                        std::to_string(plan.size()) + " settings");
    }
    for (std::size_t k = 0; k < data.outcomes.size(); ++k) {
        const Matrix &o = data.outcomes[k];
        if (o.cols() != plan.width()) {
            fail(ErrorKind::DataFormat, "setting " + std::to_string(k + 1) + ": expected " +
                                            std::to_string(plan.width()) + " columns, got " + std::to_string(o.cols()));
        }
        if (o.rows() != data.n_rep()) {
            fail(ErrorKind::DataFormat, "setting " + std::to_string(k + 1) + ": expected " +
                                            std::to_string(data.n_rep()) + " rows, got " + std::to_string(o.rows()));
        }
        if (o.rows() == 0) fail(ErrorKind::DataFormat, "setting " + std::to_string(k + 1) + " has no outcomes");
    }
    if (plan.scheme == Scheme::Single) {
        for (const auto &s : plan.single) single_coefficients(s, plan.modes);
    } else {
        for (const auto &s : plan.joint) {
            if (static_cast<int>(s.thetas.size()) != plan.modes) {
                fail(ErrorKind::DataFormat, "joint setting with " + std::to_string(s.thetas.size()) + " phases for " +
                                                std::to_string(plan.modes) + " modes");
            }
        }
    }
}

QuadratureDataset sample_dataset(const CovarianceMatrix &V, const MeasurementPlan &plan, int n_rep,
                                 std::uint64_t seed, int threads) {
    if (plan.modes != V.modes()) fail(ErrorKind::InvalidShape, "plan and covariance disagree on mode count");
    if (n_rep < 2) fail(ErrorKind::InvalidArgument, "n_rep must be at least 2");
    if (!is_physical(V)) fail(ErrorKind::InvalidCovariance, "cannot sample from an unphysical covariance matrix");

    QuadratureDataset data;
    data.plan = plan;
    data.seed = seed;
    data.outcomes.resize(plan.size());
    parallel_for(plan.size(), threads, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::normal_distribution<double> normal(0.0, 1.0);
        if (plan.scheme == Scheme::Single) {
            const Vector c = single_coefficients(plan.single[k], plan.modes);
            const double sigma = std::sqrt(c.dot(V.mat() * c));
            Matrix out(n_rep, 1);
            for (int i = 0; i < n_rep; ++i) out(i, 0) = sigma * normal(rng);
            data.outcomes[k] = std::move(out);
        } else {
            const Matrix sigma = reduced_covariance(V.mat(), plan.joint[k]);
            const Matrix L = Eigen::LLT<Matrix>(sigma).matrixL();
            Matrix z(plan.modes, n_rep);
            for (int i = 0; i < n_rep; ++i)
                for (int m = 0; m < plan.modes; ++m) z(m, i) = normal(rng);
            data.outcomes[k] = (L * z).transpose();
        }
    });
    return data;
}

SufficientStats compress(const QuadratureDataset &data) {
    validate(data);
    SufficientStats stats{data.plan, {}};
    stats.settings.reserve(data.outcomes.size());
    for (const Matrix &o : data.outcomes) {
        SettingStats s;
        s.count = o.rows();
        s.mean = o.colwise().mean().transpose();
        s.second_moment = o.transpose() * o;
        const Matrix centered = o.rowwise() - s.mean.transpose();
        s.scatter = centered.transpose() * centered;
        stats.settings.push_back(std::move(s));
    }
    return stats;
}

SufficientStats population_stats(const CovarianceMatrix &V, const MeasurementPlan &plan, long long n_rep) {
    if (plan.modes != V.modes()) fail(ErrorKind::InvalidShape, "plan and covariance disagree on mode count");
    if (n_rep < 1) fail(ErrorKind::InvalidArgument, "n_rep must be positive");
    SufficientStats stats{plan, {}};
    const double n = static_cast<double>(n_rep);
    for (std::size_t k = 0; k < plan.size(); ++k) {
        Matrix sigma;
        if (plan.scheme == Scheme::Single) {
            const Vector c = single_coefficients(plan.single[k], plan.modes);
            sigma = Matrix::Constant(1, 1, c.dot(V.mat() * c));
        } else {
            sigma = reduced_covariance(V.mat(), plan.joint[k]);
        }
        SettingStats s;
        s.count = n_rep;
        s.mean = Vector::Zero(sigma.rows());
        s.second_moment = n * sigma;
        s.scatter = n * sigma;
        stats.settings.push_back(std::move(s));
    }
    return stats;
}

}  // namespace gausstomo
