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

#include "gausstomo/recon_mle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gausstomo/errors.hpp"
#include "gausstomo/states.hpp"
#include "gausstomo/symplectic.hpp"

namespace gausstomo {

MleParams MleParams::vacuum(int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    return {Vector::Zero(modes), Matrix::Zero(2 * modes, 2 * modes)};
}

Vector MleParams::pack() const {
    const int M = modes();
    Vector u(count(M));
    u.head(M) = kappa;
    int k = M;
    for (int i = 0; i < 2 * M; ++i)
        for (int j = i; j < 2 * M; ++j) u(k++) = 0.5 * (T(i, j) + T(j, i));
    return u;
}

MleParams MleParams::unpack(const Vector &u, int modes) {
    if (u.size() != count(modes)) fail(ErrorKind::InvalidShape, "parameter vector has wrong length");
    MleParams p{u.head(modes), Matrix(2 * modes, 2 * modes)};
    int k = modes;
    for (int i = 0; i < 2 * modes; ++i)
        for (int j = i; j < 2 * modes; ++j) p.T(i, j) = p.T(j, i) = u(k++);
    return p;
}

namespace {

Vector doubled_lambdas(const Vector &kappa) {
    const Eigen::Index M = kappa.size();
    Vector d(2 * M);
    d.head(M) = kappa.array().square() + 1.0;
    d.tail(M) = d.head(M);
    return d;
}

// Likelihood as a function of V, with its matrix gradient dl/dV.
class Model {
  public:
    explicit Model(const SufficientStats &stats) : stats_(stats) {
        const auto &plan = stats.plan;
        if (plan.size() != stats.settings.size()) fail(ErrorKind::InvalidArgument, "statistics do not match plan");
        for (std::size_t k = 0; k < plan.size(); ++k) {
            if (stats.settings[k].count < 1) fail(ErrorKind::InvalidArgument, "empty setting in statistics");
            proj_.push_back(plan.scheme == Scheme::Single
                                ? Matrix(single_coefficients(plan.single[k], plan.modes).transpose())
                                : joint_projection(plan.joint[k]));
        }
        if (plan.scheme == Scheme::Single) {
            const auto n = static_cast<Eigen::Index>(plan.size());
            coef_.resize(n, 2 * plan.modes);
            counts_.resize(n);
            scatter_.resize(n);
            for (Eigen::Index k = 0; k < n; ++k) {
                coef_.row(k) = proj_[k];
                counts_(k) = static_cast<double>(stats.settings[k].count);
                scatter_(k) = stats.settings[k].scatter(0, 0);
            }
        }
    }

    int modes() const { return stats_.plan.modes; }

    double value(const Matrix &V, Matrix *grad) const {
        return stats_.plan.scheme == Scheme::Single ? value_single(V, grad) : value_joint(V, grad);
    }

  private:
    // Rows of coef_ are the unit measurement vectors c_k.
    double value_single(const Matrix &V, Matrix *grad) const {
        const Vector s2 = (coef_ * V).cwiseProduct(coef_).rowwise().sum();
        double total = 0.0;
        Vector w(s2.size());
        for (Eigen::Index k = 0; k < s2.size(); ++k) {
            if (!(s2(k) > 0.0)) fail(ErrorKind::Domain, "non-positive model variance in setting " + std::to_string(k + 1));
            total += -0.5 * counts_(k) * std::log(2.0 * std::numbers::pi * s2(k)) - scatter_(k) / (2.0 * s2(k));
            w(k) = (scatter_(k) / s2(k) - counts_(k)) / (2.0 * s2(k));
        }
        if (grad) *grad = coef_.transpose() * w.asDiagonal() * coef_;
        return total;
    }

    double value_joint(const Matrix &V, Matrix *grad) const {
        const int w = stats_.plan.width();
        double total = 0.0;
        if (grad) grad->setZero(V.rows(), V.cols());
        for (std::size_t k = 0; k < proj_.size(); ++k) {
            const Matrix &P = proj_[k];
            const double n = static_cast<double>(stats_.settings[k].count);
            const Matrix &C = stats_.settings[k].scatter;
            const Matrix sigma = symmetrized(P * V * P.transpose());
            Eigen::LLT<Matrix> llt(sigma);
            if (llt.info() != Eigen::Success) {
                fail(ErrorKind::Domain, "reduced covariance of setting " + std::to_string(k + 1) + " is singular");
            }
            const Matrix L = llt.matrixL();
            const double logdet = 2.0 * L.diagonal().array().log().sum();
            const Matrix inv = llt.solve(Matrix::Identity(w, w));
            const Matrix invC = llt.solve(C);
            total += -0.5 * n * (w * std::log(2.0 * std::numbers::pi) + logdet) - 0.5 * invC.trace();
            if (grad) {
                const Matrix H = 0.5 * (invC * inv - n * inv);
                *grad += P.transpose() * symmetrized(H) * P;
            }
        }
        return total;
    }

    const SufficientStats &stats_;
    std::vector<Matrix> proj_;
    Matrix coef_;
    Vector counts_;
    Vector scatter_;
};

LoglikGradient value_and_gradient(const Model &model, const MleParams &p) {
    const int M = model.modes();
    const CayleyFactors cf = cayley_factors(p.T);
    const Vector d = doubled_lambdas(p.kappa);
    const Matrix V = cf.S * d.asDiagonal() * cf.S.transpose();
    Matrix G;
    const double value = model.value(V, &G);

    Vector grad(MleParams::count(M));
    const Matrix SGS = cf.S.transpose() * G * cf.S;
    for (int m = 0; m < M; ++m) grad(m) = 2.0 * p.kappa(m) * (SGS(m, m) + SGS(m + M, m + M));
    // tr(G dV) over dS = B Omega dT B gives tr(K dT), K = 2 B D S^T G B Omega.
    const Matrix K = 2.0 * cf.inverse * d.asDiagonal() * cf.S.transpose() * G * cf.inverse * omega(M);
    int k = M;
    for (int i = 0; i < 2 * M; ++i) {
        for (int j = i; j < 2 * M; ++j) grad(k++) = i == j ? K(i, i) : K(i, j) + K(j, i);
    }
    return {value, std::move(grad)};
}

void require_scheme(const SufficientStats &stats, Scheme scheme) {
    if (stats.plan.scheme != scheme) {
        fail(ErrorKind::InvalidArgument, "expected " + to_string(scheme) + "-scheme statistics, got " +
                                             to_string(stats.plan.scheme));
    }
}

}  // namespace

CovarianceMatrix cov_from_params(const MleParams &params) {
    const Matrix S = cayley_symplectic(params.T);
    if (S.rows() != 2 * params.kappa.size()) fail(ErrorKind::InvalidShape, "kappa and T disagree on mode count");
    return CovarianceMatrix(symmetrized(S * doubled_lambdas(params.kappa).asDiagonal() * S.transpose()));
}

MleParams params_from_cov(const CovarianceMatrix &V) {
    const WilliamsonResult w = williamson(V.mat());
    if (w.lambdas.minCoeff() < 1.0 - 1e-9) fail(ErrorKind::Domain, "covariance matrix is not physical");
    return {(w.lambdas.array() - 1.0).max(0.0).sqrt().matrix(), cayley_inverse(w.S)};
}

double loglik(const Matrix &V, const SufficientStats &stats) { return Model(stats).value(V, nullptr); }

double loglik_single(const MleParams &params, const SufficientStats &stats) {
    require_scheme(stats, Scheme::Single);
    return loglik(cov_from_params(params).mat(), stats);
}

double loglik_joint(const MleParams &params, const SufficientStats &stats) {
    require_scheme(stats, Scheme::Joint);
    return loglik(cov_from_params(params).mat(), stats);
}

LoglikGradient gradient(const MleParams &params, const SufficientStats &stats) {
    const Model model(stats);
    if (params.modes() != model.modes()) fail(ErrorKind::InvalidShape, "parameters and statistics disagree on mode count");
    return value_and_gradient(model, params);
}

Vector adam_advance(AdamState &adam, const Vector &grad) {
    if (grad.size() != adam.m.size()) fail(ErrorKind::InvalidShape, "gradient length does not match optimizer state");
    const auto &h = adam.hyper;
    adam.t += 1;
    adam.m = h.beta1 * adam.m + (1.0 - h.beta1) * grad;
    adam.v = h.beta2 * adam.v + (1.0 - h.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(adam.t));
    const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(adam.t));
    return (h.eta * (adam.m.array() / c1) / ((adam.v.array() / c2) + h.eps).sqrt()).matrix();
}

void adam_step(Vector &u, AdamState &adam, const Vector &grad) { u += adam_advance(adam, grad); }

int default_t_max(Scheme scheme) noexcept { return scheme == Scheme::Single ? 500 : 200; }

MleReport reconstruct_mle(const SufficientStats &stats, const MleOptions &opts) {
    const Model model(stats);
    const int M = model.modes();
    const int t_max = opts.t_max.value_or(default_t_max(stats.plan.scheme));
    if (t_max < 1) fail(ErrorKind::InvalidArgument, "t_max must be positive");
    const auto &h = opts.adam;
    if (!(h.beta1 > 0 && h.beta1 < 1 && h.beta2 > 0 && h.beta2 < 1 && h.eps > 0 && h.eta > 0)) {
        fail(ErrorKind::InvalidArgument, "Adam hyperparameters out of range");
    }

    MleParams params = MleParams::vacuum(M);
    params.kappa.setConstant(opts.kappa_init);
    Vector u = params.pack();
    LoglikGradient cur = value_and_gradient(model, params);
    AdamState adam(MleParams::count(M), h);
    std::vector<double> trace;
    trace.reserve(t_max);

    constexpr int kMaxRejects = 10;
    int t = 0;
    for (; t < t_max; ++t) {
        const Vector step = adam_advance(adam, cur.grad);
        double scale = 1.0;
        for (int attempt = 0;; ++attempt) {
            try {
                const Vector trial = u + scale * step;
                LoglikGradient next = value_and_gradient(model, MleParams::unpack(trial, M));
                if (!std::isfinite(next.value)) fail(ErrorKind::Domain, "non-finite log-likelihood");
                u = trial;
                cur = std::move(next);
                break;
            } catch (const Error &e) {
                if (e.kind() != ErrorKind::SingularParametrization && e.kind() != ErrorKind::Domain) throw;
                if (attempt + 1 >= kMaxRejects) {
                    fail(ErrorKind::Optimization, "optimizer step rejected " + std::to_string(kMaxRejects) +
                                                      " consecutive times at iteration " + std::to_string(t + 1) + ": " +
                                                      e.what());
                }
                scale *= 0.5;
            }
        }
        trace.push_back(cur.value);
        if (opts.plateau_stop && t >= 50) {
            const double prev = trace[trace.size() - 51];
            if (std::abs(cur.value - prev) < 1e-9 * std::abs(cur.value)) {
                ++t;
                break;
            }
        }
    }

    params = MleParams::unpack(u, M);
    CovarianceMatrix V = cov_from_params(params);
    const double lam = min_symplectic_eigenvalue(V.mat());
    return {std::move(V), std::move(params), std::move(trace), t, lam, h};
}

}  // namespace gausstomo
