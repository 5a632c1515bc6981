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

#include "gausstomo/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gausstomo/errors.hpp"

namespace gausstomo {

namespace {

constexpr double kCayleyMaxCondition = 1e12;
// |r| below this is treated as an unsqueezed direction in Bloch-Messiah.
constexpr double kZeroSqueezing = 1e-9;

Matrix sqrt_spd(const Matrix &V) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(V);
    if (es.info() != Eigen::Success) {
        fail(ErrorKind::Decomposition, "eigensolver failed on covariance matrix");
    }
    const Vector &d = es.eigenvalues();
    if (d.minCoeff() <= 0.0) {
        fail(ErrorKind::InvalidCovariance, "covariance matrix is not positive definite");
    }
    return es.eigenvectors() * d.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

void canonicalize_sign(Eigen::Ref<Vector> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-8 * scale) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

}  // namespace

int mode_count(const Matrix &m) {
    if (m.rows() != m.cols()) {
        fail(ErrorKind::InvalidShape, "matrix is not square (" + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + ")");
    }
    if (m.rows() == 0 || m.rows() % 2 != 0) {
        fail(ErrorKind::InvalidShape, "matrix dimension " + std::to_string(m.rows()) + " is not a positive even number");
    }
    return static_cast<int>(m.rows() / 2);
}

double rel_frobenius(const Matrix &a, const Matrix &b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

Matrix omega(int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    Matrix om = Matrix::Zero(2 * modes, 2 * modes);
    om.topRightCorner(modes, modes).setIdentity();
    om.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
    return om;
}

CayleyFactors cayley_factors(const Matrix &T) {
    const int M = mode_count(T);
    const Matrix A = omega(M) * symmetrized(T) * 0.5;
    const Matrix I = Matrix::Identity(2 * M, 2 * M);
    Eigen::PartialPivLU<Matrix> lu(I - A);
    const double rcond = lu.rcond();
    if (!(rcond * kCayleyMaxCondition >= 1.0)) {
        fail(ErrorKind::SingularParametrization,
             "Cayley parametrization is singular (condition estimate " + std::to_string(1.0 / rcond) + ")");
    }
    Matrix inv = lu.inverse();
    // (I + A) and (I - A)^{-1} commute.
    Matrix S = inv * (I + A);
    return {std::move(S), std::move(inv)};
}

Matrix cayley_symplectic(const Matrix &T) { return cayley_factors(T).S; }

Matrix cayley_inverse(const Matrix &S) {
    const int M = mode_count(S);
    const Matrix I = Matrix::Identity(2 * M, 2 * M);
    Eigen::PartialPivLU<Matrix> lu(S + I);
    if (!(lu.rcond() * kCayleyMaxCondition >= 1.0)) {
        fail(ErrorKind::SingularParametrization, "symplectic matrix has eigenvalue -1; no Cayley preimage");
    }
    return symmetrized(-2.0 * omega(M) * lu.solve(S - I));
}

bool is_symplectic(const Matrix &S, double tol) {
    const int M = mode_count(S);
    const Matrix om = omega(M);
    return max_abs(S * om * S.transpose() - om) <= tol;
}

bool is_ortho_symplectic(const Matrix &O, double tol) {
    const int M = mode_count(O);
    const Matrix I = Matrix::Identity(2 * M, 2 * M);
    if (max_abs(O * O.transpose() - I) > tol) return false;
    const auto X = O.topLeftCorner(M, M);
    const auto Y = O.bottomLeftCorner(M, M);
    return max_abs(O.topRightCorner(M, M) + Y) <= tol && max_abs(O.bottomRightCorner(M, M) - X) <= tol;
}

Vector symplectic_eigenvalues(const Matrix &V) {
    const int M = mode_count(V);
    Eigen::LLT<Matrix> llt(symmetrized(V));
    if (llt.info() != Eigen::Success) {
        fail(ErrorKind::InvalidCovariance, "covariance matrix is not positive definite");
    }
    // L^T Omega L is similar to Omega V; i times it is Hermitian with spectrum +-lambda.
    const Matrix L = llt.matrixL();
    const Matrix K = L.transpose() * omega(M) * L;
    const ComplexMatrix H = Complex(0.0, 1.0) * (0.5 * (K - K.transpose())).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorKind::Decomposition, "eigensolver failed");
    const Vector &ev = es.eigenvalues();  // ascending: -lambda_1 .. -lambda_M, lambda_M .. lambda_1
    Vector out(M);
    for (int k = 0; k < M; ++k) {
        const double pos = ev(2 * M - 1 - k);
        const double neg = -ev(k);
        if (std::abs(pos - neg) > 1e-8 * std::max(1.0, pos)) {
            fail(ErrorKind::Decomposition, "symplectic spectrum is not paired");
        }
        out(k) = 0.5 * (pos + neg);
    }
    return out;
}

WilliamsonResult williamson(const Matrix &V) {
    const int M = mode_count(V);
    const Matrix Vs = symmetrized(V);
    const Matrix root = sqrt_spd(Vs);
    const Matrix K = root * omega(M) * root;
    const ComplexMatrix H = Complex(0.0, 1.0) * (0.5 * (K - K.transpose())).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    if (es.info() != Eigen::Success) fail(ErrorKind::Decomposition, "Williamson eigensolver failed");

    // An eigenvector a + ib of iK with eigenvalue lambda > 0 satisfies
    // K a = lambda b and K b = -lambda a, and |a| = |b| = 1/sqrt(2).
    Matrix R(2 * M, 2 * M);
    Vector lambdas(M);
    for (int m = 0; m < M; ++m) {
        const Eigen::Index idx = 2 * M - 1 - m;
        const double lam = es.eigenvalues()(idx);
        if (!(lam > 0.0)) fail(ErrorKind::Decomposition, "non-positive symplectic eigenvalue");
        const Eigen::VectorXcd u = es.eigenvectors().col(idx);
        R.col(m) = std::sqrt(2.0) * u.imag();
        R.col(m + M) = std::sqrt(2.0) * u.real();
        lambdas(m) = lam;
    }
    Vector scale(2 * M);
    scale << lambdas.cwiseSqrt().cwiseInverse(), lambdas.cwiseSqrt().cwiseInverse();
    return {root * R * scale.asDiagonal(), lambdas};
}

Matrix squeezing_matrix(const Vector &r) {
    const Eigen::Index M = r.size();
    Vector d(2 * M);
    d << r.array().exp().matrix(), (-r.array()).exp().matrix();
    return d.asDiagonal();
}

BlochMessiahResult bloch_messiah(const Matrix &S) {
    const int M = mode_count(S);
    const double scale = std::max(1.0, max_abs(S) * max_abs(S));
    if (!is_symplectic(S, 1e-8 * scale)) fail(ErrorKind::InvalidArgument, "matrix is not symplectic");
    const Matrix om = omega(M);

    // Polar factor P = (S^T S)^{1/2}; its eigenvectors for e^{r} give O1.
    Eigen::SelfAdjointEigenSolver<Matrix> es(S.transpose() * S);
    if (es.info() != Eigen::Success) fail(ErrorKind::Decomposition, "Bloch-Messiah eigensolver failed");
    const int n = 2 * M;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());  // descending singular values

    std::vector<Vector> chosen;
    std::vector<double> rs;
    Matrix basis(n, 0);  // chosen vectors and their Omega images
    auto add = [&](Vector v, double r) {
        canonicalize_sign(v);
        chosen.push_back(v);
        rs.push_back(r);
        basis.conservativeResize(n, basis.cols() + 2);
        basis.col(basis.cols() - 2) = v;
        basis.col(basis.cols() - 1) = om * v;
    };
    auto residual = [&](const Vector &v) {
        Vector w = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < basis.cols(); ++c) w -= basis.col(c).dot(w) * basis.col(c);
        }
        return w;
    };

    std::vector<int> cluster;
    for (int idx : order) {
        const double r = 0.5 * std::log(std::max(es.eigenvalues()(idx), 1e-300));
        if (r > kZeroSqueezing) {
            if (static_cast<int>(chosen.size()) == M) fail(ErrorKind::Decomposition, "too many squeezed directions");
            Vector w = residual(es.eigenvectors().col(idx));
            add(w / w.norm(), r);
        } else if (r >= -kZeroSqueezing) {
            cluster.push_back(idx);
        }
    }
    // Unsqueezed subspace: pick an isotropic half greedily by largest residual.
    std::vector<bool> used(cluster.size(), false);
    while (static_cast<int>(chosen.size()) < M) {
        int best = -1;
        double best_norm = 0.0;
        Vector best_vec;
        for (std::size_t c = 0; c < cluster.size(); ++c) {
            if (used[c]) continue;
            Vector w = residual(es.eigenvectors().col(cluster[c]));
            if (w.norm() > best_norm + 1e-12) {
                best = static_cast<int>(c);
                best_norm = w.norm();
                best_vec = std::move(w);
            }
        }
        if (best < 0 || best_norm < 1e-6) fail(ErrorKind::Decomposition, "degenerate Bloch-Messiah subspace");
        used[best] = true;
        add(best_vec / best_norm, 0.0);
    }

    Matrix O1t(n, n);
    Vector r(M);
    for (int m = 0; m < M; ++m) {
        O1t.col(m) = chosen[m];
        O1t.col(m + M) = -(om * chosen[m]);
        r(m) = rs[m];
    }
    const Matrix O1 = O1t.transpose();
    Vector inv_d(n);
    inv_d << (-r.array()).exp().matrix(), r.array().exp().matrix();
    Matrix O2 = S * O1t * inv_d.asDiagonal();
    return {std::move(O2), r, O1};
}

ComplexMatrix ortho_to_modebasis(const Matrix &O) {
    const int M = mode_count(O);
    if (!is_ortho_symplectic(O, 1e-8)) fail(ErrorKind::InvalidArgument, "matrix is not orthogonal-symplectic");
    const Matrix X = O.topLeftCorner(M, M);
    const Matrix Y = O.bottomLeftCorner(M, M);
    ComplexMatrix U(M, M);
    U.real() = X;
    U.imag() = -Y;
    return U;
}

Matrix phase_shift_symplectic(int modes, int mode, double phi) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    if (mode < 0 || mode >= modes) {
        fail(ErrorKind::InvalidArgument, "mode index " + std::to_string(mode) + " out of range for " +
                                             std::to_string(modes) + " modes");
    }
    Matrix S = Matrix::Identity(2 * modes, 2 * modes);
    const double c = std::cos(phi), s = std::sin(phi);
    S(mode, mode) = c;
    S(mode, mode + modes) = s;
    S(mode + modes, mode) = -s;
    S(mode + modes, mode + modes) = c;
    return S;
}

}  // namespace gausstomo
