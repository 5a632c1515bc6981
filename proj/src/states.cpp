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

#include "gausstomo/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "gausstomo/errors.hpp"
#include "gausstomo/symplectic.hpp"

namespace gausstomo {

CovarianceMatrix::CovarianceMatrix(Matrix mat) : mat_(std::move(mat)), modes_(mode_count(mat_)) {
    if (!mat_.allFinite()) fail(ErrorKind::InvalidCovariance, "covariance matrix has non-finite entries");
    const double asym = max_abs(mat_ - mat_.transpose());
    if (asym > 1e-10) {
        fail(ErrorKind::InvalidCovariance, "covariance matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
    mat_ = symmetrized(mat_);
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    return CovarianceMatrix(Matrix::Identity(2 * modes, 2 * modes));
}

double squeezing_db_to_r(double db) {
    if (!(db >= 0.0)) fail(ErrorKind::InvalidArgument, "squeezing in dB must be non-negative");
    return db * std::numbers::ln10 / 20.0;
}

namespace {

void check_adjacency(const Adjacency &G) {
    if (G.rows() != G.cols() || G.rows() < 1) fail(ErrorKind::InvalidArgument, "adjacency matrix must be square");
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
        if (G(i, i) != 0) fail(ErrorKind::InvalidArgument, "adjacency matrix must have a zero diagonal");
        for (Eigen::Index j = 0; j < G.cols(); ++j) {
            if (G(i, j) != 0 && G(i, j) != 1) fail(ErrorKind::InvalidArgument, "adjacency entries must be 0 or 1");
            if (G(i, j) != G(j, i)) fail(ErrorKind::InvalidArgument, "adjacency matrix must be symmetric");
        }
    }
}

}  // namespace

CovarianceMatrix graph_state_cov(const Adjacency &G, double r) {
    check_adjacency(G);
    const Eigen::Index M = G.rows();
    const Matrix g = G.cast<double>();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(M, M) + g * g);
    const Matrix X = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
    const Matrix Y = g * X;
    Matrix Os(2 * M, 2 * M);
    Os << X, -Y, Y, X;
    Vector d2(2 * M);
    d2 << Vector::Constant(M, std::exp(2 * r)), Vector::Constant(M, std::exp(-2 * r));
    return CovarianceMatrix(symmetrized(Os * d2.asDiagonal() * Os.transpose()));
}

CovarianceMatrix ghz_state_cov(int modes, double r) {
    if (modes < 2) fail(ErrorKind::InvalidArgument, "GHZ state needs at least 2 modes");
    const CovarianceMatrix star = graph_state_cov(topology_adjacency(Topology::Star, modes), r);
    const Matrix R = phase_shift_symplectic(modes, 0, -std::numbers::pi / 2);
    return CovarianceMatrix(symmetrized(R * star.mat() * R.transpose()));
}

CovarianceMatrix apply_loss(const CovarianceMatrix &V, double loss) {
    if (!(loss >= 0.0 && loss < 1.0)) fail(ErrorKind::InvalidArgument, "loss must lie in [0, 1)");
    const Eigen::Index n = V.mat().rows();
    return CovarianceMatrix((1.0 - loss) * V.mat() + loss * Matrix::Identity(n, n));
}

double min_symplectic_eigenvalue(const Matrix &V) {
    Eigen::LLT<Matrix> llt(symmetrized(V));
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(V), Eigen::EigenvaluesOnly);
        return std::min(0.0, es.eigenvalues().minCoeff());
    }
    return symplectic_eigenvalues(V).minCoeff();
}

bool is_physical(const CovarianceMatrix &V, double tol) { return min_symplectic_eigenvalue(V.mat()) >= 1.0 - tol; }

double fidelity(const CovarianceMatrix &V1, const CovarianceMatrix &V2) {
    if (V1.modes() != V2.modes()) fail(ErrorKind::InvalidShape, "fidelity of states with different mode counts");
    for (const auto *V : {&V1, &V2}) {
        const double lam = min_symplectic_eigenvalue(V->mat());
        if (lam < 1.0 - 1e-9) {
            fail(ErrorKind::Domain, "fidelity needs physical states (lambda_min = " + std::to_string(lam) + ")");
        }
    }
    const int modes = V1.modes();
    for (const auto *V : {&V1, &V2}) {
        if (symplectic_eigenvalues(V->mat()).maxCoeff() <= 1.0 + 1e-10) {
            return std::clamp(std::pow(2.0, modes) / std::sqrt((V1.mat() + V2.mat()).determinant()), 0.0, 1.0);
        }
    }
    // Closed form for Gaussian states written for the vacuum = I/2 convention,
    // hence the rescaling. It yields the root fidelity; the result is squared.
    const int M = V1.modes();
    const Matrix om = omega(M);
    const Matrix A = 0.5 * V1.mat();
    const Matrix B = 0.5 * V2.mat();
    const Matrix sum = A + B;
    const Matrix aux = om.transpose() * sum.inverse() * (0.25 * om + B * om * A);
    Eigen::EigenSolver<Matrix> es(aux * om, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) fail(ErrorKind::Decomposition, "fidelity eigensolver failed");
    // det[2 (sqrt(I + (aux Omega)^{-2} / 4) + I) aux] via the spectrum of aux Omega.
    Complex prod = std::pow(2.0, 2 * M) * aux.determinant();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex z = es.eigenvalues()(k);
        Complex arg = 1.0 + 1.0 / (4.0 * z * z);
        if (std::abs(arg.imag()) < 1e-12 && arg.real() < 0.0) arg = 0.0;
        prod *= 1.0 + std::sqrt(arg);
    }
    const double ftot4 = prod.real();
    if (!(ftot4 > 0.0)) fail(ErrorKind::Domain, "fidelity evaluation produced a non-positive determinant");
    const double root = std::pow(ftot4, 0.25) / std::pow(sum.determinant(), 0.25);
    return std::clamp(root * root, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

std::string to_string(StateFamily family) {
    switch (family) {
    case StateFamily::Graph: return "graph";
    case StateFamily::Ghz: return "ghz";
    case StateFamily::LinearCluster: return "linear-cluster";
    case StateFamily::TwoModeCluster: return "two-mode-cluster";
    case StateFamily::CustomAdjacency: return "custom-adjacency";
    }
    return "unknown";
}

StateFamily parse_state_family(const std::string &name) {
    for (auto f : {StateFamily::Graph, StateFamily::Ghz, StateFamily::LinearCluster, StateFamily::TwoModeCluster,
                   StateFamily::CustomAdjacency}) {
        if (to_string(f) == name) return f;
    }
    fail(ErrorKind::InvalidArgument,
         "unknown state family '" + name + "' (expected graph, ghz, linear-cluster, two-mode-cluster, custom-adjacency)");
}

std::string to_string(Topology topology) {
    switch (topology) {
    case Topology::Linear: return "linear";
    case Topology::Ring: return "ring";
    case Topology::Star: return "star";
    case Topology::Complete: return "complete";
    }
    return "unknown";
}

Topology parse_topology(const std::string &name) {
    for (auto t : {Topology::Linear, Topology::Ring, Topology::Star, Topology::Complete}) {
        if (to_string(t) == name) return t;
    }
    fail(ErrorKind::InvalidArgument, "unknown topology '" + name + "' (expected linear, ring, star, complete)");
}

Adjacency topology_adjacency(Topology topology, int modes) {
    if (modes < 1) fail(ErrorKind::InvalidArgument, "invalid mode count " + std::to_string(modes));
    Adjacency G = Adjacency::Zero(modes, modes);
    auto link = [&](int a, int b) {
        if (a == b) return;
        G(a, b) = 1;
        G(b, a) = 1;
    };
    switch (topology) {
    case Topology::Linear:
        for (int m = 0; m + 1 < modes; ++m) link(m, m + 1);
        break;
    case Topology::Ring:
        for (int m = 0; m + 1 < modes; ++m) link(m, m + 1);
        if (modes > 2) link(modes - 1, 0);
        break;
    case Topology::Star:
        for (int m = 1; m < modes; ++m) link(0, m);
        break;
    case Topology::Complete:
        for (int a = 0; a < modes; ++a)
            for (int b = a + 1; b < modes; ++b) link(a, b);
        break;
    }
    return G;
}

void validate(const StateSpec &spec) {
    if (spec.modes < 1) fail(ErrorKind::InvalidArgument, "state needs at least one mode");
    if (!(spec.squeezing_db >= 0.0)) fail(ErrorKind::InvalidArgument, "squeezing_db must be non-negative");
    if (!(spec.loss >= 0.0 && spec.loss < 1.0)) fail(ErrorKind::InvalidArgument, "loss must lie in [0, 1)");
    switch (spec.family) {
    case StateFamily::Ghz:
        if (spec.modes < 2) fail(ErrorKind::InvalidArgument, "ghz family needs at least 2 modes");
        break;
    case StateFamily::TwoModeCluster:
        if (spec.modes != 2) fail(ErrorKind::InvalidArgument, "two-mode-cluster family has exactly 2 modes");
        break;
    case StateFamily::Graph:
    case StateFamily::CustomAdjacency:
        if (spec.family == StateFamily::CustomAdjacency && spec.topology) {
            fail(ErrorKind::InvalidArgument, "custom-adjacency takes an explicit edge list, not a topology");
        }
        for (const auto &[a, b] : spec.edges) {
            if (a < 0 || b < 0 || a >= spec.modes || b >= spec.modes) {
                fail(ErrorKind::InvalidArgument, "edge (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                                     ") references a mode outside 1.." + std::to_string(spec.modes));
            }
            if (a == b) fail(ErrorKind::InvalidArgument, "self-loop on mode " + std::to_string(a + 1));
        }
        break;
    case StateFamily::LinearCluster:
        break;
    }
}

Adjacency adjacency_of(const StateSpec &spec) {
    validate(spec);
    switch (spec.family) {
    case StateFamily::Ghz:
        return topology_adjacency(Topology::Star, spec.modes);
    case StateFamily::LinearCluster:
    case StateFamily::TwoModeCluster:
        return topology_adjacency(Topology::Linear, spec.modes);
    case StateFamily::Graph:
        if (spec.topology) return topology_adjacency(*spec.topology, spec.modes);
        [[fallthrough]];
    case StateFamily::CustomAdjacency: {
        Adjacency G = Adjacency::Zero(spec.modes, spec.modes);
        for (const auto &[a, b] : spec.edges) {
            G(a, b) = 1;
            G(b, a) = 1;
        }
        return G;
    }
    }
    return {};
}

CovarianceMatrix build_state(const StateSpec &spec) {
    validate(spec);
    const double r = squeezing_db_to_r(spec.squeezing_db);
    const CovarianceMatrix pure =
        spec.family == StateFamily::Ghz ? ghz_state_cov(spec.modes, r) : graph_state_cov(adjacency_of(spec), r);
    return apply_loss(pure, spec.loss);
}

StateSpec two_mode_cluster_spec(double loss) {
    StateSpec spec;
    spec.family = StateFamily::TwoModeCluster;
    spec.modes = 2;
    spec.squeezing_db = 6.0;
    spec.loss = loss;
    return spec;
}

}  // namespace gausstomo
