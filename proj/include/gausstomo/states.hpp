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
#include <string>
#include <utility>
#include <vector>

#include "gausstomo/covariance.hpp"

namespace gausstomo {

/// Symmetric 0/1 adjacency matrix with zero diagonal.
using Adjacency = Eigen::MatrixXi;

double squeezing_db_to_r(double db);

/// Pure graph state O_s diag(e^{2r}, e^{-2r}) O_s^T with
/// X = (I + G^2)^{-1/2}, Y = G X.
CovarianceMatrix graph_state_cov(const Adjacency &G, double r);

/// Star graph centered on mode 0 followed by a -pi/2 phase on mode 0.
CovarianceMatrix ghz_state_cov(int modes, double r);

/// Loss channel (1 - l) V + l I.
CovarianceMatrix apply_loss(const CovarianceMatrix &V, double loss);

/// Smallest symplectic eigenvalue. When V is not positive definite the
/// smallest ordinary eigenvalue (<= 0) is returned instead, so the result is
/// always below 1 for such matrices.
double min_symplectic_eigenvalue(const Matrix &V);

bool is_physical(const CovarianceMatrix &V, double tol = 1e-9);

/// Uhlmann fidelity (squared Bures fidelity) of two zero-mean Gaussian
/// states. Throws Domain for unphysical input.
double fidelity(const CovarianceMatrix &V1, const CovarianceMatrix &V2);

// ---------------------------------------------------------------------------
// State specifications

enum class StateFamily { Graph, Ghz, LinearCluster, TwoModeCluster, CustomAdjacency };

std::string to_string(StateFamily family);
StateFamily parse_state_family(const std::string &name);

/// Named topologies accepted by the `graph` family.
enum class Topology { Linear, Ring, Star, Complete };

std::string to_string(Topology topology);
Topology parse_topology(const std::string &name);

Adjacency topology_adjacency(Topology topology, int modes);

struct StateSpec {
    StateFamily family = StateFamily::TwoModeCluster;
    int modes = 2;
    /// 0-based undirected edges; used by `graph` (when no topology is given)
    /// and `custom-adjacency`.
    std::vector<std::pair<int, int>> edges;
    std::optional<Topology> topology;
    double squeezing_db = 6.0;
    double loss = 0.0;
};

/// Throws InvalidArgument when any StateSpec invariant is violated.
void validate(const StateSpec &spec);

Adjacency adjacency_of(const StateSpec &spec);

/// Ground-truth covariance matrix, loss included.
CovarianceMatrix build_state(const StateSpec &spec);

/// Two-mode cluster at 6 dB (r = 3 ln 10 / 10) with the given loss.
StateSpec two_mode_cluster_spec(double loss = 0.3);

}  // namespace gausstomo
