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
#include <vector>

#include "gausstomo/covariance.hpp"

namespace gausstomo {

/// One side of a bipartition, 0-based, sorted, always containing mode 0 so
/// that {A, complement} is counted once.
struct Bipartition {
    std::vector<int> part;

    bool operator==(const Bipartition &) const = default;

    /// Canonical form of `modes` (either side). Throws InvalidArgument for an
    /// empty, full or out-of-range subset.
    static Bipartition canonical(std::vector<int> modes, int total_modes);

    /// "1,2|3,4" style label with 1-based modes.
    std::string label(int total_modes) const;
};

/// Parses "1,3" or "1,3|2,4" (1-based) into a canonical bipartition.
Bipartition parse_bipartition(const std::string &text, int total_modes);

/// Minimum eigenvalue of P V P + i Omega, P flipping p for the modes in
/// `part`. Negative values certify entanglement across the cut.
double ppt_min_eigenvalue(const CovarianceMatrix &V, const Bipartition &part);

/// All 2^{M-1} - 1 cuts, ordered by size of the part containing mode 0 and
/// then lexicographically. 2 <= M <= 20.
std::vector<Bipartition> all_bipartitions(int modes);

/// Thermal noise in the O_t basis followed by squeezing in the O_s basis.
struct MultimodeStructure {
    Vector lambdas;                 // symplectic eigenvalues, descending
    Vector thermal_photon_numbers;  // (lambda - 1) / 2
    ComplexMatrix thermal_modes;    // columns of X - iY for O_t = O_2 O_1
    Vector squeezing_r;             // descending
    Vector squeezing_db;            // 10 log10(e^{-2r})
    ComplexMatrix squeezing_modes;  // columns of X - iY for O_s = O_2
    Matrix O_s;
    Matrix O_t;
};

MultimodeStructure multimode_structure(const CovarianceMatrix &V);

/// (O_s D O_s^T)(O_t diag(L, L) O_t^T)(O_s D O_s^T).
Matrix recompose(const MultimodeStructure &s);

double fidelity_report(const CovarianceMatrix &V_hat, const CovarianceMatrix &V_ref);

struct PptEntry {
    Bipartition part;
    double lambda_pt;
};

struct AnalysisOptions {
    std::optional<CovarianceMatrix> reference;
    /// Empty with ppt_all == false means no PPT analysis.
    bool ppt_all = false;
    std::vector<Bipartition> ppt_parts;
    bool structure = false;
};

struct AnalysisReport {
    int modes = 0;
    double lambda_min = 0.0;
    std::optional<double> fidelity;
    std::vector<PptEntry> ppt;
    std::optional<MultimodeStructure> structure;
};

/// lambda_min is always reported; fidelity, PPT and structure need a physical
/// V and throw Domain (naming lambda_min) otherwise.
AnalysisReport analyze(const CovarianceMatrix &V, const AnalysisOptions &opts);

}  // namespace gausstomo
