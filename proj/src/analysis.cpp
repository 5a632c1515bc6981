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

#include "gausstomo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gausstomo/errors.hpp"
#include "gausstomo/states.hpp"
#include "gausstomo/symplectic.hpp"

namespace gausstomo {

Bipartition Bipartition::canonical(std::vector<int> modes, int total_modes) {
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    if (modes.empty()) fail(ErrorKind::InvalidArgument, "bipartition side is empty");
    if (modes.front() < 0 || modes.back() >= total_modes) {
        fail(ErrorKind::InvalidArgument, "bipartition references a mode outside 1.." + std::to_string(total_modes));
    }
    if (static_cast<int>(modes.size()) == total_modes) fail(ErrorKind::InvalidArgument, "bipartition side contains every mode");
    if (modes.front() != 0) {
        std::vector<int> other;
        for (int m = 0, i = 0; m < total_modes; ++m) {
            if (i < static_cast<int>(modes.size()) && modes[i] == m) ++i;
            else other.push_back(m);
        }
        modes = std::move(other);
    }
    return {std::move(modes)};
}

std::string Bipartition::label(int total_modes) const {
    std::string a, b;
    for (int m = 0, i = 0; m < total_modes; ++m) {
        std::string &dst = (i < static_cast<int>(part.size()) && part[i] == m) ? a : b;
        if (&dst == &a) ++i;
        if (!dst.empty()) dst += ",";
        dst += std::to_string(m + 1);
    }
    return a + "|" + b;
}

namespace {

std::vector<int> parse_mode_list(const std::string &side, const std::string &text) {
    std::vector<int> modes;
    std::stringstream ss(side);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
            modes.push_back(v - 1);
        } catch (const std::logic_error &) {
            fail(ErrorKind::InvalidArgument, "cannot parse bipartition '" + text + "'");
        }
    }
    return modes;
}

}  // namespace

Bipartition parse_bipartition(const std::string &text, int total_modes) {
    const auto bar = text.find('|');
    const Bipartition out = Bipartition::canonical(parse_mode_list(text.substr(0, bar), text), total_modes);
    if (bar != std::string::npos) {
        std::vector<int> other = parse_mode_list(text.substr(bar + 1), text);
        std::vector<int> all = parse_mode_list(text.substr(0, bar), text);
        all.insert(all.end(), other.begin(), other.end());
        std::sort(all.begin(), all.end());
        std::vector<int> expect(total_modes);
        for (int m = 0; m < total_modes; ++m) expect[m] = m;
        if (all != expect) {
            fail(ErrorKind::InvalidArgument, "bipartition '" + text + "' must split all " + std::to_string(total_modes) +
                                                 " modes into two disjoint sides");
        }
    }
    return out;
}

double ppt_min_eigenvalue(const CovarianceMatrix &V, const Bipartition &part) {
    const int M = V.modes();
    const Bipartition canon = Bipartition::canonical(part.part, M);
    Vector flip = Vector::Ones(2 * M);
    for (int m : canon.part) flip(m + M) = -1.0;
    const Matrix Vt = flip.asDiagonal() * V.mat() * flip.asDiagonal();
    ComplexMatrix H = Vt.cast<Complex>();
    H.imag() = omega(M);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorKind::Decomposition, "eigensolver failed in PPT test");
    return es.eigenvalues()(0);
}

std::vector<Bipartition> all_bipartitions(int modes) {
    if (modes < 2 || modes > 20) fail(ErrorKind::InvalidArgument, "bipartitions need 2 <= M <= 20, got " + std::to_string(modes));
    std::vector<Bipartition> out;
    const unsigned rest = static_cast<unsigned>(modes - 1);
    for (unsigned mask = 0; mask + 1 < (1u << rest); ++mask) {
        std::vector<int> part{0};
        for (unsigned b = 0; b < rest; ++b)
            if (mask & (1u << b)) part.push_back(static_cast<int>(b) + 1);
        out.push_back({std::move(part)});
    }
    std::sort(out.begin(), out.end(), [](const Bipartition &a, const Bipartition &b) {
        if (a.part.size() != b.part.size()) return a.part.size() < b.part.size();
        return a.part < b.part;
    });
    return out;
}

MultimodeStructure multimode_structure(const CovarianceMatrix &V) {
    const WilliamsonResult w = williamson(V.mat());
    const BlochMessiahResult bm = bloch_messiah(w.S);
    MultimodeStructure s;
    s.lambdas = w.lambdas;
    s.thermal_photon_numbers = (w.lambdas.array() - 1.0) / 2.0;
    s.O_s = bm.O2;
    s.O_t = bm.O2 * bm.O1;
    s.squeezing_r = bm.squeezing;
    s.squeezing_db = -20.0 / std::numbers::ln10 * bm.squeezing;
    s.thermal_modes = ortho_to_modebasis(s.O_t);
    s.squeezing_modes = ortho_to_modebasis(s.O_s);
    return s;
}

Matrix recompose(const MultimodeStructure &s) {
    const Matrix sq = s.O_s * squeezing_matrix(s.squeezing_r) * s.O_s.transpose();
    Vector d(2 * s.lambdas.size());
    d << s.lambdas, s.lambdas;
    return sq * (s.O_t * d.asDiagonal() * s.O_t.transpose()) * sq;
}

double fidelity_report(const CovarianceMatrix &V_hat, const CovarianceMatrix &V_ref) { return fidelity(V_hat, V_ref); }

AnalysisReport analyze(const CovarianceMatrix &V, const AnalysisOptions &opts) {
    AnalysisReport rep;
    rep.modes = V.modes();
    rep.lambda_min = min_symplectic_eigenvalue(V.mat());
    const bool wants = opts.reference || opts.ppt_all || !opts.ppt_parts.empty() || opts.structure;
    if (wants && rep.lambda_min < 1.0 - 1e-9) {
        fail(ErrorKind::Domain, "covariance matrix is unphysical (lambda_min = " + std::to_string(rep.lambda_min) +
                                    "); fidelity, PPT and structure analyses need a physical state");
    }
    if (opts.reference) rep.fidelity = fidelity_report(V, *opts.reference);
    const std::vector<Bipartition> parts = opts.ppt_all ? all_bipartitions(V.modes()) : opts.ppt_parts;
    for (const auto &p : parts) rep.ppt.push_back({p, ppt_min_eigenvalue(V, p)});
    if (opts.structure) rep.structure = multimode_structure(V);
    return rep;
}

}  // namespace gausstomo
