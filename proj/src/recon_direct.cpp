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

#include "gausstomo/recon_direct.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gausstomo/errors.hpp"
#include "gausstomo/states.hpp"

namespace gausstomo {

namespace {

DirectReport make_report(Matrix V) {
    CovarianceMatrix cov(symmetrized(V));
    const double lam = min_symplectic_eigenvalue(cov.mat());
    return {std::move(cov), lam, lam >= 1.0 - 1e-9};
}

std::string pair_list(const std::vector<std::pair<int, int>> &pairs) {
    std::string out;
    for (std::size_t i = 0; i < pairs.size() && i < 20; ++i) {
        if (!out.empty()) out += ", ";
        out += "(" + std::to_string(pairs[i].first + 1) + "," + std::to_string(pairs[i].second + 1) + ")";
    }
    if (pairs.size() > 20) out += ", ... (" + std::to_string(pairs.size()) + " total)";
    return out;
}

struct Mean {
    double sum = 0.0;
    int n = 0;
    void add(double v) {
        sum += v;
        ++n;
    }
    bool has() const { return n > 0; }
    double value() const { return sum / n; }
};

enum class Quad { X, P, D };

}  // namespace

DirectReport direct_single(const SufficientStats &stats) {
    const auto &plan = stats.plan;
    if (plan.scheme != Scheme::Single) fail(ErrorKind::InvalidArgument, "direct_single needs single-scheme statistics");
    const int n2 = 2 * plan.modes;
    Matrix scatter = Matrix::Zero(n2, n2);
    Eigen::MatrixXi count = Eigen::MatrixXi::Zero(n2, n2);
    for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto &s = plan.single[k];
        if (std::abs(s.theta) > 1e-12) {
            fail(ErrorKind::InvalidArgument, "direct reconstruction is defined for phase-locked (theta = 0) data only; setting " +
                                                 std::to_string(k + 1) + " has theta = " + std::to_string(s.theta));
        }
        scatter(s.m, s.n) += stats.settings[k].scatter(0, 0);
        count(s.m, s.n) += static_cast<int>(stats.settings[k].count);
    }
    std::vector<std::pair<int, int>> missing;
    for (int a = 0; a < n2; ++a)
        for (int b = a; b < n2; ++b)
            if (count(a, b) == 0) missing.emplace_back(a, b);
    if (!missing.empty()) fail(ErrorKind::IncompletePlan, "missing single-homodyne settings " + pair_list(missing));

    // Var(xi_ab) = (V_aa + V_bb)/2 + V_ab for a != b.
    Matrix var(n2, n2);
    for (int a = 0; a < n2; ++a)
        for (int b = a; b < n2; ++b) var(a, b) = scatter(a, b) / count(a, b);
    Matrix V(n2, n2);
    for (int a = 0; a < n2; ++a) {
        V(a, a) = var(a, a);
        for (int b = a + 1; b < n2; ++b) {
            V(a, b) = var(a, b) - 0.5 * (var(a, a) + var(b, b));
            V(b, a) = V(a, b);
        }
    }
    return make_report(std::move(V));
}

DirectReport direct_joint(const SufficientStats &stats) {
    const auto &plan = stats.plan;
    if (plan.scheme != Scheme::Joint) fail(ErrorKind::InvalidArgument, "direct_joint needs joint-scheme statistics");
    const int M = plan.modes;
    auto classify = [&](double th, std::size_t k) {
        constexpr double tol = 1e-9;
        if (std::abs(th) < tol) return Quad::X;
        if (std::abs(th - std::numbers::pi / 2) < tol) return Quad::P;
        if (std::abs(th - std::numbers::pi / 4) < tol) return Quad::D;
        fail(ErrorKind::InvalidArgument, "direct joint reconstruction needs phases in {0, pi/4, pi/2}; setting " +
                                             std::to_string(k + 1) + " has " + std::to_string(th));
    };

    // xp(m, n) estimates Cov(x_m, p_n); dd(m, n) the covariance in the pi/4 setting.
    std::vector<Mean> xx(M * M), pp(M * M), xp(M * M), dd(M * M);
    auto at = [M](int a, int b) { return a * M + b; };
    for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto &th = plan.joint[k].thetas;
        const Matrix C = stats.settings[k].scatter / static_cast<double>(stats.settings[k].count);
        std::vector<Quad> q(M);
        for (int m = 0; m < M; ++m) q[m] = classify(th[m], k);
        for (int a = 0; a < M; ++a) {
            for (int b = 0; b < M; ++b) {
                if (q[a] == Quad::X && q[b] == Quad::X) xx[at(a, b)].add(C(a, b));
                if (q[a] == Quad::P && q[b] == Quad::P) pp[at(a, b)].add(C(a, b));
                if (q[a] == Quad::D && q[b] == Quad::D) dd[at(a, b)].add(C(a, b));
                if (a != b && q[a] == Quad::X && q[b] == Quad::P) xp[at(a, b)].add(C(a, b));
            }
        }
    }

    std::vector<std::pair<int, int>> missing;
    Matrix V = Matrix::Zero(2 * M, 2 * M);
    for (int m = 0; m < M; ++m) {
        if (!xx[at(m, m)].has() || !pp[at(m, m)].has() || !dd[at(m, m)].has()) {
            missing.emplace_back(m, m);
            continue;
        }
        V(m, m) = xx[at(m, m)].value();
        V(m + M, m + M) = pp[at(m, m)].value();
        // Var((x + p)/sqrt 2) = (V_xx + V_pp)/2 + V_xp.
        V(m, m + M) = V(m + M, m) = dd[at(m, m)].value() - 0.5 * (V(m, m) + V(m + M, m + M));
    }
    for (int a = 0; a < M; ++a) {
        for (int b = a + 1; b < M; ++b) {
            // 2 Cov_{pi/4}(a, b) = xx_ab + xp_ab + xp_ba + pp_ab
            Mean cxx = xx[at(a, b)], cpp = pp[at(a, b)], cab = xp[at(a, b)], cba = xp[at(b, a)];
            const Mean &cdd = dd[at(a, b)];
            if (!cxx.has() && xx[at(b, a)].has()) cxx = xx[at(b, a)];
            if (!cpp.has() && pp[at(b, a)].has()) cpp = pp[at(b, a)];
            const int unknown = !cpp.has() + !cab.has() + !cba.has();
            if (!cxx.has() || unknown > 1 || (unknown == 1 && !cdd.has())) {
                missing.emplace_back(a, b);
                continue;
            }
            double vxx = cxx.value();
            double vpp = cpp.has() ? cpp.value() : 0.0;
            double vab = cab.has() ? cab.value() : 0.0;
            double vba = cba.has() ? cba.value() : 0.0;
            if (unknown == 1) {
                const double rest = 2.0 * cdd.value() - vxx - vpp - vab - vba;
                if (!cpp.has()) vpp = rest;
                else if (!cab.has()) vab = rest;
                else vba = rest;
            }
            V(a, b) = V(b, a) = vxx;
            V(a + M, b + M) = V(b + M, a + M) = vpp;
            V(a, b + M) = V(b + M, a) = vab;
            V(b, a + M) = V(a + M, b) = vba;
        }
    }
    if (!missing.empty()) fail(ErrorKind::IncompletePlan, "joint plan does not determine mode pairs " + pair_list(missing));
    return make_report(std::move(V));
}

DirectReport direct_reconstruct(const SufficientStats &stats) {
    return stats.plan.scheme == Scheme::Single ? direct_single(stats) : direct_joint(stats);
}

}  // namespace gausstomo
