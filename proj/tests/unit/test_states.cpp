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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fock_oracle.hpp"
#include "gausstomo/errors.hpp"
#include "gausstomo/states.hpp"
#include "gausstomo/symplectic.hpp"
#include "helpers.hpp"

using namespace gausstomo;
using testutil::max_diff;

namespace {

double lossy_lambda(double db, double loss) {
    const double g = std::pow(10.0, db / 10.0);
    return std::sqrt(((1 - loss) * g + loss) * ((1 - loss) / g + loss));
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("squeezing conversion") {
    CHECK(squeezing_db_to_r(6.0) == doctest::Approx(3.0 * std::log(10.0) / 10.0).epsilon(1e-15));
    CHECK(squeezing_db_to_r(6.0) == doctest::Approx(0.6908).epsilon(1e-4));
    CHECK(squeezing_db_to_r(0.0) == 0.0);
    CHECK(squeezing_db_to_r(6.1) == doctest::Approx(0.7023).epsilon(1e-4));
    CHECK_THROWS_AS(squeezing_db_to_r(-1.0), Error);
}

TEST_CASE("graph states") {
    const double r = 0.7;
    const CovarianceMatrix V0 = graph_state_cov(Adjacency::Zero(3, 3), r);
    Vector d(6);
    d << std::exp(2 * r), std::exp(2 * r), std::exp(2 * r), std::exp(-2 * r), std::exp(-2 * r), std::exp(-2 * r);
    CHECK(max_diff(V0.mat(), Matrix(d.asDiagonal())) <= 1e-14);

    Adjacency pair(2, 2);
    pair << 0, 1, 1, 0;
    const CovarianceMatrix Vc = graph_state_cov(pair, squeezing_db_to_r(6.0));
    CHECK(symplectic_eigenvalues(Vc.mat()).isApproxToConstant(1.0, 1e-9));

    for (int M : {3, 6, 10, 20}) {
        for (Topology t : {Topology::Linear, Topology::Ring, Topology::Star, Topology::Complete}) {
            if (t == Topology::Ring && M < 3) continue;
            const CovarianceMatrix V = graph_state_cov(topology_adjacency(t, M), 0.6);
            CHECK(symplectic_eigenvalues(V.mat()).isApproxToConstant(1.0, 1e-9));
        }
    }

    Adjacency bad = pair;
    bad(0, 0) = 1;
    CHECK_THROWS_AS(graph_state_cov(bad, r), Error);
    Adjacency asym = Adjacency::Zero(3, 3);
    asym(0, 1) = 1;
    CHECK_THROWS_AS(graph_state_cov(asym, r), Error);
}

TEST_CASE("ghz states") {
    const double r = squeezing_db_to_r(6.0);
    const CovarianceMatrix G2 = ghz_state_cov(2, r);
    CHECK(symplectic_eigenvalues(G2.mat()).isApproxToConstant(1.0, 1e-9));
    // M = 2 equals the two-mode cluster after undoing the phase on mode 1.
    Adjacency pair(2, 2);
    pair << 0, 1, 1, 0;
    const Matrix P = phase_shift_symplectic(2, 0, -std::numbers::pi / 2);
    CHECK(max_diff(P * graph_state_cov(pair, r).mat() * P.transpose(), G2.mat()) <= 1e-12);

    const CovarianceMatrix G6 = ghz_state_cov(6, r);
    CHECK(symplectic_eigenvalues(G6.mat()).isApproxToConstant(1.0, 1e-9));

    // Permuting modes 2..M leaves V invariant.
    Eigen::VectorXi perm(12);
    const int p6[6] = {0, 3, 1, 5, 2, 4};
    for (int m = 0; m < 6; ++m) {
        perm(m) = p6[m];
        perm(m + 6) = p6[m] + 6;
    }
    const Eigen::PermutationMatrix<Eigen::Dynamic> Pm(perm);
    CHECK(max_diff(Pm * G6.mat() * Pm.transpose(), G6.mat()) <= 1e-12);
    CHECK_THROWS_AS(ghz_state_cov(1, r), Error);
}

TEST_CASE("loss channel") {
    const CovarianceMatrix Vc = build_state(two_mode_cluster_spec(0.0));
    CHECK(max_diff(apply_loss(Vc, 0.0).mat(), Vc.mat()) == 0.0);
    CHECK(max_diff(apply_loss(CovarianceMatrix::vacuum(3), 0.4).mat(), Matrix::Identity(6, 6)) <= 1e-15);
    CHECK(min_symplectic_eigenvalue(apply_loss(Vc, 0.3).mat()) == doctest::Approx(1.2119).epsilon(1e-4));
    CHECK(min_symplectic_eigenvalue(build_state(two_mode_cluster_spec()).mat()) ==
          doctest::Approx(lossy_lambda(6.0, 0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(apply_loss(Vc, 1.0), Error);
    CHECK_THROWS_AS(apply_loss(Vc, -0.1), Error);

    SUBCASE("symplectic spectrum is uniform and independent of the graph") {
        const double expect = lossy_lambda(6.5, 0.62);
        CHECK(expect == doctest::Approx(1.278).epsilon(1e-3));
        for (Topology t : {Topology::Linear, Topology::Ring, Topology::Star, Topology::Complete}) {
            const CovarianceMatrix V =
                apply_loss(graph_state_cov(topology_adjacency(t, 10), squeezing_db_to_r(6.5)), 0.62);
            CHECK((symplectic_eigenvalues(V.mat()).array() - expect).abs().maxCoeff() <= 1e-9);
        }
        const CovarianceMatrix g = apply_loss(ghz_state_cov(6, squeezing_db_to_r(6.1)), 0.51);
        CHECK((symplectic_eigenvalues(g.mat()).array() - lossy_lambda(6.1, 0.51)).abs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("physicality predicate") {
    CHECK(is_physical(CovarianceMatrix::vacuum(2)));
    CHECK_FALSE(is_physical(CovarianceMatrix(0.5 * Matrix::Identity(2, 2))));
    Matrix indefinite = Matrix::Identity(2, 2);
    indefinite(1, 1) = -0.2;
    CHECK_FALSE(is_physical(CovarianceMatrix(indefinite)));
    CHECK(min_symplectic_eigenvalue(indefinite) <= 0.0);
}

TEST_CASE("covariance matrix validation") {
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(CovarianceMatrix{asym}, Error);
    CHECK_THROWS_AS(CovarianceMatrix{Matrix::Identity(3, 3)}, Error);
    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(CovarianceMatrix{nan}, Error);
}

TEST_CASE("fidelity closed forms") {
    const CovarianceMatrix vac = CovarianceMatrix::vacuum(1);
    for (double n : {0.0, 0.3, 1.0, 4.0}) {
        const CovarianceMatrix th((2 * n + 1) * Matrix::Identity(2, 2));
        CHECK(fidelity(vac, th) == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-12));
    }
    const double r = 0.6908;
    Matrix sq(2, 2);
    sq << std::exp(2 * r), 0, 0, std::exp(-2 * r);
    const double expect = 2.0 / std::sqrt((1 + std::exp(2 * r)) * (1 + std::exp(-2 * r)));
    CHECK(expect == doctest::Approx(1.0 / std::cosh(r)).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.8011).epsilon(1e-4));
    CHECK(fidelity(CovarianceMatrix(sq), vac) == doctest::Approx(expect).epsilon(1e-12));

    // Pure vs mixed: F = 2^M / sqrt(det(V1 + V2)).
    std::mt19937_64 rng(23);
    for (int k = 0; k < 10; ++k) {
        const int M = 1 + k % 4;
        const CovarianceMatrix pure = testutil::random_physical(M, rng, 1.0, 1.0);
        const CovarianceMatrix mixed = testutil::random_physical(M, rng, 1.0, 2.5);
        const double f = std::pow(2.0, M) / std::sqrt((pure.mat() + mixed.mat()).determinant());
        CHECK(fidelity(pure, mixed) == doctest::Approx(f).epsilon(1e-9));
        CHECK(fidelity(mixed, pure) == doctest::Approx(f).epsilon(1e-9));
    }
}

TEST_CASE("fidelity properties") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 30; ++k) {
        const int M = 1 + k % 5;
        const CovarianceMatrix a = testutil::random_physical(M, rng);
        const CovarianceMatrix b = testutil::random_physical(M, rng);
        CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
        const double fab = fidelity(a, b), fba = fidelity(b, a);
        CHECK(fab == doctest::Approx(fba).epsilon(1e-9));
        CHECK(fab < 1.0 - 1e-6);
        CHECK(fab >= 0.0);
        double prev = 1.0;
        for (double noise : {0.0, 0.05, 0.2, 0.6}) {
            const CovarianceMatrix c(a.mat() + noise * Matrix::Identity(2 * M, 2 * M));
            const double f = fidelity(a, c);
            CHECK(f <= prev + 1e-12);
            prev = f;
        }
    }
    CHECK_THROWS_AS(fidelity(CovarianceMatrix::vacuum(1), CovarianceMatrix(0.5 * Matrix::Identity(2, 2))), Error);
    CHECK_THROWS_AS(fidelity(CovarianceMatrix::vacuum(1), CovarianceMatrix::vacuum(2)), Error);
}

TEST_CASE("fidelity against the Fock-basis oracle") {
    SUBCASE("single mode, cutoff 60") {
        const fock::Space sp{1, 60};
        auto make = [&](double n, double r, double phi) {
            return fock::apply(fock::rotation(sp, 0, phi) * fock::squeezer(sp, 0, r), fock::thermal(sp, {n}));
        };
        // Convention check: squeezing reduces x noise.
        const Matrix Vs = fock::covariance(sp, make(0.0, 0.5, 0.0));
        CHECK(Vs(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
        CHECK(Vs(1, 1) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));

        const double params[][6] = {{0.0, 0.0, 0.0, 1.0, 0.0, 0.0},   {0.0, 0.6908, 0.0, 0.0, 0.0, 0.0},
                                    {0.3, 0.4, 0.2, 0.5, 0.1, 1.1},   {1.0, 0.2, 0.0, 0.2, 0.5, 0.3},
                                    {0.2, 0.0, 0.0, 0.25, 0.0, 0.0},  {0.7, 0.5, -0.4, 0.9, 0.3, 0.8}};
        for (const auto &p : params) {
            const fock::CMat r1 = make(p[0], p[1], p[2]), r2 = make(p[3], p[4], p[5]);
            const CovarianceMatrix V1(fock::covariance(sp, r1)), V2(fock::covariance(sp, r2));
            CHECK(symplectic_eigenvalues(V1.mat())(0) <= 3.0);
            CHECK(fidelity(V1, V2) == doctest::Approx(fock::uhlmann(r1, r2)).epsilon(1e-3));
        }
    }
    SUBCASE("two modes, cutoff 16") {
        const fock::Space sp{2, 16};
        auto make = [&](double n1, double n2, double r1, double r2, double theta, double phi) {
            const fock::CMat U = fock::rotation(sp, 1, phi) * fock::beam_splitter(sp, 0, 1, theta) *
                                 fock::squeezer(sp, 0, r1) * fock::squeezer(sp, 1, r2);
            return fock::apply(U, fock::thermal(sp, {n1, n2}));
        };
        const double params[][12] = {
            {0.0, 0.0, 0.4, -0.4, 0.785, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
            {0.1, 0.3, 0.3, 0.2, 0.5, 0.4, 0.2, 0.0, 0.25, -0.1, 0.9, 0.1},
            {0.2, 0.1, -0.3, 0.35, 0.3, 1.0, 0.2, 0.1, -0.3, 0.35, 0.35, 1.2},
        };
        for (const auto &p : params) {
            const fock::CMat a = make(p[0], p[1], p[2], p[3], p[4], p[5]);
            const fock::CMat b = make(p[6], p[7], p[8], p[9], p[10], p[11]);
            const CovarianceMatrix Va(fock::covariance(sp, a)), Vb(fock::covariance(sp, b));
            CHECK(fidelity(Va, Vb) == doctest::Approx(fock::uhlmann(a, b)).epsilon(1e-3));
        }
    }
}

TEST_CASE("state specs") {
    StateSpec s = two_mode_cluster_spec();
    CHECK(s.modes == 2);
    CHECK(s.loss == 0.3);
    CHECK(s.squeezing_db == 6.0);

    StateSpec bad = s;
    bad.loss = 1.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = s;
    bad.squeezing_db = -3.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad.family = StateFamily::CustomAdjacency;
    bad.squeezing_db = 6.0;
    bad.modes = 3;
    bad.edges = {{0, 3}};
    CHECK_THROWS_AS(validate(bad), Error);
    bad.edges = {{1, 1}};
    CHECK_THROWS_AS(validate(bad), Error);

    StateSpec custom;
    custom.family = StateFamily::CustomAdjacency;
    custom.modes = 3;
    custom.edges = {{0, 1}, {1, 2}};
    custom.loss = 0.0;
    StateSpec lin;
    lin.family = StateFamily::LinearCluster;
    lin.modes = 3;
    lin.loss = 0.0;
    CHECK(max_diff(build_state(custom).mat(), build_state(lin).mat()) == 0.0);
    CHECK(parse_state_family("ghz") == StateFamily::Ghz);
    CHECK(to_string(StateFamily::TwoModeCluster) == "two-mode-cluster");
    CHECK_THROWS_AS(parse_state_family("cluster"), Error);
    CHECK(parse_topology("ring") == Topology::Ring);
}

}
