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

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gausstomo/analysis.hpp"
#include "gausstomo/bench.hpp"
#include "gausstomo/dataset_io.hpp"
#include "gausstomo/errors.hpp"
#include "gausstomo/measurement.hpp"
#include "gausstomo/recon_direct.hpp"
#include "gausstomo/recon_mle.hpp"
#include "gausstomo/serialize.hpp"
#include "gausstomo/states.hpp"
#include "gausstomo/symplectic.hpp"

namespace py = pybind11;
using namespace gausstomo;

namespace {

py::object to_py(const Json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

StateSpec make_spec(const std::string &family, int modes, std::optional<std::string> topology,
                    std::vector<std::pair<int, int>> edges, double squeezing_db, double loss) {
    StateSpec s;
    s.family = parse_state_family(family);
    s.modes = modes;
    if (topology) s.topology = parse_topology(*topology);
    for (auto &[a, b] : edges) s.edges.emplace_back(a - 1, b - 1);
    s.squeezing_db = squeezing_db;
    s.loss = loss;
    validate(s);
    return s;
}

py::dict direct_dict(const DirectReport &r) {
    py::dict d;
    d["V_hat"] = r.V_hat.mat();
    d["lambda_min"] = r.lambda_min;
    d["physical"] = r.physical;
    return d;
}

py::dict mle_dict(const MleReport &r) {
    py::dict d;
    d["V_hat"] = r.V_hat.mat();
    d["lambda_min"] = r.lambda_min;
    d["physical"] = r.lambda_min >= 1.0 - 1e-9;
    d["iterations"] = r.iterations;
    d["loglik_trace"] = r.loglik_trace;
    d["hyperparams"] = py::dict(py::arg("eta") = r.hyper.eta, py::arg("beta1") = r.hyper.beta1,
                                py::arg("beta2") = r.hyper.beta2, py::arg("eps") = r.hyper.eps);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian-state covariance tomography core";
    m.attr("__version__") = GAUSSTOMO_VERSION;

    static py::exception<Error> exc(m, "GausstomoError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error &e) {
            py::set_error(exc, ("[" + std::string(to_string(e.kind())) + "] " + e.what()).c_str());
        }
    });

    // symplectic
    m.def("omega", &omega, py::arg("modes"));
    m.def("cayley", &cayley_symplectic, py::arg("T"));
    m.def("cayley_inverse", &cayley_inverse, py::arg("S"));
    m.def("is_symplectic", &is_symplectic, py::arg("S"), py::arg("tol") = 1e-9);
    m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("V"));
    m.def(
        "williamson",
        [](const Matrix &V) {
            auto w = williamson(V);
            return py::make_tuple(w.S, w.lambdas);
        },
        py::arg("V"), "Returns (S, lambdas) with V = S diag(lambdas, lambdas) S^T.");
    m.def(
        "bloch_messiah",
        [](const Matrix &S) {
            auto b = bloch_messiah(S);
            return py::make_tuple(b.O2, b.squeezing, b.O1);
        },
        py::arg("S"), "Returns (O2, r, O1) with S = O2 diag(e^r, e^-r) O1.");

    // states
    m.def("squeezing_db_to_r", &squeezing_db_to_r, py::arg("db"));
    m.def(
        "graph_state", [](const Adjacency &G, double r) { return graph_state_cov(G, r).mat(); }, py::arg("G"),
        py::arg("r"));
    m.def(
        "ghz_state", [](int modes, double r) { return ghz_state_cov(modes, r).mat(); }, py::arg("modes"),
        py::arg("r"));
    m.def(
        "apply_loss", [](const Matrix &V, double l) { return apply_loss(CovarianceMatrix(V), l).mat(); },
        py::arg("V"), py::arg("loss"));
    m.def(
        "build_state",
        [](const std::string &family, int modes, std::optional<std::string> topology,
           std::vector<std::pair<int, int>> edges, double squeezing_db, double loss) {
            return build_state(make_spec(family, modes, topology, std::move(edges), squeezing_db, loss)).mat();
        },
        py::arg("family") = "two-mode-cluster", py::arg("modes") = 2, py::arg("topology") = py::none(),
        py::arg("edges") = std::vector<std::pair<int, int>>{}, py::arg("squeezing_db") = 6.0, py::arg("loss") = 0.0,
        "Covariance matrix of a named state; edges are 1-based pairs.");
    m.def(
        "fidelity", [](const Matrix &a, const Matrix &b) { return fidelity(CovarianceMatrix(a), CovarianceMatrix(b)); },
        py::arg("V1"), py::arg("V2"));
    m.def(
        "is_physical", [](const Matrix &V, double tol) { return is_physical(CovarianceMatrix(V), tol); },
        py::arg("V"), py::arg("tol") = 1e-9);

    // measurement
    m.def(
        "settings", [](int modes, const std::string &scheme) { return to_py(to_json(make_plan(parse_scheme(scheme), modes))); },
        py::arg("modes"), py::arg("scheme") = "joint");

    py::class_<QuadratureDataset>(m, "Dataset")
        .def_property_readonly("scheme", [](const QuadratureDataset &d) { return to_string(d.plan.scheme); })
        .def_property_readonly("modes", [](const QuadratureDataset &d) { return d.plan.modes; })
        .def_property_readonly("n_rep", &QuadratureDataset::n_rep)
        .def_property_readonly("n_total", &QuadratureDataset::n_total)
        .def_property_readonly("seed", [](const QuadratureDataset &d) { return d.seed; })
        .def_property_readonly("outcomes", [](const QuadratureDataset &d) { return d.outcomes; })
        .def_property_readonly("plan", [](const QuadratureDataset &d) { return to_py(to_json(d.plan)); })
        .def("write", [](const QuadratureDataset &d, const std::filesystem::path &p) { write_dataset(d, p); },
             py::arg("path"))
        .def("__repr__", [](const QuadratureDataset &d) {
            return "<Dataset " + to_string(d.plan.scheme) + " M=" + std::to_string(d.plan.modes) +
                   " N_s=" + std::to_string(d.plan.size()) + " N_r=" + std::to_string(d.n_rep()) + ">";
        });

    m.def(
        "sample",
        [](const Matrix &V, const std::string &scheme, int n_rep, std::uint64_t seed, int threads) {
            const CovarianceMatrix cov(V);
            py::gil_scoped_release release;
            return sample_dataset(cov, make_plan(parse_scheme(scheme), cov.modes()), n_rep, seed, threads);
        },
        py::arg("V"), py::arg("scheme"), py::arg("n_rep"), py::arg("seed") = 1, py::arg("threads") = 1);
    m.def("read_dataset", py::overload_cast<const std::filesystem::path &>(&read_dataset), py::arg("path"));

    // reconstruction
    m.def(
        "reconstruct_direct", [](const QuadratureDataset &d) { return direct_dict(direct_reconstruct(compress(d))); },
        py::arg("dataset"));
    m.def(
        "reconstruct_mle",
        [](const QuadratureDataset &d, std::optional<int> t_max, double eta, bool plateau_stop, double kappa_init) {
            MleOptions o;
            o.t_max = t_max;
            o.adam.eta = eta;
            o.plateau_stop = plateau_stop;
            o.kappa_init = kappa_init;
            MleReport r = [&] {
                py::gil_scoped_release release;
                return reconstruct_mle(compress(d), o);
            }();
            return mle_dict(r);
        },
        py::arg("dataset"), py::arg("t_max") = py::none(), py::arg("eta") = 0.02, py::arg("plateau_stop") = false,
        py::arg("kappa_init") = 1e-3);

    // analysis
    m.def(
        "ppt_min_eigenvalue",
        [](const Matrix &V, const std::string &part) {
            const CovarianceMatrix cov(V);
            return ppt_min_eigenvalue(cov, parse_bipartition(part, cov.modes()));
        },
        py::arg("V"), py::arg("partition"), "Partition as '1,2' or '1,2|3,4' (1-based).");
    m.def(
        "analyze",
        [](const Matrix &V, std::optional<Matrix> reference, const std::string &ppt, bool structure) {
            const CovarianceMatrix cov(V);
            AnalysisOptions o;
            if (reference) o.reference = CovarianceMatrix(*reference);
            if (ppt == "all") {
                o.ppt_all = true;
            } else if (ppt != "none") {
                std::stringstream ss(ppt);
                std::string part;
                while (std::getline(ss, part, ';'))
                    if (!part.empty()) o.ppt_parts.push_back(parse_bipartition(part, cov.modes()));
            }
            o.structure = structure;
            return to_py(to_json(analyze(cov, o)));
        },
        py::arg("V"), py::arg("reference") = py::none(), py::arg("ppt") = "none", py::arg("structure") = false);

    // bench
    m.def(
        "bench",
        [](const std::string &suite, std::optional<int> trials, std::uint64_t seed, int threads,
           std::vector<long long> sweep) {
            BenchConfig c;
            c.suite = parse_suite(suite);
            c.trials = trials;
            c.seed = seed;
            c.threads = threads;
            c.sweep = std::move(sweep);
            BenchResult r = [&] {
                py::gil_scoped_release release;
                return run_bench(c);
            }();
            return to_py(summary_json(r));
        },
        py::arg("suite"), py::arg("trials") = py::none(), py::arg("seed") = 1, py::arg("threads") = 1,
        py::arg("sweep") = std::vector<long long>{});
}
