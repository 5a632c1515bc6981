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

#include "gausstomo/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "gausstomo/errors.hpp"

namespace gausstomo {

namespace {

Json rows_of(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_of(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

[[noreturn]] void bad(const std::string &what) { fail(ErrorKind::DataFormat, what); }

}  // namespace

Json to_json(const CovarianceMatrix &V) { return {{"modes", V.modes()}, {"mat", rows_of(V.mat())}}; }

CovarianceMatrix covariance_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("mat")) bad("covariance JSON needs a \"mat\" field");
    const Json &mat = j["mat"];
    if (!mat.is_array() || mat.empty()) bad("covariance \"mat\" must be a non-empty array");
    Matrix m;
    try {
        if (mat.front().is_array()) {
            const auto n = static_cast<Eigen::Index>(mat.size());
            m.resize(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const Json &row = mat[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                    bad("covariance row " + std::to_string(i + 1) + " has the wrong length");
                }
                for (Eigen::Index c = 0; c < n; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
            }
        } else {
            const auto total = static_cast<Eigen::Index>(mat.size());
            const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(total))));
            if (n * n != total) bad("flat covariance array length is not a perfect square");
            m.resize(n, n);
            for (Eigen::Index i = 0; i < total; ++i) m(i / n, i % n) = mat[static_cast<std::size_t>(i)].get<double>();
        }
    } catch (const Json::exception &e) {
        bad(std::string("covariance entries must be numbers: ") + e.what());
    }
    if (m.rows() % 2 != 0) bad("covariance dimension must be even");
    if (j.contains("modes") && j["modes"].get<long long>() * 2 != m.rows()) {
        bad("covariance \"modes\" does not match the matrix dimension");
    }
    try {
        return CovarianceMatrix(m);
    } catch (const Error &e) {
        bad(e.what());
    }
}

void write_covariance_csv(const CovarianceMatrix &V, std::ostream &out) {
    const Matrix &m = V.mat();
    char buf[40];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

CovarianceMatrix read_covariance_csv(std::istream &in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (tok.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(tok);
            } catch (const std::exception &) {
                bad("covariance CSV row " + std::to_string(rows.size() + 1) + ": cannot parse '" + tok + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n == 0 || n % 2 != 0) bad("covariance CSV must have an even, non-zero number of rows");
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n) {
            bad("covariance CSV row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                " columns, expected " + std::to_string(n));
        }
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    try {
        return CovarianceMatrix(m);
    } catch (const Error &e) {
        bad(e.what());
    }
}

CovarianceMatrix read_covariance(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open covariance file '" + path.string() + "'");
    if (path.extension() == ".csv") return read_covariance_csv(in);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception &e) {
        bad("malformed covariance JSON '" + path.string() + "': " + e.what());
    }
    return covariance_from_json(j);
}

Json to_json(const StateSpec &spec) {
    Json j;
    j["family"] = to_string(spec.family);
    j["modes"] = spec.modes;
    Json edges = Json::array();
    for (const auto &[a, b] : spec.edges) edges.push_back({a + 1, b + 1});
    j["adjacency"] = std::move(edges);
    if (spec.topology) j["topology"] = to_string(*spec.topology);
    j["squeezing_db"] = spec.squeezing_db;
    j["loss"] = spec.loss;
    return j;
}

StateSpec state_spec_from_json(const Json &j) {
    if (!j.is_object()) bad("state spec must be a JSON object");
    StateSpec spec;
    try {
        if (j.contains("family")) spec.family = parse_state_family(j["family"].get<std::string>());
        if (j.contains("modes")) spec.modes = j["modes"].get<int>();
        if (j.contains("adjacency")) {
            for (const Json &e : j["adjacency"]) {
                if (!e.is_array() || e.size() != 2) bad("adjacency entries must be [a, b] pairs");
                spec.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
            }
        }
        if (j.contains("topology") && !j["topology"].is_null()) spec.topology = parse_topology(j["topology"].get<std::string>());
        if (j.contains("squeezing_db")) spec.squeezing_db = j["squeezing_db"].get<double>();
        if (j.contains("loss")) spec.loss = j["loss"].get<double>();
    } catch (const Json::exception &e) {
        bad(std::string("malformed state spec: ") + e.what());
    }
    validate(spec);
    return spec;
}

Json to_json(const MeasurementPlan &plan) {
    Json settings = Json::array();
    if (plan.scheme == Scheme::Single) {
        for (const auto &s : plan.single) settings.push_back({{"m", s.m + 1}, {"n", s.n + 1}, {"theta", s.theta}});
    } else {
        for (const auto &s : plan.joint) settings.push_back({{"thetas", s.thetas}});
    }
    return {{"scheme", to_string(plan.scheme)}, {"modes", plan.modes}, {"n_settings", plan.size()},
            {"settings", std::move(settings)}};
}

Json to_json(const DirectReport &report) {
    Json j = to_json(report.V_hat);
    j["method"] = "direct";
    j["lambda_min"] = report.lambda_min;
    j["physical"] = report.physical;
    return j;
}

Json to_json(const MleReport &report, bool with_trace) {
    Json j = to_json(report.V_hat);
    j["method"] = "mle";
    j["lambda_min"] = report.lambda_min;
    j["physical"] = report.lambda_min >= 1.0 - 1e-9;
    j["iterations"] = report.iterations;
    j["hyperparams"] = {{"eta", report.hyper.eta},
                        {"beta1", report.hyper.beta1},
                        {"beta2", report.hyper.beta2},
                        {"eps", report.hyper.eps}};
    if (!report.loglik_trace.empty()) j["final_loglik"] = report.loglik_trace.back();
    if (with_trace) j["loglik_trace"] = report.loglik_trace;
    return j;
}

Json to_json(const ComplexMatrix &m) { return {{"re", rows_of(m.real())}, {"im", rows_of(m.imag())}}; }

Json to_json(const AnalysisReport &report) {
    Json j;
    j["modes"] = report.modes;
    j["lambda_min"] = report.lambda_min;
    j["physical"] = report.lambda_min >= 1.0 - 1e-9;
    if (report.fidelity) j["fidelity"] = *report.fidelity;
    Json ppt = Json::array();
    for (const auto &e : report.ppt) {
        Json modes = Json::array();
        for (int m : e.part.part) modes.push_back(m + 1);
        ppt.push_back({{"partition", e.part.label(report.modes)}, {"modes", modes}, {"lambda_pt", e.lambda_pt}});
    }
    j["ppt"] = std::move(ppt);
    if (report.structure) {
        const auto &s = *report.structure;
        j["structure"] = {{"symplectic_eigenvalues", vector_of(s.lambdas)},
                          {"thermal_photon_numbers", vector_of(s.thermal_photon_numbers)},
                          {"thermal_modes", to_json(s.thermal_modes)},
                          {"squeezing_r", vector_of(s.squeezing_r)},
                          {"squeezing_db", vector_of(s.squeezing_db)},
                          {"squeezing_modes", to_json(s.squeezing_modes)}};
    }
    return j;
}

}  // namespace gausstomo
