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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gausstomo/analysis.hpp"
#include "gausstomo/bench.hpp"
#include "gausstomo/dataset_io.hpp"
#include "gausstomo/errors.hpp"
#include "gausstomo/measurement.hpp"
#include "gausstomo/recon_direct.hpp"
#include "gausstomo/recon_mle.hpp"
#include "gausstomo/serialize.hpp"
#include "gausstomo/states.hpp"

namespace fs = std::filesystem;
using namespace gausstomo;

namespace {

constexpr double kPi = std::numbers::pi;

struct Globals {
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string output;
    std::string format;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return 2;
    case ErrorKind::InvalidShape:
    case ErrorKind::InvalidCovariance:
    case ErrorKind::IncompletePlan:
    case ErrorKind::DataFormat:
    case ErrorKind::Domain:
    case ErrorKind::Io: return 3;
    case ErrorKind::SingularParametrization:
    case ErrorKind::Decomposition:
    case ErrorKind::Optimization: return 4;
    }
    return 4;
}

std::string one_line(std::string s) {
    for (char &c : s)
        if (c == '\n' || c == '\r') c = ' ';
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

int report_error(std::string_view kind, const std::string &msg, int code) {
    std::cerr << "error[" << kind << "]: " << one_line(msg) << '\n';
    return code;
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception &e) {
        fail(ErrorKind::DataFormat, "'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Writes to --output when given, stdout otherwise.
void emit(const Globals &g, const std::string &text) {
    if (g.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open '" + g.output + "' for writing");
    out << text;
    if (!out) fail(ErrorKind::Io, "failed writing '" + g.output + "'");
}

std::string format_of(const Globals &g, const std::string &fallback, std::initializer_list<const char *> allowed) {
    const std::string f = g.format.empty() ? fallback : g.format;
    for (const char *a : allowed)
        if (f == a) return f;
    std::string list;
    for (const char *a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw UsageError("--format " + f + " is not supported here (expected " + list + ")");
}

// ---------------------------------------------------------------------------
// schemas

Json run_config_schema() {
    return {
        {"title", "RunConfig"},
        {"type", "object"},
        {"properties",
         {{"state",
           {{"type", "object"},
            {"properties",
             {{"family", {{"enum", {"graph", "ghz", "linear-cluster", "two-mode-cluster", "custom-adjacency"}}}},
              {"modes", {{"type", "integer"}, {"minimum", 1}}},
              {"topology", {{"enum", {"linear", "ring", "star", "complete"}}}},
              {"adjacency", {{"type", "array"}, {"description", "1-based [a, b] edge pairs"}}},
              {"squeezing_db", {{"type", "number"}, {"minimum", 0}}},
              {"loss", {{"type", "number"}, {"minimum", 0}, {"exclusiveMaximum", 1}}}}}}},
          {"scheme", {{"enum", {"single", "joint"}}}},
          {"n_rep", {{"type", "integer"}, {"minimum", 2}, {"description", "repetitions per setting (N_r)"}}},
          {"n_total", {{"type", "integer"}, {"description", "total outcomes N_t; used when n_rep is absent"}}},
          {"seed", {{"type", "integer"}, {"minimum", 0}}},
          {"method", {{"enum", {"direct", "mle", "both"}}}},
          {"mle",
           {{"type", "object"},
            {"properties",
             {{"t_max", {{"type", "integer"}, {"minimum", 1}}},
              {"eta", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"plateau_stop", {{"type", "boolean"}}}}}}},
          {"output",
           {{"type", "object"},
            {"properties", {{"dataset", {{"type", "string"}}}, {"report", {{"type", "string"}}}}}}}}}};
}

Json bench_config_schema() {
    return {{"title", "BenchConfig"},
            {"type", "object"},
            {"required", {"suite"}},
            {"properties",
             {{"suite", {{"enum", {"physicality", "sample-sweep", "mode-sweep", "connectivity", "entanglement"}}}},
              {"trials", {{"type", "integer"}, {"minimum", 10}}},
              {"scale", {{"type", "number"}, {"exclusiveMinimum", 0}, {"maximum", 1}}},
              {"paper_scale", {{"type", "boolean"}}},
              {"seed", {{"type", "integer"}, {"minimum", 0}}},
              {"threads", {{"type", "integer"}, {"minimum", 1}}},
              {"sweep", {{"type", "array"}, {"items", {{"type", "integer"}}}}}}}};
}

// ---------------------------------------------------------------------------
// run config

struct RunConfig {
    StateSpec state;
    Scheme scheme = Scheme::Single;
    std::optional<long long> n_rep;
    std::optional<long long> n_total;
    std::optional<std::uint64_t> seed;
    std::string method = "both";
    std::optional<int> t_max;
    std::optional<double> eta;
    bool plateau_stop = false;
    std::string dataset_path;
    std::string report_path;
};

RunConfig run_config_from_json(const Json &j) {
    if (!j.is_object()) fail(ErrorKind::DataFormat, "run config must be a JSON object");
    RunConfig c;
    try {
        if (j.contains("state")) c.state = state_spec_from_json(j["state"]);
        if (j.contains("scheme")) c.scheme = parse_scheme(j["scheme"].get<std::string>());
        if (j.contains("n_rep")) c.n_rep = j["n_rep"].get<long long>();
        if (j.contains("n_total")) c.n_total = j["n_total"].get<long long>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("method")) c.method = j["method"].get<std::string>();
        if (j.contains("mle")) {
            const Json &m = j["mle"];
            if (m.contains("t_max")) c.t_max = m["t_max"].get<int>();
            if (m.contains("eta")) c.eta = m["eta"].get<double>();
            if (m.contains("plateau_stop")) c.plateau_stop = m["plateau_stop"].get<bool>();
        }
        if (j.contains("output")) {
            const Json &o = j["output"];
            if (o.contains("dataset")) c.dataset_path = o["dataset"].get<std::string>();
            if (o.contains("report")) c.report_path = o["report"].get<std::string>();
        }
    } catch (const Json::exception &e) {
        fail(ErrorKind::DataFormat, std::string("run config: ") + e.what());
    }
    return c;
}

// ---------------------------------------------------------------------------
// settings

std::string angle_text(double t) {
    if (std::abs(t) < 1e-15) return "0";
    if (std::abs(t - kPi / 2) < 1e-15) return "pi/2";
    if (std::abs(t - kPi / 4) < 1e-15) return "pi/4";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

std::string quadrature_name(int k, int modes) {
    return (k < modes ? "x" : "p") + std::to_string(k % modes + 1);
}

std::string joint_operator(double t, int mode) {
    const std::string m = std::to_string(mode + 1);
    if (std::abs(t) < 1e-15) return "x" + m;
    if (std::abs(t - kPi / 2) < 1e-15) return "p" + m;
    if (std::abs(t - kPi / 4) < 1e-15) return "(x" + m + "+p" + m + ")/sqrt2";
    return "x" + m + "(" + angle_text(t) + ")";
}

std::string plan_table(const MeasurementPlan &plan) {
    std::ostringstream out;
    if (plan.scheme == Scheme::Single) {
        out << "j\tm\tn\ttheta\toperator\n";
        for (std::size_t k = 0; k < plan.single.size(); ++k) {
            const auto &s = plan.single[k];
            std::string op = s.m == s.n ? quadrature_name(s.m, plan.modes)
                                        : "(" + quadrature_name(s.m, plan.modes) + "+" +
                                              quadrature_name(s.n, plan.modes) + ")/sqrt2";
            out << k + 1 << '\t' << s.m + 1 << '\t' << s.n + 1 << '\t' << angle_text(s.theta) << '\t' << op << '\n';
        }
        return out.str();
    }
    out << "j\ttheta\tzeta\n";
    for (std::size_t k = 0; k < plan.joint.size(); ++k) {
        const auto &th = plan.joint[k].thetas;
        std::string angles = "[", ops = "[";
        for (std::size_t m = 0; m < th.size(); ++m) {
            angles += (m ? ", " : "") + angle_text(th[m]);
            ops += (m ? ", " : "") + joint_operator(th[m], static_cast<int>(m));
        }
        out << k + 1 << '\t' << angles << "]\t" << ops << "]\n";
    }
    return out.str();
}

int cmd_settings(const Globals &g, int modes, const std::string &scheme) {
    const MeasurementPlan plan = make_plan(parse_scheme(scheme), modes);
    const std::string fmt = format_of(g, "table", {"table", "json"});
    emit(g, fmt == "json" ? to_json(plan).dump(2) + "\n" : plan_table(plan));
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct StateFlags {
    std::string state_path;
    std::string family;
    int modes = 0;
    std::string topology;
    std::string edges;
    std::optional<double> squeezing_db;
    std::optional<double> loss;
};

std::vector<std::pair<int, int>> parse_edges(const std::string &text) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto dash = tok.find('-');
        try {
            if (dash == std::string::npos) throw std::invalid_argument(tok);
            out.emplace_back(std::stoi(tok.substr(0, dash)) - 1, std::stoi(tok.substr(dash + 1)) - 1);
        } catch (const std::logic_error &) {
            throw UsageError("cannot parse edge '" + tok + "' (expected a-b, 1-based)");
        }
    }
    return out;
}

void apply_state_flags(StateSpec &spec, const StateFlags &f) {
    if (!f.state_path.empty()) spec = state_spec_from_json(read_json_file(f.state_path));
    if (!f.family.empty()) spec.family = parse_state_family(f.family);
    if (f.modes > 0) spec.modes = f.modes;
    if (!f.topology.empty()) spec.topology = parse_topology(f.topology);
    if (!f.edges.empty()) spec.edges = parse_edges(f.edges);
    if (f.squeezing_db) spec.squeezing_db = *f.squeezing_db;
    if (f.loss) spec.loss = *f.loss;
    if (spec.family == StateFamily::TwoModeCluster && f.modes == 0 && f.state_path.empty()) spec.modes = 2;
}

int n_rep_of(const RunConfig &c, const MeasurementPlan &plan) {
    long long n = 0;
    if (c.n_rep) {
        n = *c.n_rep;
    } else if (c.n_total) {
        const long long per = static_cast<long long>(plan.size()) * plan.width();
        if (*c.n_total % per != 0) {
            fail(ErrorKind::InvalidArgument, "N_t = " + std::to_string(*c.n_total) + " is not a multiple of " +
                                                 std::to_string(per) + " (settings x outcomes per shot)");
        }
        n = *c.n_total / per;
    } else {
        fail(ErrorKind::InvalidArgument, "give --nt or --nrep (or n_total / n_rep in the config)");
    }
    if (n < 2 || n > 100000000) fail(ErrorKind::InvalidArgument, "N_r = " + std::to_string(n) + " out of range");
    return static_cast<int>(n);
}

int cmd_simulate(Globals g, RunConfig c) {
    validate(c.state);
    const CovarianceMatrix V = build_state(c.state);
    const MeasurementPlan plan = make_plan(c.scheme, c.state.modes);
    const std::uint64_t seed = g.seed ? *g.seed : c.seed.value_or(1);
    const QuadratureDataset data = sample_dataset(V, plan, n_rep_of(c, plan), seed, g.threads);
    if (g.output.empty()) g.output = c.dataset_path;
    std::ostringstream out;
    write_dataset(data, out);
    emit(g, out.str());
    if (!g.output.empty()) {
        std::cerr << "wrote " << g.output << ": " << to_string(plan.scheme) << ", M = " << plan.modes
                  << ", N_s = " << plan.size() << ", N_r = " << data.n_rep() << ", N_t = " << data.n_total() << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructFlags {
    std::string dataset;
    bool trace = false;
    std::string save_cov;
};

void save_cov(const std::string &path, const Json &report) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << Json{{"modes", report["modes"]}, {"mat", report["mat"]}}.dump(2) << '\n';
}

std::string report_table(const Json &j) {
    std::ostringstream out;
    out << "method\tphysical\tlambda_min\titerations\tfinal_loglik\n";
    for (const char *key : {"direct", "mle"}) {
        if (!j.contains(key)) continue;
        const Json &r = j[key];
        out << key << '\t' << (r["physical"].get<bool>() ? "yes" : "no") << '\t' << r["lambda_min"].get<double>()
            << '\t' << (r.contains("iterations") ? std::to_string(r["iterations"].get<int>()) : "-") << '\t'
            << (r.contains("final_loglik") ? std::to_string(r["final_loglik"].get<double>()) : "-") << '\n';
    }
    return out.str();
}

int cmd_reconstruct(Globals g, RunConfig c, const ReconstructFlags &f) {
    if (c.method != "direct" && c.method != "mle" && c.method != "both") {
        throw UsageError("--method must be direct, mle or both (got '" + c.method + "')");
    }
    const std::string path = f.dataset.empty() ? c.dataset_path : f.dataset;
    if (path.empty()) throw UsageError("no dataset given");
    const SufficientStats stats = compress(read_dataset(fs::path(path)));
    Json out = Json::object();
    if (c.method != "mle") out["direct"] = to_json(direct_reconstruct(stats));
    if (c.method != "direct") {
        MleOptions opts;
        opts.t_max = c.t_max;
        if (c.eta) opts.adam.eta = *c.eta;
        opts.plateau_stop = c.plateau_stop;
        out["mle"] = to_json(reconstruct_mle(stats, opts), f.trace);
    }
    out["dataset"] = {{"path", path}, {"scheme", to_string(stats.plan.scheme)}, {"modes", stats.plan.modes}};
    if (!f.save_cov.empty()) {
        for (const char *key : {"direct", "mle"})
            if (out.contains(key)) save_cov(f.save_cov + "." + key + ".json", out[key]);
    }
    if (g.output.empty()) g.output = c.report_path;
    const std::string fmt = format_of(g, "json", {"json", "table"});
    emit(g, fmt == "json" ? out.dump(2) + "\n" : report_table(out));
    return 0;
}

// ---------------------------------------------------------------------------
// analyze

CovarianceMatrix covariance_input(const std::string &path, const std::string &pick) {
    if (fs::path(path).extension() == ".csv") return read_covariance(path);
    const Json j = read_json_file(path);
    if (j.contains("mat")) return covariance_from_json(j);
    if (j.contains(pick)) return covariance_from_json(j[pick]);
    fail(ErrorKind::DataFormat, "'" + path + "' holds neither a covariance matrix nor a '" + pick + "' report");
}

std::string analysis_table(const Json &j) {
    std::ostringstream out;
    out.precision(6);
    out << "modes\t" << j["modes"].get<int>() << "\nlambda_min\t" << j["lambda_min"].get<double>() << "\nphysical\t"
        << (j["physical"].get<bool>() ? "yes" : "no") << '\n';
    if (j.contains("fidelity")) out << "fidelity\t" << j["fidelity"].get<double>() << '\n';
    if (j.contains("ppt") && !j["ppt"].empty()) {
        out << "\npartition\tlambda_pt\n";
        for (const Json &p : j["ppt"]) out << p["partition"].get<std::string>() << '\t' << p["lambda_pt"].get<double>() << '\n';
    }
    if (j.contains("structure")) {
        const Json &s = j["structure"];
        out << "\nk\tlambda\tn_th\tsqueezing_db\n";
        for (std::size_t k = 0; k < s["symplectic_eigenvalues"].size(); ++k) {
            out << k + 1 << '\t' << s["symplectic_eigenvalues"][k].get<double>() << '\t'
                << s["thermal_photon_numbers"][k].get<double>() << '\t' << s["squeezing_db"][k].get<double>() << '\n';
        }
    }
    return out.str();
}

int cmd_analyze(const Globals &g, const std::string &path, const std::string &reference, const std::string &ppt,
                bool structure, const std::string &pick) {
    const CovarianceMatrix V = covariance_input(path, pick);
    AnalysisOptions opts;
    if (!reference.empty()) opts.reference = covariance_input(reference, pick);
    if (ppt == "all") {
        opts.ppt_all = true;
    } else if (ppt != "none") {
        std::stringstream ss(ppt);
        std::string part;
        while (std::getline(ss, part, ';'))
            if (!part.empty()) opts.ppt_parts.push_back(parse_bipartition(part, V.modes()));
    }
    opts.structure = structure;
    const Json out = to_json(analyze(V, opts));
    const std::string fmt = format_of(g, "json", {"json", "table"});
    emit(g, fmt == "json" ? out.dump(2) + "\n" : analysis_table(out));
    return 0;
}

// ---------------------------------------------------------------------------
// bench

std::string checks_table(const BenchResult &r) {
    std::ostringstream out;
    for (const auto &c : r.checks) out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  " << c.detail << '\n';
    out << (r.passed() ? "PASS" : "FAIL") << "  suite " << to_string(r.config.suite) << '\n';
    return out.str();
}

int cmd_bench(const Globals &g, BenchConfig cfg, const std::string &config_path, bool suite_flag) {
    if (!config_path.empty()) {
        const Json j = read_json_file(config_path);
        try {
            if (j.contains("suite") && !suite_flag) cfg.suite = parse_suite(j["suite"].get<std::string>());
            if (j.contains("trials") && !cfg.trials) cfg.trials = j["trials"].get<int>();
            if (j.contains("scale")) cfg.scale = j["scale"].get<double>();
            if (j.contains("paper_scale")) cfg.paper_scale = cfg.paper_scale || j["paper_scale"].get<bool>();
            if (j.contains("seed") && !g.seed) cfg.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("threads") && g.threads == 1) cfg.threads = j["threads"].get<int>();
            if (j.contains("sweep") && cfg.sweep.empty()) cfg.sweep = j["sweep"].get<std::vector<long long>>();
        } catch (const Json::exception &e) {
            fail(ErrorKind::DataFormat, std::string("bench config: ") + e.what());
        }
    }
    if (g.seed) cfg.seed = *g.seed;
    const std::string fmt = format_of(g, "table", {"table", "json"});
    const BenchResult res = run_bench(cfg);

    const fs::path dir = g.output.empty() ? fs::path(".") : fs::path(g.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
    const std::string stem = to_string(cfg.suite);
    {
        std::ofstream csv(dir / (stem + ".csv"));
        if (!csv) fail(ErrorKind::Io, "cannot write " + (dir / (stem + ".csv")).string());
        write_csv(res, csv);
    }
    const Json summary = summary_json(res);
    {
        std::ofstream js(dir / (stem + "_summary.json"));
        if (!js) fail(ErrorKind::Io, "cannot write " + (dir / (stem + "_summary.json")).string());
        js << summary.dump(2) << '\n';
    }
    std::cout << (fmt == "json" ? summary.dump(2) + "\n" : checks_table(res));
    return 0;
}

bool wants_schema(int argc, char **argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--help-schema") return true;
        if ((a == "--help" || a == "-h") && i + 1 < argc && std::string(argv[i + 1]) == "schema") return true;
    }
    return false;
}

}  // namespace

int main(int argc, char **argv) {
    if (wants_schema(argc, argv)) {
        std::cout << Json{{"RunConfig", run_config_schema()}, {"BenchConfig", bench_config_schema()}}.dump(2) << '\n';
        return 0;
    }

    CLI::App app{"Gaussian-state covariance tomography: simulate, reconstruct, analyze, benchmark"};
    app.set_version_flag("--version", GAUSSTOMO_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.footer("Config schemas: gausstomo --help schema\nExit codes: 0 ok, 2 usage, 3 data, 4 numerical");

    Globals g;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--output,-o", g.output, "Output file (bench: directory)");
    app.add_option("--format", g.format, "table, json");

    int modes = 0;
    std::string scheme_name = "joint";
    auto *settings = app.add_subcommand("settings", "Print the measurement plan");
    settings->add_option("-M,--modes", modes, "Number of modes")->required()->check(CLI::Range(1, 4096));
    settings->add_option("--scheme", scheme_name, "single or joint")->check(CLI::IsMember({"single", "joint"}));

    std::string run_config_path;
    StateFlags sf;
    std::string sim_scheme;
    long long nt = 0, nrep = 0;
    auto *simulate = app.add_subcommand("simulate", "Sample a homodyne dataset from a Gaussian state");
    simulate->add_option("--config", run_config_path, "RunConfig JSON")->check(CLI::ExistingFile);
    simulate->add_option("--state", sf.state_path, "StateSpec JSON")->check(CLI::ExistingFile);
    simulate->add_option("--family", sf.family, "graph, ghz, linear-cluster, two-mode-cluster, custom-adjacency");
    simulate->add_option("--modes,-M", sf.modes, "Number of modes")->check(CLI::Range(1, 4096));
    simulate->add_option("--topology", sf.topology, "linear, ring, star, complete");
    simulate->add_option("--edges", sf.edges, "Edges as 1-2,2-3 (1-based)");
    simulate->add_option("--squeezing-db", sf.squeezing_db, "Squeezing in dB");
    simulate->add_option("--loss", sf.loss, "Loss in [0, 1)");
    simulate->add_option("--scheme", sim_scheme, "single or joint")->check(CLI::IsMember({"single", "joint"}));
    auto *nt_opt = simulate->add_option("--nt", nt, "Total outcomes N_t")->check(CLI::PositiveNumber);
    auto *nrep_opt = simulate->add_option("--nrep", nrep, "Repetitions per setting N_r")->check(CLI::PositiveNumber);
    nt_opt->excludes(nrep_opt);

    ReconstructFlags rf;
    std::string method;
    int tmax = 0;
    double eta = 0.0;
    bool plateau = false;
    auto *reconstruct = app.add_subcommand("reconstruct", "Reconstruct a covariance matrix from a dataset");
    reconstruct->add_option("dataset", rf.dataset, "Dataset file");
    reconstruct->add_option("--config", run_config_path, "RunConfig JSON")->check(CLI::ExistingFile);
    reconstruct->add_option("--method", method, "direct, mle or both");
    auto *tmax_opt = reconstruct->add_option("--tmax", tmax, "MLE iterations")->check(CLI::PositiveNumber);
    auto *eta_opt = reconstruct->add_option("--eta", eta, "Adam learning rate")->check(CLI::PositiveNumber);
    reconstruct->add_flag("--plateau-stop", plateau, "Stop MLE early on a log-likelihood plateau");
    reconstruct->add_flag("--trace", rf.trace, "Include the log-likelihood trace");
    reconstruct->add_option("--save-cov", rf.save_cov, "Also write PREFIX.direct.json / PREFIX.mle.json");

    std::string cov_path, reference, ppt = "none", pick = "mle";
    bool structure = false;
    auto *analyze_cmd = app.add_subcommand("analyze", "Analyze a covariance matrix");
    analyze_cmd->add_option("covariance", cov_path, "Covariance JSON/CSV or reconstruct report")->required();
    analyze_cmd->add_option("--reference", reference, "Reference covariance for fidelity");
    analyze_cmd->add_option("--ppt", ppt, "all, none, or partitions like '1,2|3,4;1|2,3,4'");
    analyze_cmd->add_flag("--structure", structure, "Williamson / Bloch-Messiah mode structure");
    analyze_cmd->add_option("--pick", pick, "Report entry to read from a reconstruct report")
        ->check(CLI::IsMember({"mle", "direct"}));

    BenchConfig bc;
    std::string suite = "physicality", bench_config_path;
    int trials = 0;
    auto *bench = app.add_subcommand("bench", "Run a Monte Carlo benchmark suite");
    auto *suite_opt = bench->add_option("--suite", suite, "physicality, sample-sweep, mode-sweep, connectivity, entanglement");
    auto *trials_opt = bench->add_option("--trials", trials, "Trials per case (>= 10)")->check(CLI::Range(10, 1000000));
    bench->add_option("--scale", bc.scale, "Trial scale factor for desk runs")->check(CLI::Range(0.0, 1.0));
    bench->add_flag("--paper-scale", bc.paper_scale, "Full trial counts and sweeps");
    bench->add_option("--sweep", bc.sweep, "Override the swept values");
    bench->add_option("--config", bench_config_path, "BenchConfig JSON")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return report_error("usage", e.what(), 2);
    }

    try {
        if (settings->parsed()) return cmd_settings(g, modes, scheme_name);
        if (simulate->parsed() || reconstruct->parsed()) {
            RunConfig c;
            if (!run_config_path.empty()) c = run_config_from_json(read_json_file(run_config_path));
            if (simulate->parsed()) {
                apply_state_flags(c.state, sf);
                if (!sim_scheme.empty()) c.scheme = parse_scheme(sim_scheme);
                if (nt_opt->count()) {
                    c.n_total = nt;
                    c.n_rep.reset();
                }
                if (nrep_opt->count()) c.n_rep = nrep;
                return cmd_simulate(g, c);
            }
            if (!method.empty()) c.method = method;
            if (tmax_opt->count()) c.t_max = tmax;
            if (eta_opt->count()) c.eta = eta;
            if (plateau) c.plateau_stop = true;
            return cmd_reconstruct(g, c, rf);
        }
        if (analyze_cmd->parsed()) return cmd_analyze(g, cov_path, reference, ppt, structure, pick);
        if (bench->parsed()) {
            if (suite_opt->count() || bench_config_path.empty()) bc.suite = parse_suite(suite);
            if (trials_opt->count()) bc.trials = trials;
            if (g.seed) bc.seed = *g.seed;
            bc.threads = g.threads;
            return cmd_bench(g, bc, bench_config_path, suite_opt->count() > 0);
        }
    } catch (const UsageError &e) {
        return report_error("usage", e.what(), 2);
    } catch (const Error &e) {
        return report_error(to_string(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const std::exception &e) {
        return report_error("internal", e.what(), 4);
    }
    return 0;
}
