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

#include "gausstomo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "gausstomo/analysis.hpp"
#include "gausstomo/errors.hpp"
#include "gausstomo/parallel.hpp"
#include "gausstomo/recon_direct.hpp"
#include "gausstomo/recon_mle.hpp"
#include "gausstomo/seed.hpp"
#include "gausstomo/states.hpp"

namespace gausstomo {

using nlohmann::json;

namespace {

constexpr double kSqueezingDb = 6.0;
constexpr double kLoss = 0.3;
constexpr int kGraphModes = 6;
constexpr long long kRepPerSetting = 5000;

struct SuiteInfo {
    Suite suite;
    const char *name;
    const char *mirrors;
    int full_trials;
};

constexpr SuiteInfo kSuites[] = {
    {Suite::Physicality, "physicality", "lambda_min histograms, two-mode cluster, N_t = 10000", 100},
    {Suite::SampleSweep, "sample-sweep", "fidelity and failure fraction vs N_t, two-mode cluster", 50},
    {Suite::ModeSweep, "mode-sweep", "fidelity and failure fraction vs M, linear cluster, N_r = 5000", 25},
    {Suite::Connectivity, "connectivity", "fidelity and failure fraction, six-mode graphs and GHZ, N_r = 5000", 50},
    {Suite::Entanglement, "entanglement", "lambda_PT over all bipartitions, six-mode GHZ, N_r = 5000", 25},
};

const SuiteInfo &info(Suite s) {
    for (const auto &i : kSuites)
        if (i.suite == s) return i;
    fail(ErrorKind::InvalidArgument, "unknown suite");
}

struct Case {
    std::string label;
    StateSpec spec;
    CovarianceMatrix V;
    long long sweep = 0;  // total outcomes for the sample sweep
};

std::vector<Case> cases_of(const BenchConfig &cfg) {
    std::vector<Case> out;
    auto add = [&](std::string label, StateSpec spec, long long sweep = 0) {
        CovarianceMatrix V = build_state(spec);
        out.push_back({std::move(label), std::move(spec), std::move(V), sweep});
    };
    const StateSpec cluster = [] {
        StateSpec s = two_mode_cluster_spec(kLoss);
        s.squeezing_db = kSqueezingDb;
        return s;
    }();
    switch (cfg.suite) {
    case Suite::Physicality:
        add("10000", cluster, 10000);
        break;
    case Suite::SampleSweep:
        for (long long nt : sweep_values(cfg)) add(std::to_string(nt), cluster, nt);
        break;
    case Suite::ModeSweep:
        for (long long m : sweep_values(cfg)) {
            StateSpec s;
            s.family = StateFamily::LinearCluster;
            s.modes = static_cast<int>(m);
            s.squeezing_db = kSqueezingDb;
            s.loss = kLoss;
            add(std::to_string(m), s);
        }
        break;
    case Suite::Connectivity:
        for (Topology t : {Topology::Linear, Topology::Ring, Topology::Star, Topology::Complete}) {
            StateSpec s;
            s.family = StateFamily::Graph;
            s.modes = kGraphModes;
            s.topology = t;
            s.squeezing_db = kSqueezingDb;
            s.loss = kLoss;
            add(to_string(t), s);
        }
        [[fallthrough]];
    case Suite::Entanglement: {
        StateSpec s;
        s.family = StateFamily::Ghz;
        s.modes = kGraphModes;
        s.squeezing_db = kSqueezingDb;
        s.loss = kLoss;
        add("ghz", s);
        break;
    }
    }
    return out;
}

long long rep_for(const Case &c, const MeasurementPlan &plan) {
    if (c.sweep == 0) return kRepPerSetting;
    const long long per_rep = static_cast<long long>(plan.size()) * plan.width();
    return std::max<long long>(2, c.sweep / per_rep);
}

std::vector<BenchRecord> run_item(const BenchConfig &cfg, const Case &c, int trial, std::uint64_t seed,
                                  const std::vector<Bipartition> &parts) {
    std::vector<BenchRecord> out;
    for (Scheme scheme : {Scheme::Single, Scheme::Joint}) {
        const MeasurementPlan plan = make_plan(scheme, c.V.modes());
        const long long n_rep = rep_for(c, plan);
        const QuadratureDataset data =
            sample_dataset(c.V, plan, static_cast<int>(n_rep), derive_seed(seed, static_cast<std::uint64_t>(scheme)));
        const SufficientStats stats = compress(data);

        BenchRecord base;
        base.x = c.label;
        base.scheme = scheme;
        base.trial = trial;
        base.n_total = data.n_total();

        const DirectReport direct = direct_reconstruct(stats);
        const MleReport mle = reconstruct_mle(stats);
        const std::pair<const char *, const CovarianceMatrix *> results[] = {{"direct", &direct.V_hat},
                                                                             {"mle", &mle.V_hat}};
        const double lmins[] = {direct.lambda_min, mle.lambda_min};
        for (int k = 0; k < 2; ++k) {
            BenchRecord r = base;
            r.method = results[k].first;
            r.lambda_min = lmins[k];
            r.physical = lmins[k] >= 1.0 - 1e-9;
            if (r.physical) r.fidelity = fidelity(*results[k].second, c.V);
            if (cfg.suite == Suite::Entanglement) {
                for (const auto &p : parts) {
                    BenchRecord e = r;
                    e.partition = p.label(c.V.modes());
                    e.lambda_pt = ppt_min_eigenvalue(*results[k].second, p);
                    out.push_back(std::move(e));
                }
            } else {
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

template <class Pred>
std::vector<const BenchRecord *> select(const std::vector<BenchRecord> &recs, Pred pred) {
    std::vector<const BenchRecord *> out;
    for (const auto &r : recs)
        if (pred(r)) out.push_back(&r);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Group {
    int runs = 0;
    int unphysical = 0;
    std::vector<double> lambda_min;
    std::vector<double> fidelity;
};

Group group_of(const std::vector<BenchRecord> &recs, const std::string &x, Scheme scheme, const std::string &method) {
    Group g;
    for (const auto *r : select(recs, [&](const BenchRecord &r) {
             return r.x == x && r.scheme == scheme && r.method == method && r.partition.empty();
         })) {
        ++g.runs;
        if (!r->physical) ++g.unphysical;
        g.lambda_min.push_back(r->lambda_min);
        if (r->fidelity) g.fidelity.push_back(*r->fidelity);
    }
    return g;
}

json group_json(const Group &g) {
    json j = {{"runs", g.runs}, {"unphysical", g.unphysical},
              {"failure_fraction", g.runs ? static_cast<double>(g.unphysical) / g.runs : 0.0}};
    if (!g.lambda_min.empty()) {
        j["lambda_min_median"] = median(g.lambda_min);
        j["lambda_min_iqr"] = iqr(g.lambda_min);
    }
    if (!g.fidelity.empty()) j["fidelity_median"] = median(g.fidelity);
    return j;
}

void fidelity_and_failure(BenchResult &res, const std::vector<Case> &cases) {
    for (const Case &c : cases) {
        double mle_median[2] = {0.0, 0.0};
        for (Scheme scheme : {Scheme::Single, Scheme::Joint}) {
            const Group d = group_of(res.records, c.label, scheme, "direct");
            const Group m = group_of(res.records, c.label, scheme, "mle");
            const std::string tag = c.label + "/" + to_string(scheme);
            res.stats[c.label][to_string(scheme)] = {{"direct", group_json(d)}, {"mle", group_json(m)}};
            res.checks.push_back({"mle never unphysical " + tag, m.unphysical == 0,
                                  std::to_string(m.unphysical) + " of " + std::to_string(m.runs)});
            const double mf = m.fidelity.empty() ? 0.0 : median(m.fidelity);
            mle_median[static_cast<int>(scheme)] = mf;
            if (d.fidelity.empty()) {
                res.checks.push_back({"mle fidelity above direct " + tag, !m.fidelity.empty(),
                                      "no physical direct reconstruction; mle median " + fmt(mf)});
            } else {
                const double df = median(d.fidelity);
                res.checks.push_back({"mle fidelity above direct " + tag, mf > df,
                                      "mle median " + fmt(mf) + " vs direct median " + fmt(df)});
            }
        }
        if (res.config.suite == Suite::SampleSweep) {
            res.checks.push_back({"joint mle fidelity >= single mle " + c.label, mle_median[1] >= mle_median[0],
                                  "joint " + fmt(mle_median[1]) + " vs single " + fmt(mle_median[0])});
        }
    }
}

void physicality_checks(BenchResult &res, const Case &c) {
    const double truth = min_symplectic_eigenvalue(c.V.mat());
    res.stats["true_lambda_min"] = truth;
    const double bands[2][2] = {{0.35, 0.70}, {0.05, 0.35}};
    for (Scheme scheme : {Scheme::Single, Scheme::Joint}) {
        const std::string s = to_string(scheme);
        const Group d = group_of(res.records, c.label, scheme, "direct");
        const Group m = group_of(res.records, c.label, scheme, "mle");
        res.stats[s] = {{"direct", group_json(d)}, {"mle", group_json(m)}};
        const auto *band = bands[static_cast<int>(scheme)];
        const double frac = d.runs ? static_cast<double>(d.unphysical) / d.runs : 0.0;
        res.checks.push_back({"direct unphysical fraction " + s, frac >= band[0] && frac <= band[1],
                              std::to_string(d.unphysical) + " of " + std::to_string(d.runs) + ", band [" +
                                  fmt(band[0]) + ", " + fmt(band[1]) + "]"});
        res.checks.push_back({"mle unphysical count " + s, m.unphysical == 0,
                              std::to_string(m.unphysical) + " of " + std::to_string(m.runs)});
        const double med = median(m.lambda_min);
        res.checks.push_back({"mle lambda_min median " + s, std::abs(med - truth) <= 0.05,
                              "median " + fmt(med) + ", true " + fmt(truth) + ", tolerance 0.05"});
        const double mi = iqr(m.lambda_min), di = iqr(d.lambda_min);
        res.checks.push_back({"mle lambda_min spread below direct " + s, mi < di,
                              "IQR mle " + fmt(mi) + " vs direct " + fmt(di)});
    }
}

void mode_sweep_checks(BenchResult &res, const std::vector<Case> &cases) {
    for (const Case &c : cases) {
        for (Scheme scheme : {Scheme::Single, Scheme::Joint}) {
            const Group d = group_of(res.records, c.label, scheme, "direct");
            const Group m = group_of(res.records, c.label, scheme, "mle");
            const std::string tag = "M=" + c.label + "/" + to_string(scheme);
            res.stats[c.label][to_string(scheme)] = {{"direct", group_json(d)}, {"mle", group_json(m)}};
            res.checks.push_back({"mle failure fraction zero " + tag, m.unphysical == 0,
                                  std::to_string(m.unphysical) + " of " + std::to_string(m.runs)});
            if (scheme == Scheme::Single && c.V.modes() >= 12) {
                res.checks.push_back({"direct failure fraction one " + tag, d.unphysical == d.runs,
                                      std::to_string(d.unphysical) + " of " + std::to_string(d.runs)});
            }
        }
    }
}

void entanglement_checks(BenchResult &res, const Case &c, const std::vector<Bipartition> &parts) {
    const int M = c.V.modes();
    std::vector<double> truth;
    bool all_negative = true;
    for (const auto &p : parts) {
        const double v = ppt_min_eigenvalue(c.V, p);
        truth.push_back(v);
        all_negative = all_negative && v < 0.0;
        BenchRecord r;
        r.x = c.label;
        r.method = "true";
        r.trial = -1;
        r.lambda_min = min_symplectic_eigenvalue(c.V.mat());
        r.physical = true;
        r.fidelity = 1.0;
        r.partition = p.label(M);
        r.lambda_pt = v;
        res.records.insert(res.records.begin(), r);
    }
    res.stats["true_lambda_pt"] = truth;
    res.checks.push_back({"true state negative under all partial transposes", all_negative,
                          std::to_string(parts.size()) + " bipartitions"});
    for (Scheme scheme : {Scheme::Single, Scheme::Joint}) {
        const std::string s = to_string(scheme);
        double dev[2] = {0.0, 0.0};
        long long cnt[2] = {0, 0};
        long long direct_physical = 0;
        int mle_nonnegative = 0;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const std::string label = parts[k].label(M);
            for (const auto *r : select(res.records, [&](const BenchRecord &r) {
                     return r.scheme == scheme && r.partition == label && r.method != "true";
                 })) {
                const int idx = r->method == "mle" ? 1 : 0;
                dev[idx] += std::abs(*r->lambda_pt - truth[k]);
                ++cnt[idx];
                if (idx == 0 && r->physical) ++direct_physical;
                if (idx == 1 && *r->lambda_pt >= 0.0) ++mle_nonnegative;
            }
        }
        const double mad_d = cnt[0] ? dev[0] / cnt[0] : std::nan("");
        const double mad_m = cnt[1] ? dev[1] / cnt[1] : std::nan("");
        res.stats[s] = {{"mle_mean_abs_deviation", mad_m},
                        {"direct_mean_abs_deviation", mad_d},
                        {"direct_physical_runs", direct_physical / static_cast<long long>(parts.size())},
                        {"mle_runs", cnt[1] / static_cast<long long>(parts.size())}};
        res.checks.push_back({"mle negative under all partial transposes " + s, mle_nonnegative == 0 && cnt[1] > 0,
                              std::to_string(mle_nonnegative) + " non-negative of " + std::to_string(cnt[1])});
        res.checks.push_back({"mle closer to true lambda_PT than direct " + s, mad_m < mad_d,
                              "mean |dev| mle " + fmt(mad_m) + " vs direct " + fmt(mad_d)});
    }
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(Suite suite) { return info(suite).name; }

Suite parse_suite(const std::string &name) {
    std::string valid;
    for (const auto &i : kSuites) {
        if (name == i.name) return i.suite;
        valid += valid.empty() ? "" : ", ";
        valid += i.name;
    }
    fail(ErrorKind::InvalidArgument, "unknown suite '" + name + "' (valid: " + valid + ")");
}

int trial_count(const BenchConfig &cfg) {
    if (cfg.trials) {
        if (*cfg.trials < 1) fail(ErrorKind::InvalidArgument, "trials must be positive");
        return *cfg.trials;
    }
    const int full = info(cfg.suite).full_trials;
    if (cfg.paper_scale) return full;
    if (!(cfg.scale > 0.0)) fail(ErrorKind::InvalidArgument, "scale must be positive");
    return std::max(10, static_cast<int>(std::lround(full * std::min(1.0, cfg.scale))));
}

std::vector<long long> sweep_values(const BenchConfig &cfg) {
    if (!cfg.sweep.empty()) return cfg.sweep;
    switch (cfg.suite) {
    case Suite::SampleSweep:
        if (cfg.paper_scale) return {1000, 2000, 5000, 10000, 20000, 50000, 100000};
        return {2000, 10000, 50000};
    case Suite::ModeSweep:
        if (cfg.paper_scale) return {4, 8, 12, 16, 20};
        return {4, 8, 12};
    default:
        return {};
    }
}

bool BenchResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const BenchCheck &c) { return c.pass; });
}

BenchResult run_bench(const BenchConfig &cfg) {
    BenchResult res;
    res.config = cfg;
    res.stats = json::object();
    const int trials = trial_count(cfg);
    const std::vector<Case> cases = cases_of(cfg);
    const std::vector<Bipartition> parts =
        cfg.suite == Suite::Entanglement ? all_bipartitions(kGraphModes) : std::vector<Bipartition>{};

    const std::size_t items = cases.size() * static_cast<std::size_t>(trials);
    std::vector<std::vector<BenchRecord>> per_item(items);
    parallel_for(items, cfg.threads, [&](std::size_t i) {
        const Case &c = cases[i / trials];
        const int trial = static_cast<int>(i % trials);
        per_item[i] = run_item(cfg, c, trial, derive_seed(cfg.seed, i), parts);
    });
    for (auto &v : per_item)
        for (auto &r : v) res.records.push_back(std::move(r));

    switch (cfg.suite) {
    case Suite::Physicality:
        physicality_checks(res, cases.front());
        break;
    case Suite::SampleSweep:
    case Suite::Connectivity:
        fidelity_and_failure(res, cases);
        break;
    case Suite::ModeSweep:
        mode_sweep_checks(res, cases);
        break;
    case Suite::Entanglement:
        entanglement_checks(res, cases.front(), parts);
        break;
    }
    return res;
}

json config_json(const BenchConfig &cfg) {
    return {{"suite", to_string(cfg.suite)},  {"trials", trial_count(cfg)},
            {"scale", cfg.scale},             {"paper_scale", cfg.paper_scale},
            {"seed", cfg.seed},               {"sweep", sweep_values(cfg)},
            {"squeezing_db", kSqueezingDb},   {"loss", kLoss}};
}

std::string config_hash(const BenchConfig &cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_json(cfg).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_csv(const BenchResult &result, std::ostream &out) {
    out << "suite,x,scheme,method,trial,n_total,lambda_min,physical,fidelity,partition,lambda_pt\n";
    const std::string suite = to_string(result.config.suite);
    for (const auto &r : result.records) {
        out << suite << ',' << r.x << ',' << (r.method == "true" ? "" : to_string(r.scheme)) << ',' << r.method << ','
            << r.trial << ',' << r.n_total << ',' << csv_number(r.lambda_min) << ',' << (r.physical ? 1 : 0) << ','
            << (r.fidelity ? csv_number(*r.fidelity) : "") << ',';
        if (!r.partition.empty()) out << '"' << r.partition << '"';
        out << ',' << (r.lambda_pt ? csv_number(*r.lambda_pt) : "") << '\n';
    }
}

json summary_json(const BenchResult &result) {
    json checks = json::array();
    for (const auto &c : result.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"suite", to_string(result.config.suite)},
            {"mirrors", info(result.config.suite).mirrors},
            {"version", GAUSSTOMO_VERSION},
            {"config", config_json(result.config)},
            {"config_hash", config_hash(result.config)},
            {"passed", result.passed()},
            {"checks", std::move(checks)},
            {"stats", result.stats}};
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double iqr(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    return q(0.75) - q(0.25);
}

}  // namespace gausstomo
