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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gausstomo/measurement.hpp"

namespace gausstomo {

enum class Suite { Physicality, SampleSweep, ModeSweep, Connectivity, Entanglement };

std::string to_string(Suite suite);
Suite parse_suite(const std::string &name);

struct BenchConfig {
    Suite suite = Suite::Physicality;
    /// Defaults to the full-size trial count times `scale` (at least 10).
    std::optional<int> trials;
    double scale = 0.2;
    bool paper_scale = false;
    std::uint64_t seed = 1;
    int threads = 1;
    /// Overrides the swept values (total outcomes or mode counts).
    std::vector<long long> sweep;
};

int trial_count(const BenchConfig &cfg);
std::vector<long long> sweep_values(const BenchConfig &cfg);

/// One reconstruction (or the true state, method "true").
struct BenchRecord {
    std::string x;  // swept value or state label
    Scheme scheme = Scheme::Single;
    std::string method;
    int trial = 0;
    long long n_total = 0;
    double lambda_min = 0.0;
    bool physical = false;
    std::optional<double> fidelity;
    std::string partition;
    std::optional<double> lambda_pt;
};

struct BenchCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct BenchResult {
    BenchConfig config;
    std::vector<BenchRecord> records;
    std::vector<BenchCheck> checks;
    nlohmann::json stats;

    bool passed() const;
};

BenchResult run_bench(const BenchConfig &cfg);

nlohmann::json config_json(const BenchConfig &cfg);
std::string config_hash(const BenchConfig &cfg);

void write_csv(const BenchResult &result, std::ostream &out);
nlohmann::json summary_json(const BenchResult &result);

double median(std::vector<double> v);
/// Interquartile range with linear interpolation between order statistics.
double iqr(std::vector<double> v);

}  // namespace gausstomo
