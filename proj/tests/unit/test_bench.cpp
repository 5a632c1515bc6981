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

#include <sstream>

#include "gausstomo/bench.hpp"
#include "gausstomo/errors.hpp"
#include "gausstomo/seed.hpp"

using namespace gausstomo;

TEST_SUITE("bench") {

TEST_CASE("seed derivation") {
    static_assert(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("order statistics") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(iqr({1.0, 2.0, 3.0, 4.0, 5.0}) == 2.0);
    CHECK(std::isnan(median({})));
}

TEST_CASE("trial counts and sweeps") {
    BenchConfig c;
    c.suite = Suite::Physicality;
    CHECK(trial_count(c) == 20);
    c.paper_scale = true;
    CHECK(trial_count(c) == 100);
    c.suite = Suite::ModeSweep;
    CHECK(sweep_values(c).back() == 20);
    c.paper_scale = false;
    CHECK(trial_count(c) == 10);
    CHECK(sweep_values(c) == std::vector<long long>{4, 8, 12});
    c.trials = 0;
    CHECK_THROWS_AS(trial_count(c), Error);
    CHECK_THROWS_WITH_AS(parse_suite("physics"), doctest::Contains("sample-sweep"), Error);
    CHECK(parse_suite("entanglement") == Suite::Entanglement);
}

TEST_CASE("determinism across worker counts") {
    BenchConfig c;
    c.suite = Suite::SampleSweep;
    c.trials = 3;
    c.sweep = {2000};
    c.seed = 42;
    c.threads = 1;
    const BenchResult a = run_bench(c);
    c.threads = 3;
    const BenchResult b = run_bench(c);
    std::ostringstream sa, sb;
    write_csv(a, sa);
    write_csv(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK(summary_json(a)["config_hash"] == summary_json(b)["config_hash"]);
    c.seed = 43;
    std::ostringstream sc;
    write_csv(run_bench(c), sc);
    CHECK(sc.str() != sa.str());
}

TEST_CASE("summary provenance") {
    BenchConfig c;
    c.suite = Suite::Entanglement;
    c.trials = 2;
    const BenchResult r = run_bench(c);
    const auto s = summary_json(r);
    CHECK(s["version"] == GAUSSTOMO_VERSION);
    CHECK(s["config_hash"].get<std::string>().size() == 16);
    CHECK(s["checks"].size() >= 3);
    CHECK(s.contains("mirrors"));
    std::ostringstream csv;
    write_csv(r, csv);
    CHECK(csv.str().rfind("suite,x,scheme,method", 0) == 0);
}

}
