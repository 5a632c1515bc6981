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

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "gausstomo/analysis.hpp"
#include "gausstomo/covariance.hpp"
#include "gausstomo/measurement.hpp"
#include "gausstomo/recon_direct.hpp"
#include "gausstomo/recon_mle.hpp"
#include "gausstomo/states.hpp"

namespace gausstomo {

using Json = nlohmann::json;

/// {"modes": M, "mat": [[row 1], ..., [row 2M]]}
Json to_json(const CovarianceMatrix &V);
/// Accepts nested rows or a flat row-major array.
CovarianceMatrix covariance_from_json(const Json &j);

void write_covariance_csv(const CovarianceMatrix &V, std::ostream &out);
CovarianceMatrix read_covariance_csv(std::istream &in);

/// Dispatches on the extension: ".csv" is CSV, everything else JSON.
CovarianceMatrix read_covariance(const std::filesystem::path &path);

/// Edges in "adjacency" are 1-based pairs.
Json to_json(const StateSpec &spec);
StateSpec state_spec_from_json(const Json &j);

Json to_json(const MeasurementPlan &plan);

Json to_json(const DirectReport &report);
Json to_json(const MleReport &report, bool with_trace);
Json to_json(const AnalysisReport &report);
Json to_json(const ComplexMatrix &m);

}  // namespace gausstomo
