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

#include "gausstomo/measurement.hpp"

namespace gausstomo {

// Dataset file: one JSON header line
//   {"scheme": "single"|"joint", "modes": M, "n_settings": N_s, "n_rep": N_r,
//    "seed": <int or null>, "settings": [...]}
// then, per setting in plan order, a "#SETTING k" line (1-based) followed by
// N_r CSV rows (1 column for single, M for joint). Values use 17 significant
// digits. Single settings are {"m", "n", "theta"} with 1-based m <= n;
// joint settings are {"thetas": [...]}.

void write_dataset(const QuadratureDataset &data, std::ostream &out);
void write_dataset(const QuadratureDataset &data, const std::filesystem::path &path);

/// Throws DataFormat with a message naming the offending setting block.
QuadratureDataset read_dataset(std::istream &in);
QuadratureDataset read_dataset(const std::filesystem::path &path);

}  // namespace gausstomo
