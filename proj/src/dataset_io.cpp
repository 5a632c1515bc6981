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

#include "gausstomo/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gausstomo/errors.hpp"

namespace gausstomo {

using nlohmann::json;

namespace {

void append_number(std::string &line, double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    line.append(buf, static_cast<std::size_t>(n));
}

json header_of(const QuadratureDataset &data) {
    const auto &plan = data.plan;
    json settings = json::array();
    if (plan.scheme == Scheme::Single) {
        for (const auto &s : plan.single) settings.push_back({{"m", s.m + 1}, {"n", s.n + 1}, {"theta", s.theta}});
    } else {
        for (const auto &s : plan.joint) settings.push_back({{"thetas", s.thetas}});
    }
    json h;
    h["scheme"] = to_string(plan.scheme);
    h["modes"] = plan.modes;
    h["n_settings"] = plan.size();
    h["n_rep"] = data.n_rep();
    h["seed"] = data.seed ? json(*data.seed) : json(nullptr);
    h["settings"] = std::move(settings);
    return h;
}

[[noreturn]] void bad(const std::string &what) { fail(ErrorKind::DataFormat, what); }

double parse_double(std::string_view tok, std::size_t setting, long long row) {
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        bad("setting " + std::to_string(setting) + ", row " + std::to_string(row) + ": cannot parse number '" +
            std::string(tok) + "'");
    }
    return v;
}

template <class T>
T header_field(const json &h, const char *key) {
    if (!h.contains(key)) bad("malformed header: missing \"" + std::string(key) + "\"");
    try {
        return h.at(key).get<T>();
    } catch (const json::exception &) {
        bad("malformed header: field \"" + std::string(key) + "\" has the wrong type");
    }
}

}  // namespace

void write_dataset(const QuadratureDataset &data, std::ostream &out) {
    validate(data);
    out << header_of(data).dump() << '\n';
    std::string line;
    for (std::size_t k = 0; k < data.outcomes.size(); ++k) {
        out << "#SETTING " << (k + 1) << '\n';
        const Matrix &o = data.outcomes[k];
        for (Eigen::Index i = 0; i < o.rows(); ++i) {
            line.clear();
            for (Eigen::Index j = 0; j < o.cols(); ++j) {
                if (j) line.push_back(',');
                append_number(line, o(i, j));
            }
            line.push_back('\n');
            out << line;
        }
    }
    if (!out) fail(ErrorKind::Io, "failed writing dataset");
}

void write_dataset(const QuadratureDataset &data, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    write_dataset(data, out);
}

QuadratureDataset read_dataset(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) bad("malformed header: empty input");
    json h;
    try {
        h = json::parse(line);
    } catch (const json::exception &e) {
        bad(std::string("malformed header: ") + e.what());
    }
    if (!h.is_object()) bad("malformed header: expected a JSON object");

    QuadratureDataset data;
    auto &plan = data.plan;
    plan.scheme = parse_scheme(header_field<std::string>(h, "scheme"));
    plan.modes = header_field<int>(h, "modes");
    const auto n_settings = header_field<long long>(h, "n_settings");
    const auto n_rep = header_field<long long>(h, "n_rep");
    if (plan.modes < 1) bad("malformed header: modes must be positive");
    if (n_rep < 1) bad("malformed header: n_rep must be positive");
    if (h.contains("seed") && !h["seed"].is_null()) data.seed = header_field<std::uint64_t>(h, "seed");
    if (!h.contains("settings") || !h["settings"].is_array()) bad("malformed header: missing \"settings\" array");
    const json &settings = h["settings"];
    if (static_cast<long long>(settings.size()) != n_settings) {
        bad("shape mismatch: header declares n_settings = " + std::to_string(n_settings) + " but lists " +
            std::to_string(settings.size()) + " settings");
    }
    try {
        for (const json &s : settings) {
            if (plan.scheme == Scheme::Single) {
                plan.single.push_back({s.at("m").get<int>() - 1, s.at("n").get<int>() - 1, s.value("theta", 0.0)});
            } else {
                plan.joint.push_back({s.at("thetas").get<std::vector<double>>()});
            }
        }
    } catch (const json::exception &e) {
        bad(std::string("malformed header: bad setting entry: ") + e.what());
    }

    const int width = plan.width();
    data.outcomes.reserve(plan.size());
    std::size_t k = 0;
    bool pending = std::getline(in, line).good() || !line.empty();
    for (; k < plan.size(); ++k) {
        const std::string expect = "#SETTING " + std::to_string(k + 1);
        while (pending && line.find_first_not_of(" \t\r") == std::string::npos) pending = static_cast<bool>(std::getline(in, line));
        if (!pending) bad("setting " + std::to_string(k + 1) + ": missing block (file ends early)");
        if (line.rfind('\r') == line.size() - 1 && !line.empty()) line.pop_back();
        if (line != expect) bad("setting " + std::to_string(k + 1) + ": expected '" + expect + "', got '" + line + "'");
        Matrix block(n_rep, width);
        long long row = 0;
        pending = false;
        while (std::getline(in, line)) {
            if (line.rfind("#SETTING", 0) == 0) {
                pending = true;
                break;
            }
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            if (row >= n_rep) {
                bad("setting " + std::to_string(k + 1) + ": shape mismatch, more than n_rep = " + std::to_string(n_rep) + " rows");
            }
            std::string_view rest(line);
            int col = 0;
            for (;;) {
                const auto comma = rest.find(',');
                if (col >= width) {
                    bad("setting " + std::to_string(k + 1) + ", row " + std::to_string(row + 1) + ": expected " +
                        std::to_string(width) + " columns");
                }
                block(row, col++) = parse_double(rest.substr(0, comma), k + 1, row + 1);
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
            if (col != width) {
                bad("setting " + std::to_string(k + 1) + ", row " + std::to_string(row + 1) + ": expected " +
                    std::to_string(width) + " columns, got " + std::to_string(col));
            }
            ++row;
        }
        if (row != n_rep) {
            bad("setting " + std::to_string(k + 1) + ": shape mismatch, header declares n_rep = " + std::to_string(n_rep) +
                " but block has " + std::to_string(row) + " rows");
        }
        data.outcomes.push_back(std::move(block));
    }
    if (pending) bad("unexpected extra block '" + line + "' after " + std::to_string(plan.size()) + " settings");
    validate(data);
    return data;
}

QuadratureDataset read_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open dataset '" + path.string() + "'");
    return read_dataset(in);
}

}  // namespace gausstomo
