// Copyright 2026 The spinchain Authors
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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/chain_model.hpp"
#include "spinchain/error.hpp"
#include "spinchain/lindblad.hpp"

namespace spinchain {

inline constexpr const char *kVersion = "0.1.0";

enum class Command { Transfer, CommonEnv, Lindblad, CriticalLength, Entangle };
enum class OutputFormat { Csv, Json };

const char *to_string(Command command);

/// Fully resolved run configuration. All energies are ratios to the chain's
/// energy scale (j or omega): times in units of 1/scale, theta in scale^2,
/// gamma in scale.
struct RunConfig {
    Command command = Command::Transfer;
    ChainFamily family = ChainFamily::HeisenbergXXX;
    int n_min = 0;
    int n_max = 0;
    double j = 1.0;
    double omega = 1.0;
    double field = 0.0;
    std::vector<double> theta;
    std::string env_file;
    std::optional<double> gamma;
    std::optional<Channel> channel;
    std::optional<double> t_max;
    std::size_t samples = 200;
    std::optional<double> window;
    double threshold = 2.0 / 3.0;
    std::string out;
    OutputFormat format = OutputFormat::Csv;

    bool operator==(const RunConfig &) const = default;

    ChainSpec chain(int n) const;
};

/// Ordered key=value pairs, keys spelled like the long CLI flags without "--".
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Builds and validates a config from key/value pairs (later keys win).
/// Throws ConfigError naming the offending key.
RunConfig config_from_key_values(const KeyValues &values);

/// Resolved config as key/value pairs; feeding them back to
/// config_from_key_values reproduces the config exactly.
KeyValues to_key_values(const RunConfig &config);

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
KeyValues read_config_stream(std::istream &in);
KeyValues read_config_file(const std::string &path);

/// Recovers the run configuration echoed in the '#' header of an emitted CSV file.
RunConfig config_from_header(std::istream &in);

/// Command-line parsing: `<command> [--flag value ...]`. Flags override
/// values from `--config PATH`.
class HelpRequested : public std::exception {
public:
    explicit HelpRequested(std::string text) : text_(std::move(text)) {}
    const char *what() const noexcept override { return text_.c_str(); }

private:
    std::string text_;
};

RunConfig parse_config(const std::vector<std::string> &args);

/// Explicit-environment file: one "g p" pair per line, '#' comments allowed.
ExplicitEnvironment read_environment_file(const std::string &path);
ExplicitEnvironment read_environment_stream(std::istream &in, const std::string &source);

struct ResultTable {
    std::string name = "main";
    KeyValues header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<ResultTable> appendices;

    /// Throws NumericalError for a non-finite value, ValidationError for a
    /// width mismatch.
    void add_row(std::vector<double> row);
};

/// Thrown when a sweep stops part-way; carries the rows completed so far.
class SweepFailure : public NumericalError {
public:
    SweepFailure(const std::string &msg, ResultTable partial)
        : NumericalError(msg), partial_(std::move(partial)) {}
    const ResultTable &partial() const noexcept { return partial_; }

private:
    ResultTable partial_;
};

ResultTable run_transfer(const RunConfig &config);
ResultTable run_common_env(const RunConfig &config);
ResultTable run_lindblad(const RunConfig &config);
ResultTable run_critical_length(const RunConfig &config);
ResultTable run_entangle(const RunConfig &config);
ResultTable run(const RunConfig &config);

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

void write_csv(const ResultTable &table, std::ostream &out);
void write_json(const ResultTable &table, std::ostream &out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Full CLI: parse, run, write. Diagnostics go to `err`; tables go to the
/// configured output path or `out`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace spinchain
