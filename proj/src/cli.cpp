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

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "spinchain/sweep.hpp"

namespace spinchain {

namespace {

struct FlagSpec {
    const char *key;
    const char *help;
};

constexpr FlagSpec kFlags[] = {
    {"family", "chain family: heisenberg|mirror"},
    {"n", "chain length"},
    {"n-range", "inclusive chain-length range A:B"},
    {"j", "Heisenberg coupling J (energy unit, default 1)"},
    {"omega", "mirror coupling scale omega (energy unit, default 1)"},
    {"field", "Heisenberg field B / J"},
    {"theta", "Gaussian environment width theta / scale^2 (comma list for critical-length)"},
    {"gamma", "local environment rate gamma / scale"},
    {"channel", "local channel: dephasing|damping"},
    {"t-max", "last sample time, in units of 1/scale (accepts e.g. 'pi', '2pi')"},
    {"samples", "number of time samples (>= 2)"},
    {"window", "search window (0, window] in units of 1/scale"},
    {"threshold", "critical-length fidelity threshold (default 2/3)"},
    {"env-file", "explicit environment: one 'g p' pair per line"},
    {"out", "output path (default stdout)"},
    {"format", "csv|json"},
};

constexpr const char *kCommands[][2] = {
    {"transfer", "decoherence-free and Gaussian-decohered fidelity curves"},
    {"common-env", "fidelity in a common spin environment (Gaussian or explicit)"},
    {"lindblad", "transfer probability and average fidelity under local dephasing/damping"},
    {"critical-length", "largest chain length beating the classical fidelity threshold"},
    {"entangle", "concurrence of entanglement distributed through the chain"},
};

}  // namespace

RunConfig parse_config(const std::vector<std::string> &args) {
    CLI::App app{"Quantum state transfer through spin chains under decoherence", "spinchain"};
    app.require_subcommand(1);

    std::map<std::string, std::string> values;
    std::string config_path;
    std::map<const CLI::App *, std::vector<std::pair<std::string, CLI::Option *>>> options;
    for (const auto &[name, description] : kCommands) {
        CLI::App *sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "key=value file; flags override its values");
        for (const auto &flag : kFlags) {
            CLI::Option *opt = sub->add_option(std::string("--") + flag.key, values[flag.key], flag.help);
            options[sub].emplace_back(flag.key, opt);
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        const auto subs = app.get_subcommands();
        throw HelpRequested(subs.empty() ? app.help() : subs.front()->help());
    } catch (const CLI::CallForAllHelp &) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what(), "argv");
    }

    const CLI::App *sub = app.get_subcommands().front();
    KeyValues kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    kv.emplace_back("command", sub->get_name());
    for (const auto &[key, opt] : options[sub]) {
        if (opt->count() > 0) kv.emplace_back(key, values[key]);
    }
    return config_from_key_values(kv);
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested &help) {
        out << help.what();
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "spinchain: configuration error [" << e.key() << "]: " << e.what() << '\n';
        return kExitConfigError;
    }

    auto emit = [&](const ResultTable &table) -> bool {
        std::ofstream file;
        std::ostream *sink = &out;
        if (!config.out.empty()) {
            file.open(config.out, std::ios::binary | std::ios::trunc);
            if (!file) {
                err << "spinchain: configuration error [out]: cannot write '" << config.out << "'\n";
                return false;
            }
            sink = &file;
        }
        if (config.format == OutputFormat::Csv) {
            write_csv(table, *sink);
        } else {
            write_json(table, *sink);
        }
        return static_cast<bool>(*sink);
    };

    try {
        const ResultTable table = run(config);
        return emit(table) ? kExitOk : kExitConfigError;
    } catch (const SweepFailure &e) {
        emit(e.partial());
        err << "spinchain: numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const ConfigError &e) {
        err << "spinchain: configuration error [" << e.key() << "]: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const SizeLimitError &e) {
        err << "spinchain: configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error &e) {
        err << "spinchain: numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    }
}

}  // namespace spinchain
