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

#include "spinchain/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinchain/coherent_transfer.hpp"
#include "spinchain/common_environment.hpp"

namespace spinchain {

namespace {

const std::set<std::string> kKnownKeys = {
    "command", "family", "n",      "n-range",   "j",         "omega", "field",  "theta",
    "env-file", "gamma", "channel", "t-max",    "samples",   "window", "threshold", "out",
    "format"};

constexpr double kDefaultLindbladWindow = 50.0;
constexpr double kDefaultCriticalWindow = 4000.0;
constexpr int kDefaultCriticalLimit = 200;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const std::string &why) {
    throw ConfigError("invalid value '" + value + "' for '" + key + "': " + why, key);
}

double parse_plain_double(const std::string &key, const std::string &text) {
    double value = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        bad_value(key, text, "expected a finite number");
    }
    return value;
}

/// Accepts plain numbers and multiples of pi ("pi", "2pi", "0.5*pi").
double parse_double(const std::string &key, const std::string &raw) {
    const std::string text = trim(raw);
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
        std::string prefix = text.substr(0, text.size() - 2);
        if (!prefix.empty() && prefix.back() == '*') prefix.pop_back();
        const double scale = prefix.empty() ? 1.0 : parse_plain_double(key, prefix);
        return scale * std::numbers::pi;
    }
    return parse_plain_double(key, text);
}

long long parse_integer(const std::string &key, const std::string &raw) {
    const std::string text = trim(raw);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        bad_value(key, raw, "expected an integer");
    }
    return value;
}

std::vector<double> parse_list(const std::string &key, const std::string &raw) {
    std::vector<double> values;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_double(key, item));
    if (values.empty()) bad_value(key, raw, "expected a comma-separated list");
    return values;
}

Command parse_command(const std::string &text) {
    if (text == "transfer") return Command::Transfer;
    if (text == "common-env") return Command::CommonEnv;
    if (text == "lindblad") return Command::Lindblad;
    if (text == "critical-length") return Command::CriticalLength;
    if (text == "entangle") return Command::Entangle;
    bad_value("command", text,
              "expected transfer|common-env|lindblad|critical-length|entangle");
}

[[noreturn]] void missing(const std::string &key, Command command) {
    throw ConfigError("missing required parameter '" + key + "' for " + to_string(command), key);
}

double scale_of(const RunConfig &config) {
    return config.family == ChainFamily::HeisenbergXXX ? config.j : config.omega;
}

std::vector<double> linspace(double t_max, std::size_t samples) {
    std::vector<double> t(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    return t;
}

ResultTable make_table(const RunConfig &config, std::vector<std::string> columns) {
    ResultTable table;
    table.header = {{"tool", "spinchain"}, {"version", kVersion}};
    for (auto &kv : to_key_values(config)) table.header.push_back(std::move(kv));
    table.columns = std::move(columns);
    return table;
}

template <typename Body>
ResultTable guarded(ResultTable table, Body body) {
    try {
        body(table);
    } catch (const SweepFailure &) {
        throw;
    } catch (const NumericalError &e) {
        throw SweepFailure(e.what(), std::move(table));
    }
    return table;
}

void write_rows_csv(const ResultTable &table, std::ostream &out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_number(row[c]);
        }
        out << '\n';
    }
}

nlohmann::ordered_json rows_json(const ResultTable &table) {
    nlohmann::ordered_json j;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json record;
        for (std::size_t c = 0; c < row.size(); ++c) record[table.columns[c]] = row[c];
        rows.push_back(std::move(record));
    }
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace

const char *to_string(Command command) {
    switch (command) {
        case Command::Transfer:
            return "transfer";
        case Command::CommonEnv:
            return "common-env";
        case Command::Lindblad:
            return "lindblad";
        case Command::CriticalLength:
            return "critical-length";
        case Command::Entangle:
            return "entangle";
    }
    return "unknown";
}

ChainSpec RunConfig::chain(int n) const {
    return family == ChainFamily::HeisenbergXXX ? ChainSpec::heisenberg(n, j, field)
                                                : ChainSpec::mirror(n, omega);
}

RunConfig config_from_key_values(const KeyValues &values) {
    std::map<std::string, std::string> kv;
    for (const auto &[key, value] : values) {
        if (!kKnownKeys.contains(key)) {
            throw ConfigError("unknown parameter '" + key + "'", key);
        }
        if (key == "n") kv.erase("n-range");
        if (key == "n-range") kv.erase("n");
        kv[key] = trim(value);
    }
    auto get = [&](const std::string &key) -> const std::string * {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    RunConfig c;
    const std::string *command = get("command");
    if (!command) throw ConfigError("missing required parameter 'command'", "command");
    c.command = parse_command(*command);

    const std::string *family = get("family");
    if (!family) missing("family", c.command);
    if (*family == "heisenberg") {
        c.family = ChainFamily::HeisenbergXXX;
    } else if (*family == "mirror") {
        c.family = ChainFamily::MirrorXY;
    } else {
        bad_value("family", *family, "expected heisenberg|mirror");
    }

    if (const auto *v = get("j")) c.j = parse_double("j", *v);
    if (const auto *v = get("omega")) c.omega = parse_double("omega", *v);
    if (const auto *v = get("field")) c.field = parse_double("field", *v);
    if (!(c.j > 0.0)) bad_value("j", *get("j"), "must be > 0");
    if (!(c.omega > 0.0)) bad_value("omega", *get("omega"), "must be > 0");
    if (c.family == ChainFamily::MirrorXY && c.field != 0.0) {
        bad_value("field", *get("field"), "mirror chains take no field");
    }

    if (const auto *v = get("n")) {
        const auto n = parse_integer("n", *v);
        if (n < 1 || n > 100000) bad_value("n", *v, "must be >= 1");
        c.n_min = c.n_max = static_cast<int>(n);
    } else if (const auto *r = get("n-range")) {
        const auto colon = r->find(':');
        if (colon == std::string::npos) bad_value("n-range", *r, "expected A:B");
        const auto a = parse_integer("n-range", r->substr(0, colon));
        const auto b = parse_integer("n-range", r->substr(colon + 1));
        if (a < 1 || b < a || b > 100000) bad_value("n-range", *r, "expected 1 <= A <= B");
        c.n_min = static_cast<int>(a);
        c.n_max = static_cast<int>(b);
    } else if (c.command == Command::CriticalLength) {
        c.n_min = 1;
        c.n_max = kDefaultCriticalLimit;
    } else {
        missing("n", c.command);
    }

    if (const auto *v = get("theta")) {
        c.theta = parse_list("theta", *v);
        const bool zero_allowed =
            c.command == Command::CriticalLength || c.command == Command::Entangle;
        for (double theta : c.theta) {
            if (theta < 0.0 || (!zero_allowed && theta == 0.0)) {
                bad_value("theta", *v, "theta > 0 required");
            }
        }
        if (c.command != Command::CriticalLength && c.theta.size() != 1) {
            bad_value("theta", *v, "a single value is expected for this command");
        }
    }
    if (const auto *v = get("env-file")) c.env_file = *v;
    if (const auto *v = get("gamma")) {
        c.gamma = parse_double("gamma", *v);
        if (*c.gamma < 0.0) bad_value("gamma", *v, "gamma >= 0 required");
    }
    if (const auto *v = get("channel")) {
        if (*v == "dephasing") {
            c.channel = Channel::Dephasing;
        } else if (*v == "damping") {
            c.channel = Channel::Damping;
        } else {
            bad_value("channel", *v, "expected dephasing|damping");
        }
    }
    if (const auto *v = get("t-max")) {
        c.t_max = parse_double("t-max", *v);
        if (!(*c.t_max > 0.0)) bad_value("t-max", *v, "must be > 0");
    }
    if (const auto *v = get("samples")) {
        const auto s = parse_integer("samples", *v);
        if (s < 2 || s > 100'000'000) bad_value("samples", *v, "samples >= 2 required");
        c.samples = static_cast<std::size_t>(s);
    }
    if (const auto *v = get("window")) {
        c.window = parse_double("window", *v);
        if (!(*c.window > 0.0)) bad_value("window", *v, "must be > 0");
    }
    if (const auto *v = get("threshold")) {
        c.threshold = parse_double("threshold", *v);
        if (!(c.threshold > 0.5 && c.threshold < 1.0)) {
            bad_value("threshold", *v, "must lie in (1/2, 1)");
        }
    }
    if (const auto *v = get("out")) c.out = *v;
    if (const auto *v = get("format")) {
        if (*v == "csv") {
            c.format = OutputFormat::Csv;
        } else if (*v == "json") {
            c.format = OutputFormat::Json;
        } else {
            bad_value("format", *v, "expected csv|json");
        }
    }

    switch (c.command) {
        case Command::Transfer:
        case Command::Entangle:
            if (!c.t_max) missing("t-max", c.command);
            break;
        case Command::CommonEnv:
            if (!c.t_max) missing("t-max", c.command);
            if (c.theta.empty() == c.env_file.empty()) {
                throw ConfigError("common-env needs exactly one of 'theta' or 'env-file'",
                                  c.theta.empty() ? "theta" : "env-file");
            }
            break;
        case Command::Lindblad:
            if (!c.channel) missing("channel", c.command);
            if (!c.gamma) missing("gamma", c.command);
            if (c.family == ChainFamily::HeisenbergXXX && !c.window) {
                c.window = kDefaultLindbladWindow;
            }
            break;
        case Command::CriticalLength:
            if (c.theta.empty()) c.theta = {0.0};
            if (!c.window) c.window = kDefaultCriticalWindow;
            break;
    }
    return c;
}

KeyValues to_key_values(const RunConfig &c) {
    KeyValues kv;
    kv.emplace_back("command", to_string(c.command));
    kv.emplace_back("family", to_string(c.family));
    if (c.n_min == c.n_max) {
        kv.emplace_back("n", std::to_string(c.n_min));
    } else {
        kv.emplace_back("n-range", std::to_string(c.n_min) + ":" + std::to_string(c.n_max));
    }
    kv.emplace_back("j", format_number(c.j));
    kv.emplace_back("omega", format_number(c.omega));
    kv.emplace_back("field", format_number(c.field));
    if (!c.theta.empty()) {
        std::string list;
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            list += (i ? "," : "") + format_number(c.theta[i]);
        }
        kv.emplace_back("theta", list);
    }
    if (!c.env_file.empty()) kv.emplace_back("env-file", c.env_file);
    if (c.gamma) kv.emplace_back("gamma", format_number(*c.gamma));
    if (c.channel) kv.emplace_back("channel", to_string(*c.channel));
    if (c.t_max) kv.emplace_back("t-max", format_number(*c.t_max));
    kv.emplace_back("samples", std::to_string(c.samples));
    if (c.window) kv.emplace_back("window", format_number(*c.window));
    kv.emplace_back("threshold", format_number(c.threshold));
    if (!c.out.empty()) kv.emplace_back("out", c.out);
    kv.emplace_back("format", c.format == OutputFormat::Csv ? "csv" : "json");
    return kv;
}

KeyValues read_config_stream(std::istream &in) {
    KeyValues kv;
    std::string line;
    int number = 0;
    bool output_header = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string text = trim(line);
        if (number == 1 && text.rfind("# tool=spinchain", 0) == 0) output_header = true;
        if (output_header) {
            // A previous run's output: read its header, stop at the table.
            if (text.empty() || text.front() != '#') break;
            const std::string body = trim(std::string_view(text).substr(1));
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            std::string key = trim(body.substr(0, eq));
            if (key == "tool" || key == "version") continue;
            kv.emplace_back(std::move(key), trim(body.substr(eq + 1)));
            continue;
        }
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed config line " + std::to_string(number) +
                                  ": expected key=value",
                              "config");
        }
        kv.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return kv;
}

KeyValues read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", "config");
    return read_config_stream(in);
}

RunConfig config_from_header(std::istream &in) {
    KeyValues kv;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line.front() == '#') {
        const std::string text = trim(std::string_view(line).substr(1));
        const auto eq = text.find('=');
        if (eq == std::string::npos) continue;
        std::string key = text.substr(0, eq);
        if (key == "tool" || key == "version") continue;
        kv.emplace_back(std::move(key), text.substr(eq + 1));
    }
    return config_from_key_values(kv);
}

ExplicitEnvironment read_environment_stream(std::istream &in, const std::string &source) {
    ExplicitEnvironment env;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        const std::string text = trim(line.substr(0, hash));
        if (text.empty()) continue;
        std::istringstream fields(text);
        std::string g, p, extra;
        if (!(fields >> g >> p) || (fields >> extra)) {
            throw ConfigError(source + ":" + std::to_string(number) + ": expected 'g p'",
                              "env-file");
        }
        env.couplings.push_back(parse_double("env-file", g));
        env.up_probabilities.push_back(parse_double("env-file", p));
    }
    if (env.m() == 0) throw ConfigError(source + ": no environment spins", "env-file");
    env.validate();
    return env;
}

ExplicitEnvironment read_environment_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open environment file '" + path + "'", "env-file");
    return read_environment_stream(in, path);
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw ValidationError("row width " + std::to_string(row.size()) + " != " +
                              std::to_string(columns.size()) + " columns");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (!std::isfinite(row[c])) {
            throw NumericalError("non-finite value in column '" + columns[c] + "'");
        }
    }
    rows.push_back(std::move(row));
}

ResultTable run_transfer(const RunConfig &config) {
    std::vector<std::string> columns = {"N", "t", "abs_f", "F_free"};
    std::optional<GaussianEnvironment> env;
    const double scale = scale_of(config);
    if (!config.theta.empty()) {
        env = GaussianEnvironment{config.theta.front() * scale * scale};
        columns.push_back("F_common");
    }
    return guarded(make_table(config, columns), [&](ResultTable &table) {
        const auto times = linspace(*config.t_max, config.samples);
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const ExcitationPropagator propagator(build_subspace_hamiltonian(config.chain(n)));
            for (double tau : times) {
                const double t = tau / scale;
                const double magnitude = propagator.end_to_end(t).magnitude;
                std::vector<double> row = {static_cast<double>(n), tau, magnitude,
                                           average_fidelity_free(magnitude)};
                if (env) {
                    row.push_back(
                        average_fidelity_with_factor(magnitude, gaussian_decoherence_factor(*env, t)));
                }
                table.add_row(std::move(row));
            }
        }
    });
}

ResultTable run_common_env(const RunConfig &config) {
    const double scale = scale_of(config);
    Environment env;
    if (!config.theta.empty()) {
        env = GaussianEnvironment{config.theta.front() * scale * scale};
    } else {
        ExplicitEnvironment explicit_env = read_environment_file(config.env_file);
        for (double &g : explicit_env.couplings) g *= scale;
        env = std::move(explicit_env);
    }
    return guarded(make_table(config, {"N", "t", "abs_f", "factor_re", "factor_im", "F_free",
                                       "F_common"}),
                   [&](ResultTable &table) {
                       const auto times = linspace(*config.t_max, config.samples);
                       for (int n = config.n_min; n <= config.n_max; ++n) {
                           const ExcitationPropagator propagator(
                               build_subspace_hamiltonian(config.chain(n)));
                           for (double tau : times) {
                               const double t = tau / scale;
                               const auto f = propagator.end_to_end(t);
                               const Complex factor = decoherence_factor(env, t);
                               table.add_row({static_cast<double>(n), tau, f.magnitude,
                                              factor.real(), factor.imag(),
                                              average_fidelity_free(f),
                                              average_fidelity_common_env(f, env, t)});
                           }
                       }
                   });
}

ResultTable run_lindblad(const RunConfig &config) {
    const double scale = scale_of(config);
    const LindbladConfig lindblad{*config.channel, *config.gamma * scale};
    return guarded(make_table(config, {"N", "t_star", "P", "F_avg"}), [&](ResultTable &table) {
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const ChainSpec spec = config.chain(n);
            double t = 0.0;
            if (config.family == ChainFamily::MirrorXY) {
                t = std::numbers::pi / config.omega;
            } else {
                t = max_excitation_probability(spec, lindblad, TimeWindow{*config.window / scale})
                        .t_star;
            }
            const BlochResponse response = bloch_response(spec, lindblad, t);
            table.add_row({static_cast<double>(n), t * scale, response.population,
                           average_fidelity_from_response(
                               response, n, default_phase_reference(config.family))});
        }
    });
}

ResultTable run_critical_length(const RunConfig &config) {
    const double scale = scale_of(config);
    ResultTable table = make_table(config, {"theta", "threshold", "n_c", "n_limit"});
    ResultTable per_n;
    per_n.name = "per_n";
    per_n.columns = {"theta", "N", "t_star", "F_max"};
    return guarded(std::move(table), [&](ResultTable &out) {
        for (double theta : config.theta) {
            std::optional<GaussianEnvironment> env;
            if (theta > 0.0) env = GaussianEnvironment{theta * scale * scale};
            const auto result =
                critical_chain_length(config.family, scale, config.threshold,
                                      TimeWindow{*config.window / scale}, env, config.n_max);
            out.add_row({theta, config.threshold,
                         result.n_c ? static_cast<double>(*result.n_c) : -1.0,
                         static_cast<double>(config.n_max)});
            for (const auto &entry : result.per_n) {
                per_n.add_row({theta, static_cast<double>(entry.n), entry.t_star * scale,
                               entry.f_max});
            }
        }
        out.appendices = {per_n};
    });
}

ResultTable run_entangle(const RunConfig &config) {
    const double scale = scale_of(config);
    std::optional<GaussianEnvironment> env;
    if (!config.theta.empty() && config.theta.front() > 0.0) {
        env = GaussianEnvironment{config.theta.front() * scale * scale};
    }
    return guarded(make_table(config, {"N", "t", "xi0", "xi", "ratio", "factor"}),
                   [&](ResultTable &table) {
                       const auto times = linspace(*config.t_max, config.samples);
                       for (int n = config.n_min; n <= config.n_max; ++n) {
                           const ExcitationPropagator propagator(
                               build_subspace_hamiltonian(config.chain(n)));
                           for (double tau : times) {
                               const double t = tau / scale;
                               const auto result =
                                   distribute_entanglement(propagator.end_to_end(t), env, t);
                               const double factor =
                                   env ? gaussian_decoherence_factor(*env, t) : 1.0;
                               // xi / xi0 is independent of xi0; report its limit where xi0 vanishes.
                               const double ratio =
                                   result.xi0 > 1e-6 ? result.xi / result.xi0 : factor;
                               table.add_row({static_cast<double>(n), tau, result.xi0, result.xi,
                                              ratio, factor});
                           }
                       }
                   });
}

ResultTable run(const RunConfig &config) {
    switch (config.command) {
        case Command::Transfer:
            return run_transfer(config);
        case Command::CommonEnv:
            return run_common_env(config);
        case Command::Lindblad:
            return run_lindblad(config);
        case Command::CriticalLength:
            return run_critical_length(config);
        case Command::Entangle:
            return run_entangle(config);
    }
    throw ConfigError("unknown command", "command");
}

std::string format_number(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw ValidationError("number formatting failed");
    return std::string(buffer, ptr);
}

void write_csv(const ResultTable &table, std::ostream &out) {
    for (const auto &[key, value] : table.header) out << "# " << key << '=' << value << '\n';
    write_rows_csv(table, out);
    for (const auto &appendix : table.appendices) {
        out << "\n# table=" << appendix.name << '\n';
        write_rows_csv(appendix, out);
    }
}

void write_json(const ResultTable &table, std::ostream &out) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json header;
    for (const auto &[key, value] : table.header) header[key] = value;
    doc["header"] = std::move(header);
    doc["table"] = table.name;
    const auto body = rows_json(table);
    doc["columns"] = body["columns"];
    doc["rows"] = body["rows"];
    if (!table.appendices.empty()) {
        nlohmann::ordered_json appendices;
        for (const auto &appendix : table.appendices) appendices[appendix.name] = rows_json(appendix);
        doc["appendices"] = std::move(appendices);
    }
    out << doc.dump(2) << '\n';
}

}  // namespace spinchain
