#include "qsync/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const KeyValue& kv, const std::string& what) {
    throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                      "': " + what + ", got '" + kv.value + "'");
}

std::vector<KeyValue> tokenize(const std::string& text) {
    std::vector<KeyValue> pairs;
    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) +
                              ": expected 'key = value', got '" + raw + "'");
        }
        KeyValue kv{trim(raw.substr(0, eq)), trim(raw.substr(eq + 1)), line};
        if (kv.key.empty() || kv.value.empty()) {
            throw ConfigError("line " + std::to_string(line) +
                              ": empty key or value");
        }
        for (const auto& prior : pairs) {
            if (prior.key == kv.key) {
                throw ConfigError("line " + std::to_string(line) +
                                  ": duplicate key '" + kv.key +
                                  "' (first set on line " +
                                  std::to_string(prior.line) + ")");
            }
        }
        pairs.push_back(std::move(kv));
    }
    return pairs;
}

std::uint64_t parse_u64(const KeyValue& kv) {
    try {
        if (!kv.value.empty() && kv.value[0] == '-') throw std::out_of_range("");
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(kv, "expected a non-negative integer");
    }
}

int parse_int(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        if (v < -(1LL << 31) || v > (1LL << 31) - 1) throw std::out_of_range("");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        fail(kv, "expected an integer");
    }
}

double parse_double(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(kv, "expected a number");
    }
}

std::vector<double> parse_double_list(const KeyValue& kv) {
    std::istringstream stream(kv.value);
    std::vector<double> values;
    std::string token;
    while (stream >> token) {
        values.push_back(parse_double({kv.key, token, kv.line}));
    }
    if (values.empty()) fail(kv, "expected at least one number");
    return values;
}

std::vector<int> parse_int_list(const KeyValue& kv) {
    std::istringstream stream(kv.value);
    std::vector<int> values;
    std::string token;
    while (stream >> token) {
        values.push_back(parse_int({kv.key, token, kv.line}));
    }
    if (values.empty()) fail(kv, "expected at least one integer");
    return values;
}

Protocol parse_protocol(const KeyValue& kv) {
    if (kv.value == "GHZ") return Protocol::GHZ;
    if (kv.value == "PAIRS") return Protocol::PAIRS;
    if (kv.value == "DICKE") return Protocol::DICKE;
    fail(kv, "expected one of GHZ, PAIRS, DICKE");
}

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw ConfigError("cannot read config file " + path);
    std::ostringstream out;
    out << stream.rdbuf();
    return out.str();
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    bool saw_protocol = false, saw_n = false, saw_k = false, saw_trials = false,
         saw_seed = false;
    for (const auto& kv : tokenize(text)) {
        if (kv.key == "protocol") {
            config.protocol = parse_protocol(kv);
            saw_protocol = true;
        } else if (kv.key == "n") {
            config.n_parties = parse_int(kv);
            saw_n = true;
        } else if (kv.key == "omega") {
            config.omega = parse_double(kv);
        } else if (kv.key == "k") {
            config.rounds = parse_u64(kv);
            saw_k = true;
        } else if (kv.key == "trials") {
            config.trials = parse_int(kv);
            saw_trials = true;
        } else if (kv.key == "seed") {
            config.seed = parse_u64(kv);
            saw_seed = true;
        } else if (kv.key == "offsets") {
            config.offsets = parse_double_list(kv);
        } else if (kv.key == "offset_window") {
            config.offset_window = parse_double(kv);
        } else if (kv.key == "schedule") {
            if (kv.value == "ROUND_ROBIN") {
                config.schedule = ScheduleMode::ROUND_ROBIN;
            } else if (kv.value == "UNIFORM_RANDOM") {
                config.schedule = ScheduleMode::UNIFORM_RANDOM;
            } else {
                fail(kv, "expected ROUND_ROBIN or UNIFORM_RANDOM");
            }
        } else if (kv.key == "estimator") {
            if (kv.value == "LINEARIZED") {
                config.estimator = EstimatorMode::LINEARIZED;
            } else if (kv.value == "TWO_QUADRATURE") {
                config.estimator = EstimatorMode::TWO_QUADRATURE;
            } else {
                fail(kv, "expected LINEARIZED or TWO_QUADRATURE");
            }
        } else if (kv.key == "nominal_time") {
            config.nominal_time = parse_double(kv);
        } else if (kv.key == "statevector_limit") {
            config.statevector_limit = parse_int(kv);
        } else if (kv.key == "ghz_sampler") {
            if (kv.value == "CLOSED_FORM") {
                config.ghz_sampler = GhzSamplerMode::CLOSED_FORM;
            } else if (kv.value == "STATEVECTOR") {
                config.ghz_sampler = GhzSamplerMode::STATEVECTOR;
            } else {
                fail(kv, "expected CLOSED_FORM or STATEVECTOR");
            }
        } else if (kv.key == "dicke_sampler") {
            if (kv.value == "AUTO") {
                config.dicke_sampler = DickeSamplerMode::AUTO;
            } else if (kv.value == "STATEVECTOR") {
                config.dicke_sampler = DickeSamplerMode::STATEVECTOR;
            } else if (kv.value == "MARGINAL") {
                config.dicke_sampler = DickeSamplerMode::MARGINAL;
            } else {
                fail(kv, "expected AUTO, STATEVECTOR or MARGINAL");
            }
        } else {
            throw ConfigError("line " + std::to_string(kv.line) +
                              ": unknown key '" + kv.key + "'");
        }
    }
    if (!saw_protocol) throw ConfigError("missing required key 'protocol'");
    if (!saw_n) throw ConfigError("missing required key 'n'");
    if (!saw_k) throw ConfigError("missing required key 'k'");
    if (!saw_trials) throw ConfigError("missing required key 'trials'");
    if (!saw_seed) throw ConfigError("missing required key 'seed'");
    validate_config(config);
    return config;
}

ExperimentConfig parse_config(const std::string& path) {
    return parse_config_text(read_file(path));
}

SweepConfig parse_sweep_config_text(const std::string& text) {
    SweepConfig sweep;
    bool saw_n = false, saw_q = false, saw_trials = false, saw_seed = false;
    for (const auto& kv : tokenize(text)) {
        if (kv.key == "sweep_n") {
            sweep.n_values = parse_int_list(kv);
            saw_n = true;
        } else if (kv.key == "sweep_q") {
            sweep.qubit_budget = parse_u64(kv);
            saw_q = true;
        } else if (kv.key == "trials") {
            sweep.trials = parse_int(kv);
            saw_trials = true;
        } else if (kv.key == "seed") {
            sweep.seed = parse_u64(kv);
            saw_seed = true;
        } else if (kv.key == "omega") {
            sweep.omega = parse_double(kv);
        } else if (kv.key == "offset_window") {
            sweep.offset_window = parse_double(kv);
        } else if (kv.key == "sweep_protocols") {
            std::istringstream stream(kv.value);
            std::string token;
            while (stream >> token) {
                sweep.protocols.push_back(
                    parse_protocol({kv.key, token, kv.line}));
            }
        } else {
            throw ConfigError("line " + std::to_string(kv.line) +
                              ": unknown key '" + kv.key + "'");
        }
    }
    if (!saw_n) throw ConfigError("missing required key 'sweep_n'");
    if (!saw_q) throw ConfigError("missing required key 'sweep_q'");
    if (!saw_trials) throw ConfigError("missing required key 'trials'");
    if (!saw_seed) throw ConfigError("missing required key 'seed'");
    if (sweep.protocols.empty()) {
        sweep.protocols = {Protocol::GHZ, Protocol::PAIRS, Protocol::DICKE};
    }
    return sweep;
}

SweepConfig parse_sweep_config(const std::string& path) {
    return parse_sweep_config_text(read_file(path));
}

} // namespace qsync
