#include "csn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace csn {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    return d;
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    errno = 0;
    const auto u = std::strtoull(v.c_str(), nullptr, 10);
    if (errno == ERANGE) {
        throw ConfigError(key, "integer out of range: '" + v + "'");
    }
    return u;
}

std::uint32_t to_u32(const std::string& key, const std::string& v)
{
    const auto u = to_uint(key, v);
    if (u > 0xffffffffULL) {
        throw ConfigError(key, "integer out of range: '" + v + "'");
    }
    return static_cast<std::uint32_t>(u);
}

std::string fmt_double(double d)
{
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, d);
        if (std::strtod(buf, nullptr) == d) {
            break;
        }
    }
    return buf;
}

struct Field {
    std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

using FieldTable = std::vector<std::pair<std::string, Field>>;

template <class T>
Field real(T ScenarioConfig::*outer, double T::*inner)
{
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { (c.*outer).*inner = to_double(k, v); },
            [=](const ScenarioConfig& c) { return fmt_double((c.*outer).*inner); }};
}

Field real(double ScenarioConfig::*m)
{
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
            [=](const ScenarioConfig& c) { return fmt_double(c.*m); }};
}

Field bytes(Bytes ScenarioConfig::*m)
{
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*m = to_uint(k, v); },
            [=](const ScenarioConfig& c) { return std::to_string(c.*m); }};
}

const FieldTable& fields()
{
    static const FieldTable table = [] {
        FieldTable t;
        t.emplace_back("scenario.name", Field{[](ScenarioConfig& c, const std::string&, const std::string& v) {
                                                  c.name = v;
                                              },
                                              [](const ScenarioConfig& c) { return c.name; }});
        t.emplace_back("scenario.protocol",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 try {
                                     c.protocol = parse_protocol(v);
                                 } catch (const std::invalid_argument& e) {
                                     throw ConfigError(k, e.what());
                                 }
                             },
                             [](const ScenarioConfig& c) { return to_string(c.protocol); }});
        t.emplace_back("scenario.nodes", Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                                   c.nodes = to_u32(k, v);
                                               },
                                               [](const ScenarioConfig& c) { return std::to_string(c.nodes); }});
        t.emplace_back("scenario.zone_counts",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 c.zone_counts.clear();
                                 if (v.empty()) {
                                     return;
                                 }
                                 for (const auto& item : split(v, ',')) {
                                     const auto parts = split(item, ':');
                                     if (parts.size() != 2) {
                                         throw ConfigError(k, "expected zone:count pairs, got '" + item + "'");
                                     }
                                     c.zone_counts.emplace_back(to_u32(k, parts[0]), to_u32(k, parts[1]));
                                 }
                             },
                             [](const ScenarioConfig& c) {
                                 std::string s;
                                 for (const auto& [z, n] : c.zone_counts) {
                                     if (!s.empty()) {
                                         s += ',';
                                     }
                                     s += std::to_string(z) + ":" + std::to_string(n);
                                 }
                                 return s;
                             }});
        t.emplace_back("scenario.sim_time", real(&ScenarioConfig::sim_time));
        t.emplace_back("scenario.round_length", real(&ScenarioConfig::round_length));
        t.emplace_back("scenario.sampling_period", real(&ScenarioConfig::sampling_period));
        t.emplace_back("scenario.aggregation_period", real(&ScenarioConfig::aggregation_period));
        t.emplace_back("scenario.batch_period", real(&ScenarioConfig::batch_period));
        t.emplace_back("scenario.sample_bytes", bytes(&ScenarioConfig::sample_bytes));
        t.emplace_back("scenario.storage_bytes", bytes(&ScenarioConfig::storage_bytes));
        t.emplace_back("scenario.metric_tick", real(&ScenarioConfig::metric_tick));
        t.emplace_back("scenario.seeds", Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                                   c.seeds.clear();
                                                   for (const auto& item : split(v, ',')) {
                                                       c.seeds.push_back(to_uint(k, item));
                                                   }
                                               },
                                               [](const ScenarioConfig& c) {
                                                   std::string s;
                                                   for (const auto seed : c.seeds) {
                                                       if (!s.empty()) {
                                                           s += ',';
                                                       }
                                                       s += std::to_string(seed);
                                                   }
                                                   return s;
                                               }});
        t.emplace_back("field.width", real(&ScenarioConfig::field, &FieldSpec::width));
        t.emplace_back("field.height", real(&ScenarioConfig::field, &FieldSpec::height));
        t.emplace_back("field.zone_side", real(&ScenarioConfig::field, &FieldSpec::zone_side));
        t.emplace_back("field.radio_range", real(&ScenarioConfig::radio_range));
        t.emplace_back("aggregation.model",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 if (v == "constant") {
                                     c.aggregation.kind = AggregationKind::ConstantRatio;
                                 } else if (v == "one_packet") {
                                     c.aggregation.kind = AggregationKind::OnePacket;
                                 } else {
                                     throw ConfigError(k, "expected 'constant' or 'one_packet', got '" + v + "'");
                                 }
                             },
                             [](const ScenarioConfig& c) { return to_string(c.aggregation.kind); }});
        t.emplace_back("aggregation.alpha", real(&ScenarioConfig::aggregation, &AggregationModel::alpha));
        t.emplace_back("coordination.min", real(&ScenarioConfig::coordination, &CoordinationConfig::min_reduction));
        t.emplace_back("coordination.max", real(&ScenarioConfig::coordination, &CoordinationConfig::max_reduction));
        t.emplace_back("coordination.meta_bytes",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 c.coordination.meta_bytes = to_uint(k, v);
                             },
                             [](const ScenarioConfig& c) { return std::to_string(c.coordination.meta_bytes); }});
        t.emplace_back("activity.model", Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                                   if (v == "even") {
                                                       c.activity.model = ActivityModel::Even;
                                                   } else if (v == "uneven") {
                                                       c.activity.model = ActivityModel::Uneven;
                                                   } else {
                                                       throw ConfigError(k, "expected 'even' or 'uneven', got '" +
                                                                                v + "'");
                                                   }
                                               },
                                               [](const ScenarioConfig& c) {
                                                   return std::string(c.activity.model == ActivityModel::Even
                                                                          ? "even"
                                                                          : "uneven");
                                               }});
        t.emplace_back("activity.high_fraction",
                       real(&ScenarioConfig::activity, &ActivityConfig::high_fraction));
        t.emplace_back("activity.multiplier", real(&ScenarioConfig::activity, &ActivityConfig::multiplier));
        t.emplace_back("channel.bandwidth", real(&ScenarioConfig::channel, &ChannelConfig::bandwidth));
        t.emplace_back("channel.jitter_window", real(&ScenarioConfig::channel, &ChannelConfig::jitter_window));
        t.emplace_back("channel.interference",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 if (v == "zone") {
                                     c.channel.interference_scope = InterferenceScope::Zone;
                                 } else if (v == "none") {
                                     c.channel.interference_scope = InterferenceScope::None;
                                 } else {
                                     throw ConfigError(k, "expected 'zone' or 'none', got '" + v + "'");
                                 }
                             },
                             [](const ScenarioConfig& c) {
                                 return std::string(c.channel.interference_scope == InterferenceScope::Zone ? "zone"
                                                                                                             : "none");
                             }});
        t.emplace_back("channel.ad_bytes", bytes(&ScenarioConfig::ad_bytes));
        t.emplace_back("energy.store_j_per_byte",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 c.energy.e_store = to_double(k, v);
                                 c.energy.e_radio_tx = c.energy.e_store * c.energy.radio_multiplier;
                             },
                             [](const ScenarioConfig& c) { return fmt_double(c.energy.e_store); }});
        t.emplace_back("energy.radio_multiplier",
                       Field{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                                 c.energy.radio_multiplier = to_double(k, v);
                                 c.energy.e_radio_tx = c.energy.e_store * c.energy.radio_multiplier;
                             },
                             [](const ScenarioConfig& c) { return fmt_double(c.energy.radio_multiplier); }});
        t.emplace_back("energy.rx_j_per_byte", real(&ScenarioConfig::energy, &EnergyModel::e_radio_rx));
        t.emplace_back("energy.idle_watts", real(&ScenarioConfig::energy, &EnergyModel::idle_watts));
        return t;
    }();
    return table;
}

}  // namespace

std::string to_string(ProtocolKind p)
{
    switch (p) {
    case ProtocolKind::LS: return "LS";
    case ProtocolKind::CLS: return "CLS";
    case ProtocolKind::CBCS: return "CBCS";
    case ProtocolKind::CCS: return "CCS";
    }
    return "?";
}

ProtocolKind parse_protocol(std::string_view raw)
{
    std::string s(raw);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s == "LS") return ProtocolKind::LS;
    if (s == "CLS") return ProtocolKind::CLS;
    if (s == "CBCS") return ProtocolKind::CBCS;
    if (s == "CCS") return ProtocolKind::CCS;
    throw std::invalid_argument("unknown protocol '" + std::string(raw) + "' (expected LS, CLS, CBCS or CCS)");
}

std::uint32_t ScenarioConfig::node_count() const
{
    if (zone_counts.empty()) {
        return nodes;
    }
    std::uint32_t n = 0;
    for (const auto& zc : zone_counts) {
        n += zc.second;
    }
    return n;
}

double ScenarioConfig::effective_aggregation_period() const
{
    return aggregation_period > 0.0 ? aggregation_period : round_length;
}

namespace {

bool divides(double unit, double total)
{
    const double k = total / unit;
    return std::abs(k - std::round(k)) < 1e-9 && std::round(k) >= 1.0;
}

}  // namespace

void ScenarioConfig::validate() const
{
    if (zone_counts.empty() && nodes == 0) {
        throw ConfigError("scenario.nodes", "must be at least 1");
    }
    try {
        field.validate(radio_range);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field", e.what());
    }
    if (!zone_counts.empty()) {
        const auto zones = static_cast<ZoneId>(field.zones_x() * field.zones_y());
        std::set<ZoneId> seen;
        for (const auto& [z, n] : zone_counts) {
            if (z >= zones) {
                throw ConfigError("scenario.zone_counts", "unknown zone id " + std::to_string(z));
            }
            if (n == 0) {
                throw ConfigError("scenario.zone_counts", "zone counts must be at least 1");
            }
            if (!seen.insert(z).second) {
                throw ConfigError("scenario.zone_counts", "zone " + std::to_string(z) + " listed twice");
            }
        }
    }
    if (!(sim_time > 0.0)) {
        throw ConfigError("scenario.sim_time", "must be positive");
    }
    if (!(round_length > 0.0) || !divides(round_length, sim_time)) {
        throw ConfigError("scenario.round_length", "must be positive and divide sim_time");
    }
    if (!(sampling_period > 0.0)) {
        throw ConfigError("scenario.sampling_period", "must be positive");
    }
    if (aggregation_period < 0.0 || (aggregation_period > 0.0 && !divides(aggregation_period, round_length))) {
        throw ConfigError("scenario.aggregation_period", "must be 0 or divide round_length");
    }
    if (batch_period < 0.0) {
        throw ConfigError("scenario.batch_period", "must be non-negative");
    }
    if (sample_bytes == 0) {
        throw ConfigError("scenario.sample_bytes", "must be positive");
    }
    if (!(metric_tick > 0.0) || !divides(metric_tick, sim_time)) {
        throw ConfigError("scenario.metric_tick", "must be positive and divide sim_time");
    }
    if (seeds.empty()) {
        throw ConfigError("scenario.seeds", "at least one seed is required");
    }
    try {
        aggregation.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("aggregation.alpha", e.what());
    }
    const auto& co = coordination;
    if (!(co.min_reduction >= 0.0 && co.min_reduction <= co.max_reduction && co.max_reduction < 1.0)) {
        throw ConfigError("coordination.min", "need 0 <= min <= max < 1");
    }
    if (!(activity.high_fraction >= 0.0 && activity.high_fraction <= 1.0)) {
        throw ConfigError("activity.high_fraction", "must lie in [0, 1]");
    }
    if (!(activity.multiplier >= 1.0)) {
        throw ConfigError("activity.multiplier", "must be at least 1");
    }
    try {
        channel.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("channel", e.what());
    }
    if (ad_bytes == 0) {
        throw ConfigError("channel.ad_bytes", "must be positive");
    }
    try {
        energy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("energy", e.what());
    }
}

ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig cfg;
    std::map<std::string, const Field*> lookup;
    for (const auto& [key, field] : fields()) {
        lookup.emplace(key, &field);
    }
    static const std::set<std::string> sections{"scenario", "field", "aggregation", "coordination",
                                                "activity", "channel", "energy"};
    std::string section;
    std::set<std::string> seen;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno), "malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!sections.count(section)) {
                throw ConfigError(section, "unknown section");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno), "key outside of any section");
        }
        const auto key = section + "." + trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            throw ConfigError(key, "unknown key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(key, "duplicate key");
        }
        it->second->set(cfg, key, value);
    }
    // rx defaults to tx unless set explicitly
    if (!seen.count("energy.rx_j_per_byte")) {
        cfg.energy.e_radio_rx = cfg.energy.e_radio_tx;
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, "cannot open config file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg)
{
    std::string out;
    std::string section;
    for (const auto& [key, field] : fields()) {
        const auto dot = key.find('.');
        const auto sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) {
                out += '\n';
            }
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += key.substr(dot + 1) + " = " + field.get(cfg) + "\n";
    }
    return out;
}

}  // namespace csn
