#include "tunnelq/config.hpp"

#include <fstream>

#include "tunnelq/error.hpp"

namespace tunnelq {

using nlohmann::json;

namespace {

std::size_t to_zero_based(const json &value, const std::string &what) {
    if (!value.is_number_integer())
        throw Error(ErrorKind::ConfigError, what + " must be an integer");
    const auto serial = value.get<long long>();
    if (serial < 1)
        throw Error(ErrorKind::IndexOutOfRange, what + " " + std::to_string(serial) + " (sites are numbered from 1)");
    return static_cast<std::size_t>(serial - 1);
}

template <typename T>
T get_or(const json &j, const char *key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::ConfigError, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T require(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorKind::ConfigError, std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::ConfigError, std::string("bad value for '") + key + "': " + e.what());
    }
}

Lead lead_from_json(const json &j, std::size_t n_sites, const LeadOverrides &overrides, const std::string &side) {
    if (!j.is_object())
        throw Error(ErrorKind::ConfigError, side + " lead must be an object");
    Lead lead;
    lead.onsite = overrides.onsite.value_or(get_or<double>(j, "onsite", 0.0));
    lead.hopping = overrides.hopping.value_or(get_or<double>(j, "hopping", 1.0));
    if (!j.contains("attachments") || !j.at("attachments").is_array())
        throw Error(ErrorKind::ConfigError, side + " lead needs an 'attachments' list");
    for (const auto &a : j.at("attachments")) {
        Attachment att;
        if (!a.is_object() || !a.contains("site"))
            throw Error(ErrorKind::ConfigError, side + " attachment needs a 'site'");
        att.site = to_zero_based(a.at("site"), side + " attachment site");
        att.coupling = require<double>(a, "coupling");
        lead.attachments.push_back(att);
    }
    lead.validate(n_sites);
    return lead;
}

std::filesystem::path resolve(const std::filesystem::path &base_dir, const std::string &p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
}

std::string resolve_model(const std::filesystem::path &base_dir, const std::string &p) {
    return p == kBuiltinAdenine ? p : resolve(base_dir, p).string();
}

} // namespace

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ConfigError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
    }
}

ModelConfig model_config_from_json(const json &j) {
    ModelConfig config;
    const auto n = require<long long>(j, "n_sites");
    if (n < 1)
        throw Error(ErrorKind::ConfigError, "n_sites must be positive");
    config.n_sites = static_cast<std::size_t>(n);
    config.n_pi_electrons = require<int>(j, "n_pi_electrons");
    config.energy_scale_ev = get_or<double>(j, "energy_scale_eV", 1.0);

    const auto entries = require<json>(j, "entries");
    if (!entries.is_array())
        throw Error(ErrorKind::ConfigError, "'entries' must be a list of [i, j, value]");
    for (const auto &e : entries) {
        if (!e.is_array() || e.size() != 3 || !e[2].is_number())
            throw Error(ErrorKind::ConfigError, "each entry must be [i, j, value]");
        config.entries.push_back({to_zero_based(e[0], "entry row"), to_zero_based(e[1], "entry column"), e[2].get<double>()});
    }
    if (j.contains("labels")) {
        for (const auto &l : j.at("labels")) {
            if (!l.is_array() || l.size() != 2 || !l[0].is_string() || !l[1].is_number_integer())
                throw Error(ErrorKind::ConfigError, "each label must be [element, serial]");
            config.labels.push_back({l[0].get<std::string>(), l[1].get<int>()});
        }
    }
    return config;
}

json model_config_to_json(const ModelConfig &config) {
    json j;
    j["n_sites"] = config.n_sites;
    j["n_pi_electrons"] = config.n_pi_electrons;
    j["energy_scale_eV"] = config.energy_scale_ev;
    j["labels"] = json::array();
    for (const auto &l : config.labels)
        j["labels"].push_back(json::array({l.element, l.serial}));
    j["entries"] = json::array();
    for (const auto &e : config.entries)
        j["entries"].push_back(json::array({e.row + 1, e.col + 1, e.value}));
    return j;
}

TightBindingModel load_model(const std::string &path_or_builtin) {
    if (path_or_builtin == kBuiltinAdenine || path_or_builtin == "adenine")
        return build_adenine();
    return build_from_config(model_config_from_json(read_json_file(path_or_builtin)));
}

JunctionConfig junction_from_json(const json &j, const std::filesystem::path &base_dir,
                                  const LeadOverrides &overrides) {
    if (!j.is_object())
        throw Error(ErrorKind::ConfigError, "junction config must be an object");
    JunctionConfig config;
    config.label = get_or<std::string>(j, "label", "");

    if (j.contains("superposition")) {
        const auto &sup = j.at("superposition");
        const auto parts = require<std::vector<std::string>>(sup, "components");
        if (parts.size() != 2)
            throw Error(ErrorKind::ConfigError, "a superposition needs exactly two components");
        config.theta_deg = get_or<double>(sup, "theta_deg", 45.0);
        if (!(*config.theta_deg >= 0.0 && *config.theta_deg <= 90.0))
            throw Error(ErrorKind::AngleOutOfRange, "superposition theta_deg must lie in [0, 90]");
        for (const auto &p : parts) {
            auto sub = load_junction(resolve(base_dir, p), overrides);
            if (sub.is_superposition())
                throw Error(ErrorKind::ConfigError, "nested superpositions are not supported");
            config.components.push_back(std::move(sub.components.front()));
        }
        if (config.label.empty())
            config.label = config.components[0].label + " + " + config.components[1].label;
        return config;
    }

    const auto model_ref = require<std::string>(j, "model");
    auto model = load_model(resolve_model(base_dir, model_ref));
    const auto n = model.n_sites();
    JunctionSpec spec{std::move(model), lead_from_json(require<json>(j, "left"), n, overrides, "left"),
                      lead_from_json(require<json>(j, "right"), n, overrides, "right"), config.label,
                      overrides.eta.value_or(get_or<double>(j, "eta", 1e-9))};
    spec.validate();
    config.components.push_back(std::move(spec));
    return config;
}

JunctionConfig load_junction(const std::filesystem::path &path, const LeadOverrides &overrides) {
    return junction_from_json(read_json_file(path), path.parent_path(), overrides);
}

std::vector<std::filesystem::path> junction_inputs(const std::filesystem::path &path) {
    std::vector<std::filesystem::path> out{path};
    const auto j = read_json_file(path);
    const auto base = path.parent_path();
    if (j.contains("superposition")) {
        for (const auto &p : require<std::vector<std::string>>(j.at("superposition"), "components"))
            for (auto &q : junction_inputs(resolve(base, p)))
                out.push_back(std::move(q));
    } else if (j.contains("model")) {
        const auto m = j.at("model").get<std::string>();
        if (m != kBuiltinAdenine && m != "adenine")
            out.push_back(resolve(base, m));
    }
    return out;
}

NamedDistribution distribution_from_json(const json &j) {
    NamedDistribution d;
    d.label = get_or<std::string>(j, "label", "reference");
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array())
        throw Error(ErrorKind::ConfigError, "distribution needs an 'entries' list of [theta_deg, probability]");
    for (const auto &e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw Error(ErrorKind::ConfigError, "each entry must be [theta_deg, probability]");
        d.distribution.theta_deg.push_back(e[0].get<double>());
        d.distribution.probability.push_back(e[1].get<double>());
    }
    d.distribution.validate();
    return d;
}

json distribution_to_json(const NamedDistribution &d) {
    json j;
    j["label"] = d.label;
    j["entries"] = json::array();
    for (std::size_t i = 0; i < d.distribution.theta_deg.size(); ++i)
        j["entries"].push_back(json::array({d.distribution.theta_deg[i], d.distribution.probability[i]}));
    return j;
}

NamedDistribution load_distribution(const std::filesystem::path &path) {
    return distribution_from_json(read_json_file(path));
}

SynthSpec synth_spec_from_json(const json &j) {
    if (!j.is_object())
        throw Error(ErrorKind::ConfigError, "synth spec must be an object");
    SynthSpec spec;
    const auto probs = require<std::vector<double>>(j, "probabilities");
    const auto means = require<std::vector<double>>(j, "means_ns");
    if (probs.size() != 3 || means.size() != 3)
        throw Error(ErrorKind::InvalidSpec, "probabilities and means_ns need three values (high, intermediate, low)");
    std::copy(probs.begin(), probs.end(), spec.probabilities.begin());
    std::copy(means.begin(), means.end(), spec.means_ns.begin());
    spec.dwell_s = get_or<double>(j, "dwell_s", spec.dwell_s);
    spec.noise_sigma = require<double>(j, "noise_sigma");
    spec.duration_s = require<double>(j, "duration_s");
    spec.seed = get_or<std::uint64_t>(j, "seed", spec.seed);
    spec.sample_rate_hz = get_or<double>(j, "sample_rate_hz", spec.sample_rate_hz);
    spec.validate();
    return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path &path) { return synth_spec_from_json(read_json_file(path)); }

} // namespace tunnelq
