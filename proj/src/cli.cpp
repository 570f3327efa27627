#include "tunnelq/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tunnelq/config.hpp"
#include "tunnelq/error.hpp"
#include "tunnelq/format.hpp"
#include "tunnelq/manifest.hpp"
#include "tunnelq/negf.hpp"
#include "tunnelq/qencode.hpp"
#include "tunnelq/tracedata.hpp"

namespace tunnelq::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::string output;
    std::string manifest;
    std::optional<std::uint64_t> seed;
    std::optional<double> fermi;
    std::string grid;
    bool ev = false;
};

struct TransportOptions {
    std::string junction;
    std::optional<double> lead_onsite;
    std::optional<double> lead_hopping;
    std::optional<double> eta;
    unsigned threads = 1;

    LeadOverrides overrides() const { return {lead_onsite, lead_hopping, eta}; }
};

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
};

// Rounds to the 12 significant digits used for all numeric output.
double r12(double v) {
    double out = v;
    parse_number(format_number(v), out);
    return out;
}

Grid parse_grid(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        parts.push_back(item);
    Grid g;
    double n = 0.0;
    if (parts.size() != 3 || !parse_number(parts[0], g.lo) || !parse_number(parts[1], g.hi) ||
        !parse_number(parts[2], n) || n < 1.0 || n != static_cast<double>(static_cast<std::size_t>(n)))
        throw Error(ErrorKind::InvalidGrid, "--grid expects min,max,n with integer n >= 1, got '" + text + "'");
    g.n = static_cast<std::size_t>(n);
    return g;
}

json lead_json(const Lead &lead) {
    json attachments = json::array();
    for (const auto &a : lead.attachments)
        attachments.push_back({{"site", a.site + 1}, {"coupling", a.coupling}});
    return {{"onsite", lead.onsite}, {"hopping", lead.hopping}, {"attachments", attachments}};
}

json junction_json(const JunctionConfig &cfg) {
    json j;
    j["label"] = cfg.label;
    j["components"] = json::array();
    for (const auto &c : cfg.components)
        j["components"].push_back(
            {{"label", c.label}, {"eta", c.eta}, {"left", lead_json(c.left)}, {"right", lead_json(c.right)}});
    if (cfg.theta_deg)
        j["theta_deg"] = *cfg.theta_deg;
    return j;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::IoError, "cannot write " + path);
    f << text;
    if (!f)
        throw Error(ErrorKind::IoError, "write failed for " + path);
}

class Runner {
public:
    Runner(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

    GlobalOptions global;
    TransportOptions transport;
    std::string model_path;
    int in_site = 0;
    int out_site = 0;
    std::string trace_path;
    std::string reference_path;
    std::string spec_path;
    std::string pairing = "auto";
    LevelThresholds thresholds;

    void spectrum_cmd() {
        const auto cfg = load_junction(transport.junction, transport.overrides());
        const double scale = global.ev ? cfg.model().energy_scale_ev() : 1.0;
        std::vector<double> grid;
        if (!global.grid.empty()) {
            const auto g = parse_grid(global.grid);
            grid = uniform_grid(g.lo / scale, g.hi / scale, g.n);
        } else {
            grid = default_grid(diagonalize(cfg.model()));
        }

        TransmissionSpectrum spec;
        if (cfg.is_superposition()) {
            spec = weighted_superposition(tunnelq::spectrum(cfg.components[0], grid, transport.threads),
                                          tunnelq::spectrum(cfg.components[1], grid, transport.threads),
                                          *cfg.theta_deg);
        } else {
            spec = tunnelq::spectrum(cfg.components[0], grid, transport.threads);
        }

        std::string csv = "energy_tcn,transmission\n";
        for (std::size_t i = 0; i < spec.energies.size(); ++i)
            csv += format_number(spec.energies[i]) + "," + format_number(spec.values[i]) + "\n";

        RunManifest m = manifest("spectrum");
        m.config["junction"] = junction_json(cfg);
        m.config["grid"] = {{"min_tcn", grid.front()}, {"max_tcn", grid.back()}, {"n", grid.size()}};
        add_junction_inputs(m);
        emit(csv, m);
    }

    void conductance_cmd() {
        const auto cfg = load_junction(transport.junction, transport.overrides());
        const double scale = cfg.model().energy_scale_ev();
        const double fermi =
            global.fermi ? *global.fermi / (global.ev ? scale : 1.0) : diagonalize(cfg.model()).midgap();

        double t = 0.0;
        if (cfg.is_superposition()) {
            t = mix_weighted(transmission(cfg.components[0], fermi), transmission(cfg.components[1], fermi),
                             *cfg.theta_deg);
        } else {
            t = transmission(cfg.components[0], fermi);
        }
        const double g = kConductanceQuantumNs * t;

        std::string text;
        text += "label: " + cfg.label + "\n";
        text += "fermi_tcn: " + format_number(fermi) + "\n";
        text += "fermi_ev: " + format_number(fermi * scale) + "\n";
        text += "transmission: " + format_number(t) + "\n";
        text += "conductance_ns: " + format_number(g) + "\n";

        RunManifest m = manifest("conductance");
        m.config["junction"] = junction_json(cfg);
        m.config["fermi_tcn"] = fermi;
        m.config["fermi_source"] = global.fermi ? "flag" : "midgap";
        add_junction_inputs(m);
        emit(text, m);
    }

    void classify_cmd() {
        const auto model = load_model(model_path);
        if (in_site < 1 || out_site < 1)
            throw Error(ErrorKind::IndexOutOfRange, "sites are numbered from 1");
        const auto orbitals = diagonalize(model);
        const auto pc = classify_pathway(orbitals, static_cast<std::size_t>(in_site - 1),
                                         static_cast<std::size_t>(out_site - 1));
        std::string text;
        text += "pathway: " + std::string(to_string(pc.kind)) + "\n";
        text += "in_site: " + std::to_string(in_site) + "\n";
        text += "out_site: " + std::to_string(out_site) + "\n";
        text += "homo_in: " + format_number(pc.homo_in) + "\n";
        text += "homo_out: " + format_number(pc.homo_out) + "\n";
        text += "lumo_in: " + format_number(pc.lumo_in) + "\n";
        text += "lumo_out: " + format_number(pc.lumo_out) + "\n";

        RunManifest m = manifest("classify");
        m.config["model"] = model_path;
        m.config["in_site"] = in_site;
        m.config["out_site"] = out_site;
        m.config["coefficient_tolerance"] = kCoefficientTolerance;
        if (model_path != kBuiltinAdenine && model_path != "adenine")
            m.add_input(model_path);
        emit(text, m);
    }

    void encode_cmd() {
        const auto trace = load_trace(trace_path);
        const auto enc = encode_trace(trace, thresholds);

        std::string csv = "time_s,conductance_ns,level,theta_deg,amp_110,amp_101\n";
        for (std::size_t i = 0; i < enc.samples.size(); ++i) {
            const auto state = forward_encode(enc.samples[i].theta_deg);
            csv += format_number(trace.samples[i].time_s) + "," + format_number(trace.samples[i].conductance_ns) +
                   "," + level_name(*enc.samples[i].level) + "," + format_number(enc.samples[i].theta_deg) + "," +
                   format_number(state.amplitude(1, 1, 0).real()) + "," +
                   format_number(state.amplitude(1, 0, 1).real()) + "\n";
        }

        RunManifest m = manifest("encode");
        m.config["thresholds"] = {{"low_max_ns", thresholds.low_max}, {"high_min_ns", thresholds.high_min}};
        m.config["g_high_ns"] = r12(enc.g_high);
        m.config["g_low_ns"] = r12(enc.g_low);
        m.config["level_probabilities"] = level_probabilities(enc.summary);
        m.add_input(trace_path);
        emit(csv, m);
    }

    void identify_cmd() {
        const auto trace = load_trace(trace_path);
        const auto reference = load_distribution(reference_path);
        auto enc = encode_trace(trace, thresholds);

        bool paired = false;
        if (pairing == "levels")
            paired = true;
        else if (pairing == "auto")
            paired = enc.level_structure;
        if (!paired)
            for (auto &s : enc.samples)
                s.level.reset();

        const auto report = identify(enc.samples, reference.distribution, reference.label);

        json j;
        j["reference"] = report.reference_label;
        j["match_probability"] = r12(report.match_probability);
        j["sample_count"] = report.overlaps.size();
        j["mode"] = report.level_paired ? "level-paired" : "expectation";
        j["g_high_ns"] = r12(enc.g_high);
        j["g_low_ns"] = r12(enc.g_low);
        j["level_probabilities"] = level_probabilities(enc.summary);
        j["levels"] = json::array();
        for (const auto &st : report.levels)
            j["levels"].push_back({{"level", level_name(st.level)},
                                   {"count", st.count},
                                   {"probability", r12(st.probability)},
                                   {"mean_theta_deg", r12(st.mean_theta_deg)},
                                   {"mean_overlap", r12(st.mean_overlap)},
                                   {"reference_theta_deg", r12(st.reference_theta_deg)},
                                   {"reference_probability", r12(st.reference_probability)}});

        RunManifest m = manifest("identify");
        m.config["thresholds"] = {{"low_max_ns", thresholds.low_max}, {"high_min_ns", thresholds.high_min}};
        m.config["pairing"] = pairing;
        m.add_input(trace_path);
        m.add_input(reference_path);
        emit(j.dump(2) + "\n", m);
    }

    void synth_cmd() {
        auto spec = load_synth_spec(spec_path);
        if (global.seed)
            spec.seed = *global.seed;
        const auto trace = synth_trace(spec);
        std::ostringstream csv;
        write_trace(csv, trace);

        RunManifest m = manifest("synth");
        m.seed = spec.seed;
        m.config["probabilities"] = spec.probabilities;
        m.config["means_ns"] = spec.means_ns;
        m.config["dwell_s"] = spec.dwell_s;
        m.config["noise_sigma"] = spec.noise_sigma;
        m.config["duration_s"] = spec.duration_s;
        m.config["sample_rate_hz"] = spec.sample_rate_hz;
        m.add_input(spec_path);
        emit(csv.str(), m);
    }

private:
    std::ostream &out_;
    std::ostream &err_;

    static json level_probabilities(const LevelSummary &s) {
        return {{"High", r12(s.probability(Level::High))},
                {"Intermediate", r12(s.probability(Level::Intermediate))},
                {"Low", r12(s.probability(Level::Low))}};
    }

    RunManifest manifest(const std::string &command) const {
        RunManifest m;
        m.command = command;
        m.seed = global.seed;
        m.config["ev_units"] = global.ev;
        return m;
    }

    void add_junction_inputs(RunManifest &m) const {
        for (const auto &p : junction_inputs(transport.junction))
            m.add_input(p);
    }

    void emit(const std::string &text, const RunManifest &m) {
        const std::string manifest_text = m.to_json().dump(2) + "\n";
        if (global.output.empty()) {
            out_ << text;
        } else {
            write_file(global.output, text);
        }
        if (!global.manifest.empty())
            write_file(global.manifest, manifest_text);
        else if (!global.output.empty())
            write_file(global.output + ".manifest.json", manifest_text);
        else
            err_ << "# manifest " << m.to_json().dump() << "\n";
    }
};

void add_transport_options(CLI::App *sub, TransportOptions &t) {
    sub->add_option("junction", t.junction, "Junction config (JSON)")->required();
    sub->add_option("--lead-onsite", t.lead_onsite, "Override lead on-site energy (t_CN)");
    sub->add_option("--lead-hopping", t.lead_hopping, "Override lead hopping (t_CN)");
    sub->add_option("--eta", t.eta, "Override the 0+ broadening (t_CN)");
    sub->add_option("--threads", t.threads, "Worker threads for the energy sweep")->check(CLI::PositiveNumber);
}

void add_threshold_options(CLI::App *sub, LevelThresholds &th) {
    sub->add_option("--low-max", th.low_max, "Upper bound of the Low level (nS)");
    sub->add_option("--high-min", th.high_min, "Lower bound of the High level (nS)");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Runner r(out, err);
    CLI::App app{"Molecular tunneling transport and three-qubit conductance encoding"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);
    app.add_option("-o,--output", r.global.output, "Output file (default: stdout)");
    app.add_option("--manifest", r.global.manifest, "Manifest file (default: <output>.manifest.json)");
    app.add_option("--seed", r.global.seed, "Random seed override");
    app.add_option("--fermi", r.global.fermi, "Fermi energy (t_CN, or eV with --ev)");
    app.add_option("--grid", r.global.grid, "Energy grid min,max,n (t_CN, or eV with --ev)");
    app.add_flag("--ev", r.global.ev, "Interpret --grid and --fermi in eV");

    auto *spectrum = app.add_subcommand("spectrum", "Transmission spectrum T(E) as CSV");
    add_transport_options(spectrum, r.transport);
    auto *conductance = app.add_subcommand("conductance", "Landauer conductance at the Fermi level");
    add_transport_options(conductance, r.transport);

    auto *classify = app.add_subcommand("classify", "Tunneling orbital rule for an in/out site pair");
    classify->add_option("model", r.model_path, "Model config or builtin:adenine")->required();
    classify->add_option("in_site", r.in_site, "In contact (1-based)")->required();
    classify->add_option("out_site", r.out_site, "Out contact (1-based)")->required();

    auto *encode = app.add_subcommand("encode", "Per-sample theta and encoded state for a trace");
    encode->add_option("trace", r.trace_path, "Trace CSV")->required();
    add_threshold_options(encode, r.thresholds);

    auto *ident = app.add_subcommand("identify", "Back-flow identification against a reference");
    ident->add_option("trace", r.trace_path, "Trace CSV")->required();
    ident->add_option("reference", r.reference_path, "Reference theta distribution (JSON)")->required();
    ident->add_option("--pairing", r.pairing, "auto | levels | expectation")
        ->check(CLI::IsMember({"auto", "levels", "expectation"}));
    add_threshold_options(ident, r.thresholds);

    auto *synth = app.add_subcommand("synth", "Synthetic three-level conductance trace");
    synth->add_option("spec", r.spec_path, "Synth spec (JSON)")->required();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*spectrum)
            r.spectrum_cmd();
        else if (*conductance)
            r.conductance_cmd();
        else if (*classify)
            r.classify_cmd();
        else if (*encode)
            r.encode_cmd();
        else if (*ident)
            r.identify_cmd();
        else if (*synth)
            r.synth_cmd();
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return is_numerical(e.kind()) ? kExitNumericalError : kExitInputError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

} // namespace tunnelq::cli
