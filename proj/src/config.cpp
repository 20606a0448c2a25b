#include "omit/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "omit/constants.hpp"
#include "omit/csv.hpp"
#include "omit/errors.hpp"

namespace omit {

using nlohmann::json;

namespace {

const std::map<std::string, double>& suffix_table() {
    static const std::map<std::string, double> table = {
        {"m", 1.0},        {"mm", 1e-3},      {"um", 1e-6},
        {"nm", 1e-9},      {"pm", 1e-12},     {"kg", 1.0},
        {"g", 1e-3},       {"mg", 1e-6},      {"ug", 1e-9},
        {"ng", 1e-12},     {"W", 1.0},        {"mW", 1e-3},
        {"uW", 1e-6},      {"nW", 1e-9},      {"s", 1.0},
        {"ms", 1e-3},      {"us", 1e-6},      {"rad_s", 1.0},
        {"Hz_x2pi", 2.0 * constants::pi},
        {"kHz_x2pi", 2.0 * constants::pi * 1e3},
        {"MHz_x2pi", 2.0 * constants::pi * 1e6},
        {"GHz_x2pi", 2.0 * constants::pi * 1e9},
    };
    return table;
}

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorKind::ConfigError, message);
}

double quantity_from_json(const json& value, const std::string& key) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_quantity(value.get<std::string>());
    config_error("field '" + key + "' must be a number or a suffixed string");
}

void reject_unknown_keys(const json& node, const std::vector<std::string>& known,
                         const std::string& where) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        bool found = false;
        for (const auto& k : known)
            if (it.key() == k) found = true;
        if (!found) config_error("unknown key '" + it.key() + "' in " + where);
    }
}

std::optional<double> optional_quantity(const json& node, const std::string& key) {
    if (!node.contains(key) || node.at(key).is_null()) return std::nullopt;
    return quantity_from_json(node.at(key), key);
}

double required_quantity(const json& node, const std::string& key) {
    if (!node.contains(key)) config_error("missing required field '" + key + "'");
    return quantity_from_json(node.at(key), key);
}

json to_json_number(double v) { return json(v); }

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

double parse_quantity(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) config_error("cannot parse quantity '" + text + "'");
    std::string suffix(end);
    const auto ltrim = suffix.find_first_not_of(" \t");
    suffix = ltrim == std::string::npos ? "" : suffix.substr(ltrim);
    const auto rtrim = suffix.find_last_not_of(" \t");
    if (rtrim != std::string::npos) suffix = suffix.substr(0, rtrim + 1);
    if (suffix.empty()) return value;
    const auto& table = suffix_table();
    const auto it = table.find(suffix);
    if (it == table.end()) {
        config_error("unknown unit suffix '" + suffix + "' in '" + text + "'");
    }
    return value * it->second;
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        config_error(std::string("config is not valid JSON: ") + err.what());
    }
    reject_unknown_keys(root,
                        {"params", "casimir", "solver", "spectrum", "switch",
                         "oracle", "output"},
                        "config root");

    RunConfig config;

    if (!root.contains("params")) config_error("missing 'params' section");
    {
        const json& p = root.at("params");
        reject_unknown_keys(
            p,
            {"wavelength", "cavity_length", "sphere_radius", "gap", "mirror_mass",
             "sphere_mass", "cavity_decay", "mech_decay_1", "mech_decay_2",
             "mech_freq_1", "mech_freq_2", "pump_detuning", "pump_power",
             "probe_power", "coupling_ratio", "mode"},
            "params");
        SystemParams& sp = config.params;
        sp.wavelength = required_quantity(p, "wavelength");
        sp.cavity_length = required_quantity(p, "cavity_length");
        sp.sphere_radius = required_quantity(p, "sphere_radius");
        sp.gap = required_quantity(p, "gap");
        sp.mirror_mass = required_quantity(p, "mirror_mass");
        sp.sphere_mass = optional_quantity(p, "sphere_mass");
        sp.cavity_decay = required_quantity(p, "cavity_decay");
        sp.mech_decay_1 = required_quantity(p, "mech_decay_1");
        sp.mech_decay_2 = optional_quantity(p, "mech_decay_2");
        sp.mech_freq_1 = required_quantity(p, "mech_freq_1");
        sp.mech_freq_2 = optional_quantity(p, "mech_freq_2");
        sp.pump_detuning = required_quantity(p, "pump_detuning");
        sp.pump_power = required_quantity(p, "pump_power");
        sp.probe_power = required_quantity(p, "probe_power");
        if (p.contains("coupling_ratio"))
            sp.coupling_ratio = quantity_from_json(p.at("coupling_ratio"),
                                                   "coupling_ratio");
        if (p.contains("mode")) {
            const std::string mode = p.at("mode").get<std::string>();
            if (mode == "fixed_sphere")
                sp.mode = SphereMode::FixedSphere;
            else if (mode == "moveable_sphere")
                sp.mode = SphereMode::MoveableSphere;
            else
                config_error("mode must be fixed_sphere or moveable_sphere");
        }
    }

    if (root.contains("casimir")) {
        const json& c = root.at("casimir");
        reject_unknown_keys(c, {"variant", "beta", "amplitude", "exponent"},
                            "casimir");
        CasimirModel& m = config.params.casimir;
        const std::string variant =
            c.contains("variant") ? c.at("variant").get<std::string>() : "ideal_pfa";
        if (variant == "off")
            m.variant = CasimirVariant::Off;
        else if (variant == "ideal_pfa")
            m.variant = CasimirVariant::IdealPfa;
        else if (variant == "pfa_with_correction")
            m.variant = CasimirVariant::PfaWithCorrection;
        else if (variant == "power_law")
            m.variant = CasimirVariant::PowerLaw;
        else
            config_error("unknown casimir variant '" + variant + "'");
        if (c.contains("beta")) m.beta = quantity_from_json(c.at("beta"), "beta");
        if (c.contains("amplitude"))
            m.amplitude = quantity_from_json(c.at("amplitude"), "amplitude");
        if (c.contains("exponent")) m.exponent = c.at("exponent").get<int>();
    }

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        reject_unknown_keys(s, {"force_treatment", "coupled_treatment"}, "solver");
        if (s.contains("force_treatment")) {
            const std::string t = s.at("force_treatment").get<std::string>();
            if (t == "exact")
                config.force_treatment = ForceTreatment::Exact;
            else if (t == "quadratic")
                config.force_treatment = ForceTreatment::Quadratic;
            else
                config_error("force_treatment must be exact or quadratic");
        }
        if (s.contains("coupled_treatment")) {
            const std::string t = s.at("coupled_treatment").get<std::string>();
            if (t == "quadratic")
                config.coupled_treatment = CoupledTreatment::Quadratic;
            else if (t == "literal")
                config.coupled_treatment = CoupledTreatment::Literal;
            else
                config_error("coupled_treatment must be quadratic or literal");
        }
    }

    if (root.contains("spectrum")) {
        const json& s = root.at("spectrum");
        reject_unknown_keys(
            s, {"delta_p_min", "delta_p_max", "points", "pump_powers", "gaps"},
            "spectrum");
        config.spectrum.delta_p_min = optional_quantity(s, "delta_p_min");
        config.spectrum.delta_p_max = optional_quantity(s, "delta_p_max");
        if (s.contains("points")) config.spectrum.points = s.at("points").get<int>();
        if (s.contains("pump_powers")) {
            for (const auto& v : s.at("pump_powers")) {
                config.spectrum.pump_powers.push_back(
                    quantity_from_json(v, "pump_powers"));
            }
        }
        if (s.contains("gaps")) {
            for (const auto& v : s.at("gaps")) {
                config.spectrum.gaps.push_back(quantity_from_json(v, "gaps"));
            }
        }
    }

    if (root.contains("switch")) {
        const json& s = root.at("switch");
        reject_unknown_keys(s, {"d_min", "d_max", "points"}, "switch");
        if (s.contains("d_min"))
            config.switch_grid.d_min = quantity_from_json(s.at("d_min"), "d_min");
        if (s.contains("d_max"))
            config.switch_grid.d_max = quantity_from_json(s.at("d_max"), "d_max");
        if (s.contains("points"))
            config.switch_grid.points = s.at("points").get<int>();
    }

    if (root.contains("oracle")) {
        const json& o = root.at("oracle");
        reject_unknown_keys(o,
                            {"variant", "nu_samples", "rtol", "settle_time",
                             "demod_periods", "mech_decay_override",
                             "dump_trajectory"},
                            "oracle");
        if (o.contains("variant")) {
            const std::string v = o.at("variant").get<std::string>();
            if (v == "full")
                config.oracle.variant = OracleConfig::Variant::FullNonlinear;
            else if (v == "linearized")
                config.oracle.variant = OracleConfig::Variant::Linearized;
            else
                config_error("oracle variant must be full or linearized");
        }
        if (o.contains("nu_samples"))
            config.oracle.nu_samples = o.at("nu_samples").get<int>();
        if (o.contains("rtol"))
            config.oracle.rtol = quantity_from_json(o.at("rtol"), "rtol");
        if (o.contains("settle_time"))
            config.oracle.settle_time =
                quantity_from_json(o.at("settle_time"), "settle_time");
        if (o.contains("demod_periods"))
            config.oracle.demod_periods = o.at("demod_periods").get<int>();
        config.oracle.mech_decay_override =
            optional_quantity(o, "mech_decay_override");
        if (o.contains("dump_trajectory"))
            config.oracle.dump_trajectory = o.at("dump_trajectory").get<bool>();
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        reject_unknown_keys(o, {"jobs", "svg", "dir", "tag"}, "output");
        if (o.contains("jobs")) config.output.jobs = o.at("jobs").get<int>();
        if (o.contains("svg")) config.output.svg = o.at("svg").get<bool>();
        if (o.contains("dir")) config.output.dir = o.at("dir").get<std::string>();
        if (o.contains("tag")) config.output.tag = o.at("tag").get<std::string>();
    }

    return config;
}

std::string serialize_config(const RunConfig& config) {
    const SystemParams& sp = config.params;
    json root;
    root["params"] = {
        {"wavelength", to_json_number(sp.wavelength)},
        {"cavity_length", to_json_number(sp.cavity_length)},
        {"sphere_radius", to_json_number(sp.sphere_radius)},
        {"gap", to_json_number(sp.gap)},
        {"mirror_mass", to_json_number(sp.mirror_mass)},
        {"sphere_mass", optional_to_json(sp.sphere_mass)},
        {"cavity_decay", to_json_number(sp.cavity_decay)},
        {"mech_decay_1", to_json_number(sp.mech_decay_1)},
        {"mech_decay_2", optional_to_json(sp.mech_decay_2)},
        {"mech_freq_1", to_json_number(sp.mech_freq_1)},
        {"mech_freq_2", optional_to_json(sp.mech_freq_2)},
        {"pump_detuning", to_json_number(sp.pump_detuning)},
        {"pump_power", to_json_number(sp.pump_power)},
        {"probe_power", to_json_number(sp.probe_power)},
        {"coupling_ratio", to_json_number(sp.coupling_ratio)},
        {"mode", sp.mode == SphereMode::FixedSphere ? "fixed_sphere"
                                                    : "moveable_sphere"},
    };
    const char* variant = "ideal_pfa";
    switch (sp.casimir.variant) {
        case CasimirVariant::Off: variant = "off"; break;
        case CasimirVariant::IdealPfa: variant = "ideal_pfa"; break;
        case CasimirVariant::PfaWithCorrection: variant = "pfa_with_correction"; break;
        case CasimirVariant::PowerLaw: variant = "power_law"; break;
    }
    root["casimir"] = {
        {"variant", variant},
        {"beta", to_json_number(sp.casimir.beta)},
        {"amplitude", to_json_number(sp.casimir.amplitude)},
        {"exponent", sp.casimir.exponent},
    };
    root["solver"] = {
        {"force_treatment",
         config.force_treatment == ForceTreatment::Exact ? "exact" : "quadratic"},
        {"coupled_treatment", config.coupled_treatment == CoupledTreatment::Quadratic
                                  ? "quadratic"
                                  : "literal"},
    };
    root["spectrum"] = {
        {"delta_p_min", optional_to_json(config.spectrum.delta_p_min)},
        {"delta_p_max", optional_to_json(config.spectrum.delta_p_max)},
        {"points", config.spectrum.points},
        {"pump_powers", config.spectrum.pump_powers},
        {"gaps", config.spectrum.gaps},
    };
    root["switch"] = {
        {"d_min", to_json_number(config.switch_grid.d_min)},
        {"d_max", to_json_number(config.switch_grid.d_max)},
        {"points", config.switch_grid.points},
    };
    root["oracle"] = {
        {"variant", config.oracle.variant == OracleConfig::Variant::FullNonlinear
                        ? "full"
                        : "linearized"},
        {"nu_samples", config.oracle.nu_samples},
        {"rtol", to_json_number(config.oracle.rtol)},
        {"settle_time", to_json_number(config.oracle.settle_time)},
        {"demod_periods", config.oracle.demod_periods},
        {"mech_decay_override", optional_to_json(config.oracle.mech_decay_override)},
        {"dump_trajectory", config.oracle.dump_trajectory},
    };
    root["output"] = {
        {"jobs", config.output.jobs},
        {"svg", config.output.svg},
        {"dir", config.output.dir},
        {"tag", config.output.tag},
    };
    return root.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        config_error("--set expects key=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json root = json::parse(serialize_config(config));
    json* node = &root;
    std::size_t start = 0;
    std::vector<std::string> parts;
    while (true) {
        const auto dot = path.find('.', start);
        parts.push_back(path.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) {
            config_error("unknown config section '" + parts[i] + "'");
        }
        node = &node->at(parts[i]);
    }
    const std::string& leaf = parts.back();
    if (!node->contains(leaf)) {
        config_error("unknown config key '" + path + "'");
    }
    json& slot = node->at(leaf);
    if (slot.is_string()) {
        slot = value;
    } else if (slot.is_boolean()) {
        slot = (value == "true" || value == "1");
    } else if (slot.is_number_integer()) {
        slot = std::stoi(value);
    } else if (slot.is_array()) {
        // Comma-separated quantities.
        json arr = json::array();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) arr.push_back(parse_quantity(item));
        slot = arr;
    } else {
        slot = parse_quantity(value);
    }
    config = parse_config(root.dump());
}

} // namespace omit
