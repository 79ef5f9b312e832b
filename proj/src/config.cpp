#include "fluxgate/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fluxgate/errors.h"

namespace fluxgate {

using nlohmann::json;

namespace {

const std::vector<std::pair<Workflow, std::string>> workflow_names = {
    {Workflow::spectrum, "spectrum"},       {Workflow::zz_sweep, "zz-sweep"},
    {Workflow::cr_coefficient, "cr-coefficient"}, {Workflow::cr_gate, "cr-gate"},
    {Workflow::cphase_gate, "cphase-gate"}, {Workflow::leakage_scan, "leakage-scan"},
    {Workflow::yield, "yield"}};

struct Unit {
    std::string dimension;
    double scale;  // in the base unit of its dimension (GHz, ns, mK)
};

const std::map<std::string, Unit>& units()
{
    static const std::map<std::string, Unit> table = {
        {"Hz", {"frequency", 1e-9}}, {"kHz", {"frequency", 1e-6}}, {"MHz", {"frequency", 1e-3}},
        {"GHz", {"frequency", 1.0}},  {"ps", {"time", 1e-3}},      {"ns", {"time", 1.0}},
        {"us", {"time", 1e3}},        {"µs", {"time", 1e3}},  {"ms", {"time", 1e6}},
        {"mK", {"temperature", 1.0}}, {"K", {"temperature", 1e3}}};
    return table;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) throw ConfigError(join(path, item.key()), "unknown field");
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

long integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<long>();
}

std::string text(const json& v, const std::string& path)
{
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

FluxoniumParams named_set(const std::string& name, const std::string& path)
{
    if (name == "CR") return fluxonium_cr_set();
    if (name == "CPHASE") return fluxonium_cphase_set();
    throw ConfigError(path, "unknown parameter set '" + name + "' (expected CR or CPHASE)");
}

TransmonParams parse_transmon(const json& j, const std::string& path)
{
    allow_keys(j, path, {"omega", "delta", "levels"});
    TransmonParams t;
    if (j.contains("omega")) t.omega_ghz = parse_quantity(j["omega"], "GHz", join(path, "omega"));
    if (j.contains("delta")) t.delta_ghz = parse_quantity(j["delta"], "GHz", join(path, "delta"));
    if (j.contains("levels")) t.n_levels = static_cast<int>(integer(j["levels"], join(path, "levels")));
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    return t;
}

std::vector<double> number_list(const json& j, const std::string& path, const std::string& unit = "")
{
    if (!j.is_array()) throw ConfigError(path, "expected a list");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        out.push_back(unit.empty() ? number(j[i], p) : parse_quantity(j[i], unit, p));
    }
    return out;
}

int line_of(const std::string& s, std::size_t byte)
{
    return 1 + static_cast<int>(std::count(s.begin(), s.begin() + static_cast<long>(std::min(byte, s.size())), '\n'));
}

} // namespace

std::string to_string(Workflow w)
{
    for (const auto& [k, name] : workflow_names)
        if (k == w) return name;
    return "unknown";
}

Workflow workflow_from_string(const std::string& name)
{
    for (const auto& [k, n] : workflow_names)
        if (n == name) return k;
    throw ConfigError("workflow", "unknown workflow '" + name + "'");
}

std::vector<double> SweepConfig::values() const
{
    if (points == 1) return {start};
    std::vector<double> v(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
    return v;
}

double parse_quantity(const json& value, const std::string& default_unit, const std::string& path)
{
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) throw ConfigError(path, "expected a number or a quantity string");
    const std::string s = value.get<std::string>();
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && *begin == ' ') ++begin;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc()) throw ConfigError(path, "cannot read a number from '" + s + "'");
    std::string unit(ptr, end);
    unit.erase(0, unit.find_first_not_of(' '));
    unit.erase(unit.find_last_not_of(' ') + 1);
    if (unit.empty()) return x;
    const auto& table = units();
    const auto it = table.find(unit), want = table.find(default_unit);
    if (it == table.end()) throw ConfigError(path, "unknown unit '" + unit + "' in '" + s + "'");
    if (want == table.end() || it->second.dimension != want->second.dimension)
        throw ConfigError(path, "unit '" + unit + "' is not a " +
                                    (want == table.end() ? std::string("valid") : want->second.dimension) + " unit");
    return x * it->second.scale / want->second.scale;
}

RunConfig parse_config(const std::string& text_in)
{
    json root;
    try {
        root = json::parse(text_in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "syntax error at line " + std::to_string(line_of(text_in, e.byte)) + ": " + e.what());
    }
    allow_keys(root, "", {"workflow", "device", "pulse", "noise", "sweep", "yield", "output", "seed", "threads"});
    if (!root.contains("workflow")) throw ConfigError("workflow", "missing");

    RunConfig c;
    c.workflow = workflow_from_string(text(root["workflow"], "workflow"));
    c.fluxonium_set = c.workflow == Workflow::cphase_gate || c.workflow == Workflow::leakage_scan ? "CPHASE" : "CR";
    c.fluxonium = named_set(c.fluxonium_set, "device.fluxonium");
    bool transmon_given = false, coupling_given = false;

    if (root.contains("device")) {
        const json& d = root["device"];
        allow_keys(d, "device", {"fluxonium", "transmon", "coupling", "spectator", "spectator_coupling"});
        if (d.contains("fluxonium")) {
            const json& f = d["fluxonium"];
            if (f.is_string()) {
                c.fluxonium_set = f.get<std::string>();
                c.fluxonium = named_set(c.fluxonium_set, "device.fluxonium");
            } else {
                const std::string p = "device.fluxonium";
                allow_keys(f, p, {"set", "ec", "el", "ej", "phi_ext", "basis_dim", "levels"});
                c.fluxonium_set = "inline";
                if (f.contains("set")) c.fluxonium = named_set(text(f["set"], p + ".set"), p + ".set");
                if (f.contains("ec")) c.fluxonium.ec_ghz = parse_quantity(f["ec"], "GHz", p + ".ec");
                if (f.contains("el")) c.fluxonium.el_ghz = parse_quantity(f["el"], "GHz", p + ".el");
                if (f.contains("ej")) c.fluxonium.ej_ghz = parse_quantity(f["ej"], "GHz", p + ".ej");
                if (f.contains("phi_ext")) c.fluxonium.phi_ext = number(f["phi_ext"], p + ".phi_ext");
                if (f.contains("basis_dim"))
                    c.fluxonium.basis_dim = static_cast<int>(integer(f["basis_dim"], p + ".basis_dim"));
                if (f.contains("levels")) c.fluxonium.n_levels = static_cast<int>(integer(f["levels"], p + ".levels"));
            }
            try {
                c.fluxonium.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError("device.fluxonium", e.what());
            }
        }
        transmon_given = d.contains("transmon");
        coupling_given = d.contains("coupling");
        if (transmon_given) c.transmon = parse_transmon(d["transmon"], "device.transmon");
        if (coupling_given) c.jc_mhz = parse_quantity(d["coupling"], "MHz", "device.coupling");
        if (d.contains("spectator")) c.spectator = parse_transmon(d["spectator"], "device.spectator");
        if (d.contains("spectator_coupling"))
            c.jc_spectator_mhz = parse_quantity(d["spectator_coupling"], "MHz", "device.spectator_coupling");
    }

    // Companion transmon and coupling of the named sets.
    const bool cphase_like = c.fluxonium_set == "CPHASE";
    if (!transmon_given && cphase_like) c.transmon.omega_ghz = 4.37;
    if (!coupling_given) c.jc_mhz = cphase_like ? 30.0 : 20.0;

    if (root.contains("pulse")) {
        const json& p = root["pulse"];
        allow_keys(p, "pulse", {"eps_d", "t_rise", "scheme", "target_phi_over_pi", "refine_t_pulse"});
        if (p.contains("eps_d")) c.pulse.eps_d_mhz = parse_quantity(p["eps_d"], "MHz", "pulse.eps_d");
        if (p.contains("t_rise")) c.pulse.t_rise_ns = parse_quantity(p["t_rise"], "ns", "pulse.t_rise");
        if (p.contains("scheme")) {
            c.pulse.scheme = text(p["scheme"], "pulse.scheme");
            if (c.pulse.scheme != "echo" && c.pulse.scheme != "simple")
                throw ConfigError("pulse.scheme", "expected 'echo' or 'simple'");
        }
        if (p.contains("target_phi_over_pi")) {
            c.pulse.target_phi = number_list(p["target_phi_over_pi"], "pulse.target_phi_over_pi");
            for (double& x : c.pulse.target_phi) x *= pi;
        }
        if (p.contains("refine_t_pulse")) {
            if (!p["refine_t_pulse"].is_boolean()) throw ConfigError("pulse.refine_t_pulse", "expected true or false");
            c.pulse.refine_t_pulse = p["refine_t_pulse"].get<bool>();
        }
        if (!(c.pulse.t_rise_ns > 0.0)) throw ConfigError("pulse.t_rise", "must be positive");
    }

    if (root.contains("noise")) {
        const json& n = root["noise"];
        allow_keys(n, "noise", {"enabled", "transmon_tan_delta", "fluxonium_tan_delta", "tan_delta_exponent",
                                "reference_frequency", "temperature"});
        NoiseModel m;
        bool enabled = true;
        if (n.contains("enabled")) {
            if (!n["enabled"].is_boolean()) throw ConfigError("noise.enabled", "expected true or false");
            enabled = n["enabled"].get<bool>();
        }
        if (n.contains("transmon_tan_delta")) m.transmon_tan_delta = number(n["transmon_tan_delta"], "noise.transmon_tan_delta");
        if (n.contains("fluxonium_tan_delta"))
            m.fluxonium_tan_delta_ref = number(n["fluxonium_tan_delta"], "noise.fluxonium_tan_delta");
        if (n.contains("tan_delta_exponent"))
            m.fluxonium_tan_delta_exponent = number(n["tan_delta_exponent"], "noise.tan_delta_exponent");
        if (n.contains("reference_frequency"))
            m.omega_ref_ghz = parse_quantity(n["reference_frequency"], "GHz", "noise.reference_frequency");
        if (n.contains("temperature")) m.temperature_mk = parse_quantity(n["temperature"], "mK", "noise.temperature");
        try {
            m.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("noise", e.what());
        }
        if (enabled) c.noise = m;
    }

    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        allow_keys(s, "sweep", {"variable", "start", "stop", "points"});
        SweepConfig sw;
        if (s.contains("variable")) sw.variable = text(s["variable"], "sweep.variable");
        if (sw.variable != "omega_t" && sw.variable != "t_offset")
            throw ConfigError("sweep.variable", "expected 'omega_t' or 't_offset'");
        const std::string unit = sw.variable == "omega_t" ? "GHz" : "ns";
        if (!s.contains("start")) throw ConfigError("sweep.start", "missing");
        sw.start = parse_quantity(s["start"], unit, "sweep.start");
        sw.stop = s.contains("stop") ? parse_quantity(s["stop"], unit, "sweep.stop") : sw.start;
        if (s.contains("points")) sw.points = static_cast<int>(integer(s["points"], "sweep.points"));
        if (sw.points < 1) throw ConfigError("sweep.points", "must be at least 1");
        c.sweep = sw;
    }

    if (root.contains("yield")) {
        const json& y = root["yield"];
        allow_keys(y, "yield", {"distances", "sigma_r_over_r", "eps_d", "samples", "basis_dim"});
        if (y.contains("distances")) {
            c.yield.distances.clear();
            for (double d : number_list(y["distances"], "yield.distances")) c.yield.distances.push_back(static_cast<int>(d));
        }
        if (y.contains("sigma_r_over_r")) c.yield.sigma_grid = number_list(y["sigma_r_over_r"], "yield.sigma_r_over_r");
        if (y.contains("eps_d")) c.yield.eps_d_mhz = number_list(y["eps_d"], "yield.eps_d", "MHz");
        if (y.contains("samples")) c.yield.samples = static_cast<int>(integer(y["samples"], "yield.samples"));
        if (y.contains("basis_dim")) c.yield.basis_dim = static_cast<int>(integer(y["basis_dim"], "yield.basis_dim"));
        if (c.yield.samples < 1) throw ConfigError("yield.samples", "must be positive");
        for (int d : c.yield.distances)
            if (d < 3 || d % 2 == 0) throw ConfigError("yield.distances", "distances must be odd and >= 3");
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        allow_keys(o, "output", {"path", "format"});
        if (o.contains("path")) c.output_path = text(o["path"], "output.path");
        if (o.contains("format")) {
            const std::string f = text(o["format"], "output.format");
            if (f == "csv")
                c.format = OutputFormat::csv;
            else if (f == "json")
                c.format = OutputFormat::json;
            else
                throw ConfigError("output.format", "expected 'csv' or 'json'");
        }
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        c.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("threads")) {
        const long t = integer(root["threads"], "threads");
        if (t < 1) throw ConfigError("threads", "must be positive");
        c.threads = static_cast<unsigned>(t);
    }

    const bool needs_sweep = c.workflow == Workflow::zz_sweep || c.workflow == Workflow::cr_coefficient;
    if (needs_sweep && !c.sweep) throw ConfigError("sweep", "required by workflow " + to_string(c.workflow));
    if (c.sweep && c.workflow == Workflow::leakage_scan && c.sweep->variable != "t_offset")
        throw ConfigError("sweep.variable", "leakage-scan sweeps t_offset");
    if (c.sweep && c.workflow != Workflow::leakage_scan && c.sweep->variable != "omega_t")
        throw ConfigError("sweep.variable", to_string(c.workflow) + " sweeps omega_t");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json RunConfig::resolved() const
{
    auto transmon_json = [](const TransmonParams& t) {
        return json{{"omega_ghz", t.omega_ghz}, {"delta_ghz", t.delta_ghz}, {"levels", t.n_levels}};
    };
    json j;
    j["workflow"] = to_string(workflow);
    j["device"]["fluxonium"] = {{"set", fluxonium_set},       {"ec_ghz", fluxonium.ec_ghz},
                                {"el_ghz", fluxonium.el_ghz}, {"ej_ghz", fluxonium.ej_ghz},
                                {"phi_ext", fluxonium.phi_ext}, {"basis_dim", fluxonium.basis_dim},
                                {"levels", fluxonium.n_levels}};
    j["device"]["transmon"] = transmon_json(transmon);
    j["device"]["coupling_mhz"] = jc_mhz;
    if (spectator) {
        j["device"]["spectator"] = transmon_json(*spectator);
        j["device"]["spectator_coupling_mhz"] = jc_spectator_mhz;
    }
    std::vector<double> phi_over_pi;
    for (double p : pulse.target_phi) phi_over_pi.push_back(p / pi);
    j["pulse"] = {{"eps_d_mhz", pulse.eps_d_mhz}, {"t_rise_ns", pulse.t_rise_ns}, {"scheme", pulse.scheme},
                  {"target_phi_over_pi", phi_over_pi}, {"refine_t_pulse", pulse.refine_t_pulse}};
    if (noise)
        j["noise"] = {{"transmon_tan_delta", noise->transmon_tan_delta},
                      {"fluxonium_tan_delta", noise->fluxonium_tan_delta_ref},
                      {"tan_delta_exponent", noise->fluxonium_tan_delta_exponent},
                      {"reference_frequency_ghz", noise->omega_ref_ghz},
                      {"temperature_mk", noise->temperature_mk}};
    else
        j["noise"] = {{"enabled", false}};
    if (sweep)
        j["sweep"] = {{"variable", sweep->variable}, {"start", sweep->start}, {"stop", sweep->stop}, {"points", sweep->points}};
    if (workflow == Workflow::yield)
        j["yield"] = {{"distances", yield.distances}, {"sigma_r_over_r", yield.sigma_grid},
                      {"eps_d_mhz", yield.eps_d_mhz}, {"samples", yield.samples}, {"basis_dim", yield.basis_dim}};
    j["output"] = {{"path", output_path}, {"format", format == OutputFormat::csv ? "csv" : "json"}};
    j["seed"] = seed;
    return j;
}

} // namespace fluxgate
