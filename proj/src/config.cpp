#include "stml/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stml/cube.hpp"
#include "stml/error.hpp"
#include "stml/io.hpp"
#include "stml/units.hpp"

namespace stml {

using nlohmann::json;

ElectrodeModel ElectrodeConfig::model() const {
    return ElectrodeModel::from_ev_nm(fermi_energy_ev, tip_radius_nm, tip_height_nm, substrate_z_nm, dos_tip,
                                      dos_substrate);
}

DomainOptions GridConfig::options() const {
    DomainOptions o;
    o.spacing = units::nm_to_bohr(spacing_nm);
    o.lateral_half_extent = units::nm_to_bohr(half_extent_nm);
    o.coarsen = coarsen;
    return o;
}

std::vector<double> SweepConfig::biases() const {
    if (biases_v) return *biases_v;
    return bias_range(start_v, stop_v, step_v);
}

kinetics::RateModel KineticsConfig::rates(double pump_rate) const {
    kinetics::RateModel m;
    m.pump_rate_ies = pump_rate;
    m.laser_pump = laser_pump_per_s;
    m.gamma0 = gamma0_per_s;
    m.gamma3 = gamma3_per_s.value_or(gamma0_per_s);
    return m;
}

RunConfig RunConfig::defaults() {
    RunConfig c;
    ChannelConfig ch;
    ch.gaussian = GaussianConfig{};
    c.channels.push_back(ch);
    return c;
}

namespace {

// Strict view of one JSON object: every key must be consumed.
class Section {
public:
    Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json* take(const char* key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void read(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(key, "a number");
            out = v->get<double>();
            if (!std::isfinite(out)) fail(key, "a finite number");
        }
    }
    void read(const char* key, int& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) fail(key, "an integer");
            out = v->get<int>();
        }
    }
    void read(const char* key, std::size_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "a non-negative integer");
            out = v->get<std::size_t>();
        }
    }
    void read(const char* key, unsigned& out) {
        std::size_t n = out;
        read(key, n);
        out = static_cast<unsigned>(n);
    }
    void read(const char* key, bool& out) {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) fail(key, "true or false");
            out = v->get<bool>();
        }
    }
    void read(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (!v->is_string()) fail(key, "a string");
            out = v->get<std::string>();
        }
    }
    void read(const char* key, std::optional<double>& out) {
        if (has(key)) {
            double d = 0.0;
            read(key, d);
            out = d;
        }
    }
    void read(const char* key, std::optional<std::vector<double>>& out) {
        if (const json* v = take(key)) {
            if (!v->is_array()) fail(key, "an array of numbers");
            std::vector<double> xs;
            for (const auto& e : *v) {
                if (!e.is_number()) fail(key, "an array of numbers");
                xs.push_back(e.get<double>());
            }
            out = std::move(xs);
        }
    }

    Section sub(const char* key) {
        const json* v = take(key);
        static const json empty = json::object();
        return Section(v ? *v : empty, where_ + "." + key);
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
    }

    const std::string& where() const { return where_; }

    [[noreturn]] void fail(const char* key, const char* expected) const {
        throw ConfigError(where_ + "." + key + ": expected " + expected);
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base, const std::string& what) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    path = std::filesystem::absolute(path).lexically_normal();
    if (!std::filesystem::is_regular_file(path)) throw ConfigError(what + ": file not found: " + path.string());
    return path;
}

Normalization parse_normalization(const std::string& s, const std::string& where) {
    if (s == "linear") return Normalization::Linear;
    if (s == "log10") return Normalization::Log10;
    throw ConfigError(where + ".normalization: expected \"linear\" or \"log10\", got \"" + s + "\"");
}

const char* normalization_name(Normalization n) { return n == Normalization::Log10 ? "log10" : "linear"; }

ChannelConfig parse_channel(const json& j, const std::string& where, const std::filesystem::path& base) {
    Section s(j, where);
    ChannelConfig c;
    s.read("label", c.label);
    s.read("e_eg_ev", c.e_eg_ev);
    s.read("rotate_quarter_turns", c.rotate_quarter_turns);
    const bool g = s.has("gaussian"), k = s.has("cube");
    require(g != k, where + ": exactly one of \"gaussian\" or \"cube\" is required");
    if (g) {
        Section gs = s.sub("gaussian");
        GaussianConfig gc;
        gs.read("sigma_nm", gc.sigma_nm);
        gs.read("sigma1_nm", gc.sigma1_nm);
        gs.read("sigma2_nm", gc.sigma2_nm);
        gs.finish();
        GaussianDensityParams::from_nm(gc.sigma_nm, gc.sigma1_nm, gc.sigma2_nm).validate();
        c.gaussian = gc;
    } else {
        std::string path;
        s.read("cube", path);
        c.cube = resolve(path, base, where + ".cube");
    }
    s.finish();
    require(c.e_eg_ev > 0.0, where + ".e_eg_ev must be positive");
    c.rotate_quarter_turns = ((c.rotate_quarter_turns % 4) + 4) % 4;
    return c;
}

void validate(const RunConfig& c) {
    c.electrodes.model().validate();
    require(!c.channels.empty(), "channels: at least one channel is required");
    require(c.n_energy >= 2, "quadrature.n_energy must be >= 2");
    require(c.grid.spacing_nm > 0.0, "grid.spacing_nm must be positive");
    require(c.grid.half_extent_nm > 0.0, "grid.half_extent_nm must be positive");
    require(c.grid.coarsen >= 1, "grid.coarsen must be >= 1");
    const auto& s = c.scan;
    require(s.x_min_nm < s.x_max_nm && s.y_min_nm < s.y_max_nm, "scan: min must be below max on both axes");
    require(s.nx >= 2 && s.ny >= 2, "scan: nx and ny must be >= 2");
    require(s.log10_floor < 0.0, "scan.log10_floor must be negative");
    if (!c.sweep.biases_v) {
        require(c.sweep.step_v > 0.0, "sweep.step_v must be positive");
        require(c.sweep.stop_v >= c.sweep.start_v, "sweep.stop_v must not be below start_v");
    }
    require(c.neutrality_tolerance > 0.0, "neutrality_tolerance must be positive");
    const auto& k = c.kinetics;
    k.rates(k.pump_rate_ies_per_s).validate();
    require(k.dt_s > 0.0, "kinetics.dt_s must be positive");
    require(k.t_final_s >= 0.0, "kinetics.t_final_s must be non-negative");
    require(k.stride >= 1, "kinetics.stride must be >= 1");
    if (k.pump_from_map) require(k.pump_from_map->rate_per_unit_current >= 0.0,
                                 "kinetics.pump_from_map.rate_per_unit_current must be non-negative");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Report the line of the offending byte.
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n')) + 1;
        throw ParseError(std::string("malformed JSON: ") + e.what(), line);
    }

    Section s(root, "config");
    std::string schema;
    s.read("schema", schema);
    require(schema == config_schema, std::string("config.schema must be \"") + config_schema + "\"");

    RunConfig c;
    {
        Section e = s.sub("electrodes");
        e.read("fermi_energy_ev", c.electrodes.fermi_energy_ev);
        e.read("tip_radius_nm", c.electrodes.tip_radius_nm);
        e.read("tip_height_nm", c.electrodes.tip_height_nm);
        e.read("substrate_z_nm", c.electrodes.substrate_z_nm);
        e.read("dos_tip", c.electrodes.dos_tip);
        e.read("dos_substrate", c.electrodes.dos_substrate);
        e.finish();
    }
    if (const json* ch = s.take("channels")) {
        require(ch->is_array(), "config.channels: expected an array");
        for (std::size_t i = 0; i < ch->size(); ++i)
            c.channels.push_back(parse_channel((*ch)[i], "config.channels[" + std::to_string(i) + "]", base_dir));
    } else {
        c.channels = RunConfig::defaults().channels;
    }
    s.read("bias_v", c.bias_v);
    {
        Section g = s.sub("grid");
        g.read("spacing_nm", c.grid.spacing_nm);
        g.read("half_extent_nm", c.grid.half_extent_nm);
        g.read("coarsen", c.grid.coarsen);
        g.finish();
    }
    {
        Section sc = s.sub("scan");
        sc.read("x_min_nm", c.scan.x_min_nm);
        sc.read("x_max_nm", c.scan.x_max_nm);
        sc.read("y_min_nm", c.scan.y_min_nm);
        sc.read("y_max_nm", c.scan.y_max_nm);
        sc.read("nx", c.scan.nx);
        sc.read("ny", c.scan.ny);
        std::string norm = normalization_name(c.scan.normalization);
        sc.read("normalization", norm);
        c.scan.normalization = parse_normalization(norm, sc.where());
        sc.read("log10_floor", c.scan.log10_floor);
        sc.finish();
    }
    {
        Section sw = s.sub("sweep");
        const bool range = sw.has("start_v") || sw.has("stop_v") || sw.has("step_v");
        sw.read("start_v", c.sweep.start_v);
        sw.read("stop_v", c.sweep.stop_v);
        sw.read("step_v", c.sweep.step_v);
        sw.read("biases_v", c.sweep.biases_v);
        require(!(range && c.sweep.biases_v), "config.sweep: give either biases_v or start_v/stop_v/step_v");
        sw.read("tip_x_nm", c.sweep.tip_x_nm);
        sw.read("tip_y_nm", c.sweep.tip_y_nm);
        sw.finish();
    }
    {
        Section q = s.sub("quadrature");
        q.read("n_energy", c.n_energy);
        q.finish();
    }
    {
        Section k = s.sub("kinetics");
        auto& kc = c.kinetics;
        const bool literal = k.has("pump_rate_ies_per_s");
        k.read("pump_rate_ies_per_s", kc.pump_rate_ies_per_s);
        if (k.has("pump_from_map")) {
            require(!literal, "config.kinetics: give either pump_rate_ies_per_s or pump_from_map");
            Section m = k.sub("pump_from_map");
            PumpFromMap p;
            std::string csv;
            m.read("csv", csv);
            require(!csv.empty(), "config.kinetics.pump_from_map.csv is required");
            p.csv = resolve(csv, base_dir, "config.kinetics.pump_from_map.csv");
            m.read("x_nm", p.x_nm);
            m.read("y_nm", p.y_nm);
            m.read("rate_per_unit_current", p.rate_per_unit_current);
            m.finish();
            kc.pump_from_map = p;
        }
        k.read("laser_pump_per_s", kc.laser_pump_per_s);
        k.read("gamma0_per_s", kc.gamma0_per_s);
        k.read("gamma3_per_s", kc.gamma3_per_s);
        k.read("t_final_s", kc.t_final_s);
        k.read("dt_s", kc.dt_s);
        k.read("trajectory", kc.trajectory);
        k.read("stride", kc.stride);
        k.finish();
    }
    s.read("neutrality_tolerance", c.neutrality_tolerance);
    s.read("threads", c.threads);
    s.finish();

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), std::filesystem::absolute(path).parent_path());
    } catch (const ParseError& e) {
        throw e.with_context(path.string() + ": ");
    }
}

std::string effective_config_json(const RunConfig& c) {
    json j;
    j["schema"] = config_schema;
    const auto& e = c.electrodes;
    j["electrodes"] = {{"fermi_energy_ev", e.fermi_energy_ev}, {"tip_radius_nm", e.tip_radius_nm},
                       {"tip_height_nm", e.tip_height_nm},     {"substrate_z_nm", e.substrate_z_nm},
                       {"dos_tip", e.dos_tip},                 {"dos_substrate", e.dos_substrate}};
    json channels = json::array();
    for (const auto& ch : c.channels) {
        json cj = {{"label", ch.label}, {"e_eg_ev", ch.e_eg_ev}, {"rotate_quarter_turns", ch.rotate_quarter_turns}};
        if (ch.gaussian)
            cj["gaussian"] = {{"sigma_nm", ch.gaussian->sigma_nm},
                              {"sigma1_nm", ch.gaussian->sigma1_nm},
                              {"sigma2_nm", ch.gaussian->sigma2_nm}};
        else
            cj["cube"] = ch.cube.string();
        channels.push_back(cj);
    }
    j["channels"] = channels;
    j["bias_v"] = c.bias_v;
    j["grid"] = {{"spacing_nm", c.grid.spacing_nm},
                 {"half_extent_nm", c.grid.half_extent_nm},
                 {"coarsen", c.grid.coarsen}};
    j["scan"] = {{"x_min_nm", c.scan.x_min_nm}, {"x_max_nm", c.scan.x_max_nm},
                 {"y_min_nm", c.scan.y_min_nm}, {"y_max_nm", c.scan.y_max_nm},
                 {"nx", c.scan.nx},             {"ny", c.scan.ny},
                 {"normalization", normalization_name(c.scan.normalization)},
                 {"log10_floor", c.scan.log10_floor}};
    json sweep = {{"tip_x_nm", c.sweep.tip_x_nm}, {"tip_y_nm", c.sweep.tip_y_nm}};
    if (c.sweep.biases_v) {
        sweep["biases_v"] = *c.sweep.biases_v;
    } else {
        sweep["start_v"] = c.sweep.start_v;
        sweep["stop_v"] = c.sweep.stop_v;
        sweep["step_v"] = c.sweep.step_v;
    }
    j["sweep"] = sweep;
    j["quadrature"] = {{"n_energy", c.n_energy}};
    const auto& k = c.kinetics;
    json kj = {{"laser_pump_per_s", k.laser_pump_per_s},
               {"gamma0_per_s", k.gamma0_per_s},
               {"gamma3_per_s", k.gamma3_per_s.value_or(k.gamma0_per_s)},
               {"t_final_s", k.t_final_s},
               {"dt_s", k.dt_s},
               {"trajectory", k.trajectory},
               {"stride", k.stride}};
    if (k.pump_from_map)
        kj["pump_from_map"] = {{"csv", k.pump_from_map->csv.string()},
                               {"x_nm", k.pump_from_map->x_nm},
                               {"y_nm", k.pump_from_map->y_nm},
                               {"rate_per_unit_current", k.pump_from_map->rate_per_unit_current}};
    else
        kj["pump_rate_ies_per_s"] = k.pump_rate_ies_per_s;
    j["kinetics"] = kj;
    j["neutrality_tolerance"] = c.neutrality_tolerance;
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) { return fnv1a_hex(effective_config_json(config)); }

std::vector<TransitionDensity> build_densities(const RunConfig& config) {
    std::vector<TransitionDensity> out;
    for (const auto& ch : config.channels) {
        const double gap = units::ev_to_hartree(ch.e_eg_ev);
        if (ch.gaussian && ch.rotate_quarter_turns == 0) {
            const auto p = GaussianDensityParams::from_nm(ch.gaussian->sigma_nm, ch.gaussian->sigma1_nm,
                                                          ch.gaussian->sigma2_nm);
            out.push_back(TransitionDensity::gaussian(p, gap, ch.label));
            continue;
        }
        ScalarGrid3D grid = [&] {
            if (!ch.gaussian) return read_cube(ch.cube);
            // A rotated model density is no longer separable in x; sample it on
            // the simulation lattice and carry it as a grid.
            const auto p = GaussianDensityParams::from_nm(ch.gaussian->sigma_nm, ch.gaussian->sigma1_nm,
                                                          ch.gaussian->sigma2_nm);
            const auto analytic = TransitionDensity::gaussian(p, gap, ch.label);
            GridSpec spec = channel_domain(analytic, config.electrodes.model(), config.grid.options());
            spec.origin.z = -spec.spacing.z;
            spec.dims[2] = 3;
            return rasterize(analytic, spec);
        }();
        for (int t = 0; t < ch.rotate_quarter_turns; ++t) grid = rotate_quarter_turn(grid);
        out.push_back(TransitionDensity::gridded(std::move(grid), gap, ch.label, config.neutrality_tolerance));
    }
    return out;
}

}  // namespace stml
