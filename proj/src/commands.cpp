#include "stml/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "stml/cube.hpp"
#include "stml/io.hpp"
#include "stml/units.hpp"

namespace stml::cli {

namespace {

using FileSet = std::vector<std::pair<std::string, std::string>>;

// Writes every file under a temporary name first and renames only when all
// writes succeeded, so a failed run leaves no partial outputs behind.
void commit(const std::filesystem::path& dir, const FileSet& files) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<fs::path> staged;
    auto discard = [&] {
        for (const auto& p : staged) fs::remove(p, ec);
    };
    for (const auto& [name, content] : files) {
        const fs::path tmp = dir / (name + ".partial");
        std::ofstream out(tmp, std::ios::binary);
        staged.push_back(tmp);
        out << content;
        out.close();
        if (!out) {
            discard();
            throw IoError("cannot write " + tmp.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        fs::rename(staged[i], dir / files[i].first, ec);
        if (ec) {
            discard();
            throw IoError("cannot move " + staged[i].string() + " into place: " + ec.message());
        }
    }
}

std::string kv(const std::string& key, double v) { return key + " = " + format_value(v) + "\n"; }

std::vector<TransitionChannel> build_channels(const RunConfig& config, Diagnostics& diag) {
    const auto model = config.electrodes.model();
    std::vector<TransitionChannel> channels;
    for (const auto& d : build_densities(config)) channels.emplace_back(d, model, config.grid.options(), &diag);
    return channels;
}

double min_gap_ev(const RunConfig& config) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : config.channels) m = std::min(m, c.e_eg_ev);
    return m;
}

void flush_warnings(const Diagnostics& diag, std::ostream& report) {
    for (const auto& d : diag.entries()) report << "warning [" << d.source << "]: " << d.message << "\n";
}

std::string nm(double bohr) { return format_value(units::bohr_to_nm(bohr)); }

}  // namespace

unsigned effective_threads(const RunOptions& options, const RunConfig& config) {
    if (options.threads) return *options.threads;
    if (const char* env = std::getenv("STML_THREADS"); env && *env) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (*end != '\0' || n < 0) throw UsageError(std::string("STML_THREADS must be a non-negative integer, got '") +
                                                    env + "'");
        return static_cast<unsigned>(n);
    }
    return config.threads;
}

void cmd_density_info(const RunConfig& config, const RunOptions& options, std::ostream& report) {
    const OutputHeader header{config_hash(config)};
    std::ostringstream text;
    text << header.line() << "\n";
    const auto densities = build_densities(config);
    for (std::size_t i = 0; i < densities.size(); ++i) {
        const auto& d = densities[i];
        const Vec3 mu = transition_dipole(d);
        text << "[channel " << i << "]\n";
        text << "label = " << d.label() << "\n";
        text << "form = " << (d.is_analytic() ? "gaussian" : "grid") << "\n";
        text << kv("e_eg_ev", units::hartree_to_ev(d.energy_gap()));
        text << kv("total_charge_e", total_charge(d));
        text << "dipole_au = " << format_value(mu.x) << " " << format_value(mu.y) << " " << format_value(mu.z) << "\n";
        text << "dipole_e_nm = " << nm(mu.x) << " " << nm(mu.y) << " " << nm(mu.z) << "\n";
        if (const auto* p = d.gaussian_params()) {
            text << "sigma_nm = " << nm(p->sigma) << "\nsigma1_nm = " << nm(p->sigma1) << "\nsigma2_nm = "
                 << nm(p->sigma2) << "\n";
        } else {
            const auto& g = *d.grid();
            const auto& s = g.spec();
            text << "dims = " << s.dims[0] << " " << s.dims[1] << " " << s.dims[2] << "\n";
            text << "spacing_nm = " << nm(s.spacing.x) << " " << nm(s.spacing.y) << " " << nm(s.spacing.z) << "\n";
            text << "origin_nm = " << nm(s.origin.x) << " " << nm(s.origin.y) << " " << nm(s.origin.z) << "\n";
            const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
            text << kv("min_value_au", *lo) << kv("max_value_au", *hi);
            text << "neutral = " << (is_neutral(g, config.neutrality_tolerance) ? "yes" : "no") << "\n";
        }
    }
    commit(options.out_dir, {{"density_info.txt", text.str()}, {"effective_config.json", effective_config_json(config)}});
    report << text.str();
}

void cmd_map(const RunConfig& config, const RunOptions& options, std::ostream& report) {
    const double gap = min_gap_ev(config);
    if (std::abs(config.bias_v) <= gap)
        throw BelowThresholdError("bias " + format_value(config.bias_v) + " V is within the minimal E_eg/e = " +
                                  format_value(gap) + " V; the inelastic current vanishes everywhere");

    Diagnostics diag;
    const auto channels = build_channels(config, diag);
    const auto& s = config.scan;
    const auto x = uniform_axis(units::nm_to_bohr(s.x_min_nm), units::nm_to_bohr(s.x_max_nm), s.nx);
    const auto y = uniform_axis(units::nm_to_bohr(s.y_min_nm), units::nm_to_bohr(s.y_max_nm), s.ny);
    const CurrentMap2D raw = scan_map(channels, config.electrodes.model(), Bias{config.bias_v}, x, y, config.n_energy,
                                      effective_threads(options, config));
    if (std::none_of(raw.values.begin(), raw.values.end(), [](double v) { return v > 0.0; }))
        throw BelowThresholdError("map is identically zero (minimal E_eg/e = " + format_value(gap) + " V)");

    const Normalization mode = options.log10 ? Normalization::Log10 : s.normalization;
    const CurrentMap2D norm = normalize_map(raw, mode, s.log10_floor);

    const OutputHeader header{config_hash(config)};
    std::ostringstream raw_csv, norm_csv, pgm;
    write_map_csv(raw_csv, raw, header);
    write_map_csv(norm_csv, norm, header);
    write_pgm(pgm, norm);
    commit(options.out_dir, {{"map_raw.csv", raw_csv.str()},
                             {"map_normalized.csv", norm_csv.str()},
                             {"map.pgm", pgm.str()},
                             {"effective_config.json", effective_config_json(config)}});

    const auto peak = std::max_element(raw.values.begin(), raw.values.end()) - raw.values.begin();
    flush_warnings(diag, report);
    report << "map " << raw.nx() << "x" << raw.ny() << " at " << format_value(config.bias_v) << " V\n"
           << kv("peak_current", raw.values[peak]) << "peak_at_nm = " << nm(raw.x[peak % raw.nx()]) << " "
           << nm(raw.y[peak / raw.nx()]) << "\n";
}

void cmd_bias_sweep(const RunConfig& config, const RunOptions& options, std::ostream& report) {
    const auto biases = config.sweep.biases();
    if (biases.empty()) throw UsageError("bias sweep has no bias values");

    Diagnostics diag;
    const auto channels = build_channels(config, diag);
    const auto model = config.electrodes.model();
    const Vec2 tip{units::nm_to_bohr(config.sweep.tip_x_nm), units::nm_to_bohr(config.sweep.tip_y_nm)};
    const unsigned threads = effective_threads(options, config);
    const BiasCurve curve = bias_sweep(channels, model, biases, tip, config.n_energy, threads);

    // Asymmetry at +/- |bias_v|.
    const double vb = std::abs(config.bias_v);
    const double pair[2] = {-vb, vb};
    const BiasCurve asym = bias_sweep(channels, model, pair, tip, config.n_energy, threads);

    const OutputHeader header{config_hash(config)};
    std::ostringstream csv, summary;
    write_curve_csv(csv, curve, header);
    summary << header.line() << "\n";
    summary << kv("threshold_v", min_gap_ev(config));
    summary << kv("peak_current", *std::max_element(curve.current.begin(), curve.current.end()));
    summary << kv("asymmetry_bias_v", vb) << kv("current_negative", asym.current[0])
            << kv("current_positive", asym.current[1]);
    if (asym.current[1] > 0.0) {
        summary << kv("asymmetry_ratio", asym.current[0] / asym.current[1]);
        summary << "negative_bias_larger = " << (asym.current[0] > asym.current[1] ? "true" : "false") << "\n";
    } else {
        summary << "asymmetry_ratio = undefined\n";
    }
    commit(options.out_dir, {{"bias_sweep.csv", csv.str()},
                             {"bias_sweep_summary.txt", summary.str()},
                             {"effective_config.json", effective_config_json(config)}});
    flush_warnings(diag, report);
    report << summary.str();
}

void cmd_kinetics(const RunConfig& config, const RunOptions& options, std::ostream& report) {
    const auto& k = config.kinetics;
    double pump = k.pump_rate_ies_per_s;
    if (k.pump_from_map) {
        const auto& src = *k.pump_from_map;
        std::ifstream in(src.csv);
        if (!in) throw IoError("cannot open map " + src.csv.string());
        CurrentMap2D map;
        try {
            map = read_map_csv(in);
        } catch (const ParseError& e) {
            throw e.with_context(src.csv.string() + ": ");
        }
        auto nearest = [](const std::vector<double>& axis, double v, const char* name) {
            const auto it = std::min_element(axis.begin(), axis.end(),
                                             [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
            const double tol = axis.size() > 1 ? 1e-6 * std::abs(axis[1] - axis[0]) : 1e-9;
            if (std::abs(*it - v) > tol)
                throw ConfigError(std::string("kinetics.pump_from_map.") + name + "_nm = " +
                                  format_value(units::bohr_to_nm(v)) + " is not a map pixel coordinate");
            return static_cast<std::size_t>(it - axis.begin());
        };
        const auto ix = nearest(map.x, units::nm_to_bohr(src.x_nm), "x");
        const auto iy = nearest(map.y, units::nm_to_bohr(src.y_nm), "y");
        pump = src.rate_per_unit_current * map.at(ix, iy);
    }
    const auto rates = k.rates(pump);
    const auto ss = kinetics::steady_state(rates);
    const double gamma = kinetics::photon_emission_rate(rates);

    const OutputHeader header{config_hash(config)};
    std::ostringstream text;
    text << header.line() << "\n"
         << kv("gamma_emission_per_s", gamma) << kv("p0", ss.p0) << kv("p3", ss.p3) << kv("p17", ss.p17)
         << kv("pump_rate_ies_per_s", pump) << kv("gamma_closed_form_per_s", kinetics::photon_emission_rate_closed_form(rates));
    FileSet files{{"kinetics.txt", text.str()}};
    if (k.trajectory) {
        const auto traj = kinetics::evolve(rates, kinetics::Populations{}, k.t_final_s, k.dt_s, k.stride);
        std::ostringstream csv;
        write_trajectory_csv(csv, traj, header);
        files.push_back({"trajectory.csv", csv.str()});
    }
    files.push_back({"effective_config.json", effective_config_json(config)});
    commit(options.out_dir, files);
    report << text.str();
}

int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& report, std::ostream& err) {
    try {
        const RunConfig config = config_path.empty() ? RunConfig::defaults() : load_config(config_path);
        if (command == "density-info") cmd_density_info(config, options, report);
        else if (command == "map") cmd_map(config, options, report);
        else if (command == "bias-sweep") cmd_bias_sweep(config, options, report);
        else if (command == "kinetics") cmd_kinetics(config, options, report);
        else throw UsageError("unknown command '" + command + "'");
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const BelowThresholdError& e) {
        err << "below threshold: " << e.what() << "\n";
        return exit_below_threshold;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

}  // namespace stml::cli
