#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stml/current.hpp"
#include "stml/electrodes.hpp"
#include "stml/kinetics.hpp"
#include "stml/scan.hpp"

namespace stml {

inline constexpr const char* config_schema = "stml-run/1";

/// Everything below is in interface units (eV, nm, V, 1/s).

struct ElectrodeConfig {
    double fermi_energy_ev = -4.64;
    double tip_radius_nm = 0.5;
    double tip_height_nm = 1.0;
    double substrate_z_nm = -0.3;
    double dos_tip = 1.0;
    double dos_substrate = 1.0;

    ElectrodeModel model() const;
};

struct GaussianConfig {
    double sigma_nm = 1.0;
    double sigma1_nm = 0.5;
    double sigma2_nm = 1.0;
};

/// Exactly one of `gaussian` / `cube` is set after loading.
struct ChannelConfig {
    std::string label = "dark";
    double e_eg_ev = 2.0;
    std::optional<GaussianConfig> gaussian;
    std::filesystem::path cube;  // absolute after loading
    int rotate_quarter_turns = 0;
};

struct GridConfig {
    double spacing_nm = 0.1;
    double half_extent_nm = 4.5;
    std::size_t coarsen = 1;

    DomainOptions options() const;
};

struct ScanConfig {
    double x_min_nm = -1.5, x_max_nm = 1.5;
    double y_min_nm = -1.5, y_max_nm = 1.5;
    std::size_t nx = 41, ny = 41;
    Normalization normalization = Normalization::Linear;
    double log10_floor = default_log10_floor;
};

struct SweepConfig {
    double start_v = -3.0, stop_v = 3.0, step_v = 0.1;
    /// Explicit list; overrides start/stop/step when present.
    std::optional<std::vector<double>> biases_v;
    double tip_x_nm = 0.0, tip_y_nm = 0.0;

    std::vector<double> biases() const;
};

/// Takes the IES pump rate from a pixel of a previously written raw map:
/// I/e = rate_per_unit_current * map(x, y).
struct PumpFromMap {
    std::filesystem::path csv;
    double x_nm = 0.0, y_nm = 0.0;
    double rate_per_unit_current = 1.0;
};

struct KineticsConfig {
    double pump_rate_ies_per_s = 0.0;
    std::optional<PumpFromMap> pump_from_map;
    double laser_pump_per_s = 1e8;
    double gamma0_per_s = 4e4;
    std::optional<double> gamma3_per_s;  // defaults to gamma0
    double t_final_s = 1e-4;
    double dt_s = 1e-9;
    bool trajectory = false;
    std::size_t stride = 1000;

    kinetics::RateModel rates(double pump_rate) const;
};

struct RunConfig {
    ElectrodeConfig electrodes;
    std::vector<ChannelConfig> channels;
    double bias_v = -2.5;
    GridConfig grid;
    ScanConfig scan;
    SweepConfig sweep;
    int n_energy = default_energy_nodes;
    KineticsConfig kinetics;
    double neutrality_tolerance = default_neutrality_tolerance;
    unsigned threads = 0;  // 0 = decide at run time

    /// Defaults throughout, one Gaussian channel with E_eg = 2 eV.
    static RunConfig defaults();
};

/// Parses JSON text. Relative cube/map paths resolve against `base_dir`.
/// Throws ParseError for malformed JSON and ConfigError for schema violations
/// (unknown keys, wrong types, invalid values, missing files).
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the effective configuration (defaults filled in, absolute
/// paths, no thread count). Feeding it back to parse_config reproduces `config`.
std::string effective_config_json(const RunConfig& config);

/// FNV-1a of the effective configuration.
std::string config_hash(const RunConfig& config);

/// Loads every channel density (cube files, rotations) in config order.
std::vector<TransitionDensity> build_densities(const RunConfig& config);

}  // namespace stml
