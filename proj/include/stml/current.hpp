#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stml/coupling.hpp"
#include "stml/density.hpp"
#include "stml/electrodes.hpp"
#include "stml/units.hpp"

namespace stml {

inline constexpr int default_energy_nodes = 17;

/// How the simulation lattice around a transition density is laid out.
struct DomainOptions {
    /// Lattice step for analytic densities (Bohr); gridded densities keep their own.
    double spacing = units::nm_to_bohr(0.1);
    /// The lattice spans at least [-L, L] in x and y (Bohr).
    double lateral_half_extent = units::nm_to_bohr(4.5);
    /// Block-average gridded densities by this factor before use.
    std::size_t coarsen = 1;
};

/// Lattice that holds the density and spans the electrode gap [z_s, d + R].
/// Analytic densities get a lattice symmetric about x = y = 0 with a node
/// plane at z = 0; gridded densities keep their lattice, extended with zeros.
GridSpec channel_domain(const TransitionDensity& density, const ElectrodeModel& model, const DomainOptions& options);

/// One molecular transition ready for current evaluation. Holds the cached
/// transition potential; cheap to copy, immutable, shareable across threads.
class TransitionChannel {
public:
    TransitionChannel(const TransitionDensity& density, const ElectrodeModel& model, const DomainOptions& options = {},
                      Diagnostics* diag = nullptr);

    double energy_gap() const { return energy_gap_; }
    const std::string& label() const { return coupling_->label(); }
    const ChannelCoupling& coupling() const { return *coupling_; }

private:
    double energy_gap_;
    std::shared_ptr<const ChannelCoupling> coupling_;
};

/// Electrode state energies (Hartree) at the `n` trapezoid nodes of the
/// inelastic window for one channel; empty when the window is empty.
/// Negative bias: E_n in [mu0 + eV + E_eg, mu0], xi_k = E_n - eV - E_eg.
/// Positive bias: E_n in [mu0, mu0 + eV - E_eg], xi_k = E_n - eV + E_eg.
std::vector<StateEnergies> inelastic_window(double fermi_energy, double energy_gap, Bias bias, int n);

/// 2 pi rho_s rho_t integral |N|^2 dE_n over the negative-bias window (relative units).
double inelastic_current_negative(const TransitionChannel& channel, const ElectrodeModel& model, Bias bias, Vec2 tip,
                                  int n_energy = default_energy_nodes);
/// Positive-bias counterpart.
double inelastic_current_positive(const TransitionChannel& channel, const ElectrodeModel& model, Bias bias, Vec2 tip,
                                  int n_energy = default_energy_nodes);

struct CurrentResult {
    std::vector<double> per_channel;
    double total = 0.0;
    Bias bias;
    Vec2 tip;
    int n_energy = 0;
};

/// Sum over channels. Exactly zero when |bias| <= min E_eg / e.
CurrentResult total_inelastic_current(std::span<const TransitionChannel> channels, const ElectrodeModel& model,
                                      Bias bias, Vec2 tip, int n_energy = default_energy_nodes);

struct BiasCurve {
    std::vector<double> bias_volts;
    std::vector<double> current;
};

/// Total current for each bias; biases are independent work items spread over
/// `threads` workers (0 = hardware concurrency). Output is scheduling independent.
BiasCurve bias_sweep(std::span<const TransitionChannel> channels, const ElectrodeModel& model,
                     std::span<const double> biases_volts, Vec2 tip, int n_energy = default_energy_nodes,
                     unsigned threads = 1);

/// start, start + step, ... up to stop (inclusive within step/1e6), rounded to 1e-9 V.
std::vector<double> bias_range(double start, double stop, double step);

}  // namespace stml
