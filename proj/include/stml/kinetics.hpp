#pragma once

#include <array>
#include <vector>

namespace stml::kinetics {

/// Rates (1/s) of the dark-state detection cycle
///   S0 --(I/e)--> S3 (dark) --(eta, laser)--> S17 (bright) --(gamma0)--> S0
///                                               S17 --(gamma3)--> S3
struct RateModel {
    double pump_rate_ies = 0.0;  // I_ine,03 / e
    double laser_pump = 1e8;     // eta
    double gamma0 = 4e4;         // S17 -> S0 spontaneous emission
    double gamma3 = 4e4;         // S17 -> S3 spontaneous emission

    void validate() const;
    double max_rate() const;
};

/// Populations of (S0, S3, S17).
struct Populations {
    double p0 = 1.0;
    double p3 = 0.0;
    double p17 = 0.0;

    std::array<double, 3> as_array() const { return {p0, p3, p17}; }
    double sum() const { return p0 + p3 + p17; }
    void validate() const;
};

/// dP/dt = G P with state order (S0, S3, S17). Columns sum to zero.
using RateMatrix = std::array<std::array<double, 3>, 3>;
RateMatrix rate_generator(const RateModel& model);

struct TrajectoryPoint {
    double t = 0.0;
    Populations p;
};

/// Classical fourth-order Runge-Kutta from t = 0 to t_final with steps no
/// larger than dt. Refuses (NumericalError, with a suggested step) when
/// dt * max_rate > 0.1. Every `stride`-th step plus the final state is kept.
std::vector<TrajectoryPoint> evolve(const RateModel& model, const Populations& initial, double t_final, double dt,
                                    std::size_t stride = 1);

/// Largest dt accepted by evolve for this model.
double max_stable_step(const RateModel& model);

/// Stationary populations from the null space of G with sum P = 1.
/// Throws NumericalError naming the blocked state when no unique cycle exists.
Populations steady_state(const RateModel& model);

/// gamma0 * P17 at steady state (photons per second on the S17 -> S0 line).
double photon_emission_rate(const RateModel& model);

/// gamma0 (I/e) [gamma0 + (I/e)(gamma0 + gamma3 + eta)/eta]^-1
double photon_emission_rate_closed_form(const RateModel& model);

}  // namespace stml::kinetics
