#include "stml/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stml/error.hpp"

namespace stml::kinetics {

namespace {
constexpr double stability_limit = 0.1;
}

void RateModel::validate() const {
    for (double r : {pump_rate_ies, laser_pump, gamma0, gamma3})
        if (!std::isfinite(r) || r < 0.0) throw ConfigError("kinetic rates must be finite and non-negative");
}

double RateModel::max_rate() const {
    // Largest total outflow of any state.
    return std::max({pump_rate_ies, laser_pump, gamma0 + gamma3});
}

void Populations::validate() const {
    for (double p : {p0, p3, p17})
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw ConfigError("populations must lie in [0, 1]");
    if (std::abs(sum() - 1.0) > 1e-12) throw ConfigError("populations must sum to 1");
}

RateMatrix rate_generator(const RateModel& m) {
    m.validate();
    const double pump = m.pump_rate_ies;
    return {{
        {-pump, 0.0, m.gamma0},
        {pump, -m.laser_pump, m.gamma3},
        {0.0, m.laser_pump, -(m.gamma0 + m.gamma3)},
    }};
}

namespace {

std::array<double, 3> multiply(const RateMatrix& g, const std::array<double, 3>& p) {
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = g[i][0] * p[0] + g[i][1] * p[1] + g[i][2] * p[2];
    return out;
}

std::array<double, 3> axpy(const std::array<double, 3>& p, double h, const std::array<double, 3>& k) {
    return {p[0] + h * k[0], p[1] + h * k[1], p[2] + h * k[2]};
}

}  // namespace

double max_stable_step(const RateModel& model) {
    const double r = model.max_rate();
    return r > 0.0 ? stability_limit / r : std::numeric_limits<double>::infinity();
}

std::vector<TrajectoryPoint> evolve(const RateModel& model, const Populations& initial, double t_final, double dt,
                                    std::size_t stride) {
    model.validate();
    initial.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("final time must be non-negative");
    if (stride == 0) throw ConfigError("trajectory stride must be >= 1");
    if (dt * model.max_rate() > stability_limit) {
        std::ostringstream os;
        os << "time step " << dt << " s is unstable for max rate " << model.max_rate() << " 1/s; use dt <= "
           << max_stable_step(model) << " s";
        throw NumericalError(os.str());
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    const double h = steps ? t_final / static_cast<double>(steps) : 0.0;
    const RateMatrix g = rate_generator(model);

    std::vector<TrajectoryPoint> out;
    out.reserve(steps / stride + 2);
    auto p = initial.as_array();
    out.push_back({0.0, initial});
    for (std::size_t s = 1; s <= steps; ++s) {
        const auto k1 = multiply(g, p);
        const auto k2 = multiply(g, axpy(p, 0.5 * h, k1));
        const auto k3 = multiply(g, axpy(p, 0.5 * h, k2));
        const auto k4 = multiply(g, axpy(p, h, k3));
        for (std::size_t i = 0; i < 3; ++i) p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (s % stride == 0 || s == steps) out.push_back({static_cast<double>(s) * h, {p[0], p[1], p[2]}});
    }
    return out;
}

Populations steady_state(const RateModel& m) {
    m.validate();
    if (m.pump_rate_ies == 0.0) return {1.0, 0.0, 0.0};
    if (m.laser_pump == 0.0) throw NumericalError("no stationary cycle: S3 (dark) has no exit without the laser pump");
    if (m.gamma0 + m.gamma3 == 0.0) throw NumericalError("no stationary cycle: S17 (bright) has no decay channel");

    // Replace the last balance row by the normalization and solve with partial pivoting.
    const RateMatrix g = rate_generator(m);
    double a[3][4] = {{g[0][0], g[0][1], g[0][2], 0.0}, {g[1][0], g[1][1], g[1][2], 0.0}, {1.0, 1.0, 1.0, 1.0}};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) throw NumericalError("rate generator has a degenerate null space");
        if (piv != c)
            for (int k = 0; k < 4; ++k) std::swap(a[c][k], a[piv][k]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
        }
    }
    Populations p{a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
    return p;
}

double photon_emission_rate(const RateModel& model) { return model.gamma0 * steady_state(model).p17; }

double photon_emission_rate_closed_form(const RateModel& m) {
    m.validate();
    const double i = m.pump_rate_ies;
    if (i == 0.0) return 0.0;
    return m.gamma0 * i / (m.gamma0 + i * (m.gamma0 + m.gamma3 + m.laser_pump) / m.laser_pump);
}

}  // namespace stml::kinetics
