// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stml/commands.hpp"
#include "stml/coupling.hpp"
#include "stml/cube.hpp"
#include "stml/current.hpp"
#include "stml/density.hpp"
#include "stml/kinetics.hpp"
#include "stml/scan.hpp"
#include "stml/spectral.hpp"
#include "stml/units.hpp"

using namespace stml;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = o.pass;
    std::string detail = o.detail;
    if (limit_s > 0.0 && secs > limit_s) {
        pass = false;
        detail += "; over the time limit";
    }
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

const ElectrodeModel model = ElectrodeModel::defaults();
const auto params = GaussianDensityParams::from_nm(1.0, 0.5, 1.0);
const double gap = units::ev_to_hartree(2.0);
constexpr double x0_nm = 0.6797779934458726;

TransitionDensity dark() { return TransitionDensity::gaussian(params, gap, "dark"); }

// Model density sampled on the simulation lattice and rotated by a quarter turn.
TransitionDensity rotated_partner(const DomainOptions& opt) {
    GridSpec spec = channel_domain(dark(), model, opt);
    spec.origin.z = -spec.spacing.z;
    spec.dims[2] = 3;
    return TransitionDensity::gridded(rotate_quarter_turn(rasterize(dark(), spec)), gap, "dark-rot");
}

ScalarGrid3D random_field(const GridSpec& spec, unsigned seed, bool neutral) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(spec.size());
    double mean = 0.0;
    for (auto& x : v) mean += (x = u(rng));
    mean /= static_cast<double>(v.size());
    if (neutral)
        for (auto& x : v) x -= mean;
    return ScalarGrid3D(spec, std::move(v));
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] < v[i - 1] && v[i] < v[i + 1]) out.push_back(i);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Cut {
    std::vector<double> x_nm, value;
};

Cut cut_at(const CurrentMap2D& m, double y_nm) {
    const auto c = profile_cut(m, CutAxis::X, units::nm_to_bohr(y_nm));
    Cut out;
    for (double x : c.coordinate) out.x_nm.push_back(units::bohr_to_nm(x));
    out.value = c.value;
    return out;
}

// Central maximum plus exactly one local minimum on each side of it.
bool three_extrema(const Cut& c, double& left, double& right) {
    const auto mid = c.value.size() / 2;
    const auto peak = std::max_element(c.value.begin(), c.value.end()) - c.value.begin();
    if (static_cast<std::size_t>(peak) != mid) return false;
    const auto mins = local_minima(c.value);
    std::vector<std::size_t> l, r;
    for (auto i : mins) (i < mid ? l : r).push_back(i);
    if (l.size() != 1 || r.size() != 1) return false;
    left = c.x_nm[l[0]];
    right = c.x_nm[r[0]];
    return true;
}

}  // namespace

int main() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::printf("acceptance run: %u hardware thread(s)\n", hw);

    const std::vector<TransitionChannel> channel{TransitionChannel(dark(), model)};

    report(1, "threshold law", 60.0, [&] {
        const auto biases = bias_range(-3.0, 3.0, 0.1);
        const auto curve = bias_sweep(channel, model, biases, {0, 0}, default_energy_nodes, 1);
        int bad = 0;
        for (std::size_t i = 0; i < biases.size(); ++i) {
            const double v = std::abs(biases[i]);
            if (v <= 2.0 + 1e-12 && curve.current[i] != 0.0) ++bad;
            if (v >= 2.1 - 1e-12 && !(curve.current[i] > 0.0)) ++bad;
        }
        return Outcome{bad == 0, std::to_string(biases.size()) + " biases, " + std::to_string(bad) +
                                     " violations of I = 0 for |V| <= 2.0 and I > 0 for |V| >= 2.1"};
    });

    report(2, "bias asymmetry", 60.0, [&] {
        const double neg = total_inelastic_current(channel, model, Bias{-2.5}, {0, 0}).total;
        const double pos = total_inelastic_current(channel, model, Bias{2.5}, {0, 0}).total;
        return Outcome{neg / pos > 1.0, "I(-2.5 V)/I(+2.5 V) = " + fmt("%.6f", neg / pos)};
    });

    const auto axis = uniform_axis(units::nm_to_bohr(-1.5), units::nm_to_bohr(1.5), 41);
    CurrentMap2D map;
    report(3, "map morphology", 600.0, [&] {
        map = scan_map(channel, model, Bias{-2.5}, axis, axis, default_energy_nodes, hw);
        const Cut c0 = cut_at(map, 0.0), c4 = cut_at(map, 0.4);
        double l0 = 0, r0 = 0, l4 = 0, r4 = 0;
        const bool s0 = three_extrema(c0, l0, r0);
        const bool s4 = three_extrema(c4, l4, r4);
        const bool near = s0 && std::abs(l0 + x0_nm) <= 0.2 && std::abs(r0 - x0_nm) <= 0.2;
        std::string d = "y=0: ";
        d += s0 ? "central max, minima at x = " + fmt("%.3f", l0) + ", " + fmt("%.3f", r0) + " nm"
                : "no central-max/two-minima structure";
        d += " (target +/-" + fmt("%.3f", x0_nm) + " +/- 0.2 nm); y=0.4: ";
        d += s4 ? "central max, minima at x = " + fmt("%.3f", l4) + ", " + fmt("%.3f", r4) + " nm"
                : "structure lost";
        return Outcome{near && s4, d};
    });

    report(4, "spectral vs direct oracle", 300.0, [&] {
        double worst = 0.0;
        for (std::size_t n : {16u, 32u}) {
            // Neutral random fixtures.
            GridSpec s;
            s.spacing = {0.4, 0.4, 0.4};
            s.dims = {n, n, n};
            const auto a = random_field(s, 100 + static_cast<unsigned>(n), true);
            const auto b = random_field(s, 200 + static_cast<unsigned>(n), false);
            worst = std::max(worst, rel(coulomb_interaction(a, b), coulomb_interaction_direct(a, b)));
            // Model density against a physical pair density, tip over the origin.
            const double h = units::nm_to_bohr(1.92 / static_cast<double>(n));
            GridSpec p;
            p.spacing = {h, h, h};
            p.dims = {n, n, n};
            const double half = static_cast<double>(n / 2);
            p.origin = {-half * h, -half * h, -std::floor(model.tip_height / h * 0.3) * h};
            const auto pair = pair_density(model, model.fermi_energy, model.fermi_energy - 0.01, {0, 0}, p);
            const auto sp = matrix_element(dark(), pair);
            const auto dr = matrix_element_direct(dark(), pair);
            worst = std::max(worst, rel(sp.value, dr.value));
        }
        return Outcome{worst <= 1e-6, "worst relative difference " + fmt("%.3e", worst) + " on 16^3 and 32^3"};
    });

    report(5, "symmetry suite", 600.0, [&] {
        if (map.values.empty()) return Outcome{false, "map from criterion 3 unavailable"};
        const std::size_t n = axis.size();
        double peak = 0.0, mx = 0.0, my = 0.0;
        for (double v : map.values) peak = std::max(peak, v);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                mx = std::max(mx, std::abs(map.at(i, j) - map.at(n - 1 - i, j)));
                my = std::max(my, std::abs(map.at(i, j) - map.at(i, n - 1 - j)));
            }
        const double mirror = std::max(mx, my) / peak;

        const std::vector<TransitionChannel> partner{TransitionChannel(rotated_partner({}), model)};
        const auto pm = scan_map(partner, model, Bias{-2.5}, axis, axis, default_energy_nodes, hw);
        const std::vector<CurrentMap2D> both{map, pm};
        const auto sum = sum_maps(both);
        const auto turned = rotate_quarter_turn(sum);
        double speak = 0.0, sdiff = 0.0;
        for (std::size_t k = 0; k < sum.values.size(); ++k) {
            speak = std::max(speak, sum.values[k]);
            sdiff = std::max(sdiff, std::abs(sum.values[k] - turned.values[k]));
        }
        const double quarter = sdiff / speak;
        return Outcome{mirror <= 1e-8 && quarter <= 1e-10,
                       "(a) mirror deviation " + fmt("%.2e", mirror) + " (<= 1e-8), (b) quarter-turn deviation " +
                           fmt("%.2e", quarter) + " (<= 1e-10), relative to the map maximum"};
    });

    report(6, "kinetics closed form", 1.0, [&] {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto logu = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u(rng)); };
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const kinetics::RateModel m{logu(-1, 6), logu(3, 10), logu(2, 7), logu(2, 7)};
            worst = std::max(worst, rel(kinetics::photon_emission_rate(m), kinetics::photon_emission_rate_closed_form(m)));
        }
        const double g = kinetics::photon_emission_rate({13.0, 1e8, 4e4, 4e4});
        const double dev = std::abs(g - 13.0) / 13.0;
        return Outcome{worst <= 1e-10 && dev <= 1e-3, "sweep worst " + fmt("%.2e", worst) + ", Gamma = " +
                                                          fmt("%.5f", g) + " 1/s (" + fmt("%.2e", dev) + " from I/e)"};
    });

    report(7, "numerical hygiene", 0.0, [&] {
        std::vector<std::string> bad;
        std::string d;
        // Fourier round trip and Parseval.
        GridSpec s;
        s.spacing = {0.3, 0.3, 0.3};
        s.dims = {24, 20, 18};
        const auto g = random_field(s, 7, true);
        const auto f = fourier_transform(g);
        const auto back = inverse_fourier(f);
        double rt = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) rt = std::max(rt, std::abs(back.values()[k] - g.values()[k]));
        rt /= g.max_abs();
        double lhs = 0.0, rhs = 0.0;
        for (const auto& c : f.values) lhs += std::norm(c);
        for (double v : g.values()) rhs += v * v;
        const double parseval = rel(lhs * f.dvq(), rhs * g.cell_volume());
        if (rt > 1e-12) bad.push_back("round trip");
        if (parseval > 1e-10) bad.push_back("Parseval");
        d += "round trip " + fmt("%.1e", rt) + ", Parseval " + fmt("%.1e", parseval);

        // Population conservation.
        const kinetics::RateModel km{13.0, 1e8, 4e4, 4e4};
        const auto traj = kinetics::evolve(km, {}, 2e-4, kinetics::max_stable_step(km), 1000);
        double cons = 0.0;
        for (const auto& pt : traj) cons = std::max(cons, std::abs(pt.p.sum() - 1.0));
        if (cons > 1e-9) bad.push_back("conservation");
        d += ", population drift " + fmt("%.1e", cons);

        // Quadrature self-convergence: n vs 2n - 1 nodes at the default bias, order check over the sweep range.
        double quad = 0.0, order_dev = 0.0;
        auto at = [&](double v, int n) { return total_inelastic_current(channel, model, Bias{v}, {0, 0}, n).total; };
        for (double v : {-2.5, 2.5}) quad = std::max(quad, rel(at(v, 17), at(v, 33)));
        for (double v : {-3.0, 3.0}) {
            const double a = at(v, 17), b = at(v, 33), c = at(v, 65);
            order_dev = std::max(order_dev, std::abs((b - a) / (c - b) - 4.0));
        }
        if (quad > 1e-3) bad.push_back("quadrature");
        if (order_dev > 0.1) bad.push_back("quadrature order");
        d += ", quadrature " + fmt("%.1e", quad) + " (<= 1e-3), refinement ratio deviation " + fmt("%.3f", order_dev);

        // Byte-identical CLI outputs for 1 and 4 worker threads.
        const fs::path dir = fs::temp_directory_path() / "stml_acceptance_threads";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(dir / "run.json") << R"({"schema": "stml-run/1",
            "scan": {"nx": 15, "ny": 11, "x_min_nm": -1.4, "x_max_nm": 1.4, "y_min_nm": -1.0, "y_max_nm": 1.0},
            "sweep": {"start_v": -3, "stop_v": 3, "step_v": 0.25}})";
        bool same = true;
        for (const char* cmd : {"map", "bias-sweep"}) {
            for (unsigned t : {1u, 4u}) {
                cli::RunOptions o;
                o.out_dir = dir / (std::string(cmd) + std::to_string(t));
                o.threads = t;
                std::ostringstream r, e;
                if (cli::run(cmd, dir / "run.json", o, r, e) != cli::exit_ok) same = false;
            }
            for (const auto& entry : fs::directory_iterator(dir / (std::string(cmd) + "1")))
                if (slurp(entry.path()) != slurp(dir / (std::string(cmd) + "4") / entry.path().filename()))
                    same = false;
        }
        fs::remove_all(dir);
        if (!same) bad.push_back("thread byte identity");
        d += same ? ", outputs byte-identical for 1 and 4 threads" : ", outputs differ across thread counts";
        for (const auto& b : bad) d += "; failed: " + b;
        return Outcome{bad.empty(), d};
    });

    report(8, "cube ingestion", 0.0, [&] {
        const fs::path dir = STML_FIXTURES;
        const auto g = read_cube(dir / "gaussian.cube");
        double worst = 0.0;
        std::size_t nodes = 0;
        const auto& dims = g.dims();
        for (std::size_t i = 0; i < dims[0]; ++i)
            for (std::size_t j = 0; j < dims[1]; ++j)
                for (std::size_t k = 0; k < dims[2]; ++k) {
                    const Vec3 r = g.node(i, j, k);
                    const double expect = std::abs(r.z) < 0.5 * g.spacing().z
                                              ? eval_gaussian_density(params, r) / g.spacing().z
                                              : 0.0;
                    worst = std::max(worst, rel(g.at(i, j, k), expect));
                    ++nodes;
                }
        std::string msg;
        std::size_t line = 0;
        try {
            read_cube(dir / "truncated.cube");
        } catch (const ParseError& e) {
            msg = e.what();
            line = e.line();
        }
        const bool documented =
            msg.find("truncated value stream: expected 27 values, received 20") != std::string::npos && line == 10;
        return Outcome{worst <= 1e-12 && documented,
                       std::to_string(nodes) + " nodes, worst relative deviation " + fmt("%.2e", worst) +
                           "; truncated fixture: " + (documented ? "documented parse error at line 10" : "unexpected: " + msg)};
    });

    std::printf("%d criterion/criteria failed\n", failures);
    return failures;
}
