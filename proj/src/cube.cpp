#include "stml/cube.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "stml/error.hpp"

namespace stml {

namespace {

// Line-oriented tokenizer that remembers where each token came from.
class CubeReader {
public:
    explicit CubeReader(std::istream& in) : in_(in) {}

    std::string next_line(const char* what) {
        std::string line;
        if (!std::getline(in_, line)) throw ParseError(std::string("unexpected end of file reading ") + what, line_ + 1);
        ++line_;
        return line;
    }

    std::vector<std::string> tokens(const std::string& line) {
        std::istringstream ss(line);
        std::vector<std::string> t;
        for (std::string s; ss >> s;) t.push_back(s);
        return t;
    }

    double number(const std::string& tok) const {
        const char* b = tok.c_str();
        char* e = nullptr;
        errno = 0;
        const double v = std::strtod(b, &e);
        if (e == b || *e != '\0' || errno == ERANGE || !std::isfinite(v))
            throw ParseError("non-numeric token '" + tok + "'", line_);
        return v;
    }

    long integer(const std::string& tok) const {
        const double v = number(tok);
        if (v != std::floor(v)) throw ParseError("expected an integer, got '" + tok + "'", line_);
        return static_cast<long>(v);
    }

    std::size_t line() const { return line_; }
    bool next_data_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_;
        return true;
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

}  // namespace

ScalarGrid3D read_cube(std::istream& in) {
    CubeReader rd(in);
    rd.next_line("comment line 1");
    rd.next_line("comment line 2");

    auto head = rd.tokens(rd.next_line("atom count and origin"));
    if (head.size() < 4) throw ParseError("expected 'NAtoms Ox Oy Oz'", rd.line());
    long natoms = rd.integer(head[0]);
    const bool has_orbital_line = natoms < 0;
    natoms = std::labs(natoms);
    GridSpec spec;
    spec.origin = {rd.number(head[1]), rd.number(head[2]), rd.number(head[3])};

    double step[3][3];
    for (int a = 0; a < 3; ++a) {
        auto t = rd.tokens(rd.next_line("axis line"));
        if (t.size() < 4) throw ParseError("expected 'N vx vy vz' axis line", rd.line());
        const long n = rd.integer(t[0]);
        if (n <= 0) throw ParseError("axis point count must be positive, got " + t[0], rd.line());
        spec.dims[static_cast<std::size_t>(a)] = static_cast<std::size_t>(n);
        for (int c = 0; c < 3; ++c) step[a][c] = rd.number(t[static_cast<std::size_t>(c) + 1]);
        for (int c = 0; c < 3; ++c)
            if (c != a && step[a][c] != 0.0)
                throw ParseError("only axis-aligned cube step vectors are supported", rd.line());
        if (!(step[a][a] > 0.0)) throw ParseError("cube step along each axis must be positive", rd.line());
    }
    spec.spacing = {step[0][0], step[1][1], step[2][2]};
    for (auto n : spec.dims)
        if (n < 2) throw ParseError("cube grids need at least 2 points per axis", rd.line());

    for (long a = 0; a < natoms; ++a) {
        auto t = rd.tokens(rd.next_line("atom record"));
        if (t.size() < 5) throw ParseError("atom record needs 5 fields", rd.line());
    }
    if (has_orbital_line) rd.next_line("orbital index line");

    const std::size_t expected = spec.size();
    std::vector<double> values;
    values.reserve(expected);
    std::string line;
    while (values.size() < expected && rd.next_data_line(line)) {
        for (const auto& tok : rd.tokens(line)) {
            if (values.size() == expected) throw ParseError("more values than the grid holds", rd.line());
            values.push_back(rd.number(tok));
        }
    }
    if (values.size() < expected)
        throw ParseError("truncated value stream: expected " + std::to_string(expected) + " values, received " +
                             std::to_string(values.size()),
                         rd.line());
    return ScalarGrid3D(spec, std::move(values));
}

ScalarGrid3D read_cube(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open cube file '" + path.string() + "'");
    try {
        return read_cube(in);
    } catch (const ParseError& e) {
        throw e.with_context(path.string() + ": ");
    }
}

TransitionDensity load_cube(const std::filesystem::path& path, double energy_gap, std::string label,
                            double neutrality_tol) {
    if (label.empty()) label = path.stem().string();
    return TransitionDensity::gridded(read_cube(path), energy_gap, std::move(label), neutrality_tol);
}

void write_cube(std::ostream& out, const ScalarGrid3D& grid, const std::string& comment) {
    const auto& s = grid.spec();
    char buf[128];
    out << comment << "\n"
        << "z fastest, then y, then x; lengths in Bohr\n";
    std::snprintf(buf, sizeof buf, "%5d %18.10f %18.10f %18.10f\n", 0, s.origin.x, s.origin.y, s.origin.z);
    out << buf;
    const double h[3] = {s.spacing.x, s.spacing.y, s.spacing.z};
    for (int a = 0; a < 3; ++a) {
        std::snprintf(buf, sizeof buf, "%5zu %18.10f %18.10f %18.10f\n", s.dims[static_cast<std::size_t>(a)],
                      a == 0 ? h[0] : 0.0, a == 1 ? h[1] : 0.0, a == 2 ? h[2] : 0.0);
        out << buf;
    }
    std::size_t col = 0;
    for (double v : grid.values()) {
        std::snprintf(buf, sizeof buf, " %12.5E", v);
        out << buf;
        if (++col == 6) {
            out << "\n";
            col = 0;
        }
    }
    if (col) out << "\n";
}

void write_cube(const std::filesystem::path& path, const ScalarGrid3D& grid, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write cube file '" + path.string() + "'");
    write_cube(out, grid, comment);
}

}  // namespace stml
