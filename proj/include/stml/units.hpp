#pragma once

// Unit conventions: every quantity inside the library is in atomic units
// (Hartree, Bohr, e = m_e = hbar = 1). Configuration files, CSV outputs and
// the Python layer speak eV, nm and volts; conversions happen at those edges.

namespace stml::units {

inline constexpr double hartree_ev = 27.211386;
inline constexpr double bohr_nm = 0.052917721;
inline constexpr double pi = 3.14159265358979323846;

constexpr double ev_to_hartree(double ev) { return ev / hartree_ev; }
constexpr double hartree_to_ev(double h) { return h * hartree_ev; }
constexpr double nm_to_bohr(double nm) { return nm / bohr_nm; }
constexpr double bohr_to_nm(double b) { return b * bohr_nm; }

}  // namespace stml::units
