#pragma once

#include <complex>
#include <vector>

#include "stml/grid.hpp"

namespace stml {

/// Continuum-normalized Fourier amplitudes
///   F(q) = (2 pi)^{-3/2} sum_r rho(r) e^{i q.(r - origin)} dV
/// on the reciprocal lattice of a ScalarGrid3D, in standard FFT index order
/// (index m maps to q = 2 pi m / (N h) for m < N/2, wrapping to negative q above).
/// Phases are referenced to the real-space grid origin.
struct SpectralField {
    GridSpec real_space;
    std::vector<std::complex<double>> values;

    const Dims& dims() const { return real_space.dims; }
    /// Wavevector spacing per axis (Bohr^-1).
    Vec3 dq() const;
    /// Reciprocal-space volume element.
    double dvq() const;
    Vec3 wavevector(std::size_t i, std::size_t j, std::size_t k) const;
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * real_space.dims[1] + j) * real_space.dims[2] + k;
    }
    std::complex<double> at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }
    /// Index of -q for the element at (i, j, k).
    std::size_t negated_index(std::size_t i, std::size_t j, std::size_t k) const;
};

/// Throws ConfigError when an axis length is not a product of 2, 3, 5, 7.
SpectralField fourier_transform(const ScalarGrid3D& grid);

/// Inverse of fourier_transform; the imaginary residue is dropped.
ScalarGrid3D inverse_fourier(const SpectralField& field);

/// Largest |Im| left by the inverse transform, relative to max |Re|.
double inverse_imaginary_residue(const SpectralField& field);

}  // namespace stml
