#pragma once

#include <complex>
#include <vector>

#include "stml/grid.hpp"

namespace stml::detail {

enum class FftSign { Positive, Negative };

/// Unnormalized in-place 3D DFT, sum_n x_n exp(sign * 2 pi i m.n / N).
/// Plan creation is serialized; execution is reentrant.
void fft3d(std::vector<std::complex<double>>& data, const Dims& dims, FftSign sign);

}  // namespace stml::detail
