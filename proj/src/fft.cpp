#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "stml/error.hpp"

namespace stml::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void fft3d(std::vector<std::complex<double>>& data, const Dims& dims, FftSign sign) {
    for (auto n : dims)
        if (!is_transform_size(n)) throw ConfigError("transform axis length " + std::to_string(n) +
                                                     " is not a product of 2, 3, 5 and 7");
    if (data.size() != dims[0] * dims[1] * dims[2]) throw ConfigError("transform buffer size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    // FFTW_FORWARD is exp(-i...), FFTW_BACKWARD is exp(+i...).
    const int fsign = sign == FftSign::Positive ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_3d(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]), buf,
                                buf, fsign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW failed to create a transform plan");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace stml::detail
