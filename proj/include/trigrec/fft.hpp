#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <tuple>

#include <fftw3.h>

#include "trigrec/error.hpp"

// Thin in-place FFTW wrapper. Planning is serialized behind a mutex; execution
// with the new-array interface is reentrant, so transforms may run concurrently.
namespace trigrec::fft {

enum class Direction { forward, backward };

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline fftw_plan plan_for(int rows, int cols, Direction dir) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto key = std::make_tuple(rows, cols, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // Planning with FFTW_ESTIMATE never touches the array contents.
    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan p = rows == 1 ? fftw_plan_dft_1d(cols, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                            : fftw_plan_dft_2d(rows, cols, scratch, scratch, sign,
                                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (p == nullptr) throw Error("FFTW planning failed");
    cache.emplace(key, p);
    return p;
}

}  // namespace detail

/// Unnormalized 1-D transform: forward uses e^{-2 pi i jk/n}, backward e^{+2 pi i jk/n}.
inline void transform(std::span<std::complex<double>> data, Direction dir) {
    if (data.empty()) return;
    fftw_plan p = detail::plan_for(1, static_cast<int>(data.size()), dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
}

/// Unnormalized 2-D transform of a row-major rows x cols array.
inline void transform_2d(std::span<std::complex<double>> data, int rows, int cols, Direction dir) {
    if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw Error("transform_2d: size mismatch");
    }
    if (data.empty()) return;
    fftw_plan p = detail::plan_for(rows, cols, dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
}

}  // namespace trigrec::fft
