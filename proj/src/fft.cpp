#include "mosim/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mosim {

namespace {

std::mutex plan_mutex;

// FFTW planning is not thread-safe; execution via fftw_execute_dft on
// caller-owned buffers is.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> tmp(n);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, sign, FFTW_ESTIMATE);
    cache[key] = plan;
    return plan;
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x,
                                            int sign, double scale) {
    if (x.empty()) throw std::invalid_argument("fft: empty input");
    std::vector<std::complex<double>> out = x;
    fftw_plan plan = plan_for(x.size(), sign);
    auto* p = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, p, p);
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_FORWARD, 1.0 / std::sqrt(static_cast<double>(x.size())));
}

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_BACKWARD, 1.0 / std::sqrt(static_cast<double>(x.size())));
}

std::vector<std::complex<double>> dft_raw(const std::vector<std::complex<double>>& x,
                                          std::size_t n) {
    if (x.size() > n) throw std::invalid_argument("dft_raw: input longer than n");
    std::vector<std::complex<double>> padded(n, {0.0, 0.0});
    std::copy(x.begin(), x.end(), padded.begin());
    return transform(padded, FFTW_FORWARD, 1.0);
}

} // namespace mosim
