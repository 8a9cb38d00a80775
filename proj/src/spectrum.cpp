#include "mtpsk/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "mtpsk/common.hpp"

namespace mtpsk {

namespace {

// FFTW plan creation is not thread-safe; executing a cached plan on fresh
// arrays is. Plans are created FFTW_UNALIGNED so they accept any buffer.
std::mutex g_plan_mutex;
std::unordered_map<std::size_t, fftw_plan> g_r2c_plans;
std::unordered_map<std::size_t, fftw_plan> g_c2r_plans;

fftw_plan r2c_plan(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = g_r2c_plans.find(n);
    if (it != g_r2c_plans.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    g_r2c_plans.emplace(n, plan);
    return plan;
}

fftw_plan c2r_plan(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = g_c2r_plans.find(n);
    if (it != g_c2r_plans.end()) return it->second;
    std::vector<std::complex<double>> in(n / 2 + 1);
    std::vector<double> out(n);
    fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                          reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    g_c2r_plans.emplace(n, plan);
    return plan;
}

}  // namespace

std::vector<std::complex<double>> real_fft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw config_error("real_fft: empty input");
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_execute_dft_r2c(r2c_plan(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> real_ifft(std::span<const std::complex<double>> spec, std::size_t n) {
    if (spec.size() != n / 2 + 1) throw config_error("real_ifft: spectrum size does not match n");
    std::vector<std::complex<double>> in(spec.begin(), spec.end());  // c2r may clobber input
    std::vector<double> out(n);
    fftw_execute_dft_c2r(c2r_plan(n), reinterpret_cast<fftw_complex*>(in.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

std::complex<double> bin_amplitude(std::span<const std::complex<double>> spec, std::size_t n,
                                   std::size_t m) {
    if (m >= spec.size()) throw config_error("bin_amplitude: bin out of range");
    if (m == 0) return spec[0] / static_cast<double>(n);
    return 2.0 * spec[m] / static_cast<double>(n);
}

std::vector<double> synthesize_bins(std::size_t n, std::span<const std::int64_t> bins,
                                    std::span<const double> amp,
                                    std::span<const double> phase_deg) {
    if (bins.size() != amp.size() || bins.size() != phase_deg.size())
        throw config_error("synthesize_bins: mismatched tone table");
    std::vector<std::complex<double>> spec(n / 2 + 1, {0.0, 0.0});
    constexpr double deg = std::numbers::pi / 180.0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const std::int64_t m = bins[i];
        if (m <= 0 || static_cast<std::size_t>(m) >= n / 2)
            throw config_error("synthesize_bins: tone bin outside (0, n/2)");
        spec[static_cast<std::size_t>(m)] +=
            std::polar(amp[i] * static_cast<double>(n) / 2.0, phase_deg[i] * deg);
    }
    return real_ifft(spec, n);
}

namespace reference {

std::vector<double> synthesize_bins_direct(std::size_t n, std::span<const std::int64_t> bins,
                                           std::span<const double> amp,
                                           std::span<const double> phase_deg) {
    constexpr double deg = std::numbers::pi / 180.0;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(bins[i]) / static_cast<double>(n);
        const double phi = phase_deg[i] * deg;
        for (std::size_t k = 0; k < n; ++k)
            out[k] += amp[i] * std::cos(w * static_cast<double>(k) + phi);
    }
    return out;
}

std::complex<double> bin_amplitude_direct(std::span<const double> x, std::size_t m) {
    const std::size_t n = x.size();
    const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k)
        acc += x[k] * std::polar(1.0, -w * static_cast<double>(k));
    if (m == 0) return acc / static_cast<double>(n);
    return 2.0 * acc / static_cast<double>(n);
}

}  // namespace reference

}  // namespace mtpsk
