// mtpsk_bench.cpp - timing comparison of the fast kernels against their
// serial references: FFT vs direct synthesis, and the OpenMP stream loop vs
// the serial sweep path.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "mtpsk/harness.hpp"
#include "mtpsk/waveform.hpp"

using namespace mtpsk;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void bench_synthesis() {
    const FrequencyPlan plan = plan_frequencies(2.45e9, 6, 1e6, 0);
    const double fs = default_sample_rate(plan);
    const PhaseVector phases = {0.0, -45.0, 90.0, -135.0, 0.0, 45.0};
    const int reps = 200;

    double sink = 0.0;
    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i)
        sink += synthesize(plan, phases, -10.0, fs).samples[0];
    const double fft_s = seconds_since(t0) / reps;

    t0 = clock_type::now();
    for (int i = 0; i < reps; ++i)
        sink += reference::synthesize_direct(plan, phases, -10.0, fs).samples[0];
    const double direct_s = seconds_since(t0) / reps;
    (void)sink;

    std::printf("synthesize 6 tones x %zu samples\n",
                static_cast<std::size_t>(fs * waveform_period_s(plan)));
    std::printf("  direct cosine reference : %8.3f ms\n", direct_s * 1e3);
    std::printf("  FFT kernel              : %8.3f ms   (%.1fx)\n", fft_s * 1e3, direct_s / fft_s);
}

void bench_sweep(RectifierModel model, const char* label) {
    TrialConfig base;
    base.n_tones = 6;
    base.m_order = 4;
    base.delta_deg = 360.0;
    base.p_in_dbm = -10.0;
    base.streams = 64;
    base.rectifier.model = model;
    const std::vector<SweepAxis> axes = {{"delta_deg", {90.0, 360.0}}};

    auto t0 = clock_type::now();
    sweep(base, axes, false);
    const double serial_s = seconds_since(t0);

    t0 = clock_type::now();
    sweep(base, axes, true);
    const double parallel_s = seconds_since(t0);

    std::printf("sweep %s: 2 points x %d streams\n", label, base.streams);
    std::printf("  serial reference        : %8.3f s\n", serial_s);
    std::printf("  OpenMP (%2d threads)     : %8.3f s   (%.1fx)\n", omp_get_max_threads(),
                parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
    bench_synthesis();
    bench_sweep(RectifierModel::square_law, "square_law");
    bench_sweep(RectifierModel::diode_ode, "diode_ode");
    return 0;
}
