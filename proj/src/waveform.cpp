#include "mtpsk/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "mtpsk/common.hpp"
#include "mtpsk/spectrum.hpp"

namespace mtpsk {

double waveform_period_s(const FrequencyPlan& plan) {
    return (plan.bw_units() % 2 == 0) ? 1.0 / plan.gcd_hz : 2.0 / plan.gcd_hz;
}

double default_sample_rate(const FrequencyPlan& plan) {
    const double target = 4.0 * (plan.f_c_hz + plan.bw_hz() / 2.0);
    std::int64_t p = 1;
    while (static_cast<double>(p) * plan.gcd_hz < target) p <<= 1;
    return static_cast<double>(p) * plan.gcd_hz;
}

namespace {

struct ToneTable {
    std::size_t n_samples;
    std::vector<std::int64_t> bins;
    double amplitude;
};

ToneTable tone_table(const FrequencyPlan& plan, const PhaseVector& phases_deg, double p_in_dbm,
                     double sample_rate_hz, double z0_ohm) {
    if (phases_deg.size() != static_cast<std::size_t>(plan.n_tones))
        throw config_error("synthesize: phase vector length does not match tone count");
    const double samples_per_symbol = sample_rate_hz / plan.gcd_hz;
    if (std::fabs(samples_per_symbol - std::round(samples_per_symbol)) > 1e-6)
        throw config_error("synthesize: sample rate times 1/gcd must be an integer");
    if (sample_rate_hz < 4.0 * (plan.f_c_hz + plan.bw_hz() / 2.0))
        throw config_error("synthesize: sample rate below the 4*(f_c + bw/2) anti-alias margin");

    const double period = waveform_period_s(plan);
    const double base_hz = 1.0 / period;  // gcd, or gcd/2 on the half grid
    ToneTable t;
    t.n_samples = static_cast<std::size_t>(std::llround(sample_rate_hz * period));
    t.bins.reserve(static_cast<std::size_t>(plan.n_tones));
    for (double f : plan.tones_hz()) {
        const double b = f / base_hz;
        t.bins.push_back(std::llround(b));
        if (std::fabs(b - std::round(b)) > 1e-6)
            throw consistency_error("synthesize: tone off the period grid");
    }
    const double p_in_w = dbm_to_watts(p_in_dbm);
    t.amplitude = std::sqrt(2.0 * z0_ohm * p_in_w / static_cast<double>(plan.n_tones));
    return t;
}

}  // namespace

Waveform synthesize(const FrequencyPlan& plan, const PhaseVector& phases_deg, double p_in_dbm,
                    double sample_rate_hz, double z0_ohm) {
    ToneTable t = tone_table(plan, phases_deg, p_in_dbm, sample_rate_hz, z0_ohm);
    std::vector<double> amp(t.bins.size(), t.amplitude);
    Waveform w;
    w.samples = synthesize_bins(t.n_samples, t.bins, amp, phases_deg);
    w.sample_rate_hz = sample_rate_hz;
    w.period_s = static_cast<double>(t.n_samples) / sample_rate_hz;
    w.z0_ohm = z0_ohm;
    w.plan = plan;
    w.phases_deg = phases_deg;
    return w;
}

double papr(const Waveform& w) {
    double peak = 0.0;
    double acc = 0.0;
    for (double v : w.samples) {
        peak = std::max(peak, v * v);
        acc += v * v;
    }
    if (!(acc > 0.0)) throw config_error("papr: zero-power waveform");
    return peak / (acc / static_cast<double>(w.samples.size()));
}

double average_power_w(const Waveform& w) {
    double acc = 0.0;
    for (double v : w.samples) acc += v * v;
    return acc / static_cast<double>(w.samples.size()) / w.z0_ohm;
}

namespace reference {

Waveform synthesize_direct(const FrequencyPlan& plan, const PhaseVector& phases_deg,
                           double p_in_dbm, double sample_rate_hz, double z0_ohm) {
    ToneTable t = tone_table(plan, phases_deg, p_in_dbm, sample_rate_hz, z0_ohm);
    std::vector<double> amp(t.bins.size(), t.amplitude);
    Waveform w;
    w.samples = synthesize_bins_direct(t.n_samples, t.bins, amp, phases_deg);
    w.sample_rate_hz = sample_rate_hz;
    w.period_s = static_cast<double>(t.n_samples) / sample_rate_hz;
    w.z0_ohm = z0_ohm;
    w.plan = plan;
    w.phases_deg = phases_deg;
    return w;
}

}  // namespace reference

}  // namespace mtpsk
