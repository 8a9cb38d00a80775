// waveform.hpp - passband multitone synthesis and PAPR measurement

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtpsk/constellation.hpp"
#include "mtpsk/freq_plan.hpp"

namespace mtpsk {

// Real passband signal sampled over exactly one waveform period. For plans
// whose bandwidth is an odd number of gcd units the tones sit on the gcd/2
// grid and the true period is 2/gcd; period_s reflects that. The rectified
// baseband is 1/gcd-periodic either way.
struct Waveform {
    std::vector<double> samples;   // volts across z0, one full period
    double sample_rate_hz = 0.0;
    double period_s = 0.0;         // samples.size() / sample_rate_hz
    double z0_ohm = 50.0;
    FrequencyPlan plan;            // originating plan
    PhaseVector phases_deg;        // tone phases used at synthesis
};

// True period of the tone set: 1/gcd, or 2/gcd when the bandwidth is an odd
// number of gcd units (tones then sit on the half-gcd grid).
double waveform_period_s(const FrequencyPlan& plan);

// Smallest power-of-two multiple of the gcd that clears the anti-alias
// margin 4*(f_c + bw/2). Gives whole samples per period and power-of-two
// transform sizes.
double default_sample_rate(const FrequencyPlan& plan);

// Equal-amplitude synthesis at total average power p_in_dbm: per-tone
// amplitude A = sqrt(2 * z0 * P_in / N).
Waveform synthesize(const FrequencyPlan& plan, const PhaseVector& phases_deg, double p_in_dbm,
                    double sample_rate_hz, double z0_ohm = 50.0);

// Peak instantaneous power over one period divided by the period average.
double papr(const Waveform& w);

double average_power_w(const Waveform& w);

namespace reference {
// Direct cosine-sum synthesis; same contract as synthesize (serial reference).
Waveform synthesize_direct(const FrequencyPlan& plan, const PhaseVector& phases_deg,
                           double p_in_dbm, double sample_rate_hz, double z0_ohm = 50.0);
}  // namespace reference

}  // namespace mtpsk
