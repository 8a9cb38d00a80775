// signal_io.hpp - binary sample files: one JSON header line + little-endian f64 samples

#pragma once

#include <string>
#include <vector>

namespace mtpsk {

struct SampledSignal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    double period_s = 0.0;
    double z0_ohm = 50.0;
};

// File layout: {"sample_rate_hz":...,"period_s":...,"z0_ohm":...,"n_samples":...}\n
// followed by n_samples little-endian IEEE-754 doubles.
void write_signal(const std::string& path, const SampledSignal& s);
SampledSignal read_signal(const std::string& path);

}  // namespace mtpsk
