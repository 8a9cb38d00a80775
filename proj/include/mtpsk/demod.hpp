// demod.hpp - IM2 phase extraction, symbol decision, gray decoding, BER

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtpsk/constellation.hpp"
#include "mtpsk/freq_plan.hpp"
#include "mtpsk/rectifier.hpp"

namespace mtpsk {

struct DemodReport {
    std::vector<double> extracted_phases_deg;      // one per consecutive spacing bin
    std::vector<bool> erased;                      // bin amplitude below the floor
    std::vector<int> decided_symbols;              // constellation indices
    std::vector<std::uint8_t> bits;                // gray-decoded bit sequence
    std::vector<double> per_symbol_phase_error_deg;  // distance to the decided point
    int out_of_margin = 0;                         // phases outside every +-delta/2M margin
};

struct DemodOptions {
    double amplitude_floor_v = 1e-12;  // below this a bin is flagged as an erasure
    double window_offset_s = 0.0;      // deliberate analysis-window offset (sensitivity studies)
};

// Whole-period transform of the baseband; returns the argument of the bin at
// each consecutive spacing k_n * gcd, in plan order. The analysis window is
// defined to start at the waveform time origin (t0 = 0); window_offset_s
// applies the phase ramp a shifted window would produce.
std::vector<double> extract_tone_phases(const BasebandSignal& b, const FrequencyPlan& plan,
                                        const DemodOptions& opt = {},
                                        std::vector<bool>* erased = nullptr);

// Nearest constellation point by wrapped angular distance; ties break to the
// lower index. Coincides with the +-delta/2M margin rule wherever the phase
// falls inside some margin.
std::vector<int> decide_symbols(std::span<const double> phases_deg, const Constellation& c);

// Inverse of the encode_bits label mapping.
std::vector<std::uint8_t> decode_bits(std::span<const int> symbols, const Constellation& c);

// Hamming distance over length; lengths must match.
double ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx);

// Count of phases that fall outside every +-delta/2M decision margin.
int count_out_of_margin(std::span<const double> phases_deg, const Constellation& c);

DemodReport demodulate(const BasebandSignal& b, const FrequencyPlan& plan,
                       const Constellation& c, const DemodOptions& opt = {});

std::string demod_report_to_json(const DemodReport& report);

// Per-symbol scatter (transmitted phase vs extracted phase) for
// constellation plots.
void write_scatter_csv(std::ostream& os, std::span<const double> tx_phases_deg,
                       std::span<const double> extracted_phases_deg);

}  // namespace mtpsk
