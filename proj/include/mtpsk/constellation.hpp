// constellation.hpp - symmetric PSK symbol sets, gray labels, cumulative tone phases

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mtpsk {

using PhaseVector = std::vector<double>;  // wrapped degrees, one per tone

// M equidistant symbol phases on [-delta/2, +delta/2], symmetric about zero:
// phase[m] = (2(m+1) - M - 1) * delta / (2M). Labels are binary-reflected
// gray codes assigned in ascending phase order, so adjacent symbols differ
// in exactly one bit.
struct Constellation {
    int m_order = 0;
    double delta_deg = 0.0;
    std::vector<double> phases_deg;      // ascending, size M
    std::vector<std::uint32_t> labels;   // gray label of phases_deg[m]

    int bits_per_symbol() const;
    std::string label_string(int index) const;  // MSB-first bit string
};

Constellation build_constellation(int m_order, double delta_deg);

inline std::uint32_t gray_code(std::uint32_t v) { return v ^ (v >> 1); }
std::uint32_t gray_decode(std::uint32_t g);

struct SymbolStream {
    std::vector<int> symbols;                // constellation indices, size N-1
    std::vector<std::uint8_t> source_bits;   // (N-1) * log2(M) bits, MSB-first per symbol
};

// Consecutive log2(M)-bit groups (MSB first) are matched against the gray
// labels; bit count must be exactly (N-1)*log2(M).
SymbolStream encode_bits(std::span<const std::uint8_t> bits, const Constellation& c, int n_tones);

// Cumulative tone phases: phi_1 = 0, phi_n = wrap(phi_{n-1} + phase(s_{n-1})).
PhaseVector phases_from_symbols(const SymbolStream& s, const Constellation& c);
PhaseVector phases_from_symbols(std::span<const int> symbols, const Constellation& c);

}  // namespace mtpsk
