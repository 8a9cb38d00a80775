#include "mtpsk/constellation.hpp"

#include "mtpsk/common.hpp"

namespace mtpsk {

int Constellation::bits_per_symbol() const { return int_log2(m_order); }

std::string Constellation::label_string(int index) const {
    const int bits = bits_per_symbol();
    std::string out(static_cast<std::size_t>(bits), '0');
    for (int b = 0; b < bits; ++b)
        if (labels[static_cast<std::size_t>(index)] >> (bits - 1 - b) & 1u)
            out[static_cast<std::size_t>(b)] = '1';
    return out;
}

Constellation build_constellation(int m_order, double delta_deg) {
    if (m_order < 2 || !is_power_of_two(m_order))
        throw config_error("build_constellation: modulation order must be a power of two >= 2");
    if (!(delta_deg > 0.0) || delta_deg > 360.0)
        throw config_error("build_constellation: phase range must lie in (0, 360]");

    Constellation c;
    c.m_order = m_order;
    c.delta_deg = delta_deg;
    c.phases_deg.resize(static_cast<std::size_t>(m_order));
    c.labels.resize(static_cast<std::size_t>(m_order));
    for (int m = 0; m < m_order; ++m) {
        c.phases_deg[static_cast<std::size_t>(m)] =
            static_cast<double>(2 * (m + 1) - m_order - 1) * delta_deg / (2.0 * m_order);
        c.labels[static_cast<std::size_t>(m)] = gray_code(static_cast<std::uint32_t>(m));
    }
    return c;
}

std::uint32_t gray_decode(std::uint32_t g) {
    std::uint32_t v = g;
    for (std::uint32_t mask = v >> 1; mask; mask >>= 1) v ^= mask;
    return v;
}

SymbolStream encode_bits(std::span<const std::uint8_t> bits, const Constellation& c, int n_tones) {
    const int bps = c.bits_per_symbol();
    const std::size_t expected = static_cast<std::size_t>(n_tones - 1) * static_cast<std::size_t>(bps);
    if (bits.size() != expected)
        throw config_error("encode_bits: expected " + std::to_string(expected) + " bits, got " +
                           std::to_string(bits.size()));

    SymbolStream s;
    s.source_bits.assign(bits.begin(), bits.end());
    s.symbols.resize(static_cast<std::size_t>(n_tones - 1));
    for (int i = 0; i < n_tones - 1; ++i) {
        std::uint32_t group = 0;
        for (int b = 0; b < bps; ++b)
            group = group << 1 | (bits[static_cast<std::size_t>(i * bps + b)] & 1u);
        s.symbols[static_cast<std::size_t>(i)] = static_cast<int>(gray_decode(group));
    }
    return s;
}

PhaseVector phases_from_symbols(std::span<const int> symbols, const Constellation& c) {
    PhaseVector phi(symbols.size() + 1);
    phi[0] = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        phi[i + 1] = wrap_deg(phi[i] + c.phases_deg[static_cast<std::size_t>(symbols[i])]);
    return phi;
}

PhaseVector phases_from_symbols(const SymbolStream& s, const Constellation& c) {
    return phases_from_symbols(std::span<const int>(s.symbols), c);
}

}  // namespace mtpsk
