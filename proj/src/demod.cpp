#include "mtpsk/demod.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "mtpsk/common.hpp"
#include "mtpsk/spectrum.hpp"
#include "json.hpp"

namespace mtpsk {

std::vector<double> extract_tone_phases(const BasebandSignal& b, const FrequencyPlan& plan,
                                        const DemodOptions& opt, std::vector<bool>* erased) {
    const std::size_t n = b.samples.size();
    const double bin_hz = b.sample_rate_hz / static_cast<double>(n);
    const double bins_per_unit = plan.gcd_hz / bin_hz;
    if (std::fabs(bins_per_unit - std::round(bins_per_unit)) > 1e-6)
        throw config_error("extract_tone_phases: baseband window is not a whole symbol period");
    const auto spec = real_fft(b.samples);

    std::vector<double> phases(plan.spacings.size());
    if (erased) erased->assign(plan.spacings.size(), false);
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    for (std::size_t i = 0; i < plan.spacings.size(); ++i) {
        const std::size_t m =
            static_cast<std::size_t>(plan.spacings[i] * std::llround(bins_per_unit));
        if (m >= spec.size())
            throw config_error("extract_tone_phases: spacing bin beyond Nyquist");
        const auto c = bin_amplitude(spec, n, m);
        if (std::abs(c) < opt.amplitude_floor_v) {
            if (erased) (*erased)[i] = true;
            phases[i] = 0.0;
            continue;
        }
        double phase = std::arg(c) * rad_to_deg;
        // A window starting at t0 rotates the bin at frequency f by 2 pi f t0.
        phase += 360.0 * static_cast<double>(plan.spacings[i]) * plan.gcd_hz * opt.window_offset_s;
        phases[i] = wrap_deg(phase);
    }
    return phases;
}

std::vector<int> decide_symbols(std::span<const double> phases_deg, const Constellation& c) {
    std::vector<int> out(phases_deg.size());
    for (std::size_t i = 0; i < phases_deg.size(); ++i) {
        int best = 0;
        double best_dist = wrapped_distance_deg(phases_deg[i], c.phases_deg[0]);
        for (int m = 1; m < c.m_order; ++m) {
            const double d = wrapped_distance_deg(phases_deg[i], c.phases_deg[static_cast<std::size_t>(m)]);
            if (d < best_dist) {
                best = m;
                best_dist = d;
            }
        }
        out[i] = best;
    }
    return out;
}

std::vector<std::uint8_t> decode_bits(std::span<const int> symbols, const Constellation& c) {
    const int bps = c.bits_per_symbol();
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * static_cast<std::size_t>(bps));
    for (int s : symbols) {
        const std::uint32_t label = c.labels[static_cast<std::size_t>(s)];
        for (int b = bps - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>(label >> b & 1u));
    }
    return bits;
}

double ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
    if (tx.size() != rx.size()) throw config_error("ber: bit streams differ in length");
    if (tx.empty()) throw config_error("ber: empty bit streams");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i)
        if ((tx[i] & 1) != (rx[i] & 1)) ++errors;
    return static_cast<double>(errors) / static_cast<double>(tx.size());
}

int count_out_of_margin(std::span<const double> phases_deg, const Constellation& c) {
    const double margin = c.delta_deg / (2.0 * c.m_order);
    int out = 0;
    for (double p : phases_deg) {
        bool inside = false;
        for (double cp : c.phases_deg)
            if (wrapped_distance_deg(p, cp) <= margin) {
                inside = true;
                break;
            }
        if (!inside) ++out;
    }
    return out;
}

DemodReport demodulate(const BasebandSignal& b, const FrequencyPlan& plan,
                       const Constellation& c, const DemodOptions& opt) {
    DemodReport report;
    std::vector<bool> erased;
    report.extracted_phases_deg = extract_tone_phases(b, plan, opt, &erased);
    report.erased = erased;
    report.decided_symbols = decide_symbols(report.extracted_phases_deg, c);
    for (std::size_t i = 0; i < erased.size(); ++i)
        if (erased[i]) report.decided_symbols[i] = 0;
    report.bits = decode_bits(report.decided_symbols, c);
    report.per_symbol_phase_error_deg.resize(report.decided_symbols.size());
    for (std::size_t i = 0; i < report.decided_symbols.size(); ++i)
        report.per_symbol_phase_error_deg[i] = wrapped_distance_deg(
            report.extracted_phases_deg[i],
            c.phases_deg[static_cast<std::size_t>(report.decided_symbols[i])]);
    report.out_of_margin = count_out_of_margin(report.extracted_phases_deg, c);
    return report;
}

std::string demod_report_to_json(const DemodReport& report) {
    nlohmann::json j;
    j["extracted_phases_deg"] = report.extracted_phases_deg;
    j["erased"] = report.erased;
    j["decided_symbols"] = report.decided_symbols;
    std::string bits;
    bits.reserve(report.bits.size());
    for (auto b : report.bits) bits.push_back(b ? '1' : '0');
    j["bits"] = bits;
    j["per_symbol_phase_error_deg"] = report.per_symbol_phase_error_deg;
    j["out_of_margin"] = report.out_of_margin;
    return j.dump(2);
}

void write_scatter_csv(std::ostream& os, std::span<const double> tx_phases_deg,
                       std::span<const double> extracted_phases_deg) {
    if (tx_phases_deg.size() != extracted_phases_deg.size())
        throw config_error("write_scatter_csv: phase sequences differ in length");
    os << "tx_phase_deg,extracted_phase_deg\n";
    char row[64];
    for (std::size_t i = 0; i < tx_phases_deg.size(); ++i) {
        std::snprintf(row, sizeof(row), "%.9g,%.9g\n", tx_phases_deg[i], extracted_phases_deg[i]);
        os << row;
    }
}

}  // namespace mtpsk
