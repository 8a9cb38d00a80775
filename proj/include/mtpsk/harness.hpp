// harness.hpp - end-to-end trial pipeline, impairments, Monte Carlo sweeps
//
// A trial is bits -> waveform -> optional impairments -> rectifier -> demod
// -> metrics. Trials are deterministic in (seed, stream_index) through
// counter-based seed splitting, so sweeps aggregate identically no matter
// how streams are scheduled across threads.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtpsk/constellation.hpp"
#include "mtpsk/freq_plan.hpp"
#include "mtpsk/rectifier.hpp"
#include "mtpsk/waveform.hpp"

namespace mtpsk {

struct Impairments {
    double attenuation_db = 0.0;               // applied to the waveform before the rectifier
    std::optional<double> awgn_snr_db;         // in-band SNR at the rectifier input
    std::optional<double> timing_offset_s;     // deliberate analysis-window offset
};

struct TrialConfig {
    double f_c_hz = 2.45e9;
    int n_tones = 6;
    double gcd_hz = 1e6;
    int r = 0;
    int m_order = 4;
    double delta_deg = 360.0;   // 0 = aligned phases (power reference, no data)
    double p_in_dbm = 0.0;
    double sample_rate_hz = 0.0;  // 0 = smallest power-of-two grid over the alias margin
    double z0_ohm = 50.0;
    RectifierConfig rectifier;
    Impairments impairments;
    int streams = 100;
    std::uint64_t seed = 1;
};

struct TrialReport {
    int stream_index = 0;
    std::vector<std::uint8_t> tx_bits;
    std::vector<std::uint8_t> rx_bits;
    PhaseVector tx_phases_deg;
    std::vector<double> extracted_phases_deg;
    double papr_linear = 0.0;
    double papr_db = 0.0;
    double dc_v = 0.0;
    double pce_pct = 0.0;
    // Two error tallies: nearest-neighbour decisions, and the margin rule
    // where a phase outside every +-delta/2M margin fails the whole symbol.
    std::int64_t bit_errors = 0;
    std::int64_t margin_bit_errors = 0;
    std::int64_t total_bits = 0;
    int erasures = 0;
    int out_of_margin = 0;

    double ber_value() const {
        return total_bits ? static_cast<double>(bit_errors) / static_cast<double>(total_bits) : 0.0;
    }
};

// Runs one stream; deterministic given (cfg.seed, stream_index).
TrialReport run_trial(const TrialConfig& cfg, int stream_index);

// White Gaussian noise scaled so the in-band SNR over the signal bandwidth
// equals snr_db; deterministic per seed.
Waveform add_awgn(const Waveform& w, double snr_db, std::uint64_t seed);

// (N-1) * log2(M) / T_PSK with T_PSK = 1/gcd. Independent of delta.
double throughput_bps(const FrequencyPlan& plan, int m_order);

struct SweepAxis {
    std::string field;            // numeric TrialConfig field name
    std::vector<double> values;
};

struct SweepPoint {
    TrialConfig cfg;
    bool ok = true;
    std::string error;
    double mean_papr_linear = 0.0;
    double mean_papr_db = 0.0;    // 10 log10 of the linear mean
    double mean_pce_pct = 0.0;
    double ber = 0.0;             // pooled over all streams; NaN when delta = 0
    double ber_margin = 0.0;
    std::int64_t erasures = 0;
    double throughput_bps_value = 0.0;
};

struct SweepReport {
    TrialConfig base;
    std::vector<SweepPoint> points;
};

// Cartesian product of the axes (first axis slowest); each point runs
// cfg.streams trials. Point failures are recorded and the sweep continues.
// With parallel = true streams run under OpenMP; results are identical to
// the serial path because aggregation is per-stream-indexed.
SweepReport sweep(const TrialConfig& base, std::span<const SweepAxis> axes, bool parallel = true);

// Fixed columns: n_tones,m_order,delta_deg,p_in_dbm,model,mean_papr_db,
// mean_pce_pct,ber,streams,seed.
void write_sweep_csv(std::ostream& os, const SweepReport& report);
std::string sweep_summary_json(const SweepReport& report);
std::string trial_report_to_json(const TrialReport& report);

// Apply `name = value` to a config; throws config_error for unknown names.
void set_config_field(TrialConfig& cfg, const std::string& name, const std::string& value);

// Key-value text config: one `name = value` per line, `#` comments,
// `sweep.<field> = v1,v2,...` collects sweep axes.
TrialConfig parse_config_text(const std::string& text, std::vector<SweepAxis>* axes = nullptr);
TrialConfig load_config_file(const std::string& path, std::vector<SweepAxis>* axes = nullptr);

}  // namespace mtpsk
