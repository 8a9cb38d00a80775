// rectifier.hpp - behavioral rectifier models producing DC plus difference tones
//
// Two models behind one contract: square_law is the analytic reference whose
// baseband is exactly DC plus the pairwise difference tones; diode_ode is a
// single exponential diode charging an RC load, which adds the higher-order
// distortion responsible for phase errors at high drive. Neither models the
// fabricated matching network or board parasitics.

#pragma once

#include <string>
#include <vector>

#include "mtpsk/waveform.hpp"

namespace mtpsk {

enum class RectifierModel { square_law, diode_ode };

struct DiodeParams {
    double i_s_a = 5e-6;        // saturation current
    double n_ideality = 1.05;
    double v_t_v = 0.02585;     // thermal voltage
};

struct RectifierConfig {
    RectifierModel model = RectifierModel::square_law;
    double k2_per_v = 1.0;      // square-law coefficient
    DiodeParams diode;
    double c_out_f = 0.1e-12;
    double r_load_ohm = 4400.0;
    double f_cutoff_hz = 100e6;  // low-pass cutoff; must pass all IM2 bins and
                                 // reject all RF content for the plan in use
};

std::string rectifier_config_to_json(const RectifierConfig& cfg);
RectifierConfig rectifier_config_from_json(const std::string& text);

// One baseband period (1/gcd) of the rectified signal after the ideal
// brick-wall low-pass; spectral content above f_cutoff is exactly zeroed.
struct BasebandSignal {
    std::vector<double> samples;   // volts
    double sample_rate_hz = 0.0;
    double period_s = 0.0;         // 1/gcd
    double dc_v = 0.0;             // mean over the analyzed whole periods
};

// y = k2 * x^2, brick-wall filtered on the whole-period transform. Output is
// exactly DC plus the pairwise difference tones with amplitude k2*A^2 and
// phase phi_j - phi_i per pair.
BasebandSignal rectify_square_law(const Waveform& w, const RectifierConfig& cfg);

// Integrates dV/dt = (I_d(v_in - V) - V/R) / C through the settled state,
// discarding max(5 R C, one waveform period) rounded up to whole baseband
// periods, then brick-wall filters the retained period.
BasebandSignal rectify_diode(const Waveform& w, const RectifierConfig& cfg);

BasebandSignal rectify(const Waveform& w, const RectifierConfig& cfg);

// PCE in percent: (dc^2 / r_load) / P_in * 100.
double pce_percent(const BasebandSignal& b, const RectifierConfig& cfg, double p_in_dbm);

// Fixed-step trapezoidal integrator for the diode/RC node, one sample per
// step, Newton-solved with junction-voltage limiting. Exposed so tests can
// drive transients directly.
class DiodeIntegrator {
public:
    DiodeIntegrator(const RectifierConfig& cfg, double sample_rate_hz);

    // Advance one sample interval with the input endpoints v_in(t_k), v_in(t_{k+1}).
    double step(double v_in_prev, double v_in_next);

    double state() const { return v_out_; }
    void set_state(double v) { v_out_ = v; }
    std::uint64_t steps_taken() const { return steps_; }

private:
    double diode_current(double v) const;
    double diode_conductance(double v) const;

    DiodeParams diode_;
    double r_load_;
    double c_out_;
    double dt_;
    double v_out_ = 0.0;
    std::uint64_t steps_ = 0;
};

}  // namespace mtpsk
