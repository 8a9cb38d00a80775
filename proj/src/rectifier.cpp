#include "mtpsk/rectifier.hpp"

#include <cmath>
#include <string>

#include "mtpsk/common.hpp"
#include "mtpsk/spectrum.hpp"
#include "json.hpp"

namespace mtpsk {

namespace {

void check_cutoff(const Waveform& w, const RectifierConfig& cfg) {
    const double bw = w.plan.bw_hz();
    if (!(cfg.f_cutoff_hz > bw))
        throw config_error("rectifier: low-pass cutoff must exceed the plan bandwidth");
    if (!(cfg.f_cutoff_hz < w.plan.f_c_hz - bw / 2.0))
        throw config_error("rectifier: low-pass cutoff must stay below the RF tones");
}

std::size_t baseband_samples(const Waveform& w) {
    return static_cast<std::size_t>(std::llround(w.sample_rate_hz / w.plan.gcd_hz));
}

// Brick-wall low-pass over one whole baseband period: bins are exact
// multiples of the gcd, so zeroing above the cutoff needs no window.
BasebandSignal filter_period(std::vector<double> period_samples, const Waveform& w,
                             const RectifierConfig& cfg) {
    const std::size_t n = period_samples.size();
    auto spec = real_fft(period_samples);
    const double bin_hz = w.sample_rate_hz / static_cast<double>(n);
    for (std::size_t m = 0; m < spec.size(); ++m)
        if (static_cast<double>(m) * bin_hz > cfg.f_cutoff_hz) spec[m] = {0.0, 0.0};

    BasebandSignal b;
    b.dc_v = spec[0].real() / static_cast<double>(n);
    b.samples = real_ifft(spec, n);
    b.sample_rate_hz = w.sample_rate_hz;
    b.period_s = static_cast<double>(n) / w.sample_rate_hz;
    return b;
}

}  // namespace

BasebandSignal rectify_square_law(const Waveform& w, const RectifierConfig& cfg) {
    if (cfg.model != RectifierModel::square_law)
        throw config_error("rectify_square_law: config selects a different model");
    check_cutoff(w, cfg);
    const std::size_t n = baseband_samples(w);
    if (w.samples.size() < n) throw config_error("rectify_square_law: waveform too short");

    // x^2 is 1/gcd-periodic even when x itself is only 2/gcd-periodic,
    // so one baseband period of samples is enough.
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = cfg.k2_per_v * w.samples[k] * w.samples[k];
    return filter_period(std::move(y), w, cfg);
}

BasebandSignal rectify_diode(const Waveform& w, const RectifierConfig& cfg) {
    if (cfg.model != RectifierModel::diode_ode)
        throw config_error("rectify_diode: config selects a different model");
    check_cutoff(w, cfg);
    const std::size_t n = baseband_samples(w);
    const std::size_t n_wave = w.samples.size();
    if (n_wave < n) throw config_error("rectify_diode: waveform too short");

    // Settle for max(5 R C, one waveform period), rounded up to whole
    // waveform periods so the analysis window stays aligned to the waveform
    // time origin (the t0 = 0 window contract).
    const double settle_s = std::max(5.0 * cfg.r_load_ohm * cfg.c_out_f, w.period_s);
    const std::size_t settle_samples =
        static_cast<std::size_t>(std::ceil(settle_s / w.period_s)) * n_wave;

    DiodeIntegrator integ(cfg, w.sample_rate_hz);
    std::vector<double> y(n);
    for (std::size_t g = 0; g < settle_samples + n; ++g) {
        const double v_now = w.samples[g % n_wave];
        const double v_next = w.samples[(g + 1) % n_wave];
        const double v_out = integ.step(v_now, v_next);
        if (g >= settle_samples) y[g - settle_samples] = v_out;
    }
    return filter_period(std::move(y), w, cfg);
}

BasebandSignal rectify(const Waveform& w, const RectifierConfig& cfg) {
    return cfg.model == RectifierModel::square_law ? rectify_square_law(w, cfg)
                                                   : rectify_diode(w, cfg);
}

double pce_percent(const BasebandSignal& b, const RectifierConfig& cfg, double p_in_dbm) {
    const double p_in_w = dbm_to_watts(p_in_dbm);
    if (!(p_in_w > 0.0)) throw config_error("pce_percent: input power must be positive");
    return (b.dc_v * b.dc_v / cfg.r_load_ohm) / p_in_w * 100.0;
}

DiodeIntegrator::DiodeIntegrator(const RectifierConfig& cfg, double sample_rate_hz)
    : diode_(cfg.diode), r_load_(cfg.r_load_ohm), c_out_(cfg.c_out_f),
      dt_(1.0 / sample_rate_hz) {
    if (!(r_load_ > 0.0) || !(c_out_ > 0.0) || !(sample_rate_hz > 0.0))
        throw config_error("DiodeIntegrator: load, capacitance and sample rate must be positive");
}

double DiodeIntegrator::diode_current(double v) const {
    // expm1 keeps precision near zero; the argument clamp keeps the Newton
    // iterates finite during the turn-on transient.
    const double arg = std::min(v / (diode_.n_ideality * diode_.v_t_v), 120.0);
    return diode_.i_s_a * std::expm1(arg);
}

double DiodeIntegrator::diode_conductance(double v) const {
    const double scale = diode_.n_ideality * diode_.v_t_v;
    const double arg = std::min(v / scale, 120.0);
    return diode_.i_s_a / scale * std::exp(arg);
}

bool DiodeIntegrator::solve_implicit(double rhs_const, double weight, double v_in_next,
                                     int max_iters, double* out) {
    // Newton on g(V) = V - rhs_const - weight * dt * f(V) with the update
    // clamped so the forward-diode exponential cannot launch the iterate.
    constexpr double max_step_v = 0.1;
    double v = v_out_;
    for (int it = 0; it < max_iters; ++it) {
        const double f = (diode_current(v_in_next - v) - v / r_load_) / c_out_;
        const double g = v - rhs_const - weight * dt_ * f;
        const double dg =
            1.0 + weight * dt_ * (diode_conductance(v_in_next - v) + 1.0 / r_load_) / c_out_;
        double dv = -g / dg;
        if (!std::isfinite(dv) || !std::isfinite(v))
            throw integration_error("diode integration: non-finite state at step " +
                                    std::to_string(steps_));
        if (dv > max_step_v) dv = max_step_v;
        if (dv < -max_step_v) dv = -max_step_v;
        v += dv;
        if (std::fabs(dv) <= 1e-12 * (1.0 + std::fabs(v))) {
            *out = v;
            return true;
        }
    }
    return false;
}

double DiodeIntegrator::step(double v_in_prev, double v_in_next) {
    // Explicit stepping is unusable here: the forward diode conductance makes
    // the node time constant C/g_d orders of magnitude shorter than any
    // affordable sample interval. Trapezoidal + Newton handles every
    // consistent state; an inconsistent one (first step under drive) has no
    // reachable trapezoidal solution because the explicit half carries the
    // unbounded turn-on current, so backward Euler absorbs that boundary
    // layer instead.
    const double f_prev = (diode_current(v_in_prev - v_out_) - v_out_ / r_load_) / c_out_;
    double v = v_out_;
    if (!solve_implicit(v_out_ + 0.5 * dt_ * f_prev, 0.5, v_in_next, 60, &v) &&
        !solve_implicit(v_out_, 1.0, v_in_next, 300, &v))
        throw integration_error("diode integration: no convergence at step " +
                                std::to_string(steps_));
    v_out_ = v;
    ++steps_;
    return v_out_;
}

std::string rectifier_config_to_json(const RectifierConfig& cfg) {
    nlohmann::json j;
    j["model"] = cfg.model == RectifierModel::square_law ? "square_law" : "diode_ode";
    j["k2_per_v"] = cfg.k2_per_v;
    j["diode"] = {{"i_s_a", cfg.diode.i_s_a},
                  {"n_ideality", cfg.diode.n_ideality},
                  {"v_t_v", cfg.diode.v_t_v}};
    j["c_out_f"] = cfg.c_out_f;
    j["r_load_ohm"] = cfg.r_load_ohm;
    j["f_cutoff_hz"] = cfg.f_cutoff_hz;
    return j.dump(2);
}

RectifierConfig rectifier_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RectifierConfig cfg;
    const std::string model = j.value("model", "square_law");
    if (model == "square_law") cfg.model = RectifierModel::square_law;
    else if (model == "diode_ode") cfg.model = RectifierModel::diode_ode;
    else throw config_error("rectifier config: unknown model '" + model + "'");
    cfg.k2_per_v = j.value("k2_per_v", cfg.k2_per_v);
    if (j.contains("diode")) {
        const auto& d = j.at("diode");
        cfg.diode.i_s_a = d.value("i_s_a", cfg.diode.i_s_a);
        cfg.diode.n_ideality = d.value("n_ideality", cfg.diode.n_ideality);
        cfg.diode.v_t_v = d.value("v_t_v", cfg.diode.v_t_v);
    }
    cfg.c_out_f = j.value("c_out_f", cfg.c_out_f);
    cfg.r_load_ohm = j.value("r_load_ohm", cfg.r_load_ohm);
    cfg.f_cutoff_hz = j.value("f_cutoff_hz", cfg.f_cutoff_hz);
    return cfg;
}

}  // namespace mtpsk
