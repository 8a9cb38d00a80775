#include "mtpsk/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "mtpsk/common.hpp"
#include "mtpsk/demod.hpp"
#include "json.hpp"

namespace mtpsk {

namespace {

std::string format_double(double v, int precision = 9) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

const char* model_name(RectifierModel m) {
    return m == RectifierModel::square_law ? "square_law" : "diode_ode";
}

}  // namespace

TrialReport run_trial(const TrialConfig& cfg, int stream_index) {
    if (cfg.delta_deg < 0.0 || cfg.delta_deg > 360.0)
        throw config_error("run_trial: delta must lie in [0, 360]");

    const FrequencyPlan plan = plan_frequencies(cfg.f_c_hz, cfg.n_tones, cfg.gcd_hz, cfg.r);
    const double fs = cfg.sample_rate_hz > 0.0 ? cfg.sample_rate_hz : default_sample_rate(plan);
    const std::uint64_t stream_seed = split_seed(cfg.seed, static_cast<std::uint64_t>(stream_index));
    const std::uint64_t bits_seed = split_seed(stream_seed, 0);
    const std::uint64_t noise_seed = split_seed(stream_seed, 1);

    TrialReport report;
    report.stream_index = stream_index;

    const bool modulated = cfg.delta_deg > 0.0;
    Constellation c;
    if (modulated) {
        c = build_constellation(cfg.m_order, cfg.delta_deg);
        auto eng = make_engine(bits_seed);
        const std::size_t n_bits =
            static_cast<std::size_t>(cfg.n_tones - 1) * static_cast<std::size_t>(c.bits_per_symbol());
        report.tx_bits.resize(n_bits);
        for (auto& b : report.tx_bits) b = static_cast<std::uint8_t>(random_bit(eng));
        const SymbolStream stream = encode_bits(report.tx_bits, c, cfg.n_tones);
        report.tx_phases_deg = phases_from_symbols(stream, c);
    } else {
        report.tx_phases_deg.assign(static_cast<std::size_t>(cfg.n_tones), 0.0);
    }

    Waveform w = synthesize(plan, report.tx_phases_deg, cfg.p_in_dbm, fs, cfg.z0_ohm);
    report.papr_linear = papr(w);
    report.papr_db = linear_to_db(report.papr_linear);

    double p_eff_dbm = cfg.p_in_dbm;
    if (cfg.impairments.attenuation_db != 0.0) {
        if (cfg.impairments.attenuation_db < 0.0)
            throw config_error("run_trial: attenuation must be >= 0 dB");
        const double scale = std::pow(10.0, -cfg.impairments.attenuation_db / 20.0);
        for (double& v : w.samples) v *= scale;
        p_eff_dbm -= cfg.impairments.attenuation_db;
    }
    if (cfg.impairments.awgn_snr_db) w = add_awgn(w, *cfg.impairments.awgn_snr_db, noise_seed);

    const BasebandSignal baseband = rectify(w, cfg.rectifier);
    report.dc_v = baseband.dc_v;
    report.pce_pct = pce_percent(baseband, cfg.rectifier, p_eff_dbm);

    if (modulated) {
        DemodOptions opt;
        if (cfg.impairments.timing_offset_s) opt.window_offset_s = *cfg.impairments.timing_offset_s;
        const DemodReport demod = demodulate(baseband, plan, c, opt);
        report.extracted_phases_deg = demod.extracted_phases_deg;
        report.rx_bits = demod.bits;
        report.out_of_margin = demod.out_of_margin;
        for (bool e : demod.erased) report.erasures += e ? 1 : 0;

        const int bps = c.bits_per_symbol();
        report.total_bits = static_cast<std::int64_t>(report.tx_bits.size());
        for (std::size_t s = 0; s < demod.decided_symbols.size(); ++s) {
            const bool in_margin =
                wrapped_distance_deg(demod.extracted_phases_deg[s],
                                     c.phases_deg[static_cast<std::size_t>(demod.decided_symbols[s])]) <=
                c.delta_deg / (2.0 * c.m_order);
            std::int64_t symbol_errors = 0;
            for (int b = 0; b < bps; ++b) {
                const std::size_t i = s * static_cast<std::size_t>(bps) + static_cast<std::size_t>(b);
                if (report.tx_bits[i] != report.rx_bits[i]) ++symbol_errors;
            }
            if (demod.erased[s]) {
                // An erased bin carries no phase; the whole symbol counts as lost.
                report.bit_errors += bps;
                report.margin_bit_errors += bps;
            } else {
                report.bit_errors += symbol_errors;
                report.margin_bit_errors += in_margin ? symbol_errors : bps;
            }
        }
    }
    return report;
}

Waveform add_awgn(const Waveform& w, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db)) throw config_error("add_awgn: SNR must be finite");
    double sig_v2 = 0.0;
    for (double v : w.samples) sig_v2 += v * v;
    sig_v2 /= static_cast<double>(w.samples.size());

    // White noise spreads its power uniformly over [0, fs/2]; scale the
    // per-sample variance so the slice falling inside the signal bandwidth
    // carries sig_v2 / snr.
    const double bw = w.plan.bw_hz();
    const double snr_lin = db_to_linear(snr_db);
    const double sigma2 = sig_v2 / snr_lin * (w.sample_rate_hz / 2.0) / bw;

    Waveform out = w;
    auto eng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2));
    for (double& v : out.samples) v += gauss(eng);
    return out;
}

double throughput_bps(const FrequencyPlan& plan, int m_order) {
    if (!is_power_of_two(m_order) || m_order < 2)
        throw config_error("throughput_bps: modulation order must be a power of two >= 2");
    return static_cast<double>(plan.n_tones - 1) * int_log2(m_order) * plan.gcd_hz;
}

namespace {

using FieldSetter = std::function<void(TrialConfig&, double)>;

const std::map<std::string, FieldSetter>& numeric_fields() {
    static const std::map<std::string, FieldSetter> fields = {
        {"f_c_hz", [](TrialConfig& c, double v) { c.f_c_hz = v; }},
        {"n_tones", [](TrialConfig& c, double v) { c.n_tones = static_cast<int>(v); }},
        {"gcd_hz", [](TrialConfig& c, double v) { c.gcd_hz = v; }},
        {"r", [](TrialConfig& c, double v) { c.r = static_cast<int>(v); }},
        {"m_order", [](TrialConfig& c, double v) { c.m_order = static_cast<int>(v); }},
        {"delta_deg", [](TrialConfig& c, double v) { c.delta_deg = v; }},
        {"p_in_dbm", [](TrialConfig& c, double v) { c.p_in_dbm = v; }},
        {"sample_rate_hz", [](TrialConfig& c, double v) { c.sample_rate_hz = v; }},
        {"z0_ohm", [](TrialConfig& c, double v) { c.z0_ohm = v; }},
        {"k2_per_v", [](TrialConfig& c, double v) { c.rectifier.k2_per_v = v; }},
        {"i_s_a", [](TrialConfig& c, double v) { c.rectifier.diode.i_s_a = v; }},
        {"n_ideality", [](TrialConfig& c, double v) { c.rectifier.diode.n_ideality = v; }},
        {"v_t_v", [](TrialConfig& c, double v) { c.rectifier.diode.v_t_v = v; }},
        {"c_out_f", [](TrialConfig& c, double v) { c.rectifier.c_out_f = v; }},
        {"r_load_ohm", [](TrialConfig& c, double v) { c.rectifier.r_load_ohm = v; }},
        {"f_cutoff_hz", [](TrialConfig& c, double v) { c.rectifier.f_cutoff_hz = v; }},
        {"attenuation_db", [](TrialConfig& c, double v) { c.impairments.attenuation_db = v; }},
        {"awgn_snr_db", [](TrialConfig& c, double v) { c.impairments.awgn_snr_db = v; }},
        {"timing_offset_s", [](TrialConfig& c, double v) { c.impairments.timing_offset_s = v; }},
        {"streams", [](TrialConfig& c, double v) { c.streams = static_cast<int>(v); }},
        {"seed", [](TrialConfig& c, double v) { c.seed = static_cast<std::uint64_t>(v); }},
    };
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& name, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for '" + name + "': " + value);
    }
    if (pos != value.size())
        throw config_error("config: bad numeric value for '" + name + "': " + value);
    return v;
}

}  // namespace

void set_config_field(TrialConfig& cfg, const std::string& name, const std::string& value) {
    if (name == "model") {
        if (value == "square_law") cfg.rectifier.model = RectifierModel::square_law;
        else if (value == "diode_ode") cfg.rectifier.model = RectifierModel::diode_ode;
        else throw config_error("config: unknown model '" + value + "'");
        return;
    }
    auto it = numeric_fields().find(name);
    if (it == numeric_fields().end()) throw config_error("config: unknown field '" + name + "'");
    if (value.empty()) return;  // empty value leaves the default (optional impairments stay off)
    it->second(cfg, parse_number(name, value));
}

TrialConfig parse_config_text(const std::string& text, std::vector<SweepAxis>* axes) {
    TrialConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected 'name = value'");
        std::string name = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (name.rfind("sweep.", 0) == 0) {
            const std::string field = name.substr(6);
            if (numeric_fields().find(field) == numeric_fields().end())
                throw config_error("config: unknown sweep field '" + field + "'");
            SweepAxis axis;
            axis.field = field;
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = trim(item);
                if (!item.empty()) axis.values.push_back(parse_number(field, item));
            }
            if (axis.values.empty())
                throw config_error("config: sweep axis '" + field + "' has no values");
            if (axes) axes->push_back(std::move(axis));
            continue;
        }
        set_config_field(cfg, name, value);
    }
    return cfg;
}

TrialConfig load_config_file(const std::string& path, std::vector<SweepAxis>* axes) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), axes);
}

namespace {

SweepPoint run_point(const TrialConfig& cfg, bool parallel) {
    SweepPoint point;
    point.cfg = cfg;
    std::vector<TrialReport> reports(static_cast<std::size_t>(cfg.streams));
    std::string first_error;

    // Per-stream seeds are counter-based, so scheduling order cannot change
    // any result; aggregation below walks streams in index order.
    #pragma omp parallel for schedule(dynamic) if (parallel)
    for (int s = 0; s < cfg.streams; ++s) {
        try {
            reports[static_cast<std::size_t>(s)] = run_trial(cfg, s);
        } catch (const std::exception& e) {
            #pragma omp critical
            if (first_error.empty())
                first_error = "stream " + std::to_string(s) + ": " + e.what();
        }
    }
    if (!first_error.empty()) {
        point.ok = false;
        point.error = first_error;
        return point;
    }

    double papr_acc = 0.0;
    double pce_acc = 0.0;
    std::int64_t bit_errors = 0;
    std::int64_t margin_errors = 0;
    std::int64_t total_bits = 0;
    for (const TrialReport& t : reports) {
        papr_acc += t.papr_linear;
        pce_acc += t.pce_pct;
        bit_errors += t.bit_errors;
        margin_errors += t.margin_bit_errors;
        total_bits += t.total_bits;
        point.erasures += t.erasures;
    }
    point.mean_papr_linear = papr_acc / cfg.streams;
    point.mean_papr_db = linear_to_db(point.mean_papr_linear);
    point.mean_pce_pct = pce_acc / cfg.streams;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    point.ber = total_bits ? static_cast<double>(bit_errors) / static_cast<double>(total_bits) : nan;
    point.ber_margin =
        total_bits ? static_cast<double>(margin_errors) / static_cast<double>(total_bits) : nan;
    const FrequencyPlan plan = plan_frequencies(cfg.f_c_hz, cfg.n_tones, cfg.gcd_hz, cfg.r);
    point.throughput_bps_value = cfg.delta_deg > 0.0 ? throughput_bps(plan, cfg.m_order) : 0.0;
    return point;
}

void expand_grid(std::span<const SweepAxis> axes, std::size_t axis, TrialConfig current,
                 std::vector<TrialConfig>& out) {
    if (axis == axes.size()) {
        out.push_back(current);
        return;
    }
    for (double v : axes[axis].values) {
        TrialConfig next = current;
        set_config_field(next, axes[axis].field, format_double(v, 17));
        expand_grid(axes, axis + 1, next, out);
    }
}

}  // namespace

SweepReport sweep(const TrialConfig& base, std::span<const SweepAxis> axes, bool parallel) {
    if (base.streams < 1) throw config_error("sweep: need at least one stream");
    SweepReport report;
    report.base = base;
    std::vector<TrialConfig> grid;
    expand_grid(axes, 0, base, grid);
    if (grid.empty()) throw config_error("sweep: empty grid");
    for (const TrialConfig& cfg : grid) report.points.push_back(run_point(cfg, parallel));
    return report;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
    os << "n_tones,m_order,delta_deg,p_in_dbm,model,mean_papr_db,mean_pce_pct,ber,streams,seed\n";
    for (const SweepPoint& p : report.points) {
        os << p.cfg.n_tones << ',' << p.cfg.m_order << ',' << format_double(p.cfg.delta_deg) << ','
           << format_double(p.cfg.p_in_dbm) << ',' << model_name(p.cfg.rectifier.model) << ',';
        if (p.ok)
            os << format_double(p.mean_papr_db) << ',' << format_double(p.mean_pce_pct) << ','
               << format_double(p.ber);
        else
            os << "nan,nan,nan";
        os << ',' << p.cfg.streams << ',' << p.cfg.seed << '\n';
    }
}

namespace {

nlohmann::json point_json(const SweepPoint& p) {
    nlohmann::json j;
    j["n_tones"] = p.cfg.n_tones;
    j["m_order"] = p.cfg.m_order;
    j["delta_deg"] = p.cfg.delta_deg;
    j["p_in_dbm"] = p.cfg.p_in_dbm;
    j["model"] = model_name(p.cfg.rectifier.model);
    j["streams"] = p.cfg.streams;
    j["seed"] = p.cfg.seed;
    j["ok"] = p.ok;
    if (!p.ok) {
        j["error"] = p.error;
        return j;
    }
    j["mean_papr_linear"] = p.mean_papr_linear;
    j["mean_papr_db"] = p.mean_papr_db;
    j["mean_pce_pct"] = p.mean_pce_pct;
    if (std::isnan(p.ber)) {
        j["ber"] = nullptr;
        j["ber_margin"] = nullptr;
    } else {
        j["ber"] = p.ber;
        j["ber_margin"] = p.ber_margin;
    }
    j["erasures"] = p.erasures;
    j["throughput_bps"] = p.throughput_bps_value;
    return j;
}

}  // namespace

std::string sweep_summary_json(const SweepReport& report) {
    nlohmann::json j;
    j["base"] = {{"f_c_hz", report.base.f_c_hz},
                 {"gcd_hz", report.base.gcd_hz},
                 {"r", report.base.r},
                 {"p_in_dbm", report.base.p_in_dbm},
                 {"model", model_name(report.base.rectifier.model)},
                 {"streams", report.base.streams},
                 {"seed", report.base.seed}};
    j["points"] = nlohmann::json::array();
    for (const SweepPoint& p : report.points) j["points"].push_back(point_json(p));
    return j.dump(2);
}

std::string trial_report_to_json(const TrialReport& report) {
    nlohmann::json j;
    j["stream_index"] = report.stream_index;
    std::string tx, rx;
    for (auto b : report.tx_bits) tx.push_back(b ? '1' : '0');
    for (auto b : report.rx_bits) rx.push_back(b ? '1' : '0');
    j["tx_bits"] = tx;
    j["rx_bits"] = rx;
    j["tx_phases_deg"] = report.tx_phases_deg;
    j["extracted_phases_deg"] = report.extracted_phases_deg;
    j["papr_linear"] = report.papr_linear;
    j["papr_db"] = report.papr_db;
    j["dc_v"] = report.dc_v;
    j["pce_pct"] = report.pce_pct;
    j["bit_errors"] = report.bit_errors;
    j["margin_bit_errors"] = report.margin_bit_errors;
    j["total_bits"] = report.total_bits;
    j["ber"] = report.ber_value();
    j["erasures"] = report.erasures;
    j["out_of_margin"] = report.out_of_margin;
    return j.dump(2);
}

}  // namespace mtpsk
