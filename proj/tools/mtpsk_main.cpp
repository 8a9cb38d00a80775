// mtpsk_main.cpp - command line front end
//
// Subcommands: plan, modulate, simulate, sweep, papr, phase-pdf.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mtpsk/common.hpp"
#include "mtpsk/demod.hpp"
#include "mtpsk/harness.hpp"
#include "mtpsk/phase_stats.hpp"
#include "mtpsk/signal_io.hpp"
#include "mtpsk/spectrum.hpp"
#include "mtpsk/waveform.hpp"

namespace fs = std::filesystem;
using namespace mtpsk;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
};

TrialConfig make_config(const GlobalOptions& global, std::vector<SweepAxis>* axes = nullptr) {
    TrialConfig cfg;
    if (!global.config_path.empty()) cfg = load_config_file(global.config_path, axes);
    if (global.seed) cfg.seed = *global.seed;
    return cfg;
}

std::ofstream open_out(const GlobalOptions& global, const std::string& name) {
    fs::create_directories(global.out_dir);
    const fs::path path = fs::path(global.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + path.string());
    std::cerr << "writing " << path.string() << "\n";
    return out;
}

void add_plan_flags(CLI::App* cmd, TrialConfig& cfg) {
    cmd->add_option("--fc", cfg.f_c_hz, "carrier frequency in Hz");
    cmd->add_option("--n", cfg.n_tones, "number of tones");
    cmd->add_option("--gcd", cfg.gcd_hz, "base spacing unit in Hz");
    cmd->add_option("--r", cfg.r, "bandwidth spreading factor");
}

void add_modem_flags(CLI::App* cmd, TrialConfig& cfg) {
    cmd->add_option("--m", cfg.m_order, "modulation order (power of two)");
    cmd->add_option("--delta", cfg.delta_deg, "symbol phase range in degrees (0 = aligned)");
    cmd->add_option("--pin", cfg.p_in_dbm, "input power in dBm");
    cmd->add_option("--fs", cfg.sample_rate_hz, "sample rate in Hz (0 = automatic)");
}

std::vector<std::uint8_t> parse_bit_string(const std::string& text) {
    std::vector<std::uint8_t> bits;
    for (char ch : text) {
        if (ch == '0') bits.push_back(0);
        else if (ch == '1') bits.push_back(1);
        else if (ch != ' ' && ch != ',')
            throw config_error(std::string("bad bit character '") + ch + "'");
    }
    return bits;
}

int run_plan(const GlobalOptions& global, const TrialConfig& cfg, bool to_file) {
    const FrequencyPlan plan = plan_frequencies(cfg.f_c_hz, cfg.n_tones, cfg.gcd_hz, cfg.r);
    const std::string json = plan_to_json(plan);
    if (to_file) open_out(global, "plan.json") << json << "\n";
    else std::cout << json << "\n";
    return 0;
}

int run_modulate(const GlobalOptions& global, TrialConfig cfg, const std::string& bit_text) {
    const FrequencyPlan plan = plan_frequencies(cfg.f_c_hz, cfg.n_tones, cfg.gcd_hz, cfg.r);
    const double fs = cfg.sample_rate_hz > 0.0 ? cfg.sample_rate_hz : default_sample_rate(plan);

    PhaseVector phases;
    std::vector<std::uint8_t> bits;
    if (cfg.delta_deg > 0.0) {
        const Constellation c = build_constellation(cfg.m_order, cfg.delta_deg);
        const std::size_t n_bits =
            static_cast<std::size_t>(cfg.n_tones - 1) * static_cast<std::size_t>(c.bits_per_symbol());
        if (!bit_text.empty()) {
            bits = parse_bit_string(bit_text);
        } else {
            auto eng = make_engine(split_seed(cfg.seed, 0));
            bits.resize(n_bits);
            for (auto& b : bits) b = static_cast<std::uint8_t>(random_bit(eng));
        }
        phases = phases_from_symbols(encode_bits(bits, c, cfg.n_tones), c);
    } else {
        phases.assign(static_cast<std::size_t>(cfg.n_tones), 0.0);
    }

    const Waveform w = synthesize(plan, phases, cfg.p_in_dbm, fs, cfg.z0_ohm);
    SampledSignal s;
    s.samples = w.samples;
    s.sample_rate_hz = w.sample_rate_hz;
    s.period_s = w.period_s;
    s.z0_ohm = w.z0_ohm;
    fs::create_directories(global.out_dir);
    const fs::path path = fs::path(global.out_dir) / "waveform.bin";
    write_signal(path.string(), s);
    std::cerr << "writing " << path.string() << "\n";

    std::string bit_str;
    for (auto b : bits) bit_str.push_back(b ? '1' : '0');
    std::cout << "{\"bits\":\"" << bit_str << "\",\"papr_db\":" << linear_to_db(papr(w))
              << ",\"n_samples\":" << w.samples.size() << "}\n";
    return 0;
}

int run_simulate(const GlobalOptions& global, const TrialConfig& cfg, int stream_index,
                 bool to_file) {
    const TrialReport report = run_trial(cfg, stream_index);
    const std::string json = trial_report_to_json(report);
    if (to_file) open_out(global, "trial.json") << json << "\n";
    else std::cout << json << "\n";
    return 0;
}

int run_sweep_cmd(const GlobalOptions& global, const TrialConfig& cfg,
                  const std::vector<SweepAxis>& axes, bool serial) {
    const SweepReport report = sweep(cfg, axes, !serial);
    auto csv = open_out(global, "sweep.csv");
    write_sweep_csv(csv, report);
    open_out(global, "summary.json") << sweep_summary_json(report) << "\n";
    int failed = 0;
    for (const auto& p : report.points) failed += p.ok ? 0 : 1;
    if (failed) std::cerr << failed << " of " << report.points.size() << " points failed\n";
    return failed ? 1 : 0;
}

int run_papr_table(const GlobalOptions& global, TrialConfig cfg, std::vector<int> tone_counts,
                   std::vector<double> deltas, int streams) {
    if (tone_counts.empty()) tone_counts = {2, 4, 6, 8, 10, 12, 14, 16};
    if (deltas.empty()) deltas = {0.0, 90.0, 180.0, 360.0};
    cfg.streams = streams;

    std::vector<std::vector<double>> table(tone_counts.size(),
                                           std::vector<double>(deltas.size(), 0.0));
    for (std::size_t i = 0; i < tone_counts.size(); ++i) {
        TrialConfig point = cfg;
        point.n_tones = tone_counts[i];
        std::vector<SweepAxis> axes = {{"delta_deg", deltas}};
        const SweepReport report = sweep(point, axes, true);
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            if (!report.points[j].ok)
                throw config_error("papr: point failed: " + report.points[j].error);
            table[i][j] = report.points[j].mean_papr_db;
        }
    }

    if (global.format == "csv") {
        auto out = open_out(global, "papr.csv");
        out << "n_tones";
        for (double d : deltas) out << ",delta_" << d;
        out << "\n";
        for (std::size_t i = 0; i < tone_counts.size(); ++i) {
            out << tone_counts[i];
            for (double v : table[i]) out << "," << v;
            out << "\n";
        }
    } else {
        std::printf("mean PAPR (dB) over %d streams\n%8s", streams, "N");
        for (double d : deltas) std::printf("  delta=%-6g", d);
        std::printf("\n");
        for (std::size_t i = 0; i < tone_counts.size(); ++i) {
            std::printf("%8d", tone_counts[i]);
            for (double v : table[i]) std::printf("  %-12.3f", v);
            std::printf("\n");
        }
    }
    return 0;
}

int run_phase_pdf(const GlobalOptions& global, const TrialConfig& cfg, int tone_index,
                  std::uint64_t trials, double step_deg) {
    {
        auto out = open_out(global, "phase_pdf_analytic.csv");
        write_density_csv(out, tone_index, cfg.delta_deg, step_deg);
    }
    {
        const PhaseHistogram h =
            empirical_phase_histogram(tone_index, cfg.m_order, cfg.delta_deg, trials, cfg.seed);
        auto out = open_out(global, "phase_pdf_empirical.csv");
        write_histogram_csv(out, h);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multitone PSK SWIPT waveform simulator"};
    app.require_subcommand(1);

    GlobalOptions global;
    std::uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "root seed override");
    app.add_option("--config", global.config_path, "key-value config file");
    app.add_option("--out", global.out_dir, "output directory");
    app.add_option("--format", global.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    TrialConfig flag_cfg;  // flag values are merged onto the config-file values

    auto* plan_cmd = app.add_subcommand("plan", "emit a frequency plan as JSON");
    add_plan_flags(plan_cmd, flag_cfg);
    bool plan_to_file = false;
    plan_cmd->add_flag("--to-file", plan_to_file, "write plan.json into --out instead of stdout");

    auto* mod_cmd = app.add_subcommand("modulate", "synthesize one waveform into a binary file");
    add_plan_flags(mod_cmd, flag_cfg);
    add_modem_flags(mod_cmd, flag_cfg);
    std::string bit_text;
    mod_cmd->add_option("--bits", bit_text, "explicit bit string (defaults to seeded random)");

    auto* sim_cmd = app.add_subcommand("simulate", "run one trial and print its report");
    add_plan_flags(sim_cmd, flag_cfg);
    add_modem_flags(sim_cmd, flag_cfg);
    int stream_index = 0;
    sim_cmd->add_option("--stream", stream_index, "stream index");
    bool sim_to_file = false;
    sim_cmd->add_flag("--to-file", sim_to_file, "write trial.json into --out instead of stdout");
    std::string sim_model;
    sim_cmd->add_option("--model", sim_model, "rectifier model: square_law or diode_ode");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the sweep described by --config");
    bool sweep_serial = false;
    sweep_cmd->add_flag("--serial", sweep_serial, "disable the OpenMP stream loop");

    auto* papr_cmd = app.add_subcommand("papr", "mean PAPR table over tone counts and phase ranges");
    add_plan_flags(papr_cmd, flag_cfg);
    add_modem_flags(papr_cmd, flag_cfg);
    std::vector<int> papr_tones;
    std::vector<double> papr_deltas;
    int papr_streams = 1000;
    papr_cmd->add_option("--tones", papr_tones, "tone counts (default 2,4,...,16)");
    papr_cmd->add_option("--deltas", papr_deltas, "phase ranges in degrees (default 0,90,180,360)");
    papr_cmd->add_option("--streams", papr_streams, "streams per table cell");

    auto* pdf_cmd = app.add_subcommand("phase-pdf", "analytic and empirical phase densities");
    add_modem_flags(pdf_cmd, flag_cfg);
    int pdf_tone_index = 6;
    std::uint64_t pdf_trials = 100000;
    double pdf_step = 1.0;
    pdf_cmd->add_option("--tone", pdf_tone_index, "tone index n >= 2");
    pdf_cmd->add_option("--trials", pdf_trials, "empirical sample count");
    pdf_cmd->add_option("--step", pdf_step, "analytic grid step in degrees");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) global.seed = seed_flag;

    try {
        std::vector<SweepAxis> axes;
        TrialConfig cfg = make_config(global, &axes);
        // Merge explicitly provided flags over the file config.
        for (CLI::App* cmd : {plan_cmd, mod_cmd, sim_cmd, papr_cmd, pdf_cmd}) {
            if (!cmd->parsed()) continue;
            for (const auto& [flag, field] :
                 std::initializer_list<std::pair<const char*, const char*>>{
                     {"--fc", "f_c_hz"}, {"--n", "n_tones"}, {"--gcd", "gcd_hz"}, {"--r", "r"},
                     {"--m", "m_order"}, {"--delta", "delta_deg"}, {"--pin", "p_in_dbm"},
                     {"--fs", "sample_rate_hz"}}) {
                const CLI::Option* opt = cmd->get_option_no_throw(flag);
                if (opt && opt->count())
                    set_config_field(cfg, field, opt->results().front());
            }
        }
        if (global.seed) cfg.seed = *global.seed;

        if (plan_cmd->parsed()) return run_plan(global, cfg, plan_to_file);
        if (mod_cmd->parsed()) return run_modulate(global, cfg, bit_text);
        if (sim_cmd->parsed()) {
            if (!sim_model.empty()) set_config_field(cfg, "model", sim_model);
            return run_simulate(global, cfg, stream_index, sim_to_file);
        }
        if (sweep_cmd->parsed()) return run_sweep_cmd(global, cfg, axes, sweep_serial);
        if (papr_cmd->parsed())
            return run_papr_table(global, cfg, papr_tones, papr_deltas, papr_streams);
        if (pdf_cmd->parsed()) return run_phase_pdf(global, cfg, pdf_tone_index, pdf_trials, pdf_step);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
