#include "mtpsk/signal_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "mtpsk/common.hpp"
#include "json.hpp"

namespace mtpsk {

namespace {

std::uint64_t to_le_bits(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof(u));
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    return u;
}

double from_le_bits(std::uint64_t u) {
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    double v;
    std::memcpy(&v, &u, sizeof(v));
    return v;
}

}  // namespace

void write_signal(const std::string& path, const SampledSignal& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("write_signal: cannot open " + path);
    nlohmann::json header;
    header["sample_rate_hz"] = s.sample_rate_hz;
    header["period_s"] = s.period_s;
    header["z0_ohm"] = s.z0_ohm;
    header["n_samples"] = s.samples.size();
    out << header.dump() << '\n';
    std::vector<std::uint64_t> raw(s.samples.size());
    for (std::size_t i = 0; i < s.samples.size(); ++i) raw[i] = to_le_bits(s.samples[i]);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
    if (!out) throw config_error("write_signal: write failed for " + path);
}

SampledSignal read_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("read_signal: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("read_signal: missing header line");
    nlohmann::json header = nlohmann::json::parse(line);
    SampledSignal s;
    s.sample_rate_hz = header.at("sample_rate_hz").get<double>();
    s.period_s = header.at("period_s").get<double>();
    s.z0_ohm = header.at("z0_ohm").get<double>();
    const std::size_t n = header.at("n_samples").get<std::size_t>();
    std::vector<std::uint64_t> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * sizeof(std::uint64_t)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(std::uint64_t))
        throw config_error("read_signal: truncated sample block in " + path);
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.samples[i] = from_le_bits(raw[i]);
    return s;
}

}  // namespace mtpsk
