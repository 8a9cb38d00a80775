#include "mtpsk/freq_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "mtpsk/common.hpp"
#include "json.hpp"

namespace mtpsk {

std::int64_t FrequencyPlan::bw_units() const {
    return std::accumulate(spacings.begin(), spacings.end(), std::int64_t{0});
}

std::vector<double> FrequencyPlan::spacings_hz() const {
    std::vector<double> out(spacings.size());
    for (std::size_t i = 0; i < spacings.size(); ++i)
        out[i] = static_cast<double>(spacings[i]) * gcd_hz;
    return out;
}

std::vector<double> FrequencyPlan::tones_hz() const {
    std::vector<double> out(static_cast<std::size_t>(n_tones));
    double f = f_c_hz - bw_hz() / 2.0;
    for (int n = 0; n < n_tones; ++n) {
        out[static_cast<std::size_t>(n)] = f;
        if (n < n_tones - 1) f += static_cast<double>(spacings[static_cast<std::size_t>(n)]) * gcd_hz;
    }
    return out;
}

namespace {

// Contiguous-run sums of spacings[0..count), i.e. every pairwise tone
// difference expressible with the chosen spacings.
std::set<std::int64_t> run_sums(const std::vector<std::int64_t>& spacings, std::size_t count) {
    std::set<std::int64_t> sums;
    for (std::size_t a = 0; a < count; ++a) {
        std::int64_t s = 0;
        for (std::size_t b = a; b < count; ++b) {
            s += spacings[b];
            sums.insert(s);
        }
    }
    return sums;
}

}  // namespace

FrequencyPlan plan_frequencies(double f_c_hz, int n_tones, double gcd_hz, int r) {
    if (n_tones < 2) throw config_error("plan_frequencies: need at least 2 tones");
    if (!(gcd_hz > 0.0)) throw config_error("plan_frequencies: gcd must be positive");
    if (r < 0) throw config_error("plan_frequencies: spreading factor must be >= 0");
    const double ratio = f_c_hz / gcd_hz;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::fabs(ratio)))
        throw config_error("plan_frequencies: carrier frequency must be an integer multiple of the gcd");

    FrequencyPlan plan;
    plan.f_c_hz = f_c_hz;
    plan.gcd_hz = gcd_hz;
    plan.r = r;
    plan.n_tones = n_tones;
    plan.spacings.push_back(1);

    const std::int64_t step = 1 + r;  // k_1 + r
    for (int n = 2; n <= n_tones - 1; ++n) {
        std::set<std::int64_t> taken = run_sums(plan.spacings, plan.spacings.size());
        std::int64_t i = 1;
        while (taken.count(i)) i += step;
        plan.spacings.push_back(i);
    }

    if (static_cast<double>(plan.bw_units()) * gcd_hz >= f_c_hz)
        throw config_error("plan_frequencies: bandwidth reaches the carrier frequency");

    PlanCheck check = validate_plan(plan);
    if (!check.ok)
        throw consistency_error("plan_frequencies: search produced a colliding plan: " + check.message);
    return plan;
}

std::vector<std::int64_t> pair_differences(const FrequencyPlan& plan) {
    std::vector<std::int64_t> diffs;
    const auto& k = plan.spacings;
    diffs.reserve(k.size() * (k.size() + 1) / 2);
    for (std::size_t a = 0; a < k.size(); ++a) {
        std::int64_t s = 0;
        for (std::size_t b = a; b < k.size(); ++b) {
            s += k[b];
            diffs.push_back(s);
        }
    }
    std::sort(diffs.begin(), diffs.end());
    return diffs;
}

PlanCheck validate_plan(const FrequencyPlan& plan) {
    const auto& k = plan.spacings;
    PlanCheck check;
    for (std::size_t i = 0; i < k.size(); ++i) {
        for (std::size_t j = i + 1; j < k.size(); ++j) {
            if (k[i] == k[j]) {
                check.ok = false;
                check.run_begin = static_cast<int>(j);
                check.run_end = static_cast<int>(j);
                check.spacing_index = static_cast<int>(i);
                std::ostringstream os;
                os << "duplicate spacing k[" << i << "] = k[" << j << "] = " << k[i];
                check.message = os.str();
                return check;
            }
        }
    }
    for (std::size_t a = 0; a < k.size(); ++a) {
        std::int64_t s = k[a];
        for (std::size_t b = a + 1; b < k.size(); ++b) {
            s += k[b];
            for (std::size_t m = 0; m < k.size(); ++m) {
                if (s == k[m]) {
                    check.ok = false;
                    check.run_begin = static_cast<int>(a);
                    check.run_end = static_cast<int>(b);
                    check.spacing_index = static_cast<int>(m);
                    std::ostringstream os;
                    os << "sum of spacings " << a << ".." << b << " (= " << s
                       << " gcd units) collides with spacing k[" << m << "]";
                    check.message = os.str();
                    return check;
                }
            }
        }
    }
    return check;
}

std::string plan_to_json(const FrequencyPlan& plan) {
    nlohmann::json j;
    j["f_c_hz"] = plan.f_c_hz;
    j["gcd_hz"] = plan.gcd_hz;
    j["r"] = plan.r;
    j["n"] = plan.n_tones;
    j["spacings_gcd_units"] = plan.spacings;
    j["tones_hz"] = plan.tones_hz();
    j["bw_hz"] = plan.bw_hz();
    return j.dump(2);
}

FrequencyPlan plan_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FrequencyPlan plan;
    plan.f_c_hz = j.at("f_c_hz").get<double>();
    plan.gcd_hz = j.at("gcd_hz").get<double>();
    plan.r = j.at("r").get<int>();
    plan.n_tones = j.at("n").get<int>();
    plan.spacings = j.at("spacings_gcd_units").get<std::vector<std::int64_t>>();
    if (plan.spacings.size() + 1 != static_cast<std::size_t>(plan.n_tones))
        throw config_error("plan_from_json: spacing count does not match tone count");
    return plan;
}

}  // namespace mtpsk
