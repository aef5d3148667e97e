#include "kljn/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kljn/csv.hpp"
#include "kljn/kernels.hpp"

namespace kljn {

namespace {

[[noreturn]] void bad_arg(const std::string& what) { throw std::invalid_argument(what); }

double rms_difference(const NoiseSeries& a, const NoiseSeries& b) {
    return std::sqrt(kern::sum_sq_diff(a.samples.data(), b.samples.data(), a.size()) /
                     static_cast<double>(a.size()));
}

}  // namespace

SignSeries sign_quantize(const PowerSeries& power) {
    if (power.p_w.empty()) bad_arg("sign_quantize needs a non-empty power series");
    SignSeries s;
    s.bits.resize(power.p_w.size());
    s.dt = power.dt;
    kern::sign_pm1(s.bits.data(), power.p_w.data(), power.p_w.size());
    return s;
}

std::array<PowerSeries, 4> hypothetical_powers(const GeneratorBank& bank,
                                               const ResistorPair& pair) {
    pair.validate();
    std::array<PowerSeries, 4> out;
    for (std::size_t h = 0; h < kHypothesisOrder.size(); ++h) {
        const BitSituation& hyp = kHypothesisOrder[h];
        const WireObservation obs =
            wire_signals(bank.alice(hyp.alice), bank.bob(hyp.bob), pair.of(hyp.alice),
                         pair.of(hyp.bob));
        out[h] = power_flow(obs);
    }
    return out;
}

BilateralVerdict bilateral_attack(const GeneratorBank& bank, const SignSeries& measured,
                                  const ResistorPair& pair) {
    const std::size_t n = measured.size();
    if (n == 0) bad_arg("bilateral_attack needs a non-empty sign series");
    if (bank.length() != n) bad_arg("bilateral_attack needs bank and signs of equal length");

    const std::array<PowerSeries, 4> powers = hypothetical_powers(bank, pair);
    BilateralVerdict v;
    for (std::size_t h = 0; h < powers.size(); ++h) {
        const SignSeries hyp = sign_quantize(powers[h]);
        const std::size_t idx =
            kern::first_mismatch(measured.bits.data(), hyp.bits.data(), n);
        v.death_step[h] = idx == n ? kNeverEliminated : idx + 1;
    }

    std::size_t survivors = 0;
    std::size_t last_death = 0;
    std::size_t winner = 0;
    for (std::size_t h = 0; h < v.death_step.size(); ++h) {
        if (v.death_step[h] == kNeverEliminated) {
            ++survivors;
            winner = h;
        } else {
            last_death = std::max(last_death, v.death_step[h]);
        }
    }
    if (survivors == 1) {
        v.decided_situation = kHypothesisOrder[winner];
        v.decision_step = last_death;
    } else {
        v.decided_situation = std::nullopt;
        v.decision_step = n;
    }

    const std::size_t limit = v.decided_situation ? v.decision_step : n;
    v.surviving_per_step.reserve(limit);
    for (std::size_t s = 1; s <= limit; ++s) {
        int alive = 0;
        for (std::size_t h = 0; h < v.death_step.size(); ++h)
            if (v.death_step[h] > s) ++alive;
        v.surviving_per_step.push_back(alive);
    }
    return v;
}

NoiseSeries reconstruct_alice_voltage(const WireObservation& obs, double r) {
    const std::size_t n = obs.u_w.size();
    if (n == 0 || obs.i_w.size() != n)
        bad_arg("reconstruct_alice_voltage needs equal-length u_w/i_w");
    if (!(std::isfinite(r) && r > 0.0)) bad_arg("r must be positive and finite");
    NoiseSeries out;
    out.samples.resize(n);
    out.dt = obs.u_w.dt;
    kern::scale_add(out.samples.data(), obs.i_w.samples.data(), r, obs.u_w.samples.data(),
                    n);
    return out;
}

UnilateralVerdict unilateral_attack(const NoiseSeries& u_ha_known,
                                    const NoiseSeries& u_la_known,
                                    const WireObservation& obs, const ResistorPair& pair,
                                    const NoiseConfig& cfg) {
    pair.validate();
    cfg.validate();
    const std::size_t n = obs.u_w.size();
    if (n == 0 || obs.i_w.size() != n || u_ha_known.size() != n || u_la_known.size() != n)
        bad_arg("unilateral_attack needs equal-length inputs");

    UnilateralVerdict v;
    v.residual_low = rms_difference(reconstruct_alice_voltage(obs, pair.r_low_ohm), u_la_known);
    v.residual_high =
        rms_difference(reconstruct_alice_voltage(obs, pair.r_high_ohm), u_ha_known);

    const double lo = std::min(v.residual_low, v.residual_high);
    const double hi = std::max(v.residual_low, v.residual_high);
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (ratio < 1e3)
        throw AttackError("residual ratio " + std::to_string(ratio) +
                          " below 1e3: Alice stream knowledge is inconsistent");
    v.alice_resistor = v.residual_low < v.residual_high ? Choice::L : Choice::H;

    const double denom = 4.0 * cfg.boltzmann * cfg.temperature_k * cfg.bandwidth_hz;
    v.estimated_rp = mean_square(obs.u_w) / denom;
    const double r_a = pair.of(v.alice_resistor);
    v.estimated_rb = invert_rp(v.estimated_rp, r_a);
    const double d_low = std::abs(std::log(v.estimated_rb / pair.r_low_ohm));
    const double d_high = std::abs(std::log(v.estimated_rb / pair.r_high_ohm));
    v.bob_resistor = d_low < d_high ? Choice::L : Choice::H;
    return v;
}

double invert_rp(double rp, double r_a) {
    if (!(std::isfinite(rp) && rp > 0.0))
        throw AttackError("parallel resistance estimate must be positive");
    if (!(std::isfinite(r_a) && r_a > 0.0)) bad_arg("r_a must be positive and finite");
    if (rp >= r_a)
        throw AttackError("parallel resistance estimate " + std::to_string(rp) +
                          " not below r_a " + std::to_string(r_a));
    return r_a * rp / (r_a - rp);
}

double survival_theory(std::size_t n) {
    if (n > 1100) return 0.0;  // below the smallest subnormal anyway
    return std::ldexp(1.0, -static_cast<int>(n));
}

void write_bilateral_trace_csv(const BilateralVerdict& verdict,
                               const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"step", "surviving_count", "survivor_mask"});
    for (std::size_t i = 0; i < verdict.surviving_per_step.size(); ++i) {
        const std::size_t step = i + 1;
        std::string mask(verdict.death_step.size(), '0');
        for (std::size_t h = 0; h < verdict.death_step.size(); ++h)
            if (verdict.death_step[h] > step) mask[h] = '1';
        w.field(step)
            .field(static_cast<std::int64_t>(verdict.surviving_per_step[i]))
            .field(mask);
        w.end_row();
    }
}

void write_unilateral_residuals_csv(const UnilateralVerdict& verdict,
                                    const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"hypothesis", "rms_residual"});
    w.field(std::string("RL")).field(verdict.residual_low);
    w.end_row();
    w.field(std::string("RH")).field(verdict.residual_high);
    w.end_row();
}

}  // namespace kljn
