#include "kljn/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "kljn/csv.hpp"
#include "kljn/kernels.hpp"
#include "kljn/rng.hpp"

namespace kljn {

namespace {

[[noreturn]] void bad_arg(const std::string& what) { throw std::invalid_argument(what); }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ResistorPair::validate() const {
    if (!positive_finite(r_low_ohm)) bad_arg("r_low_ohm must be positive and finite");
    if (!positive_finite(r_high_ohm)) bad_arg("r_high_ohm must be positive and finite");
    if (r_low_ohm >= r_high_ohm) bad_arg("r_low_ohm must be less than r_high_ohm");
}

std::string_view level_name(Level level) {
    switch (level) {
        case Level::LL: return "LL";
        case Level::HH: return "HH";
        default: return "MID";
    }
}

BitSituation choose_situation(std::uint64_t switch_seed, std::uint64_t bep_index) {
    const std::uint64_t bits = rng::derive_seed(switch_seed, bep_index, rng::Stream::switches);
    return {(bits & 1u) ? Choice::H : Choice::L, (bits & 2u) ? Choice::H : Choice::L};
}

WireObservation wire_signals(const NoiseSeries& u_a, const NoiseSeries& u_b, double r_a,
                             double r_b) {
    const std::size_t n = u_a.size();
    if (n == 0 || u_b.size() != n) bad_arg("wire_signals needs equal-length inputs");
    if (u_a.dt != u_b.dt) bad_arg("wire_signals needs a common sample step");
    if (!positive_finite(r_a) || !positive_finite(r_b))
        bad_arg("resistances must be positive and finite");

    WireObservation obs;
    obs.i_w.samples.resize(n);
    obs.i_w.dt = u_a.dt;
    kern::sub_scale(obs.i_w.samples.data(), u_a.samples.data(), u_b.samples.data(),
                    1.0 / (r_a + r_b), n);
    obs.u_w.samples.resize(n);
    obs.u_w.dt = u_a.dt;
    kern::scale_add(obs.u_w.samples.data(), obs.i_w.samples.data(), r_b,
                    u_b.samples.data(), n);
    return obs;
}

PowerSeries power_flow(const WireObservation& obs) {
    const std::size_t n = obs.u_w.size();
    if (n == 0 || obs.i_w.size() != n) bad_arg("power_flow needs equal-length u_w/i_w");
    PowerSeries p;
    p.p_w.resize(n);
    p.dt = obs.u_w.dt;
    kern::multiply(p.p_w.data(), obs.u_w.samples.data(), obs.i_w.samples.data(), n);
    return p;
}

double parallel_resistance(double r_a, double r_b) {
    if (!positive_finite(r_a) || !positive_finite(r_b))
        bad_arg("resistances must be positive and finite");
    return r_a * r_b / (r_a + r_b);
}

double theoretical_msv(double r_a, double r_b, const NoiseConfig& cfg) {
    cfg.validate();
    return 4.0 * cfg.boltzmann * cfg.temperature_k * parallel_resistance(r_a, r_b) *
           cfg.bandwidth_hz;
}

Level classify_level(double msv, const ResistorPair& pair, const NoiseConfig& cfg) {
    pair.validate();
    if (!positive_finite(msv)) bad_arg("msv must be positive and finite");
    const double levels[3] = {
        theoretical_msv(pair.r_low_ohm, pair.r_low_ohm, cfg),
        theoretical_msv(pair.r_low_ohm, pair.r_high_ohm, cfg),
        theoretical_msv(pair.r_high_ohm, pair.r_high_ohm, cfg),
    };
    // The levels are multiplicatively spaced, so compare in log distance.
    int best = 0;
    double best_dist = std::abs(std::log(msv / levels[0]));
    for (int i = 1; i < 3; ++i) {
        const double d = std::abs(std::log(msv / levels[i]));
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return best == 0 ? Level::LL : (best == 1 ? Level::MID : Level::HH);
}

void write_bep_csv(const GeneratorBank& bank, const WireObservation& obs,
                   const PowerSeries& power, const std::filesystem::path& path) {
    const std::size_t n = bank.length();
    if (obs.u_w.size() != n || obs.i_w.size() != n || power.p_w.size() != n ||
        bank.u_la.size() != n || bank.u_hb.size() != n || bank.u_lb.size() != n)
        bad_arg("write_bep_csv needs equal-length inputs");
    csv::Writer w(path);
    w.header({"time_s", "u_ha", "u_la", "u_hb", "u_lb", "u_w", "i_w", "p_w"});
    for (std::size_t i = 0; i < n; ++i) {
        w.field(static_cast<double>(i) * bank.dt())
            .field(bank.u_ha.samples[i])
            .field(bank.u_la.samples[i])
            .field(bank.u_hb.samples[i])
            .field(bank.u_lb.samples[i])
            .field(obs.u_w.samples[i])
            .field(obs.i_w.samples[i])
            .field(power.p_w[i]);
        w.end_row();
    }
}

}  // namespace kljn
