#include "hybridtherm/gillespie.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "hybridtherm/error.hpp"
#include "stationary.hpp"

namespace hybridtherm {

namespace {

struct Jump {
    std::size_t target = 0;
    std::size_t channel = 0;
    bool inward = true;  ///< electron enters the dot from the reservoir
    double rate = 0.0;
};

struct StateMoves {
    std::vector<Jump> jumps;
    double exit_rate = 0.0;
};

std::array<StateMoves, kStateCount> build_moves(const RateTable& rates) {
    std::array<StateMoves, kStateCount> moves;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const auto& ch = rates[k];
        const int n = ch.key.other_occupation;
        std::size_t empty = 0, filled = 0;
        if (ch.key.terminal == Terminal::G) {
            empty = state_index(n, 0);
            filled = state_index(n, 1);
        } else {
            empty = state_index(0, n);
            filled = state_index(1, n);
        }
        if (ch.in > 0.0) moves[empty].jumps.push_back({filled, k, true, ch.in});
        if (ch.out > 0.0) moves[filled].jumps.push_back({empty, k, false, ch.out});
    }
    for (auto& m : moves) {
        for (const auto& j : m.jumps) m.exit_rate += j.rate;
    }
    return moves;
}

bool connected(const std::array<StateMoves, kStateCount>& moves) {
    detail::Matrix<kStateCount> g{};
    for (std::size_t s = 0; s < kStateCount; ++s) {
        for (const auto& j : moves[s].jumps) g[j.target][s] += j.rate;
    }
    return detail::strongly_connected(g);
}

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Per-block running sums.
struct Block {
    std::array<std::int64_t, 6> net{};
    std::array<double, kStateCount> dwell{};
};

Estimate summarize(const std::vector<double>& values) {
    const auto b = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= b;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (b - 1.0) / b)};
}

}  // namespace

double TrajectoryEstimate::energy_drawn(const RateTable& rates, Terminal t) const {
    double e = 0.0;
    for (int n = 0; n < 2; ++n) {
        const std::size_t k = channel_index(t, n);
        const auto net = static_cast<double>(static_cast<std::int64_t>(jumps_in[k]) -
                                             static_cast<std::int64_t>(jumps_out[k]));
        e += net * rates[k].energy;
    }
    return e;
}

TrajectoryEstimate simulate(const TrajectoryConfig& config) {
    if (!(std::isfinite(config.total_time) && config.total_time > 0.0)) {
        throw ValidationError("total_time must be > 0");
    }
    if (!(config.burn_in_fraction >= 0.0 && config.burn_in_fraction < 1.0)) {
        throw ValidationError("burn_in_fraction must be in [0, 1)");
    }
    if (config.blocks < kMinBlocks) {
        throw ValidationError("blocks must be >= " + std::to_string(kMinBlocks));
    }

    const RateTable rates = transition_rates(config.params);
    const auto moves = build_moves(rates);
    double slowest = moves[0].exit_rate;
    for (const auto& m : moves) {
        if (m.exit_rate == 0.0) {
            throw NumericalError(NumericalFailure::AbsorbingState, "a charge state has no exit transitions");
        }
        slowest = std::min(slowest, m.exit_rate);
    }
    if (!connected(moves)) {
        throw NumericalError(NumericalFailure::NoUniqueSteadyState, "transition graph is not strongly connected");
    }

    const double burn_in = config.total_time * config.burn_in_fraction;
    const double block_length = (config.total_time - burn_in) / static_cast<double>(config.blocks);
    if (block_length * slowest < kMinBlockEvents) {
        throw NumericalError(NumericalFailure::InsufficientBlocks,
                             "total_time " + std::to_string(config.total_time) + " too short for " +
                                 std::to_string(config.blocks) + " blocks");
    }

    std::mt19937_64 rng(config.seed);
    TrajectoryEstimate est;
    est.initial_state = state_index(0, 0);
    est.blocks = config.blocks;

    std::vector<Block> blocks(config.blocks);
    std::size_t state = est.initial_state;
    double t = 0.0;
    // Index of the block containing time t; -1 during burn-in.
    auto block_of = [&](double time) -> std::ptrdiff_t {
        if (time < burn_in) return -1;
        const auto b = static_cast<std::ptrdiff_t>((time - burn_in) / block_length);
        return std::min<std::ptrdiff_t>(b, static_cast<std::ptrdiff_t>(config.blocks) - 1);
    };
    // Adds the dwell in `s` over [from, to) to the blocks it overlaps.
    auto add_dwell = [&](std::size_t s, double from, double to) {
        from = std::max(from, burn_in);
        if (!(from < to)) return;
        const auto last = static_cast<std::ptrdiff_t>(config.blocks) - 1;
        for (std::ptrdiff_t b = block_of(from); from < to; ++b) {
            const double block_end = burn_in + static_cast<double>(b + 1) * block_length;
            const double stop = b == last ? to : std::min(to, block_end);
            if (stop > from) {
                blocks[static_cast<std::size_t>(b)].dwell[s] += stop - from;
                from = stop;
            }
        }
    };

    const auto& end = config.total_time;
    while (true) {
        const auto& m = moves[state];
        const double wait = -std::log1p(-uniform01(rng)) / m.exit_rate;
        if (t + wait >= end) {
            add_dwell(state, t, end);
            break;
        }
        add_dwell(state, t, t + wait);
        t += wait;

        double pick = uniform01(rng) * m.exit_rate;
        const Jump* jump = &m.jumps.back();
        for (const auto& j : m.jumps) {
            if (pick < j.rate) {
                jump = &j;
                break;
            }
            pick -= j.rate;
        }
        if (jump->inward) {
            ++est.jumps_in[jump->channel];
        } else {
            ++est.jumps_out[jump->channel];
        }
        if (const std::ptrdiff_t b = block_of(t); b >= 0) {
            blocks[static_cast<std::size_t>(b)].net[jump->channel] += jump->inward ? 1 : -1;
        }
        state = jump->target;
        ++est.events;
    }
    est.final_state = state;
    est.sampled_time = end - burn_in;

    const auto reservoirs = dot_reservoirs(config.params);
    const std::size_t nb = config.blocks;
    std::vector<std::vector<double>> energy(3, std::vector<double>(nb)), heat(3, std::vector<double>(nb));
    std::vector<std::vector<double>> particles(2, std::vector<double>(nb)), occupation(kStateCount, std::vector<double>(nb));
    std::vector<double> work(nb), entropy(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        double s_tot = 0.0, w = 0.0;
        for (Terminal term : {Terminal::C, Terminal::H, Terminal::G}) {
            const auto i = static_cast<std::size_t>(term);
            double e = 0.0, n = 0.0;
            for (int occ = 0; occ < 2; ++occ) {
                const std::size_t k = channel_index(term, occ);
                const auto net = static_cast<double>(blocks[b].net[k]);
                e += net * rates[k].energy;
                n += net;
            }
            e /= block_length;
            n /= block_length;
            double mu = 0.0;
            if (term != Terminal::G) {
                mu = reservoirs[i].potentials.at(particle_number());
                particles[i][b] = n;
                w -= mu * n;
            }
            const double q = e - mu * n;
            energy[i][b] = e;
            heat[i][b] = q;
            s_tot -= q / reservoirs[i].temperature;
        }
        work[b] = w;
        entropy[b] = s_tot;
        for (std::size_t s = 0; s < kStateCount; ++s) occupation[s][b] = blocks[b].dwell[s] / block_length;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        est.energy[i] = summarize(energy[i]);
        est.heat[i] = summarize(heat[i]);
    }
    for (std::size_t i = 0; i < 2; ++i) est.particles[i] = summarize(particles[i]);
    est.work = summarize(work);
    est.entropy_production = summarize(entropy);
    for (std::size_t s = 0; s < kStateCount; ++s) {
        const Estimate o = summarize(occupation[s]);
        est.occupations[s] = o.mean;
        est.occupation_error[s] = o.std_error;
    }
    return est;
}

}  // namespace hybridtherm
