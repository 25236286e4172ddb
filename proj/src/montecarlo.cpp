#include "opaque_mnl/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "opaque_mnl/rng.hpp"

namespace opaque_mnl {

McConfig McConfig::with_samples(std::uint64_t t, std::uint64_t seed, int jobs) {
    McConfig cfg;
    cfg.samples = t;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.validate();
    return cfg;
}

McConfig McConfig::with_tolerance(double epsilon, double delta, std::uint64_t seed,
                                  int jobs) {
    McConfig cfg;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.validate();
    return cfg;
}

void McConfig::validate() const {
    bool tolerance_mode = epsilon.has_value() || delta.has_value();
    if (samples.has_value() == tolerance_mode)
        throw std::invalid_argument(
            "field 'samples'/'epsilon'/'delta': set either a sample count or an "
            "(epsilon, delta) pair, not both");
    if (tolerance_mode) {
        if (!epsilon.has_value() || !delta.has_value())
            throw std::invalid_argument(
                "field 'epsilon'/'delta': both are required in tolerance mode");
        if (!(*epsilon > 0.0 && *epsilon <= 1.0))
            throw std::invalid_argument("field 'epsilon': must lie in (0, 1]");
        if (!(*delta > 0.0 && *delta <= 1.0))
            throw std::invalid_argument("field 'delta': must lie in (0, 1]");
    } else if (*samples == 0) {
        throw std::invalid_argument("field 'samples': must be >= 1");
    }
    if (jobs < 1) throw std::invalid_argument("field 'jobs': must be >= 1");
}

SampledChoice sample_choice(const MarketInstance& inst, const Assortment& S, double rho,
                            std::uint64_t seed, std::uint64_t sample_index) {
    if (S.empty())
        throw std::invalid_argument("sample_choice requires a nonempty assortment");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("field 'rho': must be finite and >= 0");

    const std::uint64_t key = rng::substream(seed, sample_index);
    // Draw index 0 is the outside option, index i+1 is product i.
    double best = rng::to_gumbel(rng::bits_at(key, 0));
    SampledChoice out;
    out.option = ChosenOption::none;

    double min_valuation = std::numeric_limits<double>::infinity();
    for (int i : S.members()) {
        auto iu = static_cast<std::size_t>(i);
        double valuation =
            inst.v()[iu] + rng::to_gumbel(rng::bits_at(key, static_cast<std::uint64_t>(i) + 1));
        min_valuation = std::min(min_valuation, valuation);
        double utility = valuation - inst.r()[iu];
        if (utility > best) {
            best = utility;
            out.option = ChosenOption::product;
            out.product = i;
            out.revenue = inst.r()[iu];
        }
    }
    if (min_valuation - rho > best) {
        out.option = ChosenOption::opaque;
        out.product = -1;
        out.revenue = rho;
    }
    return out;
}

std::uint64_t required_samples(double r_max, double epsilon, double delta) {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("field 'r_max': must be finite and > 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("field 'epsilon': must lie in (0, 1]");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("field 'delta': must lie in (0, 1]");
    double t = std::ceil(r_max * r_max * std::log(2.0 / delta) / (2.0 * epsilon * epsilon));
    if (!(t >= 1.0)) t = 1.0;
    if (t >= 9.2e18)
        throw std::invalid_argument("required sample count overflows a 64-bit counter");
    return static_cast<std::uint64_t>(t);
}

namespace {

constexpr std::uint64_t kChunk = 4096;

struct ChunkTally {
    double revenue = 0.0;
    std::uint64_t opaque = 0;
    std::uint64_t none = 0;
    std::vector<std::uint64_t> product;  // aligned with S.members()
};

ChunkTally run_chunk(const MarketInstance& inst, const Assortment& S, double rho,
                     std::uint64_t seed, std::uint64_t begin, std::uint64_t end) {
    ChunkTally tally;
    tally.product.assign(S.members().size(), 0);
    for (std::uint64_t t = begin; t < end; ++t) {
        SampledChoice choice = sample_choice(inst, S, rho, seed, t);
        tally.revenue += choice.revenue;
        switch (choice.option) {
            case ChosenOption::product: {
                auto pos = std::lower_bound(S.members().begin(), S.members().end(),
                                            choice.product) -
                           S.members().begin();
                ++tally.product[static_cast<std::size_t>(pos)];
                break;
            }
            case ChosenOption::opaque:
                ++tally.opaque;
                break;
            case ChosenOption::none:
                ++tally.none;
                break;
        }
    }
    return tally;
}

}  // namespace

OpaqueQuote opq_revenue_mc(const MarketInstance& inst, const Assortment& S, double rho,
                           const McConfig& cfg) {
    cfg.validate();
    if (S.empty())
        throw std::invalid_argument("opq_revenue_mc requires a nonempty assortment");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("field 'rho': must be finite and >= 0");

    const double r_max = *std::max_element(inst.r().begin(), inst.r().end());
    const std::uint64_t total =
        cfg.samples ? *cfg.samples : required_samples(r_max, *cfg.epsilon, *cfg.delta);
    const double half_width =
        cfg.epsilon ? *cfg.epsilon
                    : r_max * std::sqrt(std::log(2.0 / 0.05) /
                                        (2.0 * static_cast<double>(total)));

    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<ChunkTally> results(chunks);
    auto work = [&](std::uint64_t c) {
        std::uint64_t begin = c * kChunk;
        std::uint64_t end = std::min(total, begin + kChunk);
        results[c] = run_chunk(inst, S, rho, cfg.seed, begin, end);
    };

    int workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(cfg.jobs, 1)), chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) work(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int wi = 0; wi < workers; ++wi)
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
                    work(c);
            });
        for (auto& th : pool) th.join();
    }

    // Combine in chunk index order so results do not depend on scheduling.
    double revenue_sum = 0.0;
    std::uint64_t opaque = 0;
    std::uint64_t none = 0;
    std::vector<std::uint64_t> product(S.members().size(), 0);
    for (const ChunkTally& tally : results) {
        revenue_sum += tally.revenue;
        opaque += tally.opaque;
        none += tally.none;
        for (std::size_t j = 0; j < product.size(); ++j) product[j] += tally.product[j];
    }

    OpaqueQuote q;
    q.rho = rho;
    q.mode = OpaqueQuote::Mode::monte_carlo;
    q.samples = total;
    q.half_width = half_width;
    q.revenue = revenue_sum / static_cast<double>(total);
    for (std::size_t j = 0; j < product.size(); ++j)
        q.distribution.p_product[S.members()[j]] =
            static_cast<double>(product[j]) / static_cast<double>(total);
    q.distribution.p_opaque = static_cast<double>(opaque) / static_cast<double>(total);
    q.distribution.p_none = static_cast<double>(none) / static_cast<double>(total);
    return q;
}

}  // namespace opaque_mnl
