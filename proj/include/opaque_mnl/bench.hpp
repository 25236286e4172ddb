#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opaque_mnl/assortment.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Instance-bed generator configuration. Prices and valuations are lognormal;
/// mu and sigma are the mean and standard deviation of the underlying normal.
struct BedConfig {
    std::uint64_t instances = 2000;
    int max_n = 9;
    double price_mu = 0.5;
    double price_sigma = 1.5;
    double valuation_mu = 0.0;
    double valuation_sigma = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Draws `instances` markets of max_n products each; an experiment at size n
/// uses the length-n prefix of an instance, so beds nest across n. Instance i
/// has its own counter substream keyed by (seed, i): the bed is reproducible
/// and order-independent.
std::vector<MarketInstance> generate_bed(const BedConfig& cfg);

/// Per-n summary over a bed: how often the optimized opaque price counts as
/// offered, how often NRV is suboptimal (relative gap above 1e-7), the worst
/// and mean NRV gaps (percent, mean over all instances), and the mean optimal
/// assortment size.
struct BenchRow {
    int n = 0;
    std::uint64_t opaque_count = 0;
    std::uint64_t suboptimal_count = 0;
    double max_gap_pct = 0.0;
    double avg_gap_pct = 0.0;
    double avg_opt_size = 0.0;
};

/// One (instance, n) evaluation kept for audit.
struct BenchRecord {
    std::uint64_t instance_index = 0;
    int n = 0;
    AssortmentSolution opt;
    AssortmentSolution nrv;
    double gap_percent = 0.0;
};

struct BenchResult {
    BedConfig config;
    std::vector<int> n_values;
    std::vector<BenchRow> rows;        // one per entry of n_values
    std::vector<BenchRecord> records;  // grouped by n, then instance index
};

/// Runs brute force and NRV on every (instance prefix, n) pair. Instances are
/// processed in parallel with `jobs` workers; the aggregation is performed in
/// a fixed order, so the result is identical for any jobs value.
BenchResult run_bench(const std::vector<MarketInstance>& bed, const BedConfig& cfg,
                      const std::vector<int>& n_values, int jobs = 1,
                      int exact_cap = kDefaultExactCap);

/// Summary table as CSV with header
/// n,opaque_count,suboptimal_count,max_gap_pct,avg_gap_pct,avg_opt_size.
/// Doubles use shortest round-trip formatting.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace opaque_mnl
