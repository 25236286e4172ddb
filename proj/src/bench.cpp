#include "opaque_mnl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "opaque_mnl/rng.hpp"

namespace opaque_mnl {

void BedConfig::validate() const {
    if (instances < 1)
        throw std::invalid_argument("field 'instances': must be >= 1");
    if (max_n < 2)
        throw std::invalid_argument("field 'max_n': must be >= 2");
    if (!(price_sigma >= 0.0) || !(valuation_sigma >= 0.0))
        throw std::invalid_argument("field 'sigma': must be >= 0");
}

std::vector<MarketInstance> generate_bed(const BedConfig& cfg) {
    cfg.validate();
    const int m = cfg.max_n;
    std::vector<MarketInstance> bed;
    bed.reserve(cfg.instances);
    for (std::uint64_t idx = 0; idx < cfg.instances; ++idx) {
        rng::Stream st(cfg.seed, idx);
        std::vector<double> normals;
        normals.reserve(static_cast<std::size_t>(2 * m));
        while (normals.size() < static_cast<std::size_t>(2 * m)) {
            double z1, z2;
            st.normal_pair(z1, z2);
            normals.push_back(z1);
            normals.push_back(z2);
        }
        std::vector<double> r(static_cast<std::size_t>(m));
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            auto ju = static_cast<std::size_t>(j);
            r[ju] = std::exp(cfg.price_mu + cfg.price_sigma * normals[ju]);
            v[ju] = std::exp(cfg.valuation_mu +
                             cfg.valuation_sigma * normals[static_cast<std::size_t>(m + j)]);
        }
        bed.emplace_back(std::move(v), std::move(r), "bed-" + std::to_string(idx));
    }
    return bed;
}

namespace {

struct Cell {
    AssortmentSolution opt;
    AssortmentSolution nrv;
    double gap_percent = 0.0;
};

constexpr double kSuboptimalRelativeGap = 1e-7;

}  // namespace

BenchResult run_bench(const std::vector<MarketInstance>& bed, const BedConfig& cfg,
                      const std::vector<int>& n_values, int jobs, int exact_cap) {
    for (int n : n_values) {
        if (n < 1 || n > cfg.max_n)
            throw std::invalid_argument("field 'n': value " + std::to_string(n) +
                                        " outside [1, max_n]");
        if (n > kBruteForceCap)
            throw std::invalid_argument("field 'n': value above the brute-force cap");
    }

    const std::size_t count = bed.size();
    std::vector<std::vector<Cell>> cells(count);
    auto work = [&](std::size_t idx) {
        std::vector<Cell>& per_n = cells[idx];
        per_n.resize(n_values.size());
        for (std::size_t j = 0; j < n_values.size(); ++j) {
            MarketInstance prefix = bed[idx].prefix(n_values[j]);
            Cell& cell = per_n[j];
            cell.opt = brute_force_assortment(prefix, 1, 1e-6, exact_cap);
            cell.nrv = nrv_heuristic(prefix, 1e-6, exact_cap);
            cell.gap_percent = 100.0 * (1.0 - cell.nrv.revenue / cell.opt.revenue);
        }
    };

    int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
    if (workers <= 1) {
        for (std::size_t idx = 0; idx < count; ++idx) work(idx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t idx = next.fetch_add(1); idx < count;
                     idx = next.fetch_add(1))
                    work(idx);
            });
        for (auto& th : pool) th.join();
    }

    BenchResult result;
    result.config = cfg;
    result.n_values = n_values;
    for (std::size_t j = 0; j < n_values.size(); ++j) {
        BenchRow row;
        row.n = n_values[j];
        double gap_sum = 0.0;
        double size_sum = 0.0;
        for (std::size_t idx = 0; idx < count; ++idx) {
            const Cell& cell = cells[idx][j];
            if (cell.opt.opaque_offered) ++row.opaque_count;
            double rel = 1.0 - cell.nrv.revenue / cell.opt.revenue;
            if (rel > kSuboptimalRelativeGap) ++row.suboptimal_count;
            double gap = std::max(0.0, cell.gap_percent);
            row.max_gap_pct = std::max(row.max_gap_pct, gap);
            gap_sum += gap;
            size_sum += cell.opt.assortment.size();

            BenchRecord record;
            record.instance_index = idx;
            record.n = row.n;
            record.opt = cell.opt;
            record.nrv = cell.nrv;
            record.gap_percent = cell.gap_percent;
            result.records.push_back(std::move(record));
        }
        row.avg_gap_pct = gap_sum / static_cast<double>(count);
        row.avg_opt_size = size_sum / static_cast<double>(count);
        result.rows.push_back(row);
    }
    return result;
}

namespace {

std::string shortest(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

}  // namespace

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "n,opaque_count,suboptimal_count,max_gap_pct,avg_gap_pct,avg_opt_size\n";
    for (const BenchRow& row : rows) {
        out += std::to_string(row.n);
        out += ',';
        out += std::to_string(row.opaque_count);
        out += ',';
        out += std::to_string(row.suboptimal_count);
        out += ',';
        out += shortest(row.max_gap_pct);
        out += ',';
        out += shortest(row.avg_gap_pct);
        out += ',';
        out += shortest(row.avg_opt_size);
        out += '\n';
    }
    return out;
}

}  // namespace opaque_mnl
