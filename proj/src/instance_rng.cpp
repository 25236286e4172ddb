#include "opaque_mnl/instance_rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace opaque_mnl {

MarketInstance random_instance(rng::Stream& stream, const InstanceRange& range) {
    if (range.n_min < 1 || range.n_max < range.n_min)
        throw std::invalid_argument("random_instance: bad n range");
    int span = range.n_max - range.n_min + 1;
    int n = range.n_min +
            std::min(span - 1, static_cast<int>(stream.uniform() * span));
    std::vector<double> v(static_cast<std::size_t>(n));
    std::vector<double> r(static_cast<std::size_t>(n));
    for (auto& x : v) x = range.v_lo + stream.uniform() * (range.v_hi - range.v_lo);
    if (range.uniform_prices) {
        double price = range.r_lo + stream.uniform() * (range.r_hi - range.r_lo);
        std::fill(r.begin(), r.end(), price);
    } else {
        for (auto& x : r) x = range.r_lo + stream.uniform() * (range.r_hi - range.r_lo);
    }
    return MarketInstance(std::move(v), std::move(r));
}

Assortment random_nonempty_assortment(rng::Stream& stream, int n) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
        if (stream.uniform() < 0.5) members.push_back(i);
    if (members.empty())
        members.push_back(std::min(n - 1, static_cast<int>(stream.uniform() * n)));
    return Assortment(std::move(members), n);
}

}  // namespace opaque_mnl
