#include "opaque_mnl/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace opaque_mnl {

MarketInstance::MarketInstance(std::vector<double> v, std::vector<double> r,
                               std::string name)
    : v_(std::move(v)), r_(std::move(r)), name_(std::move(name)) {
    if (v_.empty())
        throw std::invalid_argument("field 'v': must contain at least one product");
    if (v_.size() != r_.size())
        throw std::invalid_argument(
            "field 'r': length " + std::to_string(r_.size()) +
            " does not match 'v' length " + std::to_string(v_.size()));
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!std::isfinite(v_[i]))
            throw std::invalid_argument("field 'v[" + std::to_string(i) +
                                        "]': must be finite");
        if (!std::isfinite(r_[i]) || r_[i] <= 0.0)
            throw std::invalid_argument("field 'r[" + std::to_string(i) +
                                        "]': must be finite and > 0");
    }
}

MarketInstance MarketInstance::prefix(int k) const {
    if (k < 1 || k > n())
        throw std::invalid_argument("prefix length " + std::to_string(k) +
                                    " outside [1, " + std::to_string(n()) + "]");
    return MarketInstance(std::vector<double>(v_.begin(), v_.begin() + k),
                          std::vector<double>(r_.begin(), r_.begin() + k), name_);
}

MarketInstance MarketInstance::with_prices(const std::vector<int>& products,
                                           const std::vector<double>& prices) const {
    if (products.size() != prices.size())
        throw std::invalid_argument("with_prices: index/price length mismatch");
    std::vector<double> r = r_;
    for (std::size_t k = 0; k < products.size(); ++k) {
        int i = products[k];
        if (i < 0 || i >= n())
            throw std::invalid_argument("with_prices: product index out of range");
        r[i] = prices[k];
    }
    return MarketInstance(v_, std::move(r), name_);
}

Assortment::Assortment(std::vector<int> zero_based, int n)
    : members_(std::move(zero_based)) {
    std::sort(members_.begin(), members_.end());
    for (std::size_t k = 0; k < members_.size(); ++k) {
        int i = members_[k];
        if (i < 0 || i >= n)
            throw std::invalid_argument(
                "field 'assortment': product index " + std::to_string(i + 1) +
                " outside [1, " + std::to_string(n) + "]");
        if (k > 0 && members_[k - 1] == i)
            throw std::invalid_argument("field 'assortment': duplicate product index " +
                                        std::to_string(i + 1));
    }
}

Assortment Assortment::from_one_based(const std::vector<int>& one_based, int n) {
    std::vector<int> zero;
    zero.reserve(one_based.size());
    for (int i : one_based) zero.push_back(i - 1);
    return Assortment(std::move(zero), n);
}

Assortment Assortment::full(int n) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return Assortment(std::move(all), n);
}

bool Assortment::contains(int i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

std::vector<int> Assortment::to_one_based() const {
    std::vector<int> out;
    out.reserve(members_.size());
    for (int i : members_) out.push_back(i + 1);
    return out;
}

double ChoiceDistribution::total() const {
    double s = p_opaque + p_none;
    for (const auto& [i, p] : p_product) s += p;
    return s;
}

}  // namespace opaque_mnl
