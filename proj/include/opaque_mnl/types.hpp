#pragma once

#include <map>
#include <string>
#include <vector>

namespace opaque_mnl {

/// A market of n traditional products under the multinomial logit model.
/// Product i has intrinsic valuation v[i] (utility units) and price r[i]
/// (currency units). A customer's realized valuation is v[i] plus standard
/// Gumbel noise; the no-purchase option is pure Gumbel noise at price zero.
class MarketInstance {
public:
    /// Throws std::invalid_argument unless both vectors have the same
    /// nonzero length, every entry is finite, and every price is > 0.
    MarketInstance(std::vector<double> v, std::vector<double> r,
                   std::string name = "");

    int n() const { return static_cast<int>(v_.size()); }
    const std::vector<double>& v() const { return v_; }
    const std::vector<double>& r() const { return r_; }
    const std::string& name() const { return name_; }

    /// The instance restricted to the first k products.
    MarketInstance prefix(int k) const;

    /// Copy with the prices of the given zero-based products replaced.
    MarketInstance with_prices(const std::vector<int>& products,
                               const std::vector<double>& prices) const;

private:
    std::vector<double> v_;
    std::vector<double> r_;
    std::string name_;
};

/// A duplicate-free subset of products, stored as sorted zero-based indices.
/// External formats (JSON, CLI) index products from 1; conversion happens at
/// that boundary only.
class Assortment {
public:
    Assortment() = default;

    /// From zero-based indices; sorts, rejects duplicates and out-of-range.
    Assortment(std::vector<int> zero_based, int n);

    /// From one-based indices as they appear in JSON/CLI input.
    static Assortment from_one_based(const std::vector<int>& one_based, int n);

    /// Every product of the instance.
    static Assortment full(int n);

    bool empty() const { return members_.empty(); }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<int>& members() const { return members_; }
    bool contains(int i) const;

    std::vector<int> to_one_based() const;

    bool operator==(const Assortment& other) const = default;

private:
    std::vector<int> members_;
};

/// Purchase probabilities over the traditional products of one assortment,
/// the opaque product, and no-purchase. Keys of p_product are zero-based and
/// cover exactly the assortment that produced the distribution.
struct ChoiceDistribution {
    std::map<int, double> p_product;
    double p_opaque = 0.0;
    double p_none = 0.0;

    double total() const;
};

}  // namespace opaque_mnl
