#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opaque_mnl/assortment.hpp"
#include "opaque_mnl/instance_rng.hpp"
#include "opaque_mnl/traditional.hpp"

using namespace opaque_mnl;

namespace {

const MarketInstance kSubst({6.0, 5.0, 3.0}, {3.0, 4.0, 9.0});
const MarketInstance kRevHi({1.2, 2.0, 1.8}, {7.8, 3.5, 3.1});
const MarketInstance kFig({1.95, 0.3, 2.0}, {4.02, 4.01, 4.0});
const MarketInstance kOnes({1.0, 1.0}, {1.0, 1.0});
const MarketInstance kHuge({1.0, 1.0}, {1e6, 1e6});
const MarketInstance kNrv({2.0, 2.0, 2.0}, {25.0, 5.5, 3.0});

double min_price(const MarketInstance& inst, const Assortment& S) {
    double m = std::numeric_limits<double>::infinity();
    for (int i : S.members()) m = std::min(m, inst.r()[static_cast<std::size_t>(i)]);
    return m;
}

}  // namespace

TEST_CASE("opaque price optimization: boundary optima") {
    OpaqueQuote pair = optimize_opaque_price(kSubst, Assortment({0, 1}, 3));
    CHECK(pair.rho == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pair.revenue == doctest::Approx(2.988165000982396).epsilon(1e-10));

    OpaqueQuote full = optimize_opaque_price(kSubst, Assortment::full(3));
    CHECK(full.rho == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(full.revenue == doctest::Approx(2.9887909634651035).epsilon(1e-10));
    CHECK_FALSE(full.guard_disagreement);

    OpaqueQuote ones = optimize_opaque_price(kOnes, Assortment::full(2));
    CHECK(ones.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ones.revenue == doctest::Approx(2.0 / 3).epsilon(1e-10));
}

TEST_CASE("opaque price optimization: interior optima") {
    OpaqueQuote sub = optimize_opaque_price(kRevHi, Assortment({1, 2}, 3));
    CHECK(std::abs(sub.rho - 1.99057) < 5e-3);
    CHECK(sub.revenue == doctest::Approx(1.1458108958071054).epsilon(1e-9));

    OpaqueQuote full = optimize_opaque_price(kRevHi, Assortment::full(3));
    CHECK(std::abs(full.rho - 1.80089) < 5e-3);
    CHECK(full.revenue == doctest::Approx(1.1335396808078557).epsilon(1e-9));

    OpaqueQuote huge = optimize_opaque_price(kHuge, Assortment::full(2));
    CHECK(std::abs(huge.rho - 1.1218675) < 1e-3);
    CHECK(huge.revenue == doctest::Approx(0.3366535332321271).epsilon(1e-9));
    CHECK_FALSE(huge.guard_disagreement);

    MarketInstance single({1.0}, {1e6});
    OpaqueQuote lone = optimize_opaque_price(single, Assortment({0}, 1));
    CHECK(std::abs(lone.rho - 1.5671432904097838) < 1e-3);
    CHECK(lone.revenue == doctest::Approx(0.5671432904097838).epsilon(1e-9));

    CHECK_THROWS_AS(optimize_opaque_price(kOnes, Assortment::full(2), 0.0),
                    std::invalid_argument);
}

TEST_CASE("optimized quotes satisfy maximality and consistency") {
    for (std::uint64_t t = 0; t < 150; ++t) {
        rng::Stream st(0xA5507, t);
        MarketInstance inst = random_instance(st, InstanceRange{.n_min = 1, .n_max = 6});
        Assortment S = random_nonempty_assortment(st, inst.n());
        double min_r = min_price(inst, S);

        OpaqueQuote q = optimize_opaque_price(inst, S);
        CHECK(q.rho >= 0.0);
        CHECK(q.rho <= min_r + 1e-12);
        CHECK(q.mode == OpaqueQuote::Mode::exact);
        CHECK(q.revenue >= trad_revenue(inst, S) - 1e-12);
        CHECK(q.distribution.total() == doctest::Approx(1.0).epsilon(1e-9));
        for (int j = 0; j < 8; ++j) {
            double rho = st.uniform() * min_r;
            CHECK(q.revenue >= opq_revenue_exact(inst, S, rho) - 1e-6);
        }
    }
}

TEST_CASE("revenue curve spans [0, min r]") {
    Assortment full = Assortment::full(3);
    RevenueCurve curve = revenue_curve(kSubst, full, 65);
    REQUIRE(curve.points.size() == 65);
    CHECK(curve.points.front().first == 0.0);
    CHECK(curve.points.back().first == 3.0);
    for (std::size_t j = 1; j < curve.points.size(); ++j)
        CHECK(curve.points[j].first > curve.points[j - 1].first);
    CHECK(curve.points.back().second ==
          doctest::Approx(trad_revenue(kSubst, full)).epsilon(1e-9));
    for (std::size_t j : {std::size_t{0}, std::size_t{17}, std::size_t{64}}) {
        auto [rho, rev] = curve.points[j];
        CHECK(rev == doctest::Approx(opq_revenue_exact(kSubst, full, rho)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(revenue_curve(kSubst, full, 1), std::invalid_argument);
}

TEST_CASE("curve maxima rank the two-product assortment first") {
    std::vector<std::vector<int>> subsets = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    double best = -1.0;
    std::vector<int> best_members;
    for (const auto& members : subsets) {
        RevenueCurve curve = revenue_curve(kFig, Assortment(members, 3), 257);
        double peak = 0.0;
        for (auto [rho, rev] : curve.points) peak = std::max(peak, rev);
        if (peak > best) {
            best = peak;
            best_members = members;
        }
    }
    CHECK(best_members == std::vector<int>{0, 2});
}

TEST_CASE("brute force: three-product regressions") {
    AssortmentSolution rev_hi = brute_force_assortment(kRevHi);
    CHECK(rev_hi.assortment.to_one_based() == std::vector<int>{2, 3});
    CHECK(rev_hi.revenue == doctest::Approx(1.1458108958071054).epsilon(1e-9));
    CHECK(std::abs(rev_hi.opaque_price - 1.99057) < 5e-3);
    CHECK(rev_hi.method == "brute-force");
    CHECK(rev_hi.candidates_evaluated == 7);
    CHECK(rev_hi.opaque_offered);
    CHECK_FALSE(rev_hi.guard_disagreement);

    AssortmentSolution fig = brute_force_assortment(kFig);
    CHECK(fig.assortment.to_one_based() == std::vector<int>{1, 3});
    CHECK(fig.revenue == doctest::Approx(1.0316064826990399).epsilon(1e-8));
    CHECK(std::abs(fig.opaque_price - 1.8668) < 5e-3);

    AssortmentSolution nrv_opt = brute_force_assortment(kNrv);
    CHECK(nrv_opt.assortment.to_one_based() == std::vector<int>{2, 3});
    CHECK(nrv_opt.revenue == doctest::Approx(1.0488592811414839).epsilon(1e-8));
    CHECK(std::abs(nrv_opt.opaque_price - 1.84901) < 5e-3);
}

TEST_CASE("brute force: boundary optimum counts as no opaque offer") {
    AssortmentSolution subst = brute_force_assortment(kSubst);
    CHECK(subst.assortment.to_one_based() == std::vector<int>{1, 2, 3});
    CHECK(subst.opaque_price == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(subst.opaque_offered);
}

TEST_CASE("brute force: ties break to fewer products then lower indices") {
    AssortmentSolution huge = brute_force_assortment(kHuge);
    CHECK(huge.assortment.to_one_based() == std::vector<int>{1});
    CHECK(huge.revenue == doctest::Approx(0.5671432904097838).epsilon(1e-9));
    CHECK(huge.opaque_offered);
    CHECK(huge.candidates_evaluated == 3);

    MarketInstance lone({0.3}, {2.0});
    AssortmentSolution only = brute_force_assortment(lone);
    CHECK(only.assortment.to_one_based() == std::vector<int>{1});
}

TEST_CASE("brute force: schedule independence and the size cap") {
    AssortmentSolution serial = brute_force_assortment(kRevHi, 1);
    AssortmentSolution parallel = brute_force_assortment(kRevHi, 3);
    CHECK(serial.assortment == parallel.assortment);
    CHECK(serial.revenue == parallel.revenue);
    CHECK(serial.opaque_price == parallel.opaque_price);

    std::vector<double> v(17, 1.0), r(17, 2.0);
    CHECK_THROWS_AS(brute_force_assortment(MarketInstance(v, r)), std::invalid_argument);
}

TEST_CASE("nested by valuation") {
    AssortmentSolution ones = nested_by_valuation(kOnes);
    CHECK(ones.assortment.to_one_based() == std::vector<int>{1, 2});
    CHECK(ones.revenue == doctest::Approx(2.0 / 3).epsilon(1e-9));
    CHECK_FALSE(ones.opaque_offered);
    CHECK(ones.method == "nested-by-valuation");
    CHECK(ones.candidates_evaluated == 2);

    AssortmentSolution huge = nested_by_valuation(kHuge);
    CHECK(huge.assortment.to_one_based() == std::vector<int>{1});
    CHECK(huge.revenue == doctest::Approx(0.5671432904097838).epsilon(1e-9));
    CHECK(huge.opaque_offered);

    CHECK_THROWS_AS(nested_by_valuation(kRevHi), std::invalid_argument);
}

TEST_CASE("nested by valuation matches brute force on uniform prices") {
    for (std::uint64_t t = 0; t < 80; ++t) {
        rng::Stream st(0x4E57ED, t);
        MarketInstance inst = random_instance(
            st, InstanceRange{.n_min = 1, .n_max = 7, .uniform_prices = true});
        AssortmentSolution nested = nested_by_valuation(inst);
        AssortmentSolution brute = brute_force_assortment(inst);
        CHECK(nested.revenue == doctest::Approx(brute.revenue).epsilon(1e-9));
    }
}

TEST_CASE("nrv heuristic") {
    AssortmentSolution sol = nrv_heuristic(kNrv);
    CHECK(sol.assortment.to_one_based() == std::vector<int>{1, 2, 3});
    CHECK(sol.revenue == doctest::Approx(1.0299599359701201).epsilon(1e-9));
    CHECK(sol.method == "nrv");
    CHECK(sol.candidates_evaluated == 5);

    ApproximationReport report = approximation_report(kNrv);
    CHECK(report.opt.assortment.to_one_based() == std::vector<int>{2, 3});
    CHECK(report.nrv.assortment.to_one_based() == std::vector<int>{1, 2, 3});
    CHECK(report.gap_percent == doctest::Approx(1.8018952).epsilon(1e-6));
}

TEST_CASE("nrv is exact for two products") {
    for (std::uint64_t t = 0; t < 120; ++t) {
        rng::Stream st(0x2B57, t);
        MarketInstance inst = random_instance(st, InstanceRange{.n_min = 2, .n_max = 2});
        AssortmentSolution nrv = nrv_heuristic(inst);
        AssortmentSolution brute = brute_force_assortment(inst);
        CHECK(nrv.revenue == doctest::Approx(brute.revenue).epsilon(1e-12));
        CHECK(nrv.assortment == brute.assortment);
    }
}

TEST_CASE("nrv keeps at least half the optimal revenue") {
    for (std::uint64_t t = 0; t < 120; ++t) {
        rng::Stream st(0x1234F, t);
        MarketInstance inst = random_instance(st, InstanceRange{.n_min = 1, .n_max = 7});
        ApproximationReport report = approximation_report(inst);
        CHECK(report.nrv.revenue >= 0.5 * report.opt.revenue - 1e-9);
        CHECK(report.nrv.revenue <= report.opt.revenue + 1e-9);
        CHECK(report.gap_percent >= -1e-9);
        CHECK(report.gap_percent <= 50.0 + 1e-9);
    }
}
