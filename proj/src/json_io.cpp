#include "opaque_mnl/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace opaque_mnl {

namespace {

constexpr double kPriceCap = 1e6;

std::vector<double> number_array(const ojson& j, const std::string& field) {
    if (!j.contains(field))
        throw std::invalid_argument("field '" + field + "': missing");
    const ojson& arr = j.at(field);
    if (!arr.is_array() || arr.empty())
        throw std::invalid_argument("field '" + field + "': must be a nonempty array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw std::invalid_argument("field '" + field + "[" + std::to_string(i) +
                                        "]': must be a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

}  // namespace

MarketInstance instance_from_json(const ojson& j) {
    if (!j.is_object())
        throw std::invalid_argument("instance document: must be a JSON object");
    std::vector<double> v = number_array(j, "v");
    std::vector<double> r = number_array(j, "r");
    if (v.size() != r.size())
        throw std::invalid_argument("field 'r': length " + std::to_string(r.size()) +
                                    " does not match 'v' length " +
                                    std::to_string(v.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || r[i] <= 0.0)
            throw std::invalid_argument("field 'r[" + std::to_string(i) +
                                        "]': must be finite and > 0");
        if (r[i] > kPriceCap)
            throw std::invalid_argument("field 'r[" + std::to_string(i) +
                                        "]': exceeds the price cap of 1e6");
        if (!std::isfinite(v[i]))
            throw std::invalid_argument("field 'v[" + std::to_string(i) +
                                        "]': must be finite");
    }
    std::string name;
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw std::invalid_argument("field 'name': must be a string");
        name = j.at("name").get<std::string>();
    }
    return MarketInstance(std::move(v), std::move(r), std::move(name));
}

ojson instance_to_json(const MarketInstance& inst) {
    ojson j;
    j["v"] = inst.v();
    j["r"] = inst.r();
    if (!inst.name().empty()) j["name"] = inst.name();
    return j;
}

MarketInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open instance file '" + path + "'");
    ojson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("instance file '" + path +
                                    "': " + std::string(e.what()));
    }
    return instance_from_json(j);
}

Assortment assortment_from_json(const ojson& j, int n) {
    if (!j.is_array())
        throw std::invalid_argument("field 'assortment': must be an array");
    std::vector<int> one_based;
    for (const auto& entry : j) {
        if (!entry.is_number_integer())
            throw std::invalid_argument("field 'assortment': entries must be integers");
        one_based.push_back(entry.get<int>());
    }
    return Assortment::from_one_based(one_based, n);
}

ojson assortment_to_json(const Assortment& S) {
    return ojson(S.to_one_based());
}

Assortment parse_assortment(const std::string& text, int n) {
    std::vector<int> one_based;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string token = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("field 'assortment': cannot parse '" + token +
                                        "' as a product index");
        }
        if (used != token.size())
            throw std::invalid_argument("field 'assortment': cannot parse '" + token +
                                        "' as a product index");
        one_based.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return Assortment::from_one_based(one_based, n);
}

ojson distribution_to_json(const ChoiceDistribution& dist) {
    ojson products = ojson::object();
    for (const auto& [i, p] : dist.p_product) products[std::to_string(i + 1)] = p;
    ojson j;
    j["p_product"] = std::move(products);
    j["p_opaque"] = dist.p_opaque;
    j["p_none"] = dist.p_none;
    return j;
}

ojson quote_to_json(const OpaqueQuote& quote) {
    ojson j;
    j["rho"] = quote.rho;
    j["revenue"] = quote.revenue;
    j["distribution"] = distribution_to_json(quote.distribution);
    j["mode"] = quote.mode == OpaqueQuote::Mode::exact ? "exact" : "monte-carlo";
    j["half_width"] = quote.half_width;
    if (quote.mode == OpaqueQuote::Mode::monte_carlo) j["samples"] = quote.samples;
    j["guard_disagreement"] = quote.guard_disagreement;
    return j;
}

ojson pricing_solution_to_json(const PricingSolution& sol) {
    ojson j;
    j["assortment"] = assortment_to_json(sol.assortment);
    j["uniform_price"] = sol.uniform_price;
    j["opaque_price"] = sol.opaque_price;
    j["revenue"] = sol.revenue;
    return j;
}

ojson assortment_solution_to_json(const AssortmentSolution& sol) {
    ojson j;
    j["assortment"] = assortment_to_json(sol.assortment);
    j["opaque_price"] = sol.opaque_price;
    j["revenue"] = sol.revenue;
    j["opaque_offered"] = sol.opaque_offered;
    j["method"] = sol.method;
    j["candidates_evaluated"] = sol.candidates_evaluated;
    j["guard_disagreement"] = sol.guard_disagreement;
    return j;
}

AssortmentSolution assortment_solution_from_json(const ojson& j) {
    AssortmentSolution sol;
    std::vector<int> one_based = j.at("assortment").get<std::vector<int>>();
    int max_index = 0;
    for (int i : one_based) max_index = std::max(max_index, i);
    sol.assortment = Assortment::from_one_based(one_based, max_index);
    sol.opaque_price = j.at("opaque_price").get<double>();
    sol.revenue = j.at("revenue").get<double>();
    sol.opaque_offered = j.at("opaque_offered").get<bool>();
    sol.method = j.at("method").get<std::string>();
    sol.candidates_evaluated = j.at("candidates_evaluated").get<std::uint64_t>();
    sol.guard_disagreement = j.at("guard_disagreement").get<bool>();
    return sol;
}

namespace {

ojson bed_config_to_json(const BedConfig& cfg) {
    ojson j;
    j["instances"] = cfg.instances;
    j["max_n"] = cfg.max_n;
    j["price_mu"] = cfg.price_mu;
    j["price_sigma"] = cfg.price_sigma;
    j["valuation_mu"] = cfg.valuation_mu;
    j["valuation_sigma"] = cfg.valuation_sigma;
    j["seed"] = cfg.seed;
    return j;
}

BedConfig bed_config_from_json(const ojson& j) {
    BedConfig cfg;
    cfg.instances = j.at("instances").get<std::uint64_t>();
    cfg.max_n = j.at("max_n").get<int>();
    cfg.price_mu = j.at("price_mu").get<double>();
    cfg.price_sigma = j.at("price_sigma").get<double>();
    cfg.valuation_mu = j.at("valuation_mu").get<double>();
    cfg.valuation_sigma = j.at("valuation_sigma").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

ojson bench_row_to_json(const BenchRow& row) {
    ojson j;
    j["n"] = row.n;
    j["opaque_count"] = row.opaque_count;
    j["suboptimal_count"] = row.suboptimal_count;
    j["max_gap_pct"] = row.max_gap_pct;
    j["avg_gap_pct"] = row.avg_gap_pct;
    j["avg_opt_size"] = row.avg_opt_size;
    return j;
}

BenchRow bench_row_from_json(const ojson& j) {
    BenchRow row;
    row.n = j.at("n").get<int>();
    row.opaque_count = j.at("opaque_count").get<std::uint64_t>();
    row.suboptimal_count = j.at("suboptimal_count").get<std::uint64_t>();
    row.max_gap_pct = j.at("max_gap_pct").get<double>();
    row.avg_gap_pct = j.at("avg_gap_pct").get<double>();
    row.avg_opt_size = j.at("avg_opt_size").get<double>();
    return row;
}

}  // namespace

ojson bench_result_to_json(const BenchResult& result) {
    ojson j;
    j["config"] = bed_config_to_json(result.config);
    j["n_values"] = result.n_values;
    ojson rows = ojson::array();
    for (const BenchRow& row : result.rows) rows.push_back(bench_row_to_json(row));
    j["summary"] = std::move(rows);
    ojson records = ojson::array();
    for (const BenchRecord& record : result.records) {
        ojson rj;
        rj["instance"] = record.instance_index;
        rj["n"] = record.n;
        rj["opt"] = assortment_solution_to_json(record.opt);
        rj["nrv"] = assortment_solution_to_json(record.nrv);
        rj["gap_percent"] = record.gap_percent;
        records.push_back(std::move(rj));
    }
    j["records"] = std::move(records);
    return j;
}

BenchResult bench_result_from_json(const ojson& j) {
    BenchResult result;
    result.config = bed_config_from_json(j.at("config"));
    result.n_values = j.at("n_values").get<std::vector<int>>();
    for (const auto& row : j.at("summary")) result.rows.push_back(bench_row_from_json(row));
    for (const auto& rj : j.at("records")) {
        BenchRecord record;
        record.instance_index = rj.at("instance").get<std::uint64_t>();
        record.n = rj.at("n").get<int>();
        record.opt = assortment_solution_from_json(rj.at("opt"));
        record.nrv = assortment_solution_from_json(rj.at("nrv"));
        record.gap_percent = rj.at("gap_percent").get<double>();
        result.records.push_back(std::move(record));
    }
    return result;
}

std::string render_json(const ojson& j) {
    return j.dump(2) + "\n";
}

}  // namespace opaque_mnl
