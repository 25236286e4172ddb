#pragma once

#include <string>

#include <json.hpp>

#include "opaque_mnl/assortment.hpp"
#include "opaque_mnl/bench.hpp"
#include "opaque_mnl/opaque.hpp"
#include "opaque_mnl/pricing.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Insertion-ordered JSON so serialized output is byte-deterministic.
using ojson = nlohmann::ordered_json;

/// Parses {"v": [...], "r": [...], "name"?: string}. Validation errors name
/// the offending field. Prices are capped at 1e6 here (the cap stands in for
/// unbounded prices in external inputs; library constructors do not impose
/// it).
MarketInstance instance_from_json(const ojson& j);
ojson instance_to_json(const MarketInstance& inst);

/// Reads an instance file from disk, reporting parse errors with the path.
MarketInstance load_instance_file(const std::string& path);

/// Assortments are serialized as sorted arrays of 1-based product indices.
Assortment assortment_from_json(const ojson& j, int n);
ojson assortment_to_json(const Assortment& S);

/// Parses a comma-separated list of 1-based indices, e.g. "1,3".
Assortment parse_assortment(const std::string& text, int n);

/// p_product keys are 1-based product indices rendered as strings.
ojson distribution_to_json(const ChoiceDistribution& dist);

ojson quote_to_json(const OpaqueQuote& quote);
ojson pricing_solution_to_json(const PricingSolution& sol);
ojson assortment_solution_to_json(const AssortmentSolution& sol);
AssortmentSolution assortment_solution_from_json(const ojson& j);

/// Full benchmark dump: config, summary rows, per-instance solutions.
ojson bench_result_to_json(const BenchResult& result);
BenchResult bench_result_from_json(const ojson& j);

/// Two-space indented dump with a trailing newline.
std::string render_json(const ojson& j);

}  // namespace opaque_mnl
