#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opaque_mnl/assortment.hpp"
#include "opaque_mnl/bench.hpp"
#include "opaque_mnl/json_io.hpp"
#include "opaque_mnl/montecarlo.hpp"
#include "opaque_mnl/opaque.hpp"
#include "opaque_mnl/pricing.hpp"

namespace {

using namespace opaque_mnl;

constexpr const char* kSchemaFooter =
    "Instance JSON format (docs/schemas/instance.schema.json):\n"
    "  {\n"
    "    \"v\": [number, ...],   product valuations, finite\n"
    "    \"r\": [number, ...],   product prices, 0 < r[i] <= 1e6, same length as v\n"
    "    \"name\": string        optional label\n"
    "  }\n"
    "Product indices in --assortment and in all JSON output are 1-based.\n"
    "Output documents validate against docs/schemas/{quote,pricing_solution,\n"
    "assortment_solution,verify_report,bench_result}.schema.json.\n"
    "The environment variable OPAQUE_MNL_EXACT_CAP overrides the exact-mode\n"
    "assortment size cap (default 20).\n";

std::string shortest(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

int exact_cap_from_env() {
    const char* env = std::getenv("OPAQUE_MNL_EXACT_CAP");
    if (env == nullptr) return kDefaultExactCap;
    int cap = 0;
    const char* end = env + std::strlen(env);
    auto [p, ec] = std::from_chars(env, end, cap);
    if (ec != std::errc{} || p != end || cap < 1 || cap > 24)
        throw std::invalid_argument(
            "environment variable OPAQUE_MNL_EXACT_CAP: must be an integer in [1, 24]");
    return cap;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw std::invalid_argument("failed to write output file '" + path + "'");
}

Assortment assortment_or_full(const std::string& text, int n) {
    return text.empty() ? Assortment::full(n) : parse_assortment(text, n);
}

std::string one_based_list(const Assortment& S, char sep) {
    std::string out;
    for (int i : S.to_one_based()) {
        if (!out.empty()) out += sep;
        out += std::to_string(i);
    }
    return out;
}

std::string curve_csv(const RevenueCurve& curve) {
    std::string out = "rho,revenue\n";
    for (auto [rho, revenue] : curve.points) {
        out += shortest(rho);
        out += ',';
        out += shortest(revenue);
        out += '\n';
    }
    return out;
}

struct EvalArgs {
    std::string instance;
    std::string assortment;
    std::string mode = "exact";
    std::string out;
    double rho = 0.0;
    std::uint64_t samples = 0;
    double epsilon = 0.01;
    double delta = 0.05;
    std::uint64_t seed = 0;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
};

int run_eval(const EvalArgs& args, int cap) {
    MarketInstance inst = load_instance_file(args.instance);
    Assortment S = assortment_or_full(args.assortment, inst.n());
    bool mc = args.mode == "mc";
    if (!mc && (args.samples_opt->count() || args.epsilon_opt->count() ||
                args.delta_opt->count()))
        throw std::invalid_argument(
            "field '--samples'/'--epsilon'/'--delta': only valid with --mode mc");

    OpaqueQuote quote;
    if (mc) {
        if (args.samples_opt->count() &&
            (args.epsilon_opt->count() || args.delta_opt->count()))
            throw std::invalid_argument(
                "field '--samples': cannot be combined with --epsilon/--delta");
        McConfig cfg = args.samples_opt->count()
                           ? McConfig::with_samples(args.samples, args.seed)
                           : McConfig::with_tolerance(args.epsilon, args.delta, args.seed);
        quote = opq_revenue_mc(inst, S, args.rho, cfg);
    } else {
        quote = opq_quote_exact(inst, S, args.rho, cap);
    }

    ojson j = quote_to_json(quote);
    if (mc) j["seed"] = args.seed;
    write_output(render_json(j), args.out);
    std::fprintf(stderr, "eval: assortment [%s], rho %.4f, revenue %.4f (%s)\n",
                 one_based_list(S, ',').c_str(), quote.rho, quote.revenue,
                 mc ? "monte-carlo" : "exact");
    return 0;
}

int run_price(const std::string& instance, const std::string& assortment,
              const std::string& out) {
    MarketInstance inst = load_instance_file(instance);
    Assortment S = assortment_or_full(assortment, inst.n());
    PricingSolution sol = optimize_prices(inst, S);
    write_output(render_json(pricing_solution_to_json(sol)), out);
    std::fprintf(stderr, "price: assortment [%s], uniform price %.4f, revenue %.4f\n",
                 one_based_list(S, ',').c_str(), sol.uniform_price, sol.revenue);
    return 0;
}

int run_assort(const std::string& instance, const std::string& method, int jobs,
               const std::string& out, int cap) {
    MarketInstance inst = load_instance_file(instance);
    AssortmentSolution sol;
    if (method == "brute")
        sol = brute_force_assortment(inst, jobs, 1e-6, cap);
    else if (method == "nested")
        sol = nested_by_valuation(inst, 1e-6, cap);
    else
        sol = nrv_heuristic(inst, 1e-6, cap);
    write_output(render_json(assortment_solution_to_json(sol)), out);
    std::fprintf(stderr,
                 "assort: assortment [%s], opaque price %.4f, revenue %.4f (%s, "
                 "%llu candidates)\n",
                 one_based_list(sol.assortment, ',').c_str(), sol.opaque_price,
                 sol.revenue, sol.method.c_str(),
                 static_cast<unsigned long long>(sol.candidates_evaluated));
    if (sol.guard_disagreement) {
        std::fprintf(stderr,
                     "assort: warning: the two opaque-price searches disagree; the "
                     "revenue curve may not be unimodal\n");
        return 2;
    }
    return 0;
}

int run_curve(const std::string& instance, const std::string& assortment, int points,
              bool all_assortments, const std::string& out, int cap) {
    MarketInstance inst = load_instance_file(instance);
    if (!all_assortments) {
        Assortment S = assortment_or_full(assortment, inst.n());
        RevenueCurve curve = revenue_curve(inst, S, points, cap);
        write_output(curve_csv(curve), out);
        std::fprintf(stderr, "curve: assortment [%s], %d points on [0, min r]\n",
                     one_based_list(S, ',').c_str(), points);
        return 0;
    }

    if (inst.n() > kBruteForceCap)
        throw std::invalid_argument(
            "field '--all-assortments': instance has more than " +
            std::to_string(kBruteForceCap) + " products");
    if (out.empty())
        throw std::invalid_argument(
            "field '--out': an output directory is required with --all-assortments");
    std::filesystem::create_directories(out);
    const std::uint32_t count = (std::uint32_t{1} << inst.n()) - 1;
    for (std::uint32_t mask = 1; mask <= count; ++mask) {
        std::vector<int> members;
        for (int i = 0; i < inst.n(); ++i)
            if (mask >> i & 1) members.push_back(i);
        Assortment S(members, inst.n());
        RevenueCurve curve = revenue_curve(inst, S, points, cap);
        std::filesystem::path file =
            std::filesystem::path(out) / ("curve_" + one_based_list(S, '-') + ".csv");
        write_output(curve_csv(curve), file.string());
    }
    std::fprintf(stderr, "curve: wrote %u files to %s\n", count, out.c_str());
    return 0;
}

int run_verify(std::uint64_t trials, std::uint64_t seed, int n_max,
               const std::string& out) {
    struct Check {
        const char* name;
        SweepReport report;
    };
    Check checks[] = {
        {"no-opaque-gain", no_opaque_gain_sweep(trials, seed, n_max)},
        {"dominance", dominance_sweep(trials, seed, n_max)},
        {"price-monotonicity", monotonicity_sweep(trials, seed, n_max)},
    };

    ojson j;
    j["seed"] = seed;
    j["trials"] = trials;
    ojson arr = ojson::array();
    std::uint64_t total = 0;
    for (const Check& check : checks) {
        ojson cj;
        cj["name"] = check.name;
        cj["trials"] = check.report.trials;
        cj["violations"] = check.report.violations;
        cj["worst"] = check.report.worst;
        arr.push_back(std::move(cj));
        total += check.report.violations;
        std::fprintf(stderr, "verify: %-18s %llu trials, %llu violations, worst %.3g\n",
                     check.name, static_cast<unsigned long long>(check.report.trials),
                     static_cast<unsigned long long>(check.report.violations),
                     check.report.worst);
    }
    j["checks"] = std::move(arr);
    j["violations_total"] = total;
    write_output(render_json(j), out);
    return total == 0 ? 0 : 2;
}

int run_bench_cmd(std::uint64_t instances, int max_n, std::vector<int> n_values,
                  std::uint64_t seed, int jobs, const std::string& format,
                  const std::string& out, int cap) {
    BedConfig cfg;
    cfg.instances = instances;
    cfg.max_n = max_n;
    cfg.seed = seed;
    cfg.validate();
    if (n_values.empty())
        for (int n = 2; n <= max_n; ++n) n_values.push_back(n);

    std::vector<MarketInstance> bed = generate_bed(cfg);
    BenchResult result = run_bench(bed, cfg, n_values, jobs, cap);

    if (format == "csv")
        write_output(bench_csv(result.rows), out);
    else
        write_output(render_json(bench_result_to_json(result)), out);

    for (const BenchRow& row : result.rows)
        std::fprintf(stderr,
                     "bench: n=%d opaque %llu/%llu, suboptimal %llu, max gap %.4f%%, "
                     "avg gap %.4f%%, avg |S*| %.4f\n",
                     row.n, static_cast<unsigned long long>(row.opaque_count),
                     static_cast<unsigned long long>(instances),
                     static_cast<unsigned long long>(row.suboptimal_count),
                     row.max_gap_pct, row.avg_gap_pct, row.avg_opt_size);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "price and assortment optimization for logit markets with a risk-averse "
        "opaque product"};
    app.footer(kSchemaFooter);
    app.require_subcommand(1);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand(
        "eval", "revenue and choice probabilities at a fixed opaque price");
    eval->add_option("-i,--instance", eval_args.instance, "instance JSON file")
        ->required();
    eval->add_option("--assortment", eval_args.assortment,
                     "comma-separated 1-based product indices (default: all products)");
    eval->add_option("--rho", eval_args.rho, "opaque product price")->required();
    eval->add_option("--mode", eval_args.mode, "evaluation mode (default exact)")
        ->check(CLI::IsMember({"exact", "mc"}));
    eval_args.samples_opt =
        eval->add_option("--samples", eval_args.samples, "Monte Carlo sample count");
    eval_args.epsilon_opt = eval->add_option(
        "--epsilon", eval_args.epsilon,
        "Monte Carlo additive revenue tolerance (default 0.01)");
    eval_args.delta_opt = eval->add_option(
        "--delta", eval_args.delta, "Monte Carlo failure probability (default 0.05)");
    eval->add_option("--seed", eval_args.seed, "Monte Carlo seed (default 0)");
    eval->add_option("-o,--out", eval_args.out, "output file (default: stdout)");

    std::string price_instance, price_assortment, price_out;
    CLI::App* price = app.add_subcommand(
        "price", "jointly optimal product and opaque prices for an assortment");
    price->add_option("-i,--instance", price_instance, "instance JSON file")->required();
    price->add_option("--assortment", price_assortment,
                      "comma-separated 1-based product indices (default: all products)");
    price->add_option("-o,--out", price_out, "output file (default: stdout)");

    std::string assort_instance, assort_method = "brute", assort_out;
    int assort_jobs = 1;
    CLI::App* assort =
        app.add_subcommand("assort", "optimal assortment with an optimized opaque price");
    assort->add_option("-i,--instance", assort_instance, "instance JSON file")->required();
    assort->add_option("--method", assort_method,
                       "search method: brute | nested | nrv (default brute)")
        ->check(CLI::IsMember({"brute", "nested", "nrv"}));
    assort->add_option("--jobs", assort_jobs, "worker threads for brute force (default 1)")
        ->check(CLI::PositiveNumber);
    assort->add_option("-o,--out", assort_out, "output file (default: stdout)");

    std::string curve_instance, curve_assortment, curve_out;
    int curve_points = 101;
    bool curve_all = false;
    CLI::App* curve = app.add_subcommand(
        "curve", "exact revenue sampled along the opaque price interval, as CSV");
    curve->add_option("-i,--instance", curve_instance, "instance JSON file")->required();
    CLI::Option* curve_assortment_opt = curve->add_option(
        "--assortment", curve_assortment,
        "comma-separated 1-based product indices (default: all products)");
    curve->add_option("--points", curve_points, "grid points on [0, min r] (default 101)")
        ->check(CLI::Range(2, 1000000));
    curve->add_flag("--all-assortments", curve_all,
                    "write one CSV per nonempty assortment into the --out directory")
        ->excludes(curve_assortment_opt);
    curve->add_option("-o,--out", curve_out,
                      "output file, or directory with --all-assortments");

    std::uint64_t verify_trials = 1000, verify_seed = 0;
    int verify_n_max = 6;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand(
        "verify", "randomized falsification sweeps of the pricing structure results");
    verify->add_option("--trials", verify_trials, "trials per check (default 1000)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "sweep seed (default 0)");
    verify->add_option("--n-max", verify_n_max, "largest instance size (default 6)")
        ->check(CLI::Range(1, 12));
    verify->add_option("-o,--out", verify_out, "output file (default: stdout)");

    std::uint64_t bench_instances = 2000, bench_seed = 0;
    int bench_max_n = 9, bench_jobs = 1;
    std::vector<int> bench_n;
    std::string bench_format = "csv", bench_out;
    CLI::App* bench = app.add_subcommand(
        "bench", "regenerate the random instance bed and summarize optimal assortments");
    bench->add_option("--instances", bench_instances, "bed size (default 2000)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--max-n", bench_max_n, "products per instance (default 9)")
        ->check(CLI::Range(2, 16));
    bench->add_option("--n", bench_n,
                      "assortment problem size, repeatable (default 2..max-n)")
        ->check(CLI::Range(1, 16));
    bench->add_option("--seed", bench_seed, "bed seed (default 0)");
    bench->add_option("--jobs", bench_jobs, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--format", bench_format, "output format: csv | json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("-o,--out", bench_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        int cap = exact_cap_from_env();
        if (eval->parsed()) return run_eval(eval_args, cap);
        if (price->parsed()) return run_price(price_instance, price_assortment, price_out);
        if (assort->parsed())
            return run_assort(assort_instance, assort_method, assort_jobs, assort_out, cap);
        if (curve->parsed())
            return run_curve(curve_instance, curve_assortment, curve_points, curve_all,
                             curve_out, cap);
        if (verify->parsed())
            return run_verify(verify_trials, verify_seed, verify_n_max, verify_out);
        if (bench->parsed())
            return run_bench_cmd(bench_instances, bench_max_n, bench_n, bench_seed,
                                 bench_jobs, bench_format, bench_out, cap);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
