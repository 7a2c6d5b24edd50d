#include "olstar/experiment.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "olstar/random.hpp"

namespace olstar {

namespace {

std::string join_sizes(const std::vector<std::size_t>& sizes) {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i)
            out += '+';
        out += std::to_string(sizes[i]);
    }
    return out;
}

std::uint64_t metric_value(const ResultRow& row, std::string_view metric) {
    if (metric == "total_symbols")
        return row.stats.total_symbols();
    if (metric == "mq_count")
        return row.stats.mq_count;
    if (metric == "test_count")
        return row.stats.test_count;
    if (metric == "eq_count")
        return row.stats.eq_count;
    throw ContractError("unknown scatter metric '" + std::string(metric) + "'");
}

} // namespace

std::string_view algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::lstar: return "lstar";
    case Algorithm::olstar: return "olstar";
    }
    throw ContractError("unknown algorithm");
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "lstar")
        return Algorithm::lstar;
    if (name == "olstar")
        return Algorithm::olstar;
    throw ParseError("unknown algorithm '" + std::string(name) +
                     "' (expected lstar or olstar)");
}

std::string csv_header() {
    std::string out(kResultsCsvVersion);
    out += "\nbenchmark_id,algorithm,target_states,learned_states,mq_count,mq_symbols,"
           "test_count,test_symbols,eq_count,component_sizes,status,wall_ms\n";
    return out;
}

std::string csv_row(const ResultRow& row) {
    std::ostringstream out;
    out << row.benchmark_id << ',' << algorithm_name(row.algorithm) << ',' << row.target_states
        << ',' << row.learned_states << ',' << row.stats.mq_count << ',' << row.stats.mq_symbols
        << ',' << row.stats.test_count << ',' << row.stats.test_symbols << ','
        << row.stats.eq_count << ',' << join_sizes(row.component_sizes) << ',' << row.status
        << ',' << row.wall_ms << '\n';
    return out.str();
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << csv_header();
    for (const ResultRow& row : rows)
        out << csv_row(row);
}

ResultRow run_single(const MealyMachine& target, Algorithm algorithm, const OracleConfig& oracle,
                     std::string benchmark_id, const LearnOptions& options,
                     MealyMachine* learned) {
    ResultRow row;
    row.benchmark_id = std::move(benchmark_id);
    row.algorithm = algorithm;
    row.target_states = minimize(target).state_count();

    SimulatedTeacher teacher(target, oracle.mode, oracle.wp);
    const auto start = std::chrono::steady_clock::now();
    try {
        LearnResult result = algorithm == Algorithm::lstar ? run_lstar(teacher, options)
                                                           : run_olstar(teacher, options);
        row.stats = result.stats;
        row.learned_states = result.machine.state_count();
        row.component_sizes = result.component_sizes;
        if (equivalent(result.machine, target))
            row.status = "mismatch";
        if (learned)
            *learned = std::move(result.machine);
    } catch (const ResourceError&) {
        row.stats = teacher.stats();
        row.status = "resource-limit";
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    row.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    return row;
}

BenchSpec bench_instance(const BenchConfig& config, std::size_t index) {
    if (config.components == 0 || config.min_states == 0 || config.min_states > config.max_states)
        throw ContractError("benchmark config needs positive component counts and sizes");
    if (config.inputs_per_component == 0 || config.outputs_per_component == 0)
        throw ContractError("benchmark config needs non-empty per-component alphabets");

    BenchSpec spec;
    spec.seed = derive_seed(config.seed, index);
    spec.family = config.family;
    std::mt19937_64 rng(derive_seed(spec.seed, 0x73697a6573ull));
    const std::size_t k = config.family == BenchFamily::random ? 1 : config.components;
    const std::size_t spread = config.max_states - config.min_states + 1;
    for (std::size_t j = 0; j < k; ++j)
        spec.component_sizes.push_back(config.min_states + bounded(rng, spread));

    auto numbered = [](const std::string& prefix, std::size_t n) {
        std::vector<std::string> names;
        for (std::size_t t = 0; t < n; ++t)
            names.push_back(prefix + std::to_string(t));
        return names;
    };

    switch (config.family) {
    case BenchFamily::random:
        spec.inputs_per_component = {numbered("i", config.inputs_per_component)};
        spec.outputs_per_component = {numbered("o", config.outputs_per_component)};
        break;
    case BenchFamily::switching:
        // shared base inputs {a, b} by leaving inputs_per_component empty
        for (std::size_t j = 0; j < k; ++j)
            spec.outputs_per_component.push_back(
                numbered("o" + std::to_string(j) + "_", config.outputs_per_component));
        break;
    case BenchFamily::interleaving:
        for (std::size_t j = 0; j < k; ++j) {
            spec.inputs_per_component.push_back(
                numbered("i" + std::to_string(j) + "_", config.inputs_per_component));
            if (config.shared_outputs)
                spec.outputs_per_component.push_back(numbered("p", config.outputs_per_component));
            else
                spec.outputs_per_component.push_back(
                    numbered("o" + std::to_string(j) + "_", config.outputs_per_component));
        }
        break;
    }
    return spec;
}

std::string bench_instance_id(const BenchConfig& config, std::size_t index) {
    std::string id(bench_family_name(config.family));
    id += "-s" + std::to_string(config.seed) + "-i" + std::to_string(index);
    return id;
}

std::vector<ResultRow> run_bench(const BenchConfig& config,
                                 const std::function<void(const ResultRow&)>& on_row) {
    std::vector<ResultRow> rows;
    for (std::size_t index = 0; index < config.count; ++index) {
        const MealyMachine target = gen_machine(bench_instance(config, index));
        OracleConfig oracle = config.oracle;
        oracle.wp.seed = derive_seed(config.oracle.wp.seed, index);
        for (Algorithm algorithm : {Algorithm::lstar, Algorithm::olstar}) {
            rows.push_back(
                run_single(target, algorithm, oracle, bench_instance_id(config, index)));
            if (on_row)
                on_row(rows.back());
        }
    }
    return rows;
}

void write_scatter_files(const std::filesystem::path& dir, const std::vector<ResultRow>& rows) {
    std::filesystem::create_directories(dir);
    for (const std::string_view metric :
         {"total_symbols", "mq_count", "test_count", "eq_count"}) {
        const std::filesystem::path path = dir / ("scatter_" + std::string(metric) + ".csv");
        std::ofstream out(path);
        if (!out)
            throw ResourceError("cannot write " + path.string());
        out << "# olstar-scatter v1\nbenchmark_id,lstar,olstar\n";
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const ResultRow& a = rows[i];
            const ResultRow& b = rows[i + 1];
            if (a.algorithm != Algorithm::lstar || b.algorithm != Algorithm::olstar ||
                a.benchmark_id != b.benchmark_id || a.status != "ok" || b.status != "ok")
                continue;
            out << a.benchmark_id << ',' << metric_value(a, metric) << ','
                << metric_value(b, metric) << '\n';
        }
    }
}

} // namespace olstar
