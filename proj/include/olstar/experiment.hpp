#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

#include "olstar/benchgen.hpp"
#include "olstar/olstar.hpp"

namespace olstar {

enum class Algorithm { lstar, olstar };

std::string_view algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct OracleConfig {
    EqMode mode = EqMode::exact;
    WpConfig wp;
};

// One learning run. component_sizes is filled by the decomposed learner only;
// stats exclude the accepting equivalence query. status is "ok",
// "resource-limit" (a learner cap fired) or "mismatch" (a randomized oracle
// accepted a wrong hypothesis; the row's learned machine failed the
// ground-truth check).
struct ResultRow {
    std::string benchmark_id;
    Algorithm algorithm = Algorithm::lstar;
    std::size_t target_states = 0;
    std::size_t learned_states = 0;
    QueryStats stats;
    std::vector<std::size_t> component_sizes;
    std::string status = "ok";
    std::uint64_t wall_ms = 0;
};

// First line of every results file; bump the version when columns change.
inline constexpr std::string_view kResultsCsvVersion = "# olstar-results v1";

std::string csv_header();
std::string csv_row(const ResultRow& row);
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

// Learns the target through a fresh simulated teacher, then cross-checks the
// learned machine against the target itself (even when the oracle was
// randomized). On success the learned machine is also stored through
// `learned` when given.
ResultRow run_single(const MealyMachine& target, Algorithm algorithm, const OracleConfig& oracle,
                     std::string benchmark_id, const LearnOptions& options = {},
                     MealyMachine* learned = nullptr);

// A seeded batch of generated targets, each learned by both algorithms.
struct BenchConfig {
    BenchFamily family = BenchFamily::switching;
    std::size_t count = 10;
    std::uint64_t seed = 1;
    std::size_t components = 3;
    std::size_t min_states = 4;
    std::size_t max_states = 6;
    std::size_t inputs_per_component = 2;  // interleaving and random families
    std::size_t outputs_per_component = 2;
    bool shared_outputs = false; // interleaving: one output pool for everyone
    OracleConfig oracle;
};

// The generator recipe for instance `index`; pure in (config.seed, index).
BenchSpec bench_instance(const BenchConfig& config, std::size_t index);
std::string bench_instance_id(const BenchConfig& config, std::size_t index);

std::vector<ResultRow> run_bench(const BenchConfig& config,
                                 const std::function<void(const ResultRow&)>& on_row = {});

// One two-column comparison file per metric (classic cost on the left,
// decomposed cost on the right), covering instances where both runs finished
// ok. Metrics: total_symbols, mq_count, test_count, eq_count.
void write_scatter_files(const std::filesystem::path& dir, const std::vector<ResultRow>& rows);

} // namespace olstar
