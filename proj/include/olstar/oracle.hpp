#pragma once

#include <random>
#include <span>
#include <unordered_map>

#include "olstar/mealy.hpp"

namespace olstar {

// Cumulative query counters. mq_* count learning queries and test_* count
// conformance-testing queries; each channel has its own cache and counts a
// word only the first time the target actually runs it. eq_count counts
// equivalence queries.
struct QueryStats {
    std::uint64_t mq_count = 0;
    std::uint64_t mq_symbols = 0;
    std::uint64_t test_count = 0;
    std::uint64_t test_symbols = 0;
    std::uint64_t eq_count = 0;

    std::uint64_t total_symbols() const { return mq_symbols + test_symbols; }
    bool operator==(const QueryStats&) const = default;
};

// Parameters of the randomized conformance-testing equivalence check.
struct WpConfig {
    std::uint64_t seed = 1;
    // random test words per equivalence query before answering yes
    std::uint32_t max_tests = 20000;
    // expected length of the random middle section of each test word
    double expected_middle_length = 4.0;
    // characterization suffixes longer than this are not derived
    std::uint32_t max_suffix_length = 64;
};

// Minimally adequate teacher. Answer words use the teacher's own output ids;
// output_name() resolves them, and learners must compare outputs by name.
class Teacher {
public:
    virtual ~Teacher() = default;

    virtual const Alphabet& input_alphabet() const = 0;
    // Output word of the target on `word`. The returned span stays valid for
    // the teacher's lifetime.
    virtual std::span<const SymbolId> mq(std::span<const SymbolId> word) = 0;
    virtual const std::string& output_name(SymbolId output) const = 0;
    // std::nullopt means the hypothesis passed; otherwise a word whose last
    // symbol already distinguishes hypothesis and target. The hypothesis
    // input alphabet must equal the target's (names and order).
    virtual EqOutcome eq(const MealyMachine& hypothesis) = 0;
    virtual QueryStats stats() const = 0;
};

enum class EqMode { exact, random_wp };

// Teacher simulated on a concrete target machine. Equivalence queries are
// either exact product checks or randomized conformance testing (access
// sequence + geometric random middle + a characterization suffix of the
// reached hypothesis state). Fixed seeds give identical runs.
class SimulatedTeacher final : public Teacher {
public:
    explicit SimulatedTeacher(MealyMachine target, EqMode mode = EqMode::exact,
                              WpConfig wp = {});

    const Alphabet& input_alphabet() const override { return target_.inputs(); }
    std::span<const SymbolId> mq(std::span<const SymbolId> word) override;
    const std::string& output_name(SymbolId output) const override {
        return target_.outputs().name(output);
    }
    EqOutcome eq(const MealyMachine& hypothesis) override;
    QueryStats stats() const override { return stats_; }

    // Testing-channel query (separate cache and counters from mq). Public so
    // tests can pin the channel split.
    std::span<const SymbolId> test_query(std::span<const SymbolId> word);

    const MealyMachine& target() const { return target_; }

    // Introspection for the counting tests.
    std::size_t learn_cache_size() const { return learn_cache_.size(); }
    std::size_t test_cache_size() const { return test_cache_.size(); }
    std::uint64_t target_evaluations() const { return target_evaluations_; }

private:
    using Cache = std::unordered_map<Word, Word, WordHash>;

    std::span<const SymbolId> answer(Cache& cache, std::span<const SymbolId> word,
                                     std::uint64_t& count, std::uint64_t& symbols);
    EqOutcome wp_search(const MealyMachine& hypothesis);

    MealyMachine target_;
    EqMode mode_;
    WpConfig wp_;
    std::mt19937_64 rng_;
    Cache learn_cache_;
    Cache test_cache_;
    QueryStats stats_;
    std::uint64_t target_evaluations_ = 0;
};

// Characterization suffixes of every machine state, derived from a splitting
// tree (single letters first, then letter-prefixed splitters of successor
// separations). States a suffix set cannot tell apart share their set.
// Exposed for tests and reusable by any conformance-testing strategy.
std::vector<std::vector<Word>> characterization_suffixes(const MealyMachine& m,
                                                         std::uint32_t max_suffix_length);

} // namespace olstar
