#pragma once

#include <functional>

#include "olstar/observation_table.hpp"

namespace olstar {

struct LearnOptions {
    // Invoked on the fresh table and after every mutation; used by invariant
    // audits. Must not mutate the table.
    std::function<void(const ObservationTable&)> on_table_change;
    // Cap for the joint-state search of the component-consistency check.
    std::uint64_t joint_state_cap = 1'000'000;
};

struct LearnResult {
    MealyMachine machine;
    // Teacher stats snapshot taken just before the accepting equivalence
    // query, so the final query (and its testing cost) is excluded.
    QueryStats stats;
    // State counts of the hypothesis' component machines, in output registry
    // order. Filled by the decomposed learner, empty otherwise.
    std::vector<std::size_t> component_sizes;
};

// Hypothesis from a closed and consistent table: one state per distinct
// prefix row, outputs from the single-letter columns. Throws ContractError on
// a table with defects.
MealyMachine build_hypothesis(const ObservationTable& table);

// Adds the counterexample's suffixes (shortest first, skipping known ones)
// until the table is unclosed or the rebuilt hypothesis agrees with the
// teacher on the word. Throws ContractError if the word is not actually a
// counterexample for the table's current hypothesis.
void process_counterexample(ObservationTable& table, const Word& counterexample,
                            Teacher& teacher, const LearnOptions& options = {});

// Classic active learning loop: close the table (first defect in row order),
// build the monolithic hypothesis, ask, process the counterexample, repeat.
LearnResult run_lstar(Teacher& teacher, const LearnOptions& options = {});

namespace detail {
// True when the hypothesis' outputs on the word match the teacher's answer
// (names compared, since the two sides use different id spaces).
bool answers_match(const MealyMachine& hypothesis, const Word& word, Teacher& teacher);
} // namespace detail

} // namespace olstar
