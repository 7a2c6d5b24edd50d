#pragma once

#include "olstar/lstar.hpp"

namespace olstar {

// One two-output component per discovered output symbol: component y tracks
// where the target emits y (bit alphabet {"0","1"}), indexed by the shared
// output registry.
struct ComponentFamily {
    Alphabet outputs;
    std::vector<MealyMachine> components;

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out;
        out.reserve(components.size());
        for (const auto& c : components)
            out.push_back(c.state_count());
        return out;
    }
};

// One component per output from the projected views of the table: states are
// the bit-classes of prefix rows, outputs come from the single-letter columns.
// Throws ContractError while projected defects remain.
ComponentFamily build_components(const ObservationTable& table);

// Shortest input word (if any) whose last position breaks the law that
// exactly one component emits 1, searched breadth-first over the family's
// reachable joint states. Throws ResourceError when more than joint_state_cap
// joint states appear before the search finishes.
std::optional<Word> component_consistency_witness(const ComponentFamily& family,
                                                  std::uint64_t joint_state_cap = 1'000'000);

// Product of the family under the indicator maps of its output registry. Only
// valid (by construction of compose) when the family satisfies the
// exactly-one-component law on every reachable word.
MealyMachine recompose(const ComponentFamily& family);

// Greedy fixes over a non-empty defect report: the candidate that fixes the
// most defects wins, ties go to the shortlex-smaller word.
// A promotion candidate fixes a closedness defect if its projected row equals
// the defect row's under the defect's output.
RowId select_row_fix(const ObservationTable& table, const DefectReport& report);
// A column candidate input.suffix fixes a consistency defect if it separates
// the defect's row pair under the defect's output; its cells are predicted
// from existing ones, so scoring asks no queries.
Word select_column_fix(const ObservationTable& table, const DefectReport& report);

// Output-decomposed learning loop: repair projected defects (rows before
// columns), then either propose the monolithic hypothesis when the full table
// happens to be closed, or build the component family, check it for a
// consistency witness and propose its recomposition. Defect words (witnesses
// and counterexamples) are processed suffix by suffix, shortest first, until
// the table has projected defects again or the family explains the word.
LearnResult run_olstar(Teacher& teacher, const LearnOptions& options = {});

} // namespace olstar
