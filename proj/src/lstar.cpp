#include "olstar/lstar.hpp"

namespace olstar {

namespace {

void notify(const LearnOptions& options, const ObservationTable& table) {
    if (options.on_table_change)
        options.on_table_change(table);
}

} // namespace

namespace detail {

bool answers_match(const MealyMachine& hypothesis, const Word& word, Teacher& teacher) {
    const auto target_out = teacher.mq(word);
    const Word hyp_out = hypothesis.semantics(word);
    for (std::size_t i = 0; i < word.size(); ++i)
        if (hypothesis.outputs().name(hyp_out[i]) != teacher.output_name(target_out[i]))
            return false;
    return true;
}

} // namespace detail

MealyMachine build_hypothesis(const ObservationTable& table) {
    if (!table.is_closed())
        throw ContractError("build_hypothesis: table is not closed");
    if (!table.is_consistent())
        throw ContractError("build_hypothesis: table is not consistent");

    // one state per distinct prefix row, first occurrence is its class id
    std::unordered_map<std::uint64_t, StateId> class_of;
    std::vector<RowId> reps;
    for (RowId s : table.prefix_rows()) {
        auto [it, inserted] = class_of.try_emplace(table.row_hash(s),
                                                   static_cast<StateId>(reps.size()));
        (void)it;
        if (inserted)
            reps.push_back(s);
    }

    MealyMachine::Builder b(table.input_alphabet(), table.outputs());
    for (StateId q = 0; q < reps.size(); ++q)
        b.state("s" + std::to_string(q));
    for (StateId q = 0; q < reps.size(); ++q) {
        const RowId rep = reps[q];
        for (SymbolId a = 0; a < table.input_alphabet().size(); ++a) {
            const RowId succ = table.successor(rep, a);
            const auto target = class_of.find(table.row_hash(succ));
            if (target == class_of.end())
                throw ContractError("build_hypothesis: successor row matches no prefix row");
            // single-letter suffixes occupy the first |X| columns in order
            b.set_transition(q, a, target->second, table.cell(rep, a)[0]);
        }
    }
    b.set_initial(0); // class of the epsilon row, which is the first prefix row
    return std::move(b).build();
}

void process_counterexample(ObservationTable& table, const Word& counterexample,
                            Teacher& teacher, const LearnOptions& options) {
    if (counterexample.empty())
        throw ContractError("process_counterexample: empty word");
    if (detail::answers_match(build_hypothesis(table), counterexample, teacher))
        throw ContractError("process_counterexample: word is not a counterexample");

    for (std::size_t k = counterexample.size(); k-- > 0;) {
        Word e(counterexample.begin() + k, counterexample.end());
        if (table.has_suffix(e))
            continue;
        table.add_suffix(e);
        notify(options, table);
        if (!table.is_closed())
            return; // the main loop's promotions take it from here
        if (detail::answers_match(build_hypothesis(table), counterexample, teacher))
            return;
    }
    // unreachable if the teacher honoured its contract: once every suffix of
    // the word is a column, a closed table's hypothesis agrees on the word
    throw ContractError("process_counterexample: no progress on '" +
                        format_word(table.input_alphabet(), counterexample) + "'");
}

LearnResult run_lstar(Teacher& teacher, const LearnOptions& options) {
    ObservationTable table(teacher);
    notify(options, table);
    for (;;) {
        for (;;) {
            const auto defects = table.closed_defects();
            if (defects.empty())
                break;
            table.promote(defects.front());
            notify(options, table);
        }
        // distinct prefix rows can never disagree on successors
        if (!table.is_consistent())
            throw ContractError("run_lstar: closed table is inconsistent");
        MealyMachine hypothesis = build_hypothesis(table);
        const QueryStats snapshot = teacher.stats();
        const auto cex = teacher.eq(hypothesis);
        if (!cex)
            return {std::move(hypothesis), snapshot, {}};
        process_counterexample(table, cex->word(), teacher, options);
    }
}

} // namespace olstar
