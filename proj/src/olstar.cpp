#include "olstar/olstar.hpp"

#include <algorithm>
#include <unordered_set>

namespace olstar {

namespace {

void notify(const LearnOptions& options, const ObservationTable& table) {
    if (options.on_table_change)
        options.on_table_change(table);
}

bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

} // namespace

ComponentFamily build_components(const ObservationTable& table) {
    if (!table.is_output_closed())
        throw ContractError("build_components: projected closedness defects remain");
    if (!table.is_output_consistent())
        throw ContractError("build_components: projected consistency defects remain");

    ComponentFamily family;
    family.outputs = table.outputs();
    const Alphabet bits(std::vector<std::string>{"0", "1"});
    const auto prefixes = table.prefix_rows();

    for (SymbolId y = 0; y < family.outputs.size(); ++y) {
        std::unordered_map<std::uint64_t, StateId> class_of;
        std::vector<RowId> reps;
        for (RowId s : prefixes) {
            auto [it, inserted] = class_of.try_emplace(table.projected_row_hash(s, y),
                                                       static_cast<StateId>(reps.size()));
            (void)it;
            if (inserted)
                reps.push_back(s);
        }
        MealyMachine::Builder b(table.input_alphabet(), bits);
        for (StateId q = 0; q < reps.size(); ++q)
            b.state("s" + std::to_string(q));
        for (StateId q = 0; q < reps.size(); ++q) {
            const RowId rep = reps[q];
            for (SymbolId a = 0; a < table.input_alphabet().size(); ++a) {
                const RowId succ = table.successor(rep, a);
                const auto target = class_of.find(table.projected_row_hash(succ, y));
                if (target == class_of.end())
                    throw ContractError("build_components: successor row matches no prefix row");
                const SymbolId bit = table.cell(rep, a)[0] == y ? 1 : 0;
                b.set_transition(q, a, target->second, bit);
            }
        }
        b.set_initial(0); // bit-class of the epsilon row
        family.components.push_back(std::move(b).build());
    }
    return family;
}

std::optional<Word> component_consistency_witness(const ComponentFamily& family,
                                                  std::uint64_t joint_state_cap) {
    if (family.components.empty())
        throw ContractError("component_consistency_witness: empty family");
    const Alphabet& inputs = family.components[0].inputs();
    const std::size_t k = family.components.size();

    // each component's id for "1" (they all declare {"0","1"})
    std::vector<SymbolId> one(k);
    for (std::size_t i = 0; i < k; ++i)
        one[i] = family.components[i].outputs().require("1");

    struct Visit {
        std::uint32_t parent;
        SymbolId via;
    };
    std::unordered_map<Word, StateId, WordHash> ids;
    std::vector<Word> tuples;
    std::vector<Visit> visits;

    Word init(k);
    for (std::size_t i = 0; i < k; ++i)
        init[i] = family.components[i].initial();
    ids.emplace(init, 0);
    tuples.push_back(std::move(init));
    visits.push_back({0, kNoSymbol});

    for (std::uint32_t s = 0; s < tuples.size(); ++s) {
        const Word tuple = tuples[s];
        for (SymbolId a = 0; a < inputs.size(); ++a) {
            std::size_t fired = 0;
            for (std::size_t i = 0; i < k; ++i)
                fired += family.components[i].output(tuple[i], a) == one[i];
            if (fired != 1) {
                Word w{a};
                for (std::uint32_t j = s; visits[j].via != kNoSymbol; j = visits[j].parent)
                    w.push_back(visits[j].via);
                std::reverse(w.begin(), w.end());
                return w;
            }
            Word succ(k);
            for (std::size_t i = 0; i < k; ++i)
                succ[i] = family.components[i].next(tuple[i], a);
            auto [it, inserted] = ids.try_emplace(succ, static_cast<StateId>(tuples.size()));
            (void)it;
            if (inserted) {
                if (tuples.size() >= joint_state_cap)
                    throw ResourceError("component consistency search exceeded " +
                                        std::to_string(joint_state_cap) + " joint states");
                tuples.push_back(std::move(succ));
                visits.push_back({s, a});
            }
        }
    }
    return std::nullopt;
}

MealyMachine recompose(const ComponentFamily& family) {
    if (family.components.size() != family.outputs.size())
        throw ContractError("recompose: family must have one component per output");
    std::vector<OutputMap> maps;
    maps.reserve(family.outputs.size());
    for (SymbolId y = 0; y < family.outputs.size(); ++y)
        maps.push_back(indicator_map(family.outputs, y));
    std::vector<ComposePart> parts;
    parts.reserve(family.components.size());
    for (std::size_t i = 0; i < family.components.size(); ++i)
        parts.push_back({&family.components[i], &maps[i]});
    return compose(parts, family.outputs);
}

RowId select_row_fix(const ObservationTable& table, const DefectReport& report) {
    if (report.closedness.empty())
        throw ContractError("select_row_fix: no closedness defects");
    std::vector<RowId> candidates;
    std::unordered_set<RowId> seen;
    for (const auto& d : report.closedness)
        if (seen.insert(d.row).second)
            candidates.push_back(d.row);

    RowId best = candidates.front();
    std::size_t best_score = 0;
    bool first = true;
    for (RowId c : candidates) {
        std::size_t score = 0;
        for (const auto& d : report.closedness)
            score += table.projected_row_hash(d.row, d.output) ==
                     table.projected_row_hash(c, d.output);
        if (first || score > best_score ||
            (score == best_score && shortlex_less(table.row_word(c), table.row_word(best)))) {
            best = c;
            best_score = score;
            first = false;
        }
    }
    return best;
}

Word select_column_fix(const ObservationTable& table, const DefectReport& report) {
    if (report.consistency.empty())
        throw ContractError("select_column_fix: no consistency defects");

    struct Candidate {
        SymbolId input;
        std::uint32_t suffix;
        Word word;
    };
    std::vector<Candidate> candidates;
    std::unordered_set<Word, WordHash> seen;
    for (const auto& d : report.consistency) {
        Word w{d.input};
        const Word& e = table.suffix(d.suffix);
        w.insert(w.end(), e.begin(), e.end());
        if (seen.insert(w).second)
            candidates.push_back({d.input, d.suffix, std::move(w)});
    }

    // candidate input.suffix separates a defect pair iff the projected cells
    // of the pair's input-successors differ at the suffix
    auto fixes = [&](const Candidate& c, const DefectReport::Consistency& d) {
        const auto ca = table.cell(table.successor(d.row_a, c.input), c.suffix);
        const auto cb = table.cell(table.successor(d.row_b, c.input), c.suffix);
        for (std::size_t j = 0; j < ca.size(); ++j)
            if ((ca[j] == d.output) != (cb[j] == d.output))
                return true;
        return false;
    };

    const Candidate* best = nullptr;
    std::size_t best_score = 0;
    for (const auto& c : candidates) {
        std::size_t score = 0;
        for (const auto& d : report.consistency)
            score += fixes(c, d);
        if (!best || score > best_score ||
            (score == best_score && shortlex_less(c.word, best->word))) {
            best = &c;
            best_score = score;
        }
    }
    if (table.has_suffix(best->word))
        throw ContractError("select_column_fix: chosen column is already present");
    return best->word;
}

namespace {

enum class DefectKind { counterexample, witness };

// Does exactly one component fire at every position of w, and (for
// counterexamples) does the fired sequence match the teacher's answer?
bool family_explains(const ComponentFamily& family, const Word& w, DefectKind kind,
                     Teacher& teacher) {
    const std::size_t k = family.components.size();
    std::vector<StateId> state(k);
    std::vector<SymbolId> one(k);
    for (std::size_t i = 0; i < k; ++i) {
        state[i] = family.components[i].initial();
        one[i] = family.components[i].outputs().require("1");
    }
    const auto target_out =
        kind == DefectKind::counterexample ? teacher.mq(w) : std::span<const SymbolId>{};
    for (std::size_t p = 0; p < w.size(); ++p) {
        std::size_t fired = 0;
        SymbolId fired_y = kNoSymbol;
        for (std::size_t i = 0; i < k; ++i) {
            if (family.components[i].output(state[i], w[p]) == one[i]) {
                ++fired;
                fired_y = static_cast<SymbolId>(i);
            }
            state[i] = family.components[i].next(state[i], w[p]);
        }
        if (fired != 1)
            return false;
        if (kind == DefectKind::counterexample &&
            family.outputs.name(fired_y) != teacher.output_name(target_out[p]))
            return false;
    }
    return true;
}

// Shared processing for equivalence counterexamples and consistency
// witnesses: add the word's suffixes shortest first until the projected views
// have defects again or the rebuilt family explains the word.
void process_defect_word(ObservationTable& table, const Word& word, DefectKind kind,
                         Teacher& teacher, const LearnOptions& options) {
    if (word.empty())
        throw ContractError("process_defect_word: empty word");
    for (std::size_t k = word.size(); k-- > 0;) {
        Word e(word.begin() + k, word.end());
        if (table.has_suffix(e))
            continue;
        table.add_suffix(e);
        notify(options, table);
        if (!table.output_defects().empty())
            return; // the repair loop takes it from here
        if (family_explains(build_components(table), word, kind, teacher))
            return;
    }
    throw ContractError("process_defect_word: no progress on '" +
                        format_word(table.input_alphabet(), word) + "'");
}

} // namespace

LearnResult run_olstar(Teacher& teacher, const LearnOptions& options) {
    ObservationTable table(teacher);
    notify(options, table);
    for (;;) {
        for (;;) {
            const DefectReport& report = table.output_defects();
            if (!report.closedness.empty()) {
                table.promote(select_row_fix(table, report));
                notify(options, table);
                continue;
            }
            if (!report.consistency.empty()) {
                table.add_suffix(select_column_fix(table, report));
                notify(options, table);
                continue;
            }
            break;
        }

        if (table.is_closed()) {
            // the whole table is closed: the monolithic hypothesis is free,
            // no component or joint-consistency work needed
            MealyMachine hypothesis = build_hypothesis(table);
            const QueryStats snapshot = teacher.stats();
            const auto cex = teacher.eq(hypothesis);
            if (!cex)
                return {std::move(hypothesis), snapshot, build_components(table).sizes()};
            process_defect_word(table, cex->word(), DefectKind::counterexample, teacher,
                                options);
            continue;
        }

        ComponentFamily family = build_components(table);
        if (auto witness = component_consistency_witness(family, options.joint_state_cap)) {
            process_defect_word(table, *witness, DefectKind::witness, teacher, options);
            continue;
        }
        MealyMachine hypothesis = recompose(family);
        const QueryStats snapshot = teacher.stats();
        const auto cex = teacher.eq(hypothesis);
        if (!cex)
            return {std::move(hypothesis), snapshot, family.sizes()};
        process_defect_word(table, cex->word(), DefectKind::counterexample, teacher, options);
    }
}

} // namespace olstar
