#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "olstar/error.hpp"

namespace olstar {

using SymbolId = std::uint32_t;
using StateId = std::uint32_t;

inline constexpr SymbolId kNoSymbol = ~SymbolId{0};
inline constexpr StateId kNoState = ~StateId{0};

// A word over some Alphabet, as symbol ids.
using Word = std::vector<SymbolId>;

struct WordHash {
    std::size_t operator()(const Word& w) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (SymbolId s : w) {
            h ^= s;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// An ordered set of distinct symbol names. Ids are assigned in insertion order
// and never change, so a Word is meaningful only together with its Alphabet.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    // Adds a new name; throws AlphabetError if it is empty or already present.
    SymbolId add(std::string_view name);
    // Adds the name if missing, returns its id either way.
    SymbolId intern(std::string_view name);

    std::optional<SymbolId> find(std::string_view name) const;
    // Like find(), but throws AlphabetError when the name is unknown.
    SymbolId require(std::string_view name) const;

    const std::string& name(SymbolId id) const;
    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }

    // Same names in the same order.
    bool operator==(const Alphabet& other) const { return names_ == other.names_; }
    // Same names, order ignored.
    bool same_set(const Alphabet& other) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> index_;
};

// Parses a whitespace-separated word ("a b a") into ids; throws AlphabetError
// on unknown symbols.
Word to_word(const Alphabet& alphabet, std::string_view text);
// Renders ids back to space-separated names.
std::string format_word(const Alphabet& alphabet, std::span<const SymbolId> word);

// A deterministic complete Mealy machine. States carry names for file output;
// transitions are dense arrays indexed by state * |inputs| + input.
class MealyMachine {
public:
    class Builder {
    public:
        Builder(Alphabet inputs, Alphabet outputs);

        // Interns a state by name (fresh states get the next id).
        StateId state(std::string_view name);
        // Adds an anonymous state named q<id>.
        StateId add_state();
        void set_initial(StateId q);
        // Defines delta(from, input) and lambda(from, input); redefinition is an
        // error.
        void set_transition(StateId from, SymbolId input, StateId to, SymbolId output);

        std::size_t state_count() const { return state_names_.size(); }
        const Alphabet& inputs() const { return inputs_; }
        const Alphabet& outputs() const { return outputs_; }
        // Validates totality and the initial state, then produces the machine.
        MealyMachine build() &&;

    private:
        Alphabet inputs_;
        Alphabet outputs_;
        std::vector<std::string> state_names_;
        std::unordered_map<std::string, StateId> state_index_;
        StateId initial_ = kNoState;
        std::vector<StateId> next_;
        std::vector<SymbolId> out_;
    };

    const Alphabet& inputs() const { return inputs_; }
    const Alphabet& outputs() const { return outputs_; }
    std::size_t state_count() const { return state_names_.size(); }
    StateId initial() const { return initial_; }
    const std::string& state_name(StateId q) const { return state_names_[q]; }

    StateId next(StateId q, SymbolId input) const {
        return next_[q * inputs_.size() + input];
    }
    SymbolId output(StateId q, SymbolId input) const {
        return out_[q * inputs_.size() + input];
    }

    struct RunResult {
        StateId state;
        Word outputs;
    };

    // Extended transition/output function from an arbitrary state. Throws
    // AlphabetError if the word contains an id outside the input alphabet.
    RunResult run(StateId from, std::span<const SymbolId> word) const;
    // The machine's semantics: output word produced from the initial state.
    Word semantics(std::span<const SymbolId> word) const;

private:
    friend class Builder;
    MealyMachine() = default;

    Alphabet inputs_;
    Alphabet outputs_;
    std::vector<std::string> state_names_;
    StateId initial_ = 0;
    std::vector<StateId> next_;
    std::vector<SymbolId> out_;
};

// A total map f : domain -> codomain between output alphabets, stored as
// table[y] = f(y).
class OutputMap {
public:
    OutputMap(Alphabet domain, Alphabet codomain, std::vector<SymbolId> table);

    static OutputMap identity(const Alphabet& alphabet);

    const Alphabet& domain() const { return domain_; }
    const Alphabet& codomain() const { return codomain_; }
    SymbolId apply(SymbolId y) const { return table_[y]; }
    // Pointwise extension f*.
    Word apply_word(std::span<const SymbolId> word) const;

private:
    Alphabet domain_;
    Alphabet codomain_;
    std::vector<SymbolId> table_;
};

// The indicator map 1_y : alphabet -> {"0","1"} sending y to "1" and every
// other symbol to "0". Throws AlphabetError if y is not in the alphabet.
OutputMap indicator_map(const Alphabet& alphabet, SymbolId y);
OutputMap indicator_map(const Alphabet& alphabet, std::string_view y);

// True when the tuple map y -> (f_1(y), ..., f_k(y)) is injective. All maps
// must share the same domain as a set; throws AlphabetError otherwise (or when
// the family is empty).
bool is_jointly_injective(std::span<const OutputMap> maps);

// Output relabelling M^f: same states and transitions, outputs pushed through
// f. Requires f.domain to contain every output symbol of m (by name); the
// result's output alphabet is f's full codomain.
MealyMachine apply_output_map(const MealyMachine& m, const OutputMap& f);

// The projection M^y = apply_output_map(m, 1_y). Not minimized.
MealyMachine project(const MealyMachine& m, SymbolId y);
MealyMachine project(const MealyMachine& m, std::string_view y);

struct ComposePart {
    const MealyMachine* machine;
    const OutputMap* map;
};

// Product of the family over shared inputs: in joint state (q_1..q_k) on input
// a the composite emits the unique y in target_outputs with f_i(y) =
// lambda_i(q_i, a) for all i. Only the reachable part is built. Throws
// CompositionError when no or several such y exist at a reachable pair,
// AlphabetError on alphabet mismatches (inputs must agree by name and order,
// each f_i.domain must equal target_outputs as a set, and each f_i.codomain
// must cover machine i's outputs).
MealyMachine compose(std::span<const ComposePart> parts, const Alphabet& target_outputs);

// Minimal machine equivalent to m: unreachable states dropped, then partition
// refinement. States are renumbered in BFS order from the initial state
// (inputs in alphabet order), so equal-behavior machines minimize to
// structurally identical results.
MealyMachine minimize(const MealyMachine& m);

class Counterexample {
public:
    explicit Counterexample(Word word) : word_(std::move(word)) {}
    const Word& word() const { return word_; }

private:
    Word word_;
};

// std::nullopt when the machines agree on every input word; otherwise a
// shortest word on which their outputs differ. Inputs must be identical (same
// names, same order); outputs are compared by name.
using EqOutcome = std::optional<Counterexample>;
EqOutcome equivalent(const MealyMachine& m1, const MealyMachine& m2);

// True when the reachable parts are identical up to state renaming. Input
// alphabets must match as sets; outputs are compared by name.
bool isomorphic(const MealyMachine& a, const MealyMachine& b);

// Copy of m with its input alphabet reordered to `inputs` (same names required).
MealyMachine reindex_inputs(const MealyMachine& m, const Alphabet& inputs);

} // namespace olstar
