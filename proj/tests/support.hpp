#pragma once

#include <optional>
#include <random>
#include <vector>

#include "olstar/mealy.hpp"
#include "olstar/random.hpp"

// Shared fixtures and brute-force oracles for the unit tests. The oracles are
// deliberately naive (word enumeration, no hashing) so they stay independent
// of the library code they check.
namespace testsupport {

using namespace olstar;

// Six-state demo machine: two interlocking 3-cycles over inputs {a,b} and
// outputs {x,y,z}. Minimal, and every projection minimizes to 3 states.
inline MealyMachine cycle6() {
    MealyMachine::Builder b(Alphabet({"a", "b"}), Alphabet({"x", "y", "z"}));
    StateId q[6];
    for (int i = 0; i < 6; ++i)
        q[i] = b.state("q" + std::to_string(i));
    const SymbolId a = 0, bb = 1, x = 0, y = 1, z = 2;
    b.set_transition(q[0], a, q[1], y);
    b.set_transition(q[1], a, q[2], z);
    b.set_transition(q[2], a, q[0], x);
    b.set_transition(q[5], a, q[4], y);
    b.set_transition(q[4], a, q[3], x);
    b.set_transition(q[3], a, q[5], z);
    b.set_transition(q[0], bb, q[3], x);
    b.set_transition(q[3], bb, q[0], x);
    b.set_transition(q[1], bb, q[4], y);
    b.set_transition(q[4], bb, q[1], y);
    b.set_transition(q[2], bb, q[5], z);
    b.set_transition(q[5], bb, q[2], z);
    b.set_initial(q[0]);
    return std::move(b).build();
}

// Golden minimal form of cycle6 projected onto x: a/0, a/0, a/1 around a
// 3-cycle, with a b-self-loop emitting 1 at the start state.
inline MealyMachine cycle6_proj_x_min() {
    MealyMachine::Builder b(Alphabet({"a", "b"}), Alphabet({"0", "1"}));
    StateId p0 = b.state("p0");
    StateId p1 = b.state("p1");
    StateId p2 = b.state("p2");
    b.set_transition(p0, 0, p1, 0);
    b.set_transition(p1, 0, p2, 0);
    b.set_transition(p2, 0, p0, 1);
    b.set_transition(p0, 1, p0, 1);
    b.set_transition(p1, 1, p2, 0);
    b.set_transition(p2, 1, p1, 0);
    b.set_initial(p0);
    return std::move(b).build();
}

// All words over ids [0, n_symbols) up to max_len, in shortlex order.
inline std::vector<Word> all_words(std::size_t n_symbols, std::size_t max_len) {
    std::vector<Word> words{Word{}};
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t level_end = words.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (SymbolId s = 0; s < n_symbols; ++s) {
                Word w = words[i];
                w.push_back(s);
                words.push_back(std::move(w));
            }
        level_begin = level_end;
    }
    return words;
}

// First word (shortlex) of length <= max_len on which the machines' outputs
// differ, comparing output symbols by name. Input alphabets must be identical.
inline std::optional<Word> brute_diff(const MealyMachine& m1, const MealyMachine& m2,
                                      std::size_t max_len) {
    for (const Word& w : all_words(m1.inputs().size(), max_len)) {
        const Word o1 = m1.semantics(w);
        const Word o2 = m2.semantics(w);
        for (std::size_t i = 0; i < w.size(); ++i)
            if (m1.outputs().name(o1[i]) != m2.outputs().name(o2[i])) {
                Word prefix(w.begin(), w.begin() + i + 1);
                return prefix;
            }
    }
    return std::nullopt;
}

// Uniform random machine for property tests; no connectivity repair on
// purpose (behavioural properties must hold regardless).
inline MealyMachine random_machine(std::uint64_t seed, std::uint32_t n_states,
                                   std::uint32_t n_inputs, std::uint32_t n_outputs) {
    std::mt19937_64 rng(seed);
    Alphabet in, out;
    for (std::uint32_t i = 0; i < n_inputs; ++i)
        in.add("i" + std::to_string(i));
    for (std::uint32_t i = 0; i < n_outputs; ++i)
        out.add("o" + std::to_string(i));
    MealyMachine::Builder b(std::move(in), std::move(out));
    for (std::uint32_t i = 0; i < n_states; ++i)
        b.add_state();
    for (StateId q = 0; q < n_states; ++q)
        for (SymbolId a = 0; a < n_inputs; ++a)
            b.set_transition(q, a, bounded(rng, n_states), bounded(rng, n_outputs));
    b.set_initial(0);
    return std::move(b).build();
}

// Three-state chain over one input: 0, 0, then 1 looping back. Its initial
// observation table is closed but describes a wrong one-state machine.
inline MealyMachine chain3() {
    MealyMachine::Builder b(Alphabet({"a"}), Alphabet({"0", "1"}));
    StateId s0 = b.state("s0"), s1 = b.state("s1"), s2 = b.state("s2");
    b.set_transition(s0, 0, s1, 0);
    b.set_transition(s1, 0, s2, 0);
    b.set_transition(s2, 0, s0, 1);
    b.set_initial(s0);
    return std::move(b).build();
}

// Four states whose table becomes closed per output strictly before it is
// closed outright: after promoting rows a and b, row "a a" matches a
// different anchor row under each output but no anchor row in full.
inline MealyMachine gapped4() {
    MealyMachine::Builder b(Alphabet({"a", "b"}), Alphabet({"0", "1", "2"}));
    StateId A = b.state("A"), B = b.state("B"), C = b.state("C"), D = b.state("D");
    b.set_transition(A, 0, B, 0);
    b.set_transition(A, 1, C, 1);
    b.set_transition(B, 0, D, 1);
    b.set_transition(B, 1, A, 2);
    b.set_transition(C, 0, A, 2);
    b.set_transition(C, 1, B, 0);
    b.set_transition(D, 0, C, 2);
    b.set_transition(D, 1, D, 1);
    b.set_initial(A);
    return std::move(b).build();
}

} // namespace testsupport
