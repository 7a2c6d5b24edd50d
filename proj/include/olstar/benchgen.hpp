#pragma once

#include <cstdint>

#include "olstar/mealy.hpp"

namespace olstar {

enum class BenchFamily { random, switching, interleaving };

std::string_view bench_family_name(BenchFamily family);
BenchFamily parse_bench_family(std::string_view name);

// Seeded recipe for one benchmark machine. component_sizes, the per-component
// alphabets and the family decide the shape; the seed decides the transitions.
// The random family uses exactly one component entry.
struct BenchSpec {
    std::uint64_t seed = 1;
    BenchFamily family = BenchFamily::random;
    std::vector<std::size_t> component_sizes;
    std::vector<std::vector<std::string>> inputs_per_component;
    std::vector<std::vector<std::string>> outputs_per_component;
};

// Uniformly random transitions and outputs, then connectivity repair:
// transitions are redirected toward unreachable states (at most n-1 of them)
// until everything is reachable. Deterministic per seed.
MealyMachine gen_random(std::uint64_t seed, std::size_t n_states, const Alphabet& inputs,
                        const Alphabet& outputs);

// k strongly connected random components over a shared input alphabet
// (default {a, b}) with pairwise disjoint output alphabets. Global states are
// (active component, all component states); shared inputs step only the
// active component, which emits; the extra inputs L and R rotate the active
// index and emit the reserved output `sw`. State count is k * prod(sizes).
MealyMachine gen_switching(const BenchSpec& spec);

// Strongly connected random components over pairwise disjoint input
// alphabets; outputs may be shared. Global states are component-state
// tuples; each input steps only the component owning it, which emits.
// State count is prod(sizes).
MealyMachine gen_interleaving(const BenchSpec& spec);

MealyMachine gen_machine(const BenchSpec& spec);

// State counts of the minimized projection onto every declared output, in
// registry order, plus their sum and the minimized size of the machine
// itself.
struct DecompositionProfile {
    std::vector<std::pair<std::string, std::size_t>> sizes;
    std::size_t total = 0;
    std::size_t minimized = 0;
};

DecompositionProfile decomposition_profile(const MealyMachine& m);

} // namespace olstar
