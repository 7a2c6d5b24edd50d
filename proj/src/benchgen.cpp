#include "olstar/benchgen.hpp"

#include <numeric>
#include <queue>
#include <set>

#include "olstar/error.hpp"
#include "olstar/random.hpp"

namespace olstar {

namespace {

std::vector<bool> reachable_states(std::size_t n_states, std::size_t n_inputs,
                                   const std::vector<StateId>& next) {
    std::vector<bool> seen(n_states, false);
    std::queue<StateId> frontier;
    seen[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
        const StateId q = frontier.front();
        frontier.pop();
        for (std::size_t a = 0; a < n_inputs; ++a) {
            const StateId to = next[q * n_inputs + a];
            if (!seen[to]) {
                seen[to] = true;
                frontier.push(to);
            }
        }
    }
    return seen;
}

MealyMachine build_dense(const Alphabet& inputs, const Alphabet& outputs, std::size_t n_states,
                         const std::vector<StateId>& next, const std::vector<SymbolId>& out) {
    MealyMachine::Builder b(inputs, outputs);
    for (std::size_t q = 0; q < n_states; ++q)
        b.state("s" + std::to_string(q));
    for (std::size_t q = 0; q < n_states; ++q)
        for (std::size_t a = 0; a < inputs.size(); ++a)
            b.set_transition(static_cast<StateId>(q), static_cast<SymbolId>(a),
                             next[q * inputs.size() + a], out[q * inputs.size() + a]);
    b.set_initial(0);
    return std::move(b).build();
}

// Random transitions with a random cycle through all states laid on top, so
// every state reaches every other.
MealyMachine strongly_connected_random(std::mt19937_64& rng, std::size_t n_states,
                                       const Alphabet& inputs, const Alphabet& outputs) {
    const std::size_t ni = inputs.size();
    std::vector<StateId> next(n_states * ni);
    std::vector<SymbolId> out(n_states * ni);
    for (auto& t : next)
        t = static_cast<StateId>(bounded(rng, n_states));
    for (auto& y : out)
        y = static_cast<SymbolId>(bounded(rng, outputs.size()));

    std::vector<StateId> order(n_states);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n_states; i > 1; --i)
        std::swap(order[i - 1], order[bounded(rng, i)]);
    for (std::size_t i = 0; i < n_states; ++i) {
        const std::size_t slot = order[i] * ni + bounded(rng, ni);
        next[slot] = order[(i + 1) % n_states];
    }
    return build_dense(inputs, outputs, n_states, next, out);
}

struct ComponentBatch {
    std::vector<MealyMachine> machines;
};

ComponentBatch make_components(const BenchSpec& spec,
                               const std::vector<std::vector<std::string>>& input_names,
                               const std::vector<std::vector<std::string>>& output_names) {
    ComponentBatch batch;
    for (std::size_t j = 0; j < spec.component_sizes.size(); ++j) {
        std::mt19937_64 rng(derive_seed(spec.seed, j));
        batch.machines.push_back(strongly_connected_random(
            rng, spec.component_sizes[j], Alphabet(input_names[j]), Alphabet(output_names[j])));
    }
    return batch;
}

void check_sizes(const BenchSpec& spec) {
    if (spec.component_sizes.empty())
        throw ContractError("benchmark spec needs at least one component");
    for (std::size_t n : spec.component_sizes)
        if (n == 0)
            throw ContractError("benchmark component sizes must be positive");
}

void check_alphabet_lists(const std::vector<std::vector<std::string>>& lists, std::size_t expected,
                          const char* what) {
    if (lists.size() != expected)
        throw ContractError(std::string("benchmark spec needs one ") + what +
                            " alphabet per component");
    for (const auto& names : lists)
        if (names.empty())
            throw ContractError(std::string("benchmark component ") + what +
                                " alphabets must be non-empty");
}

void check_disjoint(const std::vector<std::vector<std::string>>& lists, const char* what) {
    std::set<std::string> seen;
    for (const auto& names : lists)
        for (const auto& name : names)
            if (!seen.insert(name).second)
                throw AlphabetError(std::string("benchmark component ") + what + " symbol '" +
                                    name + "' appears in more than one component");
}

// Mixed-radix state ids over component states, first component most
// significant.
struct TupleCodec {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stride;
    std::size_t total = 1;

    explicit TupleCodec(const std::vector<std::size_t>& component_sizes) : sizes(component_sizes) {
        stride.assign(sizes.size(), 1);
        for (std::size_t j = sizes.size(); j-- > 0;) {
            stride[j] = total;
            total *= sizes[j];
        }
    }

    std::size_t encode(const std::vector<std::size_t>& q) const {
        std::size_t id = 0;
        for (std::size_t j = 0; j < sizes.size(); ++j)
            id += q[j] * stride[j];
        return id;
    }

    std::vector<std::size_t> decode(std::size_t id) const {
        std::vector<std::size_t> q(sizes.size());
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            q[j] = id / stride[j];
            id %= stride[j];
        }
        return q;
    }
};

} // namespace

std::string_view bench_family_name(BenchFamily family) {
    switch (family) {
    case BenchFamily::random: return "random";
    case BenchFamily::switching: return "switching";
    case BenchFamily::interleaving: return "interleaving";
    }
    throw ContractError("unknown benchmark family");
}

BenchFamily parse_bench_family(std::string_view name) {
    if (name == "random")
        return BenchFamily::random;
    if (name == "switching")
        return BenchFamily::switching;
    if (name == "interleaving")
        return BenchFamily::interleaving;
    throw ParseError("unknown benchmark family '" + std::string(name) +
                     "' (expected random, switching or interleaving)");
}

MealyMachine gen_random(std::uint64_t seed, std::size_t n_states, const Alphabet& inputs,
                        const Alphabet& outputs) {
    if (n_states == 0)
        throw ContractError("gen_random needs at least one state");
    if (inputs.empty() || outputs.empty())
        throw ContractError("gen_random needs non-empty alphabets");

    std::mt19937_64 rng(derive_seed(seed, 0x72616e646f6dull));
    const std::size_t ni = inputs.size();
    std::vector<StateId> next(n_states * ni);
    std::vector<SymbolId> out(n_states * ni);
    for (auto& t : next)
        t = static_cast<StateId>(bounded(rng, n_states));
    for (auto& y : out)
        y = static_cast<SymbolId>(bounded(rng, outputs.size()));

    // Point a random reachable transition at the first unreachable state and
    // repeat; prune whatever is left if the budget runs out.
    for (std::size_t attempt = 0; attempt < 4 * n_states; ++attempt) {
        const std::vector<bool> seen = reachable_states(n_states, ni, next);
        std::vector<StateId> reached;
        StateId missing = kNoState;
        for (std::size_t q = 0; q < n_states; ++q) {
            if (seen[q])
                reached.push_back(static_cast<StateId>(q));
            else if (missing == kNoState)
                missing = static_cast<StateId>(q);
        }
        if (missing == kNoState)
            return build_dense(inputs, outputs, n_states, next, out);
        const StateId from = reached[bounded(rng, reached.size())];
        next[from * ni + bounded(rng, ni)] = missing;
    }

    const std::vector<bool> seen = reachable_states(n_states, ni, next);
    std::vector<StateId> dense_id(n_states, kNoState);
    std::size_t kept = 0;
    for (std::size_t q = 0; q < n_states; ++q)
        if (seen[q])
            dense_id[q] = static_cast<StateId>(kept++);
    std::vector<StateId> pnext;
    std::vector<SymbolId> pout;
    for (std::size_t q = 0; q < n_states; ++q) {
        if (!seen[q])
            continue;
        for (std::size_t a = 0; a < ni; ++a) {
            pnext.push_back(dense_id[next[q * ni + a]]);
            pout.push_back(out[q * ni + a]);
        }
    }
    return build_dense(inputs, outputs, kept, pnext, pout);
}

MealyMachine gen_switching(const BenchSpec& spec) {
    if (spec.family != BenchFamily::switching)
        throw ContractError("gen_switching needs a switching spec");
    check_sizes(spec);
    const std::size_t k = spec.component_sizes.size();

    std::vector<std::string> base = {"a", "b"};
    if (!spec.inputs_per_component.empty()) {
        check_alphabet_lists(spec.inputs_per_component, k, "input");
        base = spec.inputs_per_component.front();
        for (const auto& names : spec.inputs_per_component)
            if (names != base)
                throw AlphabetError("switching components must share one input alphabet");
    }
    for (const auto& name : base)
        if (name == "L" || name == "R")
            throw AlphabetError("switching input alphabet reserves L and R");

    check_alphabet_lists(spec.outputs_per_component, k, "output");
    check_disjoint(spec.outputs_per_component, "output");
    for (const auto& names : spec.outputs_per_component)
        for (const auto& name : names)
            if (name == "sw")
                throw AlphabetError("switching output alphabet reserves sw");

    const ComponentBatch batch =
        make_components(spec, std::vector<std::vector<std::string>>(k, base),
                        spec.outputs_per_component);

    Alphabet inputs(base);
    const SymbolId input_left = inputs.add("L");
    const SymbolId input_right = inputs.add("R");
    Alphabet outputs;
    std::vector<SymbolId> offset(k);
    for (std::size_t j = 0; j < k; ++j) {
        offset[j] = static_cast<SymbolId>(outputs.size());
        for (const auto& name : spec.outputs_per_component[j])
            outputs.add(name);
    }
    const SymbolId out_switch = outputs.add("sw");

    const TupleCodec codec(spec.component_sizes);
    const std::size_t n_states = k * codec.total;
    auto encode = [&](std::size_t active, const std::vector<std::size_t>& q) {
        return active * codec.total + codec.encode(q);
    };

    MealyMachine::Builder b(inputs, outputs);
    for (std::size_t active = 0; active < k; ++active)
        for (std::size_t t = 0; t < codec.total; ++t) {
            std::string name = "w" + std::to_string(active);
            for (std::size_t qj : codec.decode(t))
                name += "_" + std::to_string(qj);
            b.state(name);
        }

    for (std::size_t id = 0; id < n_states; ++id) {
        const std::size_t active = id / codec.total;
        const std::vector<std::size_t> q = codec.decode(id % codec.total);
        const MealyMachine& comp = batch.machines[active];
        for (SymbolId a = 0; a < base.size(); ++a) {
            std::vector<std::size_t> moved = q;
            moved[active] = comp.next(static_cast<StateId>(q[active]), a);
            b.set_transition(static_cast<StateId>(id), a,
                             static_cast<StateId>(encode(active, moved)),
                             offset[active] + comp.output(static_cast<StateId>(q[active]), a));
        }
        b.set_transition(static_cast<StateId>(id), input_left,
                         static_cast<StateId>(encode((active + k - 1) % k, q)), out_switch);
        b.set_transition(static_cast<StateId>(id), input_right,
                         static_cast<StateId>(encode((active + 1) % k, q)), out_switch);
    }
    b.set_initial(0);
    return std::move(b).build();
}

MealyMachine gen_interleaving(const BenchSpec& spec) {
    if (spec.family != BenchFamily::interleaving)
        throw ContractError("gen_interleaving needs an interleaving spec");
    check_sizes(spec);
    const std::size_t k = spec.component_sizes.size();
    check_alphabet_lists(spec.inputs_per_component, k, "input");
    check_disjoint(spec.inputs_per_component, "input");
    check_alphabet_lists(spec.outputs_per_component, k, "output");

    const ComponentBatch batch =
        make_components(spec, spec.inputs_per_component, spec.outputs_per_component);

    Alphabet inputs;
    std::vector<std::pair<std::size_t, SymbolId>> owner; // global input -> (component, local)
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t a = 0; a < spec.inputs_per_component[j].size(); ++a) {
            inputs.add(spec.inputs_per_component[j][a]);
            owner.emplace_back(j, static_cast<SymbolId>(a));
        }
    Alphabet outputs;
    std::vector<std::vector<SymbolId>> out_global(k); // component-local -> global
    for (std::size_t j = 0; j < k; ++j)
        for (const auto& name : spec.outputs_per_component[j])
            out_global[j].push_back(outputs.intern(name));

    const TupleCodec codec(spec.component_sizes);
    MealyMachine::Builder b(inputs, outputs);
    for (std::size_t t = 0; t < codec.total; ++t) {
        std::string name = "t";
        for (std::size_t qj : codec.decode(t))
            name += "_" + std::to_string(qj);
        b.state(name);
    }
    for (std::size_t id = 0; id < codec.total; ++id) {
        const std::vector<std::size_t> q = codec.decode(id);
        for (SymbolId g = 0; g < inputs.size(); ++g) {
            const auto [j, local] = owner[g];
            const MealyMachine& comp = batch.machines[j];
            std::vector<std::size_t> moved = q;
            moved[j] = comp.next(static_cast<StateId>(q[j]), local);
            b.set_transition(static_cast<StateId>(id), g,
                             static_cast<StateId>(codec.encode(moved)),
                             out_global[j][comp.output(static_cast<StateId>(q[j]), local)]);
        }
    }
    b.set_initial(0);
    return std::move(b).build();
}

MealyMachine gen_machine(const BenchSpec& spec) {
    switch (spec.family) {
    case BenchFamily::switching: return gen_switching(spec);
    case BenchFamily::interleaving: return gen_interleaving(spec);
    case BenchFamily::random: break;
    }
    check_sizes(spec);
    if (spec.component_sizes.size() != 1)
        throw ContractError("the random family uses exactly one component");
    check_alphabet_lists(spec.inputs_per_component, 1, "input");
    check_alphabet_lists(spec.outputs_per_component, 1, "output");
    return gen_random(spec.seed, spec.component_sizes[0], Alphabet(spec.inputs_per_component[0]),
                      Alphabet(spec.outputs_per_component[0]));
}

DecompositionProfile decomposition_profile(const MealyMachine& m) {
    DecompositionProfile profile;
    for (const std::string& y : m.outputs().names()) {
        const std::size_t n =
            minimize(apply_output_map(m, indicator_map(m.outputs(), y))).state_count();
        profile.sizes.emplace_back(y, n);
        profile.total += n;
    }
    profile.minimized = minimize(m).state_count();
    return profile;
}

} // namespace olstar
