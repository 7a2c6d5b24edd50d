#include "olstar/mealy.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace olstar {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> names) {
    for (const auto& n : names)
        add(n);
}

SymbolId Alphabet::add(std::string_view name) {
    if (name.empty())
        throw AlphabetError("empty symbol name");
    auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<SymbolId>(names_.size()));
    if (!inserted)
        throw AlphabetError("duplicate symbol '" + std::string(name) + "'");
    names_.emplace_back(name);
    return it->second;
}

SymbolId Alphabet::intern(std::string_view name) {
    if (auto id = find(name))
        return *id;
    return add(name);
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

SymbolId Alphabet::require(std::string_view name) const {
    if (auto id = find(name))
        return *id;
    throw AlphabetError("unknown symbol '" + std::string(name) + "'");
}

const std::string& Alphabet::name(SymbolId id) const {
    if (id >= names_.size())
        throw AlphabetError("symbol id out of range");
    return names_[id];
}

bool Alphabet::same_set(const Alphabet& other) const {
    if (size() != other.size())
        return false;
    for (const auto& n : names_)
        if (!other.find(n))
            return false;
    return true;
}

Word to_word(const Alphabet& alphabet, std::string_view text) {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok)
        w.push_back(alphabet.require(tok));
    return w;
}

std::string format_word(const Alphabet& alphabet, std::span<const SymbolId> word) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i)
            out += ' ';
        out += alphabet.name(word[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MealyMachine

MealyMachine::Builder::Builder(Alphabet inputs, Alphabet outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.empty())
        throw AlphabetError("machine needs a non-empty input alphabet");
    if (outputs_.empty())
        throw AlphabetError("machine needs a non-empty output alphabet");
}

StateId MealyMachine::Builder::state(std::string_view name) {
    if (name.empty())
        throw ParseError("empty state name");
    auto [it, inserted] = state_index_.try_emplace(std::string(name), static_cast<StateId>(state_names_.size()));
    if (inserted) {
        state_names_.emplace_back(name);
        next_.resize(state_names_.size() * inputs_.size(), kNoState);
        out_.resize(state_names_.size() * inputs_.size(), kNoSymbol);
    }
    return it->second;
}

StateId MealyMachine::Builder::add_state() {
    std::string name = "q" + std::to_string(state_names_.size());
    if (state_index_.count(name))
        throw ParseError("auto state name '" + name + "' already taken");
    return state(name);
}

void MealyMachine::Builder::set_initial(StateId q) {
    if (q >= state_names_.size())
        throw ParseError("initial state id out of range");
    initial_ = q;
}

void MealyMachine::Builder::set_transition(StateId from, SymbolId input, StateId to, SymbolId output) {
    if (from >= state_names_.size() || to >= state_names_.size())
        throw ParseError("transition endpoint out of range");
    if (input >= inputs_.size())
        throw AlphabetError("transition input id out of range");
    if (output >= outputs_.size())
        throw AlphabetError("transition output id out of range");
    const std::size_t slot = from * inputs_.size() + input;
    if (next_[slot] != kNoState)
        throw ParseError("duplicate transition from '" + state_names_[from] + "' on '" +
                         inputs_.name(input) + "'");
    next_[slot] = to;
    out_[slot] = output;
}

MealyMachine MealyMachine::Builder::build() && {
    if (state_names_.empty())
        throw ParseError("machine has no states");
    if (initial_ == kNoState)
        throw ParseError("no initial state");
    for (StateId q = 0; q < state_names_.size(); ++q)
        for (SymbolId a = 0; a < inputs_.size(); ++a)
            if (next_[q * inputs_.size() + a] == kNoState)
                throw ParseError("state '" + state_names_[q] + "' has no transition on '" +
                                 inputs_.name(a) + "'");
    MealyMachine m;
    m.inputs_ = std::move(inputs_);
    m.outputs_ = std::move(outputs_);
    m.state_names_ = std::move(state_names_);
    m.initial_ = initial_;
    m.next_ = std::move(next_);
    m.out_ = std::move(out_);
    return m;
}

MealyMachine::RunResult MealyMachine::run(StateId from, std::span<const SymbolId> word) const {
    if (from >= state_count())
        throw ContractError("run: state out of range");
    RunResult r{from, {}};
    r.outputs.reserve(word.size());
    for (SymbolId a : word) {
        if (a >= inputs_.size())
            throw AlphabetError("input id " + std::to_string(a) + " not in the input alphabet");
        r.outputs.push_back(output(r.state, a));
        r.state = next(r.state, a);
    }
    return r;
}

Word MealyMachine::semantics(std::span<const SymbolId> word) const {
    return run(initial_, word).outputs;
}

// ---------------------------------------------------------------------------
// Output maps

OutputMap::OutputMap(Alphabet domain, Alphabet codomain, std::vector<SymbolId> table)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), table_(std::move(table)) {
    if (table_.size() != domain_.size())
        throw AlphabetError("output map must be total: table size != domain size");
    for (SymbolId z : table_)
        if (z >= codomain_.size())
            throw AlphabetError("output map image out of codomain range");
}

OutputMap OutputMap::identity(const Alphabet& alphabet) {
    std::vector<SymbolId> table(alphabet.size());
    for (SymbolId y = 0; y < alphabet.size(); ++y)
        table[y] = y;
    return OutputMap(alphabet, alphabet, std::move(table));
}

Word OutputMap::apply_word(std::span<const SymbolId> word) const {
    Word out;
    out.reserve(word.size());
    for (SymbolId y : word) {
        if (y >= domain_.size())
            throw AlphabetError("output map applied to id outside its domain");
        out.push_back(table_[y]);
    }
    return out;
}

OutputMap indicator_map(const Alphabet& alphabet, SymbolId y) {
    if (y >= alphabet.size())
        throw AlphabetError("indicator symbol id out of range");
    Alphabet bits(std::vector<std::string>{"0", "1"});
    std::vector<SymbolId> table(alphabet.size(), 0);
    table[y] = 1;
    return OutputMap(alphabet, std::move(bits), std::move(table));
}

OutputMap indicator_map(const Alphabet& alphabet, std::string_view y) {
    return indicator_map(alphabet, alphabet.require(y));
}

bool is_jointly_injective(std::span<const OutputMap> maps) {
    if (maps.empty())
        throw AlphabetError("empty output map family");
    const Alphabet& dom = maps[0].domain();
    for (const auto& f : maps)
        if (!f.domain().same_set(dom))
            throw AlphabetError("output map family must share one domain");
    // Compare image tuples by name so differing domain orders do not matter.
    std::vector<std::string> tuples;
    for (SymbolId y = 0; y < dom.size(); ++y) {
        std::string tuple;
        for (const auto& f : maps) {
            SymbolId local = f.domain().require(dom.name(y));
            tuple += f.codomain().name(f.apply(local));
            tuple += '\x1f';
        }
        tuples.push_back(std::move(tuple));
    }
    std::sort(tuples.begin(), tuples.end());
    return std::adjacent_find(tuples.begin(), tuples.end()) == tuples.end();
}

MealyMachine apply_output_map(const MealyMachine& m, const OutputMap& f) {
    // Translate each machine output id through f, matching names.
    std::vector<SymbolId> translated(m.outputs().size());
    for (SymbolId o = 0; o < m.outputs().size(); ++o) {
        auto dom_id = f.domain().find(m.outputs().name(o));
        if (!dom_id)
            throw AlphabetError("output map domain misses machine output '" + m.outputs().name(o) + "'");
        translated[o] = f.apply(*dom_id);
    }
    MealyMachine::Builder b(m.inputs(), f.codomain());
    for (StateId q = 0; q < m.state_count(); ++q)
        b.state(m.state_name(q));
    for (StateId q = 0; q < m.state_count(); ++q)
        for (SymbolId a = 0; a < m.inputs().size(); ++a)
            b.set_transition(q, a, m.next(q, a), translated[m.output(q, a)]);
    b.set_initial(m.initial());
    return std::move(b).build();
}

MealyMachine project(const MealyMachine& m, SymbolId y) {
    return apply_output_map(m, indicator_map(m.outputs(), y));
}

MealyMachine project(const MealyMachine& m, std::string_view y) {
    return apply_output_map(m, indicator_map(m.outputs(), y));
}

// ---------------------------------------------------------------------------
// Composition

namespace {

struct Visit {
    std::uint32_t parent;
    SymbolId via; // kNoSymbol on the root
};

// Input word (as names) reaching visit `i`, extended with `last`.
std::vector<std::string> witness_names(const std::vector<Visit>& visits, std::uint32_t i,
                                       const Alphabet& inputs, SymbolId last) {
    Word w{last};
    for (std::uint32_t j = i; visits[j].via != kNoSymbol; j = visits[j].parent)
        w.push_back(visits[j].via);
    std::reverse(w.begin(), w.end());
    std::vector<std::string> names;
    names.reserve(w.size());
    for (SymbolId a : w)
        names.push_back(inputs.name(a));
    return names;
}

} // namespace

MealyMachine compose(std::span<const ComposePart> parts, const Alphabet& target_outputs) {
    if (parts.empty())
        throw AlphabetError("compose: empty family");
    if (target_outputs.empty())
        throw AlphabetError("compose: empty target output set");
    const Alphabet& inputs = parts[0].machine->inputs();
    const std::size_t k = parts.size();
    const std::size_t ny = target_outputs.size();

    // want[i][y]: output id machine i must emit for the composite to emit y.
    std::vector<std::vector<SymbolId>> want(k, std::vector<SymbolId>(ny, kNoSymbol));
    for (std::size_t i = 0; i < k; ++i) {
        const MealyMachine& mi = *parts[i].machine;
        const OutputMap& fi = *parts[i].map;
        if (!(mi.inputs() == inputs))
            throw AlphabetError("compose: component input alphabets differ");
        if (!fi.domain().same_set(target_outputs))
            throw AlphabetError("compose: map domain must equal the target output set");
        for (SymbolId o = 0; o < mi.outputs().size(); ++o)
            if (!fi.codomain().find(mi.outputs().name(o)))
                throw AlphabetError("compose: map codomain misses component output '" +
                                    mi.outputs().name(o) + "'");
        for (SymbolId y = 0; y < ny; ++y) {
            SymbolId dom_id = fi.domain().require(target_outputs.name(y));
            const std::string& img = fi.codomain().name(fi.apply(dom_id));
            if (auto local = mi.outputs().find(img))
                want[i][y] = *local;
        }
    }

    std::unordered_map<Word, StateId, WordHash> ids; // joint state tuple -> id
    std::vector<Word> tuples;
    std::vector<Visit> visits;
    std::vector<StateId> joint_next;
    std::vector<SymbolId> joint_out;

    Word init(k);
    for (std::size_t i = 0; i < k; ++i)
        init[i] = parts[i].machine->initial();
    ids.emplace(init, 0);
    tuples.push_back(std::move(init));
    visits.push_back({0, kNoSymbol});

    for (std::uint32_t s = 0; s < tuples.size(); ++s) {
        joint_next.resize((s + 1) * inputs.size(), kNoState);
        joint_out.resize((s + 1) * inputs.size(), kNoSymbol);
        const Word tuple = tuples[s]; // copy: tuples grows below
        for (SymbolId a = 0; a < inputs.size(); ++a) {
            SymbolId match = kNoSymbol;
            for (SymbolId y = 0; y < ny; ++y) {
                bool all = true;
                for (std::size_t i = 0; i < k && all; ++i)
                    all = want[i][y] == parts[i].machine->output(tuple[i], a);
                if (!all)
                    continue;
                if (match != kNoSymbol)
                    throw CompositionError(CompositionError::Kind::ambiguous,
                                           witness_names(visits, s, inputs, a),
                                           "compose: outputs '" + target_outputs.name(match) +
                                               "' and '" + target_outputs.name(y) +
                                               "' both match at a reachable state");
                match = y;
            }
            if (match == kNoSymbol)
                throw CompositionError(CompositionError::Kind::zero_outputs,
                                       witness_names(visits, s, inputs, a),
                                       "compose: no output matches at a reachable state");
            Word succ(k);
            for (std::size_t i = 0; i < k; ++i)
                succ[i] = parts[i].machine->next(tuple[i], a);
            auto [it, inserted] = ids.try_emplace(succ, static_cast<StateId>(tuples.size()));
            if (inserted) {
                tuples.push_back(std::move(succ));
                visits.push_back({s, a});
            }
            joint_next[s * inputs.size() + a] = it->second;
            joint_out[s * inputs.size() + a] = match;
        }
    }

    MealyMachine::Builder b(inputs, target_outputs);
    for (StateId q = 0; q < tuples.size(); ++q)
        b.state("p" + std::to_string(q));
    for (StateId q = 0; q < tuples.size(); ++q)
        for (SymbolId a = 0; a < inputs.size(); ++a)
            b.set_transition(q, a, joint_next[q * inputs.size() + a], joint_out[q * inputs.size() + a]);
    b.set_initial(0);
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Minimization, equivalence, isomorphism

namespace {

// Reachable states in BFS discovery order (inputs in id order).
std::vector<StateId> bfs_order(const MealyMachine& m) {
    std::vector<StateId> order;
    std::vector<char> seen(m.state_count(), 0);
    order.push_back(m.initial());
    seen[m.initial()] = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (SymbolId a = 0; a < m.inputs().size(); ++a) {
            StateId t = m.next(order[i], a);
            if (!seen[t]) {
                seen[t] = 1;
                order.push_back(t);
            }
        }
    return order;
}

} // namespace

MealyMachine minimize(const MealyMachine& m) {
    const auto order = bfs_order(m);
    const std::size_t n = order.size();
    const std::size_t nx = m.inputs().size();
    std::vector<std::uint32_t> pos(m.state_count(), ~0u);
    for (std::uint32_t i = 0; i < n; ++i)
        pos[order[i]] = i;

    // Initial partition by one-step output signature, then refine by successor
    // blocks until stable.
    std::vector<std::uint32_t> block(n);
    std::size_t blocks = 0;
    {
        std::unordered_map<Word, std::uint32_t, WordHash> key_ids;
        for (std::uint32_t i = 0; i < n; ++i) {
            Word sig(nx);
            for (SymbolId a = 0; a < nx; ++a)
                sig[a] = m.output(order[i], a);
            block[i] = key_ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(key_ids.size())).first->second;
        }
        blocks = key_ids.size();
    }
    for (;;) {
        std::unordered_map<Word, std::uint32_t, WordHash> key_ids;
        std::vector<std::uint32_t> refined(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            Word sig(nx + 1);
            sig[0] = block[i];
            for (SymbolId a = 0; a < nx; ++a)
                sig[a + 1] = block[pos[m.next(order[i], a)]];
            refined[i] = key_ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(key_ids.size())).first->second;
        }
        if (key_ids.size() == blocks)
            break;
        block = std::move(refined);
        blocks = key_ids.size();
    }

    // Representative = first member in canonical row order, then renumber the
    // quotient in BFS order so equal-behavior machines minimize identically.
    std::vector<std::uint32_t> rep(blocks, ~0u);
    for (std::uint32_t i = 0; i < n; ++i)
        if (rep[block[i]] == ~0u)
            rep[block[i]] = i;
    std::vector<std::uint32_t> canon(blocks, ~0u);
    std::vector<std::uint32_t> canon_order;
    canon[block[0]] = 0;
    canon_order.push_back(block[0]);
    for (std::size_t i = 0; i < canon_order.size(); ++i) {
        const std::uint32_t b = canon_order[i];
        for (SymbolId a = 0; a < nx; ++a) {
            const std::uint32_t t = block[pos[m.next(order[rep[b]], a)]];
            if (canon[t] == ~0u) {
                canon[t] = static_cast<std::uint32_t>(canon_order.size());
                canon_order.push_back(t);
            }
        }
    }

    MealyMachine::Builder b(m.inputs(), m.outputs());
    for (std::uint32_t q = 0; q < canon_order.size(); ++q)
        b.state("s" + std::to_string(q));
    for (std::uint32_t q = 0; q < canon_order.size(); ++q) {
        const std::uint32_t src = rep[canon_order[q]];
        for (SymbolId a = 0; a < nx; ++a) {
            b.set_transition(q, a, canon[block[pos[m.next(order[src], a)]]],
                             m.output(order[src], a));
        }
    }
    b.set_initial(0);
    return std::move(b).build();
}

EqOutcome equivalent(const MealyMachine& m1, const MealyMachine& m2) {
    if (!(m1.inputs() == m2.inputs()))
        throw AlphabetError("equivalent: input alphabets must be identical");
    std::vector<SymbolId> tr(m2.outputs().size(), kNoSymbol);
    for (SymbolId z = 0; z < m2.outputs().size(); ++z)
        if (auto o = m1.outputs().find(m2.outputs().name(z)))
            tr[z] = *o;

    const std::size_t n2 = m2.state_count();
    const std::size_t nx = m1.inputs().size();
    std::vector<char> seen(m1.state_count() * n2, 0);
    struct PairVisit {
        StateId q1, q2;
        std::uint32_t parent;
        SymbolId via;
    };
    std::vector<PairVisit> visits;
    visits.push_back({m1.initial(), m2.initial(), 0, kNoSymbol});
    seen[m1.initial() * n2 + m2.initial()] = 1;
    for (std::uint32_t i = 0; i < visits.size(); ++i) {
        const PairVisit v = visits[i];
        for (SymbolId a = 0; a < nx; ++a) {
            if (m1.output(v.q1, a) != tr[m2.output(v.q2, a)]) {
                Word w{a};
                for (std::uint32_t j = i; visits[j].via != kNoSymbol; j = visits[j].parent)
                    w.push_back(visits[j].via);
                std::reverse(w.begin(), w.end());
                return Counterexample(std::move(w));
            }
            const StateId t1 = m1.next(v.q1, a);
            const StateId t2 = m2.next(v.q2, a);
            if (!seen[t1 * n2 + t2]) {
                seen[t1 * n2 + t2] = 1;
                visits.push_back({t1, t2, i, a});
            }
        }
    }
    return std::nullopt;
}

bool isomorphic(const MealyMachine& a, const MealyMachine& b) {
    if (a.inputs().size() != b.inputs().size())
        return false;
    std::vector<SymbolId> bin(a.inputs().size());
    for (SymbolId i = 0; i < a.inputs().size(); ++i) {
        auto j = b.inputs().find(a.inputs().name(i));
        if (!j)
            return false;
        bin[i] = *j;
    }
    std::vector<StateId> a2b(a.state_count(), kNoState);
    std::vector<StateId> b2a(b.state_count(), kNoState);
    std::vector<std::pair<StateId, StateId>> queue{{a.initial(), b.initial()}};
    a2b[a.initial()] = b.initial();
    b2a[b.initial()] = a.initial();
    for (std::size_t i = 0; i < queue.size(); ++i) {
        auto [qa, qb] = queue[i];
        for (SymbolId x = 0; x < a.inputs().size(); ++x) {
            if (a.outputs().name(a.output(qa, x)) != b.outputs().name(b.output(qb, bin[x])))
                return false;
            const StateId ta = a.next(qa, x);
            const StateId tb = b.next(qb, bin[x]);
            if (a2b[ta] == kNoState && b2a[tb] == kNoState) {
                a2b[ta] = tb;
                b2a[tb] = ta;
                queue.emplace_back(ta, tb);
            } else if (a2b[ta] != tb || b2a[tb] != ta) {
                return false;
            }
        }
    }
    return true;
}

MealyMachine reindex_inputs(const MealyMachine& m, const Alphabet& inputs) {
    if (!m.inputs().same_set(inputs))
        throw AlphabetError("reindex_inputs: alphabets differ as sets");
    std::vector<SymbolId> old_id(inputs.size());
    for (SymbolId a = 0; a < inputs.size(); ++a)
        old_id[a] = m.inputs().require(inputs.name(a));
    MealyMachine::Builder b(inputs, m.outputs());
    for (StateId q = 0; q < m.state_count(); ++q)
        b.state(m.state_name(q));
    for (StateId q = 0; q < m.state_count(); ++q)
        for (SymbolId a = 0; a < inputs.size(); ++a)
            b.set_transition(q, a, m.next(q, old_id[a]), m.output(q, old_id[a]));
    b.set_initial(m.initial());
    return std::move(b).build();
}

} // namespace olstar
