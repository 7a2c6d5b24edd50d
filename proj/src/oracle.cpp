#include "olstar/oracle.hpp"

#include <map>

#include "olstar/random.hpp"

namespace olstar {

// ---------------------------------------------------------------------------
// Splitting tree

std::vector<std::vector<Word>> characterization_suffixes(const MealyMachine& m,
                                                         std::uint32_t max_suffix_length) {
    const std::size_t n = m.state_count();
    const std::size_t nx = m.inputs().size();

    struct Node {
        Word splitter; // empty while the node is a leaf
        std::uint32_t parent;
        std::uint32_t depth;
    };
    std::vector<Node> nodes{{Word{}, 0, 0}};
    std::vector<std::vector<StateId>> groups(1);
    groups[0].resize(n);
    for (StateId q = 0; q < n; ++q)
        groups[0][q] = q;
    std::vector<std::uint32_t> group_of(n, 0);
    std::vector<std::uint32_t> node_of_group{0};

    // Partition group g by output word on w; returns false when w does not
    // separate anything. Part order is deterministic (by output word).
    auto split_group = [&](std::uint32_t g, const Word& w) {
        std::map<Word, std::vector<StateId>> parts;
        for (StateId q : groups[g])
            parts[m.run(q, w).outputs].push_back(q);
        if (parts.size() < 2)
            return false;
        const std::uint32_t parent = node_of_group[g];
        nodes[parent].splitter = w;
        bool reuse = true;
        for (auto& [unused, members] : parts) {
            std::uint32_t ng;
            if (reuse) {
                ng = g;
                groups[g] = std::move(members);
                reuse = false;
            } else {
                ng = static_cast<std::uint32_t>(groups.size());
                groups.push_back(std::move(members));
                node_of_group.push_back(0);
            }
            nodes.push_back({Word{}, parent, nodes[parent].depth + 1});
            node_of_group[ng] = static_cast<std::uint32_t>(nodes.size() - 1);
            for (StateId q : groups[ng])
                group_of[q] = ng;
        }
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t g = 0; g < groups.size(); ++g) {
            if (groups[g].size() < 2)
                continue;
            bool split = false;
            for (SymbolId a = 0; a < nx && !split && max_suffix_length >= 1; ++a)
                split = split_group(g, Word{a});
            for (SymbolId a = 0; a < nx && !split; ++a) {
                // two members whose a-successors already sit in different leaves
                const std::uint32_t g0 = group_of[m.next(groups[g][0], a)];
                StateId other = kNoState;
                for (StateId q : groups[g])
                    if (group_of[m.next(q, a)] != g0) {
                        other = q;
                        break;
                    }
                if (other == kNoState)
                    continue;
                // the splitter of their lowest common ancestor separates them
                std::uint32_t l1 = node_of_group[g0];
                std::uint32_t l2 = node_of_group[group_of[m.next(other, a)]];
                while (nodes[l1].depth > nodes[l2].depth)
                    l1 = nodes[l1].parent;
                while (nodes[l2].depth > nodes[l1].depth)
                    l2 = nodes[l2].parent;
                while (l1 != l2) {
                    l1 = nodes[l1].parent;
                    l2 = nodes[l2].parent;
                }
                Word w{a};
                w.insert(w.end(), nodes[l1].splitter.begin(), nodes[l1].splitter.end());
                if (w.size() > max_suffix_length)
                    continue;
                split = split_group(g, w);
            }
            changed = changed || split;
        }
    }

    std::vector<std::vector<Word>> suffixes(n);
    for (StateId q = 0; q < n; ++q) {
        std::uint32_t cur = node_of_group[group_of[q]];
        while (cur != 0) {
            cur = nodes[cur].parent;
            suffixes[q].push_back(nodes[cur].splitter);
        }
    }
    return suffixes;
}

// ---------------------------------------------------------------------------
// SimulatedTeacher

SimulatedTeacher::SimulatedTeacher(MealyMachine target, EqMode mode, WpConfig wp)
    : target_(std::move(target)), mode_(mode), wp_(wp), rng_(wp.seed) {}

std::span<const SymbolId> SimulatedTeacher::answer(Cache& cache, std::span<const SymbolId> word,
                                                   std::uint64_t& count, std::uint64_t& symbols) {
    Word key(word.begin(), word.end());
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    Word out = target_.semantics(key);
    ++count;
    symbols += key.size();
    ++target_evaluations_;
    auto [it, inserted] = cache.emplace(std::move(key), std::move(out));
    (void)inserted;
    return it->second;
}

std::span<const SymbolId> SimulatedTeacher::mq(std::span<const SymbolId> word) {
    return answer(learn_cache_, word, stats_.mq_count, stats_.mq_symbols);
}

std::span<const SymbolId> SimulatedTeacher::test_query(std::span<const SymbolId> word) {
    return answer(test_cache_, word, stats_.test_count, stats_.test_symbols);
}

EqOutcome SimulatedTeacher::eq(const MealyMachine& hypothesis) {
    if (!(hypothesis.inputs() == target_.inputs()))
        throw AlphabetError("eq: hypothesis must use the target's input alphabet");
    ++stats_.eq_count;
    if (mode_ == EqMode::exact)
        return equivalent(target_, hypothesis);
    return wp_search(hypothesis);
}

EqOutcome SimulatedTeacher::wp_search(const MealyMachine& h) {
    const std::size_t nx = h.inputs().size();

    // access words of all reachable hypothesis states
    std::vector<Word> access(h.state_count());
    std::vector<StateId> reachable{h.initial()};
    std::vector<char> seen(h.state_count(), 0);
    seen[h.initial()] = 1;
    for (std::size_t i = 0; i < reachable.size(); ++i)
        for (SymbolId a = 0; a < nx; ++a) {
            const StateId t = h.next(reachable[i], a);
            if (!seen[t]) {
                seen[t] = 1;
                access[t] = access[reachable[i]];
                access[t].push_back(a);
                reachable.push_back(t);
            }
        }

    const auto suffixes = characterization_suffixes(h, wp_.max_suffix_length);

    // hypothesis output id -> target output id (name match), for comparisons
    std::vector<SymbolId> tr(h.outputs().size(), kNoSymbol);
    for (SymbolId o = 0; o < h.outputs().size(); ++o)
        if (auto t = target_.outputs().find(h.outputs().name(o)))
            tr[o] = *t;

    for (std::uint32_t t = 0; t < wp_.max_tests; ++t) {
        StateId q = reachable[bounded(rng_, static_cast<std::uint32_t>(reachable.size()))];
        Word w = access[q];
        const std::uint32_t middle = geometric(rng_, wp_.expected_middle_length);
        for (std::uint32_t i = 0; i < middle; ++i) {
            const SymbolId a = bounded(rng_, static_cast<std::uint32_t>(nx));
            w.push_back(a);
            q = h.next(q, a);
        }
        if (!suffixes[q].empty()) {
            const Word& e = suffixes[q][bounded(rng_, static_cast<std::uint32_t>(suffixes[q].size()))];
            w.insert(w.end(), e.begin(), e.end());
        }
        const auto target_out = test_query(w);
        const Word hyp_out = h.semantics(w);
        for (std::size_t i = 0; i < w.size(); ++i)
            if (tr[hyp_out[i]] != target_out[i]) {
                Word cex(w.begin(), w.begin() + i + 1);
                return Counterexample(std::move(cex));
            }
    }
    return std::nullopt;
}

} // namespace olstar
