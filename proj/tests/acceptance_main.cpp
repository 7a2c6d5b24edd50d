// Acceptance suite: end-to-end checks of the decomposed learner, the
// monolithic baseline, the generators, and the experiment pipeline. Each
// criterion prints one PASS/FAIL line; the process exits nonzero if any
// criterion fails. Artifacts (results CSV, scatter files) are written to the
// working directory.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "olstar/benchgen.hpp"
#include "olstar/experiment.hpp"
#include "olstar/lstar.hpp"
#include "olstar/mealy.hpp"
#include "olstar/olstar.hpp"
#include "olstar/oracle.hpp"
#include "olstar/random.hpp"
#include "support.hpp"

namespace {

using namespace olstar;

// ---------------------------------------------------------------------------
// Reporting

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    if (!pass)
        ++g_failures;
    std::printf("%s %2d %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::uint64_t ms() const {
        const auto d = std::chrono::steady_clock::now() - start_;
        return static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(d).count());
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Invariant audit shared by every learner run in criteria 3-6. The table-change
// hook checks the two implication directions between the full table and its
// projected views, mirrors the table's own bit-partition counters, and on
// small tables re-derives the projected bits position by position.

struct Audit {
    std::uint64_t events = 0;
    std::uint64_t closed_implication_violations = 0;
    std::uint64_t consistency_implication_violations = 0;
    std::uint64_t bit_checks = 0;
    std::uint64_t bit_violations = 0;
    std::uint64_t literal_positions = 0;
    std::uint64_t literal_violations = 0;
    // Cumulative counters of the table currently being learned; folded into
    // the totals when the run finishes.
    std::uint64_t run_bit_checks = 0;
    std::uint64_t run_bit_violations = 0;
};

Audit g_audit;

void literal_bit_recheck(const ObservationTable& t) {
    const auto n_out = static_cast<SymbolId>(t.outputs().size());
    if (n_out == 0)
        return;
    for (RowId r = 0; r < static_cast<RowId>(t.row_count()); ++r) {
        std::vector<std::vector<std::uint8_t>> bits;
        bits.reserve(n_out);
        for (SymbolId y = 0; y < n_out; ++y)
            bits.push_back(t.projected_row_bits(r, y));
        const std::size_t len = t.cells(r).size();
        for (std::size_t p = 0; p < len; ++p) {
            int ones = 0;
            for (SymbolId y = 0; y < n_out; ++y)
                ones += bits[y][p] != 0 ? 1 : 0;
            ++g_audit.literal_positions;
            if (ones != 1)
                ++g_audit.literal_violations;
        }
    }
}

void audit_hook(const ObservationTable& t) {
    ++g_audit.events;
    if (t.is_closed() && !t.is_output_closed())
        ++g_audit.closed_implication_violations;
    if (t.is_output_consistent() && !t.is_consistent())
        ++g_audit.consistency_implication_violations;
    g_audit.run_bit_checks = t.bit_law_checks();
    g_audit.run_bit_violations = t.bit_law_violations();
    if (t.row_count() <= 24)
        literal_bit_recheck(t);
}

ResultRow audited_run(const MealyMachine& target, Algorithm algorithm, const OracleConfig& oracle,
                      std::string benchmark_id) {
    g_audit.run_bit_checks = 0;
    g_audit.run_bit_violations = 0;
    LearnOptions options;
    options.on_table_change = audit_hook;
    ResultRow row = run_single(target, algorithm, oracle, std::move(benchmark_id), options);
    g_audit.bit_checks += g_audit.run_bit_checks;
    g_audit.bit_violations += g_audit.run_bit_violations;
    return row;
}

// ---------------------------------------------------------------------------
// Shared target corpus: the six-state demo plus 200 seeded random machines
// (up to 30 states, up to 3 inputs, up to 4 outputs).

std::vector<std::pair<std::string, MealyMachine>> target_corpus() {
    std::vector<std::pair<std::string, MealyMachine>> targets;
    targets.emplace_back("cycle6", testsupport::cycle6());
    for (std::uint64_t s = 1; s <= 200; ++s) {
        const auto n_states = static_cast<std::uint32_t>(2 + s % 29);
        const auto n_inputs = static_cast<std::uint32_t>(1 + s % 3);
        const auto n_outputs = static_cast<std::uint32_t>(2 + (s / 3) % 3);
        targets.emplace_back("random-s" + std::to_string(s),
                             testsupport::random_machine(s, n_states, n_inputs, n_outputs));
    }
    return targets;
}

// Recomposes a machine from the minimized projections of every declared
// output; returns the shortest word where the round trip disagrees, if any.
std::optional<Word> recompose_roundtrip_diff(const MealyMachine& m) {
    std::vector<MealyMachine> comps;
    std::vector<OutputMap> maps;
    const auto n_out = static_cast<SymbolId>(m.outputs().size());
    comps.reserve(n_out);
    maps.reserve(n_out);
    for (SymbolId y = 0; y < n_out; ++y) {
        maps.push_back(indicator_map(m.outputs(), y));
        comps.push_back(minimize(apply_output_map(m, maps.back())));
    }
    std::vector<ComposePart> parts;
    parts.reserve(n_out);
    for (SymbolId y = 0; y < n_out; ++y)
        parts.push_back(ComposePart{&comps[y], &maps[y]});
    const MealyMachine rebuilt = compose(parts, m.outputs());
    if (EqOutcome diff = equivalent(rebuilt, m))
        return diff->word();
    return std::nullopt;
}

std::string drop_wall_column(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() != '#') {
            const auto comma = line.rfind(',');
            if (comma != std::string::npos)
                line.erase(comma);
        }
        out << line << '\n';
    }
    return out.str();
}

std::string csv_of(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_results_csv(out, rows);
    return out.str();
}

} // namespace

int main() {
    std::vector<ResultRow> csv_rows; // rows recorded to acceptance_results.csv

    // ------------------------------------------------------------------
    // 1. Projection golden forms: projecting the six-state demo onto each
    //    output and minimizing must give exactly the expected 3-state
    //    machines (the x projection checked structurally, y/z by size).
    {
        Stopwatch sw;
        const MealyMachine m = testsupport::cycle6();
        const MealyMachine px = minimize(project(m, "x"));
        const MealyMachine py = minimize(project(m, "y"));
        const MealyMachine pz = minimize(project(m, "z"));
        const bool x_golden = isomorphic(px, testsupport::cycle6_proj_x_min());
        const bool pass = x_golden && px.state_count() == 3 && py.state_count() == 3 &&
                          pz.state_count() == 3;
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "x golden iso=%s, sizes x=%zu y=%zu z=%zu (%llu ms)",
                      x_golden ? "yes" : "no", px.state_count(), py.state_count(),
                      pz.state_count(), static_cast<unsigned long long>(sw.ms()));
        report(1, "projection golden forms", pass, detail);
    }

    // ------------------------------------------------------------------
    // 2. Decompose/recompose round trip on the demo machine plus 200 seeded
    //    random machines: composing the minimized projections of all outputs
    //    must rebuild the original behavior exactly.
    const auto targets = target_corpus();
    {
        Stopwatch sw;
        std::size_t checked = 0;
        std::string first_failure;
        for (const auto& [id, m] : targets) {
            if (auto diff = recompose_roundtrip_diff(m)) {
                if (first_failure.empty())
                    first_failure = id;
            } else {
                ++checked;
            }
        }
        const bool pass = checked == targets.size();
        char detail[160];
        std::snprintf(detail, sizeof detail, "%zu/%zu machines round-trip%s%s (%llu ms)",
                      checked, targets.size(), first_failure.empty() ? "" : "; first failure ",
                      first_failure.c_str(), static_cast<unsigned long long>(sw.ms()));
        report(2, "decompose/recompose round trip", pass, detail);
    }

    // ------------------------------------------------------------------
    // 3. Learner correctness with the exact equivalence oracle on the same
    //    corpus: both learners must return a machine equivalent to the
    //    target with exactly the minimal number of states.
    ResultRow cycle6_lstar, cycle6_olstar;
    {
        Stopwatch sw;
        const OracleConfig exact_oracle{}; // exact equivalence checks
        std::size_t correct = 0;
        std::string first_failure;
        for (const auto& [id, m] : targets) {
            for (Algorithm alg : {Algorithm::lstar, Algorithm::olstar}) {
                ResultRow row = audited_run(m, alg, exact_oracle, id);
                const bool ok = row.status == "ok" && row.learned_states == row.target_states;
                if (ok)
                    ++correct;
                else if (first_failure.empty())
                    first_failure = id + "/" + std::string(algorithm_name(alg));
                if (id == "cycle6")
                    (alg == Algorithm::lstar ? cycle6_lstar : cycle6_olstar) = std::move(row);
            }
        }
        const std::size_t total = targets.size() * 2;
        const bool pass = correct == total;
        char detail[160];
        std::snprintf(detail, sizeof detail, "%zu/%zu runs exact%s%s (%llu ms)", correct, total,
                      first_failure.empty() ? "" : "; first failure ", first_failure.c_str(),
                      static_cast<unsigned long long>(sw.ms()));
        report(3, "learner correctness, exact oracle", pass, detail);
    }

    // ------------------------------------------------------------------
    // 4. Query cost on the six-state demo: with the exact oracle and the
    //    same counterexample handling, the decomposed learner must spend at
    //    most as many membership-query symbols as the monolithic baseline.
    //    Both measurements are recorded in the results CSV.
    {
        const std::uint64_t ls = cycle6_lstar.stats.mq_symbols;
        const std::uint64_t ol = cycle6_olstar.stats.mq_symbols;
        csv_rows.push_back(cycle6_lstar);
        csv_rows.push_back(cycle6_olstar);
        const bool pass = cycle6_lstar.status == "ok" && cycle6_olstar.status == "ok" &&
                          ol <= ls && ls > 0;
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "mq symbols: decomposed %llu <= monolithic %llu",
                      static_cast<unsigned long long>(ol), static_cast<unsigned long long>(ls));
        report(4, "demo machine query cost", pass, detail);
    }

    // ------------------------------------------------------------------
    // 5. Switching-family trend: 50 seeded instances (3 components of 4-6
    //    states, per-component outputs), randomized testing oracle. All runs
    //    must be correct and the decomposed learner must use strictly fewer
    //    total symbols on at least 70% of the instances.
    {
        Stopwatch sw;
        BenchConfig cfg;
        cfg.family = BenchFamily::switching;
        cfg.count = 50;
        cfg.seed = 2026;
        cfg.components = 3;
        cfg.min_states = 4;
        cfg.max_states = 6;
        cfg.outputs_per_component = 2;
        cfg.oracle.mode = EqMode::random_wp;
        cfg.oracle.wp.seed = 1;
        std::size_t ok_runs = 0, wins = 0;
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const BenchSpec spec = bench_instance(cfg, i);
            const MealyMachine target = gen_machine(spec);
            const std::string id = bench_instance_id(cfg, i);
            OracleConfig oracle = cfg.oracle;
            oracle.wp.seed = derive_seed(cfg.oracle.wp.seed, static_cast<std::uint64_t>(i));
            ResultRow ls = audited_run(target, Algorithm::lstar, oracle, id);
            ResultRow ol = audited_run(target, Algorithm::olstar, oracle, id);
            ok_runs += (ls.status == "ok" ? 1 : 0) + (ol.status == "ok" ? 1 : 0);
            if (ls.status == "ok" && ol.status == "ok" &&
                ol.stats.total_symbols() < ls.stats.total_symbols())
                ++wins;
            csv_rows.push_back(std::move(ls));
            csv_rows.push_back(std::move(ol));
        }
        const bool all_ok = ok_runs == 2 * cfg.count;
        const bool trend = wins * 100 >= 70 * cfg.count;
        char detail[200];
        std::snprintf(detail, sizeof detail,
                      "%zu/%zu runs ok; decomposed cheaper on %zu/%zu instances (need >=35) "
                      "(%llu ms)",
                      ok_runs, 2 * cfg.count, wins, cfg.count,
                      static_cast<unsigned long long>(sw.ms()));
        report(5, "switching family symbol-cost trend", all_ok && trend, detail);

        // Scatter artifacts for this batch (one file per metric).
        const auto batch_begin = csv_rows.end() - static_cast<std::ptrdiff_t>(2 * cfg.count);
        write_scatter_files(".", std::vector<ResultRow>(batch_begin, csv_rows.end()));
    }

    // ------------------------------------------------------------------
    // 6. Shared-output interleaving: 25 seeded instances whose components
    //    all share one output pool. Correctness must hold exactly; the
    //    symbol-cost proportion is reported without asserting a direction.
    {
        Stopwatch sw;
        BenchConfig cfg;
        cfg.family = BenchFamily::interleaving;
        cfg.count = 25;
        cfg.seed = 17;
        cfg.components = 2;
        cfg.min_states = 3;
        cfg.max_states = 5;
        cfg.inputs_per_component = 2;
        cfg.outputs_per_component = 2;
        cfg.shared_outputs = true;
        cfg.oracle.mode = EqMode::random_wp;
        cfg.oracle.wp.seed = 4;
        std::size_t ok_runs = 0, cheaper = 0;
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const BenchSpec spec = bench_instance(cfg, i);
            const MealyMachine target = gen_machine(spec);
            const std::string id = bench_instance_id(cfg, i);
            OracleConfig oracle = cfg.oracle;
            oracle.wp.seed = derive_seed(cfg.oracle.wp.seed, static_cast<std::uint64_t>(i));
            ResultRow ls = audited_run(target, Algorithm::lstar, oracle, id);
            ResultRow ol = audited_run(target, Algorithm::olstar, oracle, id);
            ok_runs += (ls.status == "ok" ? 1 : 0) + (ol.status == "ok" ? 1 : 0);
            if (ls.status == "ok" && ol.status == "ok" &&
                ol.stats.total_symbols() < ls.stats.total_symbols())
                ++cheaper;
            csv_rows.push_back(std::move(ls));
            csv_rows.push_back(std::move(ol));
        }
        const bool pass = ok_runs == 2 * cfg.count;
        char detail[200];
        std::snprintf(detail, sizeof detail,
                      "%zu/%zu runs ok; decomposed cheaper on %zu/%zu instances "
                      "(informational, shared outputs) (%llu ms)",
                      ok_runs, 2 * cfg.count, cheaper, cfg.count,
                      static_cast<unsigned long long>(sw.ms()));
        report(6, "shared-output interleaving correctness", pass, detail);
    }

    // ------------------------------------------------------------------
    // 7. Implication audit over every table state traversed in criteria 3-6:
    //    a closed table is closed in every projected view, and a table whose
    //    projected views are all consistent is consistent outright.
    {
        const bool pass = g_audit.events > 0 && g_audit.closed_implication_violations == 0 &&
                          g_audit.consistency_implication_violations == 0;
        char detail[200];
        std::snprintf(detail, sizeof detail,
                      "%llu table states audited; violations: closed->output-closed %llu, "
                      "output-consistent->consistent %llu",
                      static_cast<unsigned long long>(g_audit.events),
                      static_cast<unsigned long long>(g_audit.closed_implication_violations),
                      static_cast<unsigned long long>(g_audit.consistency_implication_violations));
        report(7, "projected-view implication audit", pass, detail);
    }

    // ------------------------------------------------------------------
    // 8. Bit partition law: at every filled cell position exactly one
    //    output's projected bit is set. Checked via the tables' own counters
    //    across all runs above, plus literal per-position recomputation on
    //    small tables.
    {
        const bool pass = g_audit.bit_checks > 0 && g_audit.bit_violations == 0 &&
                          g_audit.literal_positions > 0 && g_audit.literal_violations == 0;
        char detail[200];
        std::snprintf(detail, sizeof detail,
                      "counter checks %llu (violations %llu); literal positions %llu "
                      "(violations %llu)",
                      static_cast<unsigned long long>(g_audit.bit_checks),
                      static_cast<unsigned long long>(g_audit.bit_violations),
                      static_cast<unsigned long long>(g_audit.literal_positions),
                      static_cast<unsigned long long>(g_audit.literal_violations));
        report(8, "projected-bit partition law", pass, detail);
    }

    // ------------------------------------------------------------------
    // 9. Query accounting: repeating a membership query leaves all counters
    //    unchanged, and the reported statistics exclude the accepting
    //    equivalence query and its testing cost.
    {
        bool dup_ok = false, final_eq_ok = true;
        {
            SimulatedTeacher t(testsupport::cycle6());
            const Word w{0, 1, 0};
            t.mq(w);
            const QueryStats snap = t.stats();
            t.mq(w); // exact repeat: answered from cache, no counter moves
            const bool repeat_free = t.stats() == snap;
            t.mq(Word{0, 1}); // distinct word: counters must advance
            dup_ok = repeat_free && snap.mq_count == 1 && snap.mq_symbols == 3 &&
                     t.stats().mq_count == 2 && t.stats().mq_symbols == 5;
        }
        std::uint64_t fresh_final_tests = 0;
        for (Algorithm alg : {Algorithm::lstar, Algorithm::olstar}) {
            WpConfig wp;
            wp.seed = 5;
            wp.max_tests = 512;
            SimulatedTeacher t(testsupport::cycle6(), EqMode::random_wp, wp);
            const LearnResult r =
                alg == Algorithm::lstar ? run_lstar(t, {}) : run_olstar(t, {});
            const QueryStats fin = t.stats();
            final_eq_ok = final_eq_ok && r.stats.eq_count + 1 == fin.eq_count &&
                          r.stats.test_count < fin.test_count &&
                          r.stats.mq_count == fin.mq_count &&
                          r.stats.mq_symbols == fin.mq_symbols;
            fresh_final_tests += fin.test_count - r.stats.test_count;
        }
        const bool pass = dup_ok && final_eq_ok;
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "duplicate queries free: %s; accepting-query cost excluded: %s "
                      "(%llu fresh final tests hidden)",
                      dup_ok ? "yes" : "no", final_eq_ok ? "yes" : "no",
                      static_cast<unsigned long long>(fresh_final_tests));
        report(9, "query accounting", pass, detail);
    }

    // ------------------------------------------------------------------
    // 10. Determinism: rerunning a seeded batch yields byte-identical CSV
    //     rows once the wall-time column is stripped.
    {
        Stopwatch sw;
        BenchConfig cfg;
        cfg.family = BenchFamily::switching;
        cfg.count = 4;
        cfg.seed = 99;
        cfg.components = 2;
        cfg.min_states = 3;
        cfg.max_states = 4;
        cfg.oracle.mode = EqMode::random_wp;
        cfg.oracle.wp.seed = 3;
        cfg.oracle.wp.max_tests = 2000;
        const std::string first = drop_wall_column(csv_of(run_bench(cfg)));
        const std::string second = drop_wall_column(csv_of(run_bench(cfg)));
        const bool pass = !first.empty() && first == second &&
                          first.find("\nswitching-s99-i0,") != std::string::npos;
        char detail[120];
        std::snprintf(detail, sizeof detail, "two seeded reruns %s (%llu ms)",
                      pass ? "identical modulo wall time" : "differ",
                      static_cast<unsigned long long>(sw.ms()));
        report(10, "seeded determinism", pass, detail);
    }

    // ------------------------------------------------------------------
    // Artifacts.
    {
        std::ofstream out("acceptance_results.csv");
        write_results_csv(out, csv_rows);
    }

    std::printf("acceptance: %d/10 criteria passed; results in acceptance_results.csv\n",
                10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
