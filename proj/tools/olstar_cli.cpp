#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "olstar/experiment.hpp"
#include "olstar/machine_io.hpp"

using namespace olstar;
namespace fs = std::filesystem;

namespace {

struct OracleFlags {
    std::string mode = "exact";
    WpConfig wp;

    OracleConfig to_config() const {
        OracleConfig config;
        if (mode == "exact")
            config.mode = EqMode::exact;
        else if (mode == "wp")
            config.mode = EqMode::random_wp;
        else
            throw ParseError("unknown oracle '" + mode + "' (expected exact or wp)");
        config.wp = wp;
        return config;
    }
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& flags) {
    cmd->add_option("--oracle", flags.mode, "equivalence oracle: exact or wp")
        ->capture_default_str();
    cmd->add_option("--eq-seed", flags.wp.seed, "seed for the randomized oracle")
        ->capture_default_str();
    cmd->add_option("--max-tests", flags.wp.max_tests, "test budget per equivalence query")
        ->capture_default_str();
    cmd->add_option("--middle-length", flags.wp.expected_middle_length,
                    "expected random-walk length between prefix and suffix")
        ->capture_default_str();
    cmd->add_option("--suffix-cap", flags.wp.max_suffix_length,
                    "longest characterization suffix the oracle may use")
        ->capture_default_str();
}

std::vector<Algorithm> parse_algorithms(const std::string& name) {
    if (name == "both")
        return {Algorithm::lstar, Algorithm::olstar};
    return {parse_algorithm(name)};
}

MealyMachine minimized_projection(const MealyMachine& m, const std::string& output) {
    return minimize(apply_output_map(m, indicator_map(m.outputs(), output)));
}

void print_profile(std::ostream& out, const MealyMachine& m) {
    const DecompositionProfile profile = decomposition_profile(m);
    for (const auto& [output, states] : profile.sizes)
        out << output << ' ' << states << '\n';
    out << "total " << profile.total << '\n';
    out << "machine " << profile.minimized << '\n';
}

void append_results(const fs::path& csv_path, const std::vector<ResultRow>& rows) {
    const bool fresh = !fs::exists(csv_path) || fs::file_size(csv_path) == 0;
    std::ofstream out(csv_path, std::ios::app);
    if (!out)
        throw ResourceError("cannot write " + csv_path.string());
    if (fresh)
        out << csv_header();
    for (const ResultRow& row : rows)
        out << csv_row(row);
}

struct LearnArgs {
    std::string target;
    std::string algorithms = "both";
    std::string out_dir = ".";
    std::string id;
    OracleFlags oracle;
};

int run_learn(const LearnArgs& args) {
    const MealyMachine target = load_machine(args.target);
    const std::string id = args.id.empty() ? fs::path(args.target).stem().string() : args.id;
    fs::create_directories(args.out_dir);

    std::vector<ResultRow> rows;
    std::cout << csv_header();
    for (Algorithm algorithm : parse_algorithms(args.algorithms)) {
        MealyMachine learned = target; // placeholder, overwritten on success
        ResultRow row =
            run_single(target, algorithm, args.oracle.to_config(), id, {}, &learned);
        if (row.status == "ok" || row.status == "mismatch") {
            const fs::path base = fs::path(args.out_dir) /
                                  (id + "." + std::string(algorithm_name(algorithm)));
            save_machine(base.string() + ".mealy", learned);
            save_dot(base.string() + ".dot", learned);
        }
        std::cout << csv_row(row);
        rows.push_back(std::move(row));
    }
    append_results(fs::path(args.out_dir) / "results.csv", rows);
    return 0;
}

struct BenchArgs {
    std::string family = "switching";
    BenchConfig config;
    OracleFlags oracle;
    std::string out_dir = ".";
};

int run_bench_cmd(BenchArgs& args) {
    args.config.family = parse_bench_family(args.family);
    args.config.oracle = args.oracle.to_config();
    fs::create_directories(args.out_dir);

    std::cout << csv_header();
    const std::vector<ResultRow> rows =
        run_bench(args.config, [](const ResultRow& row) { std::cout << csv_row(row) << std::flush; });

    std::ofstream csv(fs::path(args.out_dir) / "results.csv");
    if (!csv)
        throw ResourceError("cannot write results.csv under " + args.out_dir);
    write_results_csv(csv, rows);
    write_scatter_files(args.out_dir, rows);

    std::size_t ok = 0, wins = 0, pairs = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        ok += (rows[i].status == "ok") + (rows[i + 1].status == "ok");
        if (rows[i].status == "ok" && rows[i + 1].status == "ok") {
            ++pairs;
            wins += rows[i + 1].stats.total_symbols() < rows[i].stats.total_symbols();
        }
    }
    std::cerr << "bench: " << rows.size() << " runs, " << ok << " ok; decomposed learner used "
              << "fewer symbols on " << wins << "/" << pairs << " instances\n";
    return 0;
}

struct ProjectArgs {
    std::string machine;
    std::string output;
    bool all = false;
    std::string out;
};

int run_project(const ProjectArgs& args) {
    const MealyMachine m = load_machine(args.machine);
    const std::string stem = fs::path(args.machine).stem().string();
    if (args.all) {
        const fs::path dir = args.out.empty() ? fs::path(".") : fs::path(args.out);
        fs::create_directories(dir);
        for (const std::string& y : m.outputs().names())
            save_machine(dir / (stem + "_proj_" + y + ".mealy"), minimized_projection(m, y));
    } else {
        m.outputs().require(args.output); // unknown symbols fail before any write
        const fs::path path = args.out.empty()
                                  ? fs::path(stem + "_proj_" + args.output + ".mealy")
                                  : fs::path(args.out);
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        save_machine(path, minimized_projection(m, args.output));
    }
    print_profile(std::cout, m);
    return 0;
}

struct ComposeArgs {
    std::vector<std::string> components;
    std::vector<std::string> maps;
    std::vector<std::string> outputs;
    std::string out;
};

int run_compose(const ComposeArgs& args) {
    if (args.components.empty() || args.components.size() != args.maps.size())
        throw ParseError("compose needs the same number of --component and --map files");

    std::vector<MealyMachine> machines;
    std::vector<OutputMap> maps;
    for (std::size_t i = 0; i < args.components.size(); ++i) {
        machines.push_back(load_machine(args.components[i]));
        maps.push_back(load_output_map(args.maps[i]));
    }

    Alphabet targets;
    if (args.outputs.empty()) {
        // The composite output set is the maps' shared domain; compose()
        // rejects any map whose domain disagrees with it.
        for (const OutputMap& map : maps)
            for (const std::string& name : map.domain().names())
                targets.intern(name);
    } else {
        for (const std::string& name : args.outputs)
            targets.add(name);
    }

    std::vector<ComposePart> parts;
    for (std::size_t i = 0; i < machines.size(); ++i)
        parts.push_back({&machines[i], &maps[i]});
    const MealyMachine composed = compose(parts, targets);

    if (args.out.empty())
        print_machine(std::cout, composed);
    else
        save_machine(args.out, composed);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"active learning of Mealy machines, whole or output by output"};
    app.require_subcommand(1);

    LearnArgs learn_args;
    CLI::App* learn = app.add_subcommand("learn", "learn a machine file with one or both learners");
    learn->add_option("--target", learn_args.target, "machine file to learn")->required();
    learn->add_option("--algorithm", learn_args.algorithms, "lstar, olstar or both")
        ->capture_default_str();
    learn->add_option("--out", learn_args.out_dir, "output directory")->capture_default_str();
    learn->add_option("--id", learn_args.id, "benchmark id used in result rows");
    add_oracle_flags(learn, learn_args.oracle);

    BenchArgs bench_args;
    bench_args.oracle.mode = "wp";
    CLI::App* bench = app.add_subcommand("bench", "generate benchmark machines and learn them");
    bench->add_option("--family", bench_args.family, "random, switching or interleaving")
        ->capture_default_str();
    bench->add_option("--count", bench_args.config.count, "number of instances")
        ->capture_default_str();
    bench->add_option("--seed", bench_args.config.seed, "master seed")->capture_default_str();
    bench->add_option("--components", bench_args.config.components, "components per instance")
        ->capture_default_str();
    bench->add_option("--min-states", bench_args.config.min_states, "per-component minimum size")
        ->capture_default_str();
    bench->add_option("--max-states", bench_args.config.max_states, "per-component maximum size")
        ->capture_default_str();
    bench->add_option("--inputs", bench_args.config.inputs_per_component,
                      "inputs per component (interleaving and random)")
        ->capture_default_str();
    bench->add_option("--outputs", bench_args.config.outputs_per_component,
                      "outputs per component")
        ->capture_default_str();
    bench->add_flag("--shared-outputs", bench_args.config.shared_outputs,
                    "interleaving components share one output pool");
    bench->add_option("--out", bench_args.out_dir, "output directory")->capture_default_str();
    add_oracle_flags(bench, bench_args.oracle);

    ProjectArgs project_args;
    CLI::App* project = app.add_subcommand("project", "write minimized per-output projections");
    project->add_option("--machine", project_args.machine, "machine file")->required();
    CLI::Option* one = project->add_option("--output", project_args.output, "output symbol");
    CLI::Option* all = project->add_flag("--all", project_args.all, "project onto every output");
    one->excludes(all);
    project->add_option("--out", project_args.out,
                        "output file (--output) or directory (--all)");

    ComposeArgs compose_args;
    CLI::App* compose_cmd =
        app.add_subcommand("compose", "recompose component machines through output maps");
    compose_cmd->add_option("--component", compose_args.components, "component machine file")
        ->required();
    compose_cmd->add_option("--map", compose_args.maps, "output-map file for the component")
        ->required();
    compose_cmd->add_option("--outputs", compose_args.outputs,
                            "target output symbols (default: union of map codomains)")
        ->delimiter(',');
    compose_cmd->add_option("--out", compose_args.out, "output machine file (default: stdout)");

    std::string profile_machine;
    CLI::App* profile = app.add_subcommand("profile", "print per-output projection sizes");
    profile->add_option("--machine", profile_machine, "machine file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*learn)
            return run_learn(learn_args);
        if (*bench)
            return run_bench_cmd(bench_args);
        if (*project) {
            if (!project_args.all && project_args.output.empty())
                throw ParseError("project needs --output SYMBOL or --all");
            return run_project(project_args);
        }
        if (*compose_cmd)
            return run_compose(compose_args);
        print_profile(std::cout, load_machine(profile_machine));
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << e.what() << '\n';
        return 3;
    } catch (const AlphabetError& e) {
        std::cerr << "error: alphabet: " << e.what() << '\n';
        return 4;
    } catch (const CompositionError& e) {
        std::cerr << "error: composition: " << e.what() << '\n';
        std::string witness;
        for (const std::string& name : e.witness()) {
            if (!witness.empty())
                witness += ' ';
            witness += name;
        }
        std::cerr << "witness: " << witness << '\n';
        return 5;
    } catch (const ResourceError& e) {
        std::cerr << "error: resource: " << e.what() << '\n';
        return 6;
    } catch (const ContractError& e) {
        std::cerr << "error: contract: " << e.what() << '\n';
        return 7;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
}
