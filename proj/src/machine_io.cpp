#include "olstar/machine_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace olstar {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

// Splits one line into tokens, dropping a trailing '#' comment.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        auto hash = tok.find('#');
        if (hash != std::string::npos) {
            if (hash > 0)
                toks.push_back(tok.substr(0, hash));
            break;
        }
        toks.push_back(tok);
    }
    return toks;
}

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> content_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto toks = tokenize(raw);
        if (!toks.empty())
            lines.push_back({number, std::move(toks)});
    }
    return lines;
}

Alphabet parse_alphabet_line(const Line& line, const std::string& keyword) {
    if (line.tokens[0] != keyword)
        fail(line.number, "expected '" + keyword + "' line");
    if (line.tokens.size() < 2)
        fail(line.number, "'" + keyword + "' needs at least one symbol");
    Alphabet a;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        try {
            a.add(line.tokens[i]);
        } catch (const AlphabetError& e) {
            fail(line.number, e.what());
        }
    }
    return a;
}

} // namespace

MealyMachine parse_machine(std::istream& in) {
    auto lines = content_lines(in);
    if (lines.size() < 4)
        throw ParseError("machine file needs inputs, outputs, initial and transitions");
    Alphabet inputs = parse_alphabet_line(lines[0], "inputs");
    Alphabet outputs = parse_alphabet_line(lines[1], "outputs");
    if (lines[2].tokens[0] != "initial" || lines[2].tokens.size() != 2)
        fail(lines[2].number, "expected 'initial <state>'");

    MealyMachine::Builder b(std::move(inputs), std::move(outputs));
    b.set_initial(b.state(lines[2].tokens[1]));
    for (std::size_t i = 3; i < lines.size(); ++i) {
        const Line& line = lines[i];
        if (line.tokens.size() != 4)
            fail(line.number, "expected '<state> <input> <next-state> <output>'");
        try {
            b.set_transition(b.state(line.tokens[0]),
                             b.inputs().require(line.tokens[1]),
                             b.state(line.tokens[2]),
                             b.outputs().require(line.tokens[3]));
        } catch (const Error& e) {
            fail(line.number, e.what());
        }
    }
    return std::move(b).build();
}

MealyMachine parse_machine_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_machine(in);
}

MealyMachine load_machine(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    try {
        return parse_machine(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void print_machine(std::ostream& out, const MealyMachine& m) {
    out << "inputs";
    for (const auto& a : m.inputs().names())
        out << ' ' << a;
    out << "\noutputs";
    for (const auto& y : m.outputs().names())
        out << ' ' << y;
    out << "\ninitial " << m.state_name(m.initial()) << '\n';
    std::vector<StateId> order;
    order.push_back(m.initial());
    for (StateId q = 0; q < m.state_count(); ++q)
        if (q != m.initial())
            order.push_back(q);
    for (StateId q : order)
        for (SymbolId a = 0; a < m.inputs().size(); ++a)
            out << m.state_name(q) << ' ' << m.inputs().name(a) << ' '
                << m.state_name(m.next(q, a)) << ' ' << m.outputs().name(m.output(q, a)) << '\n';
}

std::string machine_text(const MealyMachine& m) {
    std::ostringstream out;
    print_machine(out, m);
    return out.str();
}

void save_machine(const std::filesystem::path& path, const MealyMachine& m) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    print_machine(out, m);
}

std::string machine_dot(const MealyMachine& m) {
    std::ostringstream out;
    out << "digraph mealy {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  __start [shape=point];\n";
    out << "  __start -> \"" << m.state_name(m.initial()) << "\";\n";
    for (StateId q = 0; q < m.state_count(); ++q)
        for (SymbolId a = 0; a < m.inputs().size(); ++a)
            out << "  \"" << m.state_name(q) << "\" -> \"" << m.state_name(m.next(q, a))
                << "\" [label=\"" << m.inputs().name(a) << '/' << m.outputs().name(m.output(q, a))
                << "\"];\n";
    out << "}\n";
    return out.str();
}

void save_dot(const std::filesystem::path& path, const MealyMachine& m) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << machine_dot(m);
}

OutputMap parse_output_map(std::istream& in) {
    auto lines = content_lines(in);
    if (lines.size() < 2)
        throw ParseError("output map file needs domain and codomain lines");
    Alphabet domain = parse_alphabet_line(lines[0], "domain");
    Alphabet codomain = parse_alphabet_line(lines[1], "codomain");
    std::vector<SymbolId> table(domain.size(), kNoSymbol);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const Line& line = lines[i];
        if (line.tokens.size() != 2)
            fail(line.number, "expected '<domain-symbol> <codomain-symbol>'");
        SymbolId y, z;
        try {
            y = domain.require(line.tokens[0]);
            z = codomain.require(line.tokens[1]);
        } catch (const AlphabetError& e) {
            fail(line.number, e.what());
        }
        if (table[y] != kNoSymbol)
            fail(line.number, "duplicate image for '" + line.tokens[0] + "'");
        table[y] = z;
    }
    for (SymbolId y = 0; y < domain.size(); ++y)
        if (table[y] == kNoSymbol)
            throw ParseError("output map misses an image for '" + domain.name(y) + "'");
    return OutputMap(std::move(domain), std::move(codomain), std::move(table));
}

OutputMap parse_output_map_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_output_map(in);
}

OutputMap load_output_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    try {
        return parse_output_map(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void print_output_map(std::ostream& out, const OutputMap& f) {
    out << "domain";
    for (const auto& y : f.domain().names())
        out << ' ' << y;
    out << "\ncodomain";
    for (const auto& z : f.codomain().names())
        out << ' ' << z;
    out << '\n';
    for (SymbolId y = 0; y < f.domain().size(); ++y)
        out << f.domain().name(y) << ' ' << f.codomain().name(f.apply(y)) << '\n';
}

std::string output_map_text(const OutputMap& f) {
    std::ostringstream out;
    print_output_map(out, f);
    return out.str();
}

} // namespace olstar
