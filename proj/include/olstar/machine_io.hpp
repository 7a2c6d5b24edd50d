#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "olstar/mealy.hpp"

namespace olstar {

// Plain-text machine format. Line oriented; '#' starts a comment; blank lines
// are ignored. Symbols and state names are whitespace-free tokens without '#'.
//
//   inputs a b
//   outputs x y z
//   initial q0
//   q0 a q1 y
//   q0 b q3 x
//   ...
//
// The three header lines must come (in that order) before the transition
// lines. States are declared implicitly, numbered by first appearance. Every
// state must have exactly one transition per input. Errors carry the line
// number where detection is possible.
MealyMachine parse_machine(std::istream& in);
MealyMachine parse_machine_text(std::string_view text);
MealyMachine load_machine(const std::filesystem::path& path);

// Canonical form of the same format: header, then transitions grouped by
// state (initial state's block first, remaining states by id) with inputs in
// alphabet order. parse . print is the identity on machines, and printing a
// parsed canonical file reproduces it byte for byte.
void print_machine(std::ostream& out, const MealyMachine& m);
std::string machine_text(const MealyMachine& m);
void save_machine(const std::filesystem::path& path, const MealyMachine& m);

// Graphviz export: one edge per transition labelled "input/output", an
// unlabelled arrow from a point node marks the initial state.
std::string machine_dot(const MealyMachine& m);
void save_dot(const std::filesystem::path& path, const MealyMachine& m);

// Output map format:
//
//   domain x y z
//   codomain 0 1
//   x 1
//   y 0
//   z 0
//
// Every domain symbol needs exactly one image line.
OutputMap parse_output_map(std::istream& in);
OutputMap parse_output_map_text(std::string_view text);
OutputMap load_output_map(const std::filesystem::path& path);
void print_output_map(std::ostream& out, const OutputMap& f);
std::string output_map_text(const OutputMap& f);

} // namespace olstar
