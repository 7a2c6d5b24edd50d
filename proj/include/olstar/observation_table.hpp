#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "olstar/mealy.hpp"
#include "olstar/oracle.hpp"

namespace olstar {

using RowId = std::uint32_t;

// Defects of the table's projected views, one view per discovered output
// symbol y (cells reduced to does-this-position-equal-y bits).
struct DefectReport {
    // The successor row has no bit-equal prefix row under output's view.
    struct Closedness {
        SymbolId output;
        RowId row;
    };
    // Two prefix rows agree under output's view but their input-successors
    // disagree at the given suffix. row_a is the first row of its bit-class.
    struct Consistency {
        SymbolId output;
        RowId row_a;
        RowId row_b;
        SymbolId input;
        std::uint32_t suffix;
    };
    std::vector<Closedness> closedness;
    std::vector<Consistency> consistency;
    bool empty() const { return closedness.empty() && consistency.empty(); }
};

// Full-row consistency defect: two equal prefix rows whose input-successors
// differ at the given suffix.
struct ConsistencyDefect {
    RowId row_a;
    RowId row_b;
    SymbolId input;
    std::uint32_t suffix;
};

// Observation table over a growing output registry. Prefix rows S (prefix
// closed, epsilon first) plus one successor row per prefix and input; columns
// are non-empty suffix words E with every single input letter present from the
// start. The cell for row r and suffix e holds the last |e| output symbols of
// the teacher's answer on r.e, remapped into the table's own discovery-ordered
// output alphabet.
//
// Rows keep incremental position-salted XOR hashes: one over the full cell
// vector and one per output symbol over the positions carrying that symbol.
// All closedness/consistency analyses match rows by these hashes; a hash
// collision could misdirect a learner, which the equivalence-query loop
// corrects, and the unit tests cross-check the hashes against exact
// comparisons at small scale.
class ObservationTable {
public:
    // Initializes S = {epsilon} and E = the single input letters (in alphabet
    // order), then fills all rows.
    explicit ObservationTable(Teacher& teacher);

    ObservationTable(const ObservationTable&) = delete;
    ObservationTable& operator=(const ObservationTable&) = delete;

    const Alphabet& input_alphabet() const { return inputs_; }
    // Outputs discovered so far, in order of first appearance.
    const Alphabet& outputs() const { return outputs_; }

    std::size_t row_count() const { return rows_.size(); }
    std::size_t prefix_count() const { return prefix_rows_.size(); }
    std::span<const RowId> prefix_rows() const { return prefix_rows_; }
    const Word& row_word(RowId r) const { return rows_[r].word; }
    bool row_in_prefixes(RowId r) const { return rows_[r].in_prefixes; }
    // Row of row_word(prefix_row) . input; prefix_row must be in S.
    RowId successor(RowId prefix_row, SymbolId input) const;
    std::optional<RowId> find_row(const Word& word) const;

    std::size_t suffix_count() const { return suffixes_.size(); }
    const Word& suffix(std::uint32_t index) const { return suffixes_[index]; }
    bool has_suffix(const Word& e) const { return suffix_index_.count(e) > 0; }

    // All cells of a row, flattened in suffix order.
    std::span<const SymbolId> cells(RowId r) const { return rows_[r].cells; }
    std::span<const SymbolId> cell(RowId r, std::uint32_t suffix_index) const;

    std::uint64_t row_hash(RowId r) const { return rows_[r].full_hash; }
    std::uint64_t projected_row_hash(RowId r, SymbolId output) const;
    std::vector<std::uint8_t> projected_row_bits(RowId r, SymbolId output) const;
    bool rows_equal(RowId a, RowId b) const;
    bool projected_rows_equal(RowId a, RowId b, SymbolId output) const;

    // Moves a successor row into S and creates (and fills) its successor rows.
    // The row must not already be a prefix row. Returns its id unchanged.
    RowId promote(RowId successor_row);
    // Appends a new non-empty suffix column and fills it for every row.
    void add_suffix(const Word& e);

    // Successor rows whose full row matches no prefix row, in row id order.
    std::vector<RowId> closed_defects() const;
    std::vector<ConsistencyDefect> consistent_defects() const;
    bool is_closed() const { return closed_defects().empty(); }
    bool is_consistent() const;

    // Defects of all projected views; recomputed lazily per table version so
    // repeated audit calls are cheap.
    const DefectReport& output_defects() const;
    bool is_output_closed() const;
    bool is_output_consistent() const;

    // Bumped once per mutation (promote/add_suffix).
    std::uint64_t version() const { return version_; }

    // Exactly-one-output bookkeeping: every filled cell position is checked at
    // fill time to hold a valid id of the (duplicate-free) output registry.
    std::uint64_t bit_law_checks() const { return bit_law_checks_; }
    std::uint64_t bit_law_violations() const { return bit_law_violations_; }

    void dump(std::ostream& out) const;

private:
    struct Row {
        Word word;
        bool in_prefixes = false;
        std::vector<RowId> successors;    // filled when in_prefixes
        std::vector<SymbolId> cells;      // flattened, aligned to suffix_offset_
        std::uint64_t full_hash = 0;
        std::vector<std::uint64_t> projected; // per output id; missing tail = 0
    };

    RowId create_row(Word word);
    void fill_row(RowId r, std::uint32_t first_suffix);
    SymbolId remap_output(SymbolId teacher_id);
    std::uint64_t position_salt(std::size_t position) const;
    void ensure_report() const;

    Teacher* teacher_;
    Alphabet inputs_;
    Alphabet outputs_;
    std::vector<SymbolId> teacher_to_local_;

    std::vector<Row> rows_;
    std::vector<RowId> prefix_rows_;
    std::unordered_map<Word, RowId, WordHash> row_index_;

    std::vector<Word> suffixes_;
    std::unordered_map<Word, std::uint32_t, WordHash> suffix_index_;
    std::vector<std::size_t> suffix_offset_;
    std::size_t total_cell_length_ = 0;

    std::uint64_t version_ = 0;
    std::uint64_t bit_law_checks_ = 0;
    std::uint64_t bit_law_violations_ = 0;

    mutable DefectReport report_;
    mutable std::uint64_t report_version_ = ~std::uint64_t{0};
};

} // namespace olstar
