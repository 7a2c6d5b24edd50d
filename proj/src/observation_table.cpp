#include "olstar/observation_table.hpp"

#include <ostream>

#include "olstar/random.hpp"

namespace olstar {

namespace {

std::uint64_t mix_cell(std::uint64_t salt, SymbolId symbol) {
    return splitmix64(salt + (static_cast<std::uint64_t>(symbol) + 1) * 0x9E3779B97F4A7C15ull);
}

} // namespace

ObservationTable::ObservationTable(Teacher& teacher)
    : teacher_(&teacher), inputs_(teacher.input_alphabet()) {
    if (inputs_.empty())
        throw AlphabetError("observation table needs a non-empty input alphabet");
    for (SymbolId a = 0; a < inputs_.size(); ++a) {
        suffixes_.push_back(Word{a});
        suffix_index_.emplace(Word{a}, a);
        suffix_offset_.push_back(total_cell_length_);
        total_cell_length_ += 1;
    }
    const RowId root = create_row(Word{});
    fill_row(root, 0);
    promote(root);
    version_ = 0; // construction counts as the initial state, not a mutation
}

std::uint64_t ObservationTable::position_salt(std::size_t position) const {
    return splitmix64(0xA24BAED4963EE407ull + position);
}

RowId ObservationTable::create_row(Word word) {
    const RowId id = static_cast<RowId>(rows_.size());
    auto [it, inserted] = row_index_.emplace(word, id);
    (void)it;
    if (!inserted)
        throw ContractError("internal: duplicate table row '" + format_word(inputs_, word) + "'");
    rows_.push_back(Row{std::move(word), false, {}, {}, 0, {}});
    return id;
}

SymbolId ObservationTable::remap_output(SymbolId teacher_id) {
    if (teacher_id >= teacher_to_local_.size())
        teacher_to_local_.resize(teacher_id + 1, kNoSymbol);
    SymbolId& local = teacher_to_local_[teacher_id];
    if (local == kNoSymbol)
        local = outputs_.add(teacher_->output_name(teacher_id));
    return local;
}

void ObservationTable::fill_row(RowId r, std::uint32_t first_suffix) {
    for (std::uint32_t ei = first_suffix; ei < suffixes_.size(); ++ei) {
        const Word& e = suffixes_[ei];
        Word query = rows_[r].word;
        query.insert(query.end(), e.begin(), e.end());
        const auto answer = teacher_->mq(query);
        Row& row = rows_[r]; // re-borrow: mq may not touch us, but stay tidy
        const std::size_t offset = suffix_offset_[ei];
        for (std::size_t j = 0; j < e.size(); ++j) {
            const SymbolId local = remap_output(answer[answer.size() - e.size() + j]);
            ++bit_law_checks_;
            if (local >= outputs_.size())
                ++bit_law_violations_;
            const std::size_t position = offset + j;
            row.cells.push_back(local);
            row.full_hash ^= mix_cell(position_salt(position), local);
            if (row.projected.size() <= local)
                row.projected.resize(outputs_.size(), 0);
            row.projected[local] ^= position_salt(position);
        }
    }
}

RowId ObservationTable::successor(RowId prefix_row, SymbolId input) const {
    if (!rows_[prefix_row].in_prefixes)
        throw ContractError("successor() needs a prefix row");
    return rows_[prefix_row].successors[input];
}

std::optional<RowId> ObservationTable::find_row(const Word& word) const {
    auto it = row_index_.find(word);
    if (it == row_index_.end())
        return std::nullopt;
    return it->second;
}

std::span<const SymbolId> ObservationTable::cell(RowId r, std::uint32_t suffix_index) const {
    const std::size_t offset = suffix_offset_[suffix_index];
    return std::span<const SymbolId>(rows_[r].cells).subspan(offset, suffixes_[suffix_index].size());
}

std::uint64_t ObservationTable::projected_row_hash(RowId r, SymbolId output) const {
    const auto& projected = rows_[r].projected;
    return output < projected.size() ? projected[output] : 0;
}

std::vector<std::uint8_t> ObservationTable::projected_row_bits(RowId r, SymbolId output) const {
    const auto& cells = rows_[r].cells;
    std::vector<std::uint8_t> bits(cells.size());
    for (std::size_t p = 0; p < cells.size(); ++p)
        bits[p] = cells[p] == output;
    return bits;
}

bool ObservationTable::rows_equal(RowId a, RowId b) const {
    return rows_[a].cells == rows_[b].cells;
}

bool ObservationTable::projected_rows_equal(RowId a, RowId b, SymbolId output) const {
    const auto& ca = rows_[a].cells;
    const auto& cb = rows_[b].cells;
    for (std::size_t p = 0; p < ca.size(); ++p)
        if ((ca[p] == output) != (cb[p] == output))
            return false;
    return true;
}

RowId ObservationTable::promote(RowId successor_row) {
    Row& row = rows_[successor_row];
    if (row.in_prefixes)
        throw ContractError("promote: row '" + format_word(inputs_, row.word) +
                            "' is already a prefix row");
    row.in_prefixes = true;
    row.successors.assign(inputs_.size(), 0);
    prefix_rows_.push_back(successor_row);
    for (SymbolId a = 0; a < inputs_.size(); ++a) {
        Word word = rows_[successor_row].word;
        word.push_back(a);
        // a prefix row's word is fresh in S, so its extensions cannot collide
        // with existing rows; create_row() throws if that ever breaks
        const RowId child = create_row(std::move(word));
        rows_[successor_row].successors[a] = child;
        fill_row(child, 0);
    }
    ++version_;
    return successor_row;
}

void ObservationTable::add_suffix(const Word& e) {
    if (e.empty())
        throw ContractError("add_suffix: suffixes must be non-empty");
    for (SymbolId a : e)
        if (a >= inputs_.size())
            throw AlphabetError("add_suffix: symbol id outside the input alphabet");
    if (has_suffix(e))
        throw ContractError("add_suffix: suffix '" + format_word(inputs_, e) + "' already present");
    const std::uint32_t index = static_cast<std::uint32_t>(suffixes_.size());
    suffixes_.push_back(e);
    suffix_index_.emplace(e, index);
    suffix_offset_.push_back(total_cell_length_);
    total_cell_length_ += e.size();
    for (RowId r = 0; r < rows_.size(); ++r)
        fill_row(r, index);
    ++version_;
}

std::vector<RowId> ObservationTable::closed_defects() const {
    std::unordered_map<std::uint64_t, RowId> prefix_hashes;
    prefix_hashes.reserve(prefix_rows_.size() * 2);
    for (RowId s : prefix_rows_)
        prefix_hashes.try_emplace(rows_[s].full_hash, s);
    std::vector<RowId> defects;
    for (RowId r = 0; r < rows_.size(); ++r)
        if (!rows_[r].in_prefixes && !prefix_hashes.count(rows_[r].full_hash))
            defects.push_back(r);
    return defects;
}

std::vector<ConsistencyDefect> ObservationTable::consistent_defects() const {
    std::unordered_map<std::uint64_t, RowId> first_of_class;
    std::vector<ConsistencyDefect> defects;
    for (RowId s : prefix_rows_) {
        auto [it, inserted] = first_of_class.try_emplace(rows_[s].full_hash, s);
        if (inserted)
            continue;
        const RowId rep = it->second;
        for (SymbolId a = 0; a < inputs_.size(); ++a) {
            const RowId sa = rows_[rep].successors[a];
            const RowId sb = rows_[s].successors[a];
            if (rows_[sa].full_hash == rows_[sb].full_hash)
                continue;
            for (std::uint32_t ei = 0; ei < suffixes_.size(); ++ei) {
                const auto ca = cell(sa, ei);
                const auto cb = cell(sb, ei);
                if (!std::equal(ca.begin(), ca.end(), cb.begin()))
                    defects.push_back({rep, s, a, ei});
            }
        }
    }
    return defects;
}

bool ObservationTable::is_consistent() const {
    std::unordered_map<std::uint64_t, RowId> first_of_class;
    for (RowId s : prefix_rows_) {
        auto [it, inserted] = first_of_class.try_emplace(rows_[s].full_hash, s);
        if (inserted)
            continue;
        for (SymbolId a = 0; a < inputs_.size(); ++a)
            if (rows_[rows_[it->second].successors[a]].full_hash !=
                rows_[rows_[s].successors[a]].full_hash)
                return false;
    }
    return true;
}

void ObservationTable::ensure_report() const {
    if (report_version_ == version_)
        return;
    report_.closedness.clear();
    report_.consistency.clear();

    std::unordered_map<std::uint64_t, RowId> by_hash;
    for (SymbolId y = 0; y < outputs_.size(); ++y) {
        by_hash.clear();
        for (RowId s : prefix_rows_)
            by_hash.try_emplace(projected_row_hash(s, y), s);
        for (RowId r = 0; r < rows_.size(); ++r)
            if (!rows_[r].in_prefixes && !by_hash.count(projected_row_hash(r, y)))
                report_.closedness.push_back({y, r});
    }

    for (SymbolId y = 0; y < outputs_.size(); ++y) {
        by_hash.clear();
        for (RowId s : prefix_rows_) {
            auto [it, inserted] = by_hash.try_emplace(projected_row_hash(s, y), s);
            if (inserted)
                continue;
            const RowId rep = it->second;
            for (SymbolId a = 0; a < inputs_.size(); ++a) {
                const RowId sa = rows_[rep].successors[a];
                const RowId sb = rows_[s].successors[a];
                if (projected_row_hash(sa, y) == projected_row_hash(sb, y))
                    continue;
                for (std::uint32_t ei = 0; ei < suffixes_.size(); ++ei) {
                    const auto ca = cell(sa, ei);
                    const auto cb = cell(sb, ei);
                    for (std::size_t j = 0; j < ca.size(); ++j)
                        if ((ca[j] == y) != (cb[j] == y)) {
                            report_.consistency.push_back({y, rep, s, a, ei});
                            break;
                        }
                }
            }
        }
    }
    report_version_ = version_;
}

const DefectReport& ObservationTable::output_defects() const {
    ensure_report();
    return report_;
}

bool ObservationTable::is_output_closed() const {
    ensure_report();
    return report_.closedness.empty();
}

bool ObservationTable::is_output_consistent() const {
    ensure_report();
    return report_.consistency.empty();
}

void ObservationTable::dump(std::ostream& out) const {
    out << "suffixes:";
    for (const Word& e : suffixes_)
        out << " [" << format_word(inputs_, e) << "]";
    out << "\noutputs:";
    for (const auto& y : outputs_.names())
        out << ' ' << y;
    out << '\n';
    for (RowId r = 0; r < rows_.size(); ++r) {
        out << (rows_[r].in_prefixes ? "S  " : "SX ") << '\''
            << format_word(inputs_, rows_[r].word) << "' :";
        for (std::uint32_t ei = 0; ei < suffixes_.size(); ++ei) {
            out << ' ';
            for (SymbolId c : cell(r, ei))
                out << outputs_.name(c);
        }
        out << '\n';
    }
}

} // namespace olstar
