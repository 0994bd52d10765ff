#pragma once

#include <string>
#include <vector>

namespace dgs {

// A bi-degree sequence for the directed configuration model: vertex i
// carries d_plus[i] out-going half-edges (heads) and d_minus[i] in-coming
// half-edges (tails). Valid sequences have matching totals and every
// degree >= 2. Build instances through validate / regular / from_types /
// parse_degrees so the cached aggregates stay consistent.
struct DegreeSequence {
    std::vector<int> d_plus;
    std::vector<int> d_minus;
    long long total = 0; // M = sum d_plus = sum d_minus
    int min_degree = 0;  // delta, over both head and tail counts
    int max_degree = 0;  // Delta, over both head and tail counts

    int n() const { return static_cast<int>(d_plus.size()); }
};

// One line of the on-disk format: `count` vertices of type (d_plus, d_minus).
struct DegreeType {
    long long count = 0;
    int d_plus = 0;
    int d_minus = 0;
};

// Checks lengths, balance of head/tail totals and the minimum-degree
// hypothesis (every degree >= 2), then fills the cached aggregates.
// Throws EmptySequence, SizeMismatch, UnbalancedSums, DegreeTooSmall.
DegreeSequence validate(std::vector<int> out_degrees, std::vector<int> in_degrees);

// n vertices, all with d heads and d tails.
DegreeSequence regular(int n, int d);

// Expansion of type triples in order; vertices of one triple are adjacent
// in vertex numbering.
DegreeSequence from_types(const std::vector<DegreeType>& types);

// sqrt((1/M) * sum_i d_minus[i] / d_plus[i]); always in [1/sqrt(Delta), 1/sqrt(delta)].
double rho(const DegreeSequence& seq);

// max(rho, 1/delta): the second-eigenvalue scale the spectra are tested against.
double rho_tilde(const DegreeSequence& seq);

// Text format: one `count d_plus d_minus` triple per line, `#` starts a
// comment, blank lines ignored. serialize_degrees run-length encodes the
// per-vertex sequence, so parse(serialize(s)) reproduces s exactly.
DegreeSequence parse_degrees(const std::string& text);
std::string serialize_degrees(const DegreeSequence& seq);

// File variants of the above. Throw IoError on unreadable/unwritable paths.
DegreeSequence load_degrees(const std::string& path);
void save_degrees(const DegreeSequence& seq, const std::string& path);

} // namespace dgs
