#pragma once

#include <utility>
#include <vector>

#include "dgs/config_sampler.hpp"

namespace dgs {

// A potential path of length t: steps (e_1,f_1),...,(e_t,f_t) where e_s is
// a head, f_s a tail, and f_s is co-located with e_{s+1}. Realization
// (sigma(e_s) = f_s) is a property of an environment, not of the path.
// Build through make_path so the consistency constraints hold.
struct Path {
    std::vector<std::pair<HalfEdge, HalfEdge>> steps;

    int length() const { return static_cast<int>(steps.size()); }
    int start() const { return steps.front().first.vertex; }
    int end() const { return steps.back().second.vertex; }

    // Flat half-edge sequence e_1 f_1 e_2 f_2 ... e_t f_t.
    std::vector<HalfEdge> half_edges() const;

    friend bool operator==(const Path&, const Path&) = default;
};

// Validates kinds, slot ranges and co-location. Throws KindMismatch,
// SizeMismatch, InconsistentPath.
Path make_path(const DegreeSequence& seq,
               std::vector<std::pair<HalfEdge, HalfEdge>> steps);

// Concatenation: the end vertex of `a` must carry the first head of `b`.
Path concat(const DegreeSequence& seq, const Path& a, const Path& b);

// Order reversal of a flat half-edge sequence (the reversed object reads
// tails as departure points); applying it twice is the identity.
std::vector<HalfEdge> reverse_halfedges(std::vector<HalfEdge> seq);

} // namespace dgs
