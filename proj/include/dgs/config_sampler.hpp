#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dgs/degree_model.hpp"

namespace dgs {

enum class HalfEdgeKind { head, tail };

// A half-edge is addressed (vertex, slot, kind); slot counts from 0 within
// the vertex. Global indices order half-edges vertex-major, slot-minor,
// separately for heads and tails.
struct HalfEdge {
    int vertex = 0;
    int slot = 0;
    HalfEdgeKind kind = HalfEdgeKind::head;

    friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

// The random environment: a permutation sigma of {0..M-1} matching global
// head index h to global tail index sigma[h]. seed records how it was
// drawn (0 for enumerated/deserialized-without-seed environments).
struct Environment {
    std::vector<int> sigma;
    std::uint64_t seed = 0;
};

// A realized configuration-model multigraph. Everything is index-based:
// head h sits at head_vertex[h], is matched to tail sigma[h], and the
// resulting directed edge points at edge_target[h]. in_heads is the
// reverse adjacency (heads arriving at each vertex).
struct Digraph {
    DegreeSequence seq;
    Environment env;
    std::vector<int> head_vertex;
    std::vector<int> tail_vertex;
    std::vector<int> head_offset; // size n+1, prefix sums of d_plus
    std::vector<int> tail_offset; // size n+1, prefix sums of d_minus
    std::vector<int> edge_target; // head index -> target vertex
    std::vector<std::vector<int>> in_heads;

    int n() const { return seq.n(); }
    int m() const { return static_cast<int>(seq.total); }
    int head_at(int vertex, int slot) const { return head_offset[vertex] + slot; }
    int tail_at(int vertex, int slot) const { return tail_offset[vertex] + slot; }
};

// Global index of a half-edge; checks the kind tag against `kind` and the
// slot range. Throws KindMismatch / SizeMismatch.
int head_index(const DegreeSequence& seq, const HalfEdge& e);
int tail_index(const DegreeSequence& seq, const HalfEdge& e);
HalfEdge head_of_index(const DegreeSequence& seq, int index);
HalfEdge tail_of_index(const DegreeSequence& seq, int index);

// Uniform matching via Fisher-Yates over tail indices against fixed head
// order; the generator is mt19937_64 seeded with splitmix64(seed), and all
// bounded draws use rejection sampling, so streams are identical across
// platforms.
Environment sample_environment(const DegreeSequence& seq, std::uint64_t seed);

// Validates the permutation (length M, bijective), then assembles the
// index structure. Throws SizeMismatch.
Digraph build_digraph(const DegreeSequence& seq, Environment env);

// All M! environments in lexicographic sigma order. The callback form
// streams without materializing; the vector form is for small M.
// Throws TooLarge when M exceeds `cap` (default 8).
void for_each_environment(const DegreeSequence& seq,
                          const std::function<void(const Environment&)>& fn,
                          int cap = 8);
std::vector<Environment> enumerate_environments(const DegreeSequence& seq, int cap = 8);

// One-line serialization: `# environment seed=<seed> M=<M>` then sigma.
std::string serialize_environment(const Environment& env);
Environment parse_environment(const std::string& text);
void save_environment(const Environment& env, const std::string& path);
Environment load_environment(const std::string& path);

} // namespace dgs
