#pragma once

#include <vector>

#include "dgs/config_sampler.hpp"
#include "dgs/path.hpp"

namespace dgs {

// Small oriented multigraph value type used for forward balls and path
// graphs. Vertices are 0..n_vertices-1; parallel edges and loops are kept
// as separate entries.
struct Multigraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;
};

// Dimension of the cycle space of the unoriented skeleton:
// edges - vertices + components. Orientation-blind; loops and parallel
// edges each contribute.
int count_independent_cycles(const Multigraph& g);

// Tangle-free means at most one independent cycle.
bool is_tangle_free(const Multigraph& g);

// Induced sub-multigraph on the vertices at directed distance <= radius
// from center (every parallel edge between ball vertices is kept).
// vertex_ids maps local indices back to the digraph's vertex names.
struct ForwardBall {
    int center = 0;
    int radius = 0;
    std::vector<int> vertex_ids;
    Multigraph graph;
};

ForwardBall forward_ball(const Digraph& g, int center, int radius);

struct TangleWitness {
    bool tangle_free = true;
    int witness = -1; // lowest-index vertex whose ball is tangled, or -1
};

// Checks every radius-`radius` forward ball, scanning centers in
// increasing order.
TangleWitness is_d_tangle_free(const Digraph& g, int radius);

// G(p): one oriented edge per distinct (head, tail) couple of the path,
// on the vertices the path visits (local indices in sorted vertex order).
Multigraph path_graph(const DegreeSequence& seq, const Path& p);

// ceil(alpha * log_Delta(n)), floored at 1: the radius the tangle census
// and the decomposition experiments use by default.
int default_tangle_radius(int n, int max_degree, double alpha = 0.24);

} // namespace dgs
