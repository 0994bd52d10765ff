#include "dgs/tangle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgs/errors.hpp"

namespace dgs {

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Returns false if x and y were already connected.
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        parent[x] = y;
        return true;
    }
};

} // namespace

int count_independent_cycles(const Multigraph& g) {
    Dsu dsu(g.n_vertices);
    int components = g.n_vertices;
    for (const auto& [u, v] : g.edges)
        if (u != v && dsu.unite(u, v)) --components;
    return static_cast<int>(g.edges.size()) - g.n_vertices + components;
}

bool is_tangle_free(const Multigraph& g) { return count_independent_cycles(g) <= 1; }

ForwardBall forward_ball(const Digraph& g, int center, int radius) {
    if (center < 0 || center >= g.n()) throw SizeMismatch("ball center out of range");

    std::vector<int> dist(g.n(), -1);
    std::vector<int> order;
    dist[center] = 0;
    order.push_back(center);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        const int u = order[qi];
        if (dist[u] == radius) continue;
        for (int h = g.head_offset[u]; h < g.head_offset[u + 1]; ++h) {
            const int v = g.edge_target[h];
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
        }
    }

    ForwardBall ball;
    ball.center = center;
    ball.radius = radius;
    ball.vertex_ids = order;
    std::sort(ball.vertex_ids.begin(), ball.vertex_ids.end());
    std::vector<int> local(g.n(), -1);
    for (size_t i = 0; i < ball.vertex_ids.size(); ++i)
        local[ball.vertex_ids[i]] = static_cast<int>(i);

    ball.graph.n_vertices = static_cast<int>(ball.vertex_ids.size());
    for (int u : ball.vertex_ids)
        for (int h = g.head_offset[u]; h < g.head_offset[u + 1]; ++h) {
            const int v = g.edge_target[h];
            if (local[v] >= 0) ball.graph.edges.emplace_back(local[u], local[v]);
        }
    return ball;
}

TangleWitness is_d_tangle_free(const Digraph& g, int radius) {
    for (int x = 0; x < g.n(); ++x)
        if (!is_tangle_free(forward_ball(g, x, radius).graph))
            return TangleWitness{false, x};
    return TangleWitness{true, -1};
}

Multigraph path_graph(const DegreeSequence& seq, const Path& p) {
    // Re-validate: path_graph is also called on paths assembled manually.
    Path checked = make_path(seq, p.steps);

    std::vector<int> vertices;
    for (const auto& [e, f] : checked.steps) {
        vertices.push_back(e.vertex);
        vertices.push_back(f.vertex);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    auto local = [&](int v) {
        return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                                vertices.begin());
    };

    // One edge per distinct couple: dedupe on global half-edge indices.
    std::vector<std::pair<int, int>> couples;
    for (const auto& [e, f] : checked.steps)
        couples.emplace_back(head_index(seq, e), tail_index(seq, f));
    std::sort(couples.begin(), couples.end());
    couples.erase(std::unique(couples.begin(), couples.end()), couples.end());

    Multigraph g;
    g.n_vertices = static_cast<int>(vertices.size());
    for (const auto& [h, t] : couples)
        g.edges.emplace_back(local(head_of_index(seq, h).vertex),
                             local(tail_of_index(seq, t).vertex));
    return g;
}

int default_tangle_radius(int n, int max_degree, double alpha) {
    const double t = std::ceil(alpha * std::log(static_cast<double>(n)) /
                               std::log(static_cast<double>(max_degree)));
    return std::max(1, static_cast<int>(t));
}

} // namespace dgs
