#include "dgs/config_sampler.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dgs/errors.hpp"
#include "dgs/rng.hpp"

namespace dgs {

namespace {

int checked_index(const DegreeSequence& seq, const HalfEdge& e,
                  const std::vector<int>& per_vertex, const char* what) {
    if (e.vertex < 0 || e.vertex >= seq.n())
        throw SizeMismatch(std::string(what) + ": vertex out of range");
    if (e.slot < 0 || e.slot >= per_vertex[e.vertex])
        throw SizeMismatch(std::string(what) + ": slot out of range");
    int idx = e.slot;
    for (int v = 0; v < e.vertex; ++v) idx += per_vertex[v];
    return idx;
}

} // namespace

int head_index(const DegreeSequence& seq, const HalfEdge& e) {
    if (e.kind != HalfEdgeKind::head)
        throw KindMismatch("expected a head half-edge");
    return checked_index(seq, e, seq.d_plus, "head");
}

int tail_index(const DegreeSequence& seq, const HalfEdge& e) {
    if (e.kind != HalfEdgeKind::tail)
        throw KindMismatch("expected a tail half-edge");
    return checked_index(seq, e, seq.d_minus, "tail");
}

namespace {

HalfEdge of_index(const DegreeSequence& seq, int index,
                  const std::vector<int>& per_vertex, HalfEdgeKind kind) {
    if (index < 0 || index >= seq.total)
        throw SizeMismatch("half-edge index out of range");
    int v = 0;
    while (index >= per_vertex[v]) index -= per_vertex[v++];
    return HalfEdge{v, index, kind};
}

} // namespace

HalfEdge head_of_index(const DegreeSequence& seq, int index) {
    return of_index(seq, index, seq.d_plus, HalfEdgeKind::head);
}

HalfEdge tail_of_index(const DegreeSequence& seq, int index) {
    return of_index(seq, index, seq.d_minus, HalfEdgeKind::tail);
}

Environment sample_environment(const DegreeSequence& seq, std::uint64_t seed) {
    const int m = static_cast<int>(seq.total);
    Environment env;
    env.seed = seed;
    env.sigma.resize(m);
    std::iota(env.sigma.begin(), env.sigma.end(), 0);
    Rng rng(splitmix64(seed));
    for (int i = m - 1; i >= 1; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(env.sigma[i], env.sigma[j]);
    }
    return env;
}

Digraph build_digraph(const DegreeSequence& seq, Environment env) {
    const int m = static_cast<int>(seq.total);
    if (static_cast<int>(env.sigma.size()) != m)
        throw SizeMismatch("environment has " + std::to_string(env.sigma.size()) +
                           " entries, degree sequence needs " + std::to_string(m));
    std::vector<char> seen(m, 0);
    for (int s : env.sigma) {
        if (s < 0 || s >= m || seen[s])
            throw SizeMismatch("environment is not a permutation of 0.." +
                               std::to_string(m - 1));
        seen[s] = 1;
    }

    Digraph g;
    g.seq = seq;
    g.env = std::move(env);
    g.head_offset.assign(seq.n() + 1, 0);
    g.tail_offset.assign(seq.n() + 1, 0);
    for (int v = 0; v < seq.n(); ++v) {
        g.head_offset[v + 1] = g.head_offset[v] + seq.d_plus[v];
        g.tail_offset[v + 1] = g.tail_offset[v] + seq.d_minus[v];
    }
    g.head_vertex.resize(m);
    g.tail_vertex.resize(m);
    for (int v = 0; v < seq.n(); ++v) {
        for (int h = g.head_offset[v]; h < g.head_offset[v + 1]; ++h)
            g.head_vertex[h] = v;
        for (int t = g.tail_offset[v]; t < g.tail_offset[v + 1]; ++t)
            g.tail_vertex[t] = v;
    }
    g.edge_target.resize(m);
    g.in_heads.assign(seq.n(), {});
    for (int h = 0; h < m; ++h) {
        const int v = g.tail_vertex[g.env.sigma[h]];
        g.edge_target[h] = v;
        g.in_heads[v].push_back(h);
    }
    return g;
}

void for_each_environment(const DegreeSequence& seq,
                          const std::function<void(const Environment&)>& fn,
                          int cap) {
    if (seq.total > cap)
        throw TooLarge("M = " + std::to_string(seq.total) +
                       " exceeds the enumeration cap " + std::to_string(cap));
    Environment env;
    env.sigma.resize(static_cast<size_t>(seq.total));
    std::iota(env.sigma.begin(), env.sigma.end(), 0);
    do {
        fn(env);
    } while (std::next_permutation(env.sigma.begin(), env.sigma.end()));
}

std::vector<Environment> enumerate_environments(const DegreeSequence& seq, int cap) {
    std::vector<Environment> all;
    for_each_environment(seq, [&](const Environment& e) { all.push_back(e); }, cap);
    return all;
}

std::string serialize_environment(const Environment& env) {
    std::ostringstream out;
    out << "# environment seed=" << env.seed << " M=" << env.sigma.size() << '\n';
    for (size_t i = 0; i < env.sigma.size(); ++i) {
        if (i) out << ' ';
        out << env.sigma[i];
    }
    out << '\n';
    return out.str();
}

Environment parse_environment(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("# environment", 0) != 0)
        throw IoError("environment text must start with `# environment` header");
    Environment env;
    size_t m = 0;
    {
        const auto seed_pos = header.find("seed=");
        const auto m_pos = header.find("M=");
        if (seed_pos == std::string::npos || m_pos == std::string::npos)
            throw IoError("environment header must carry seed= and M=");
        try {
            env.seed = std::stoull(header.substr(seed_pos + 5));
            m = std::stoull(header.substr(m_pos + 2));
        } catch (const std::exception&) {
            throw IoError("environment header seed=/M= values are not integers");
        }
    }
    env.sigma.reserve(m);
    int v;
    while (in >> v) env.sigma.push_back(v);
    if (env.sigma.size() != m)
        throw IoError("environment body has " + std::to_string(env.sigma.size()) +
                      " entries, header says M=" + std::to_string(m));
    std::vector<char> seen(m, 0);
    for (int s : env.sigma) {
        if (s < 0 || static_cast<size_t>(s) >= m || seen[s])
            throw IoError("environment body is not a permutation of 0.." +
                          std::to_string(m - 1));
        seen[s] = 1;
    }
    return env;
}

void save_environment(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write environment file: " + path);
    out << serialize_environment(env);
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read environment file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_environment(buf.str());
}

} // namespace dgs
