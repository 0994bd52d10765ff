#include "dgs/path.hpp"

#include <algorithm>

#include "dgs/errors.hpp"

namespace dgs {

std::vector<HalfEdge> Path::half_edges() const {
    std::vector<HalfEdge> flat;
    flat.reserve(steps.size() * 2);
    for (const auto& [e, f] : steps) {
        flat.push_back(e);
        flat.push_back(f);
    }
    return flat;
}

Path make_path(const DegreeSequence& seq,
               std::vector<std::pair<HalfEdge, HalfEdge>> steps) {
    if (steps.empty()) throw InconsistentPath("a path has at least one step");
    for (const auto& [e, f] : steps) {
        head_index(seq, e); // validates kind and range
        tail_index(seq, f);
    }
    for (size_t s = 0; s + 1 < steps.size(); ++s)
        if (steps[s].second.vertex != steps[s + 1].first.vertex)
            throw InconsistentPath(
                "tail of step " + std::to_string(s + 1) + " sits at vertex " +
                std::to_string(steps[s].second.vertex) + " but the next head is at " +
                std::to_string(steps[s + 1].first.vertex));
    Path p;
    p.steps = std::move(steps);
    return p;
}

Path concat(const DegreeSequence& seq, const Path& a, const Path& b) {
    if (a.end() != b.start())
        throw InconsistentPath("concat: first path ends at vertex " +
                               std::to_string(a.end()) + ", second starts at " +
                               std::to_string(b.start()));
    std::vector<std::pair<HalfEdge, HalfEdge>> steps = a.steps;
    steps.insert(steps.end(), b.steps.begin(), b.steps.end());
    return make_path(seq, std::move(steps));
}

std::vector<HalfEdge> reverse_halfedges(std::vector<HalfEdge> seq) {
    std::reverse(seq.begin(), seq.end());
    return seq;
}

} // namespace dgs
