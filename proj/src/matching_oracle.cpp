#include "dgs/matching_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dgs/errors.hpp"

namespace dgs {

ProtoPath make_proto_path(const DegreeSequence& seq,
                          std::vector<std::pair<HalfEdge, HalfEdge>> edges, int split) {
    if (edges.empty()) throw InconsistentPath("a proto-path has at least one couple");
    for (const auto& [e, f] : edges) {
        head_index(seq, e); // validates kind and slot range
        tail_index(seq, f);
    }
    if (split < 0 || split > static_cast<int>(edges.size()))
        throw SizeMismatch("split " + std::to_string(split) + " outside 0.." +
                           std::to_string(edges.size()));
    ProtoPath p;
    p.edges = std::move(edges);
    p.split = split;
    return p;
}

ProtoPathStats proto_stats(const DegreeSequence& seq, const ProtoPath& p) {
    const int n_steps = p.length();
    std::vector<int> hs(n_steps), ts(n_steps);
    for (int s = 0; s < n_steps; ++s) {
        hs[s] = head_index(seq, p.edges[s].first);
        ts[s] = tail_index(seq, p.edges[s].second);
    }

    // distinct couples in first-visit order
    std::vector<std::pair<int, int>> couples;
    std::vector<int> couple_of_step(n_steps);
    for (int s = 0; s < n_steps; ++s) {
        const std::pair<int, int> c{hs[s], ts[s]};
        const auto it = std::find(couples.begin(), couples.end(), c);
        if (it == couples.end()) {
            couple_of_step[s] = static_cast<int>(couples.size());
            couples.push_back(c);
        } else {
            couple_of_step[s] = static_cast<int>(it - couples.begin());
        }
    }

    ProtoPathStats stats;
    stats.a = static_cast<int>(couples.size());
    stats.w.assign(stats.a, 0);
    stats.w_prime.assign(stats.a, 0);
    for (int s = 0; s < n_steps; ++s) {
        if (s < p.split)
            ++stats.w[couple_of_step[s]];
        else
            ++stats.w_prime[couple_of_step[s]];
    }

    // occurrence counts of each half-edge across the whole proto-path
    std::map<int, int> head_uses, tail_uses;
    for (int s = 0; s < n_steps; ++s) {
        ++head_uses[hs[s]];
        ++tail_uses[ts[s]];
    }
    for (int i = 0; i < stats.a; ++i) {
        const bool consistent =
            head_uses[couples[i].first] == 1 && tail_uses[couples[i].second] == 1;
        if (!consistent) ++stats.b;
        if (consistent && stats.w[i] == 1) ++stats.a1;
    }
    stats.simple = stats.a == n_steps;

    int128 denom = 1;
    for (int s = 0; s < n_steps; ++s)
        denom = detail::checked_mul(denom, seq.d_plus[p.edges[s].first.vertex]);
    stats.omega = Rational(1, denom);
    return stats;
}

Rational exact_expectation(const DegreeSequence& seq,
                           const std::function<Rational(const Environment&)>& fn,
                           int cap) {
    Rational sum(0);
    long long count = 0;
    for_each_environment(
        seq,
        [&](const Environment& env) {
            sum = sum + fn(env);
            ++count;
        },
        cap);
    return sum / Rational(count);
}

Rational expected_entry(const DegreeSequence& seq, int i, int j, int cap) {
    if (i < 0 || i >= seq.n() || j < 0 || j >= seq.n())
        throw SizeMismatch("matrix entry out of range");
    // Head/tail index ranges of the two vertices.
    int head_lo = 0, tail_lo = 0;
    for (int v = 0; v < i; ++v) head_lo += seq.d_plus[v];
    for (int v = 0; v < j; ++v) tail_lo += seq.d_minus[v];
    const int head_hi = head_lo + seq.d_plus[i];
    const int tail_hi = tail_lo + seq.d_minus[j];

    return exact_expectation(
        seq,
        [&](const Environment& env) {
            int count = 0;
            for (int h = head_lo; h < head_hi; ++h)
                if (env.sigma[h] >= tail_lo && env.sigma[h] < tail_hi) ++count;
            return Rational(count, seq.d_plus[i]);
        },
        cap);
}

Rational F_value(const DegreeSequence& seq, const ProtoPath& p, int cap) {
    if (seq.total > cap)
        throw TooLarge("M = " + std::to_string(seq.total) +
                       " exceeds the oracle cap " + std::to_string(cap));
    const int n_steps = p.length();
    const long long m = seq.total;
    std::vector<int> hs(n_steps), ts(n_steps);
    for (int s = 0; s < n_steps; ++s) {
        hs[s] = head_index(seq, p.edges[s].first);
        ts[s] = tail_index(seq, p.edges[s].second);
    }

    // S = sum over environments of prod_{s<split}(M*1{match} - 1) *
    // prod_{s>=split} 1{match}; |S| <= M! * (M-1)^split fits in 128 bits
    // comfortably at M <= 8.
    int128 big_sum = 0;
    for_each_environment(
        seq,
        [&](const Environment& env) {
            long long term = 1;
            for (int s = 0; s < n_steps && term != 0; ++s) {
                const bool match = env.sigma[hs[s]] == ts[s];
                if (s < p.split)
                    term *= match ? m - 1 : -1;
                else if (!match)
                    term = 0;
            }
            big_sum += term;
        },
        cap);

    int128 m_fact = 1;
    for (long long k = 2; k <= m; ++k) m_fact = detail::checked_mul(m_fact, k);
    int128 m_pow = 1;
    for (int s = 0; s < p.split; ++s) m_pow = detail::checked_mul(m_pow, m);

    const ProtoPathStats stats = proto_stats(seq, p);
    return stats.omega * Rational(big_sum, detail::checked_mul(m_fact, m_pow));
}

TechBoundVerdict tech_bound_check(const DegreeSequence& seq, const ProtoPath& p,
                                  double c, int cap) {
    TechBoundVerdict verdict;
    verdict.stats = proto_stats(seq, p);
    verdict.f = F_value(seq, p, cap);
    verdict.lhs = std::abs(verdict.f.to_double());

    const double m = static_cast<double>(seq.total);
    const double n_steps = static_cast<double>(p.length());
    verdict.rhs = 24.0 * verdict.stats.omega.to_double() *
                  std::pow(3.0, verdict.stats.b) *
                  std::pow(c / m, verdict.stats.a) *
                  std::pow(n_steps / std::sqrt(m), verdict.stats.a1);
    verdict.in_regime = n_steps <= std::sqrt(m);
    // Tiny relative slack so exact ties survive the double rounding.
    verdict.satisfied = verdict.lhs <= verdict.rhs * (1.0 + 1e-12);
    return verdict;
}

std::string format_proto_path(const ProtoPath& p) {
    std::ostringstream out;
    out << "p=" << p.split << ";";
    for (const auto& [e, f] : p.edges)
        out << " (" << e.vertex << ',' << e.slot << ",+)/(" << f.vertex << ','
            << f.slot << ",-)";
    return out.str();
}

namespace {

HalfEdge parse_half_edge(std::istringstream& in, const std::string& text) {
    char c;
    HalfEdge e;
    char sign;
    if (!(in >> c) || c != '(' || !(in >> e.vertex >> c) || c != ',' ||
        !(in >> e.slot >> c) || c != ',' || !(in >> sign) ||
        (sign != '+' && sign != '-') || !(in >> c) || c != ')')
        throw IoError("malformed half-edge triple in proto-path: `" + text + "`");
    e.kind = sign == '+' ? HalfEdgeKind::head : HalfEdgeKind::tail;
    return e;
}

} // namespace

ProtoPath parse_proto_path(const DegreeSequence& seq, const std::string& text) {
    std::istringstream in(text);
    std::string prefix;
    if (!std::getline(in, prefix, ';'))
        throw IoError("proto-path literal needs a `p=<split>;` prefix: `" + text + "`");
    prefix.erase(std::remove_if(prefix.begin(), prefix.end(),
                                [](unsigned char ch) { return std::isspace(ch); }),
                 prefix.end());
    if (prefix.rfind("p=", 0) != 0)
        throw IoError("proto-path literal needs a `p=<split>;` prefix: `" + text + "`");
    const int split = std::stoi(prefix.substr(2));

    std::vector<std::pair<HalfEdge, HalfEdge>> edges;
    while (true) {
        in >> std::ws;
        if (in.eof() || in.peek() == EOF) break;
        const HalfEdge head = parse_half_edge(in, text);
        char slash;
        if (!(in >> slash) || slash != '/')
            throw IoError("expected `/` between head and tail in proto-path: `" +
                          text + "`");
        const HalfEdge tail = parse_half_edge(in, text);
        if (head.kind != HalfEdgeKind::head || tail.kind != HalfEdgeKind::tail)
            throw KindMismatch("proto-path couples are written head/tail: `" + text +
                               "`");
        edges.emplace_back(head, tail);
    }
    return make_proto_path(seq, std::move(edges), split);
}

} // namespace dgs
