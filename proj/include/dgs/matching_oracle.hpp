#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgs/config_sampler.hpp"
#include "dgs/rational.hpp"

namespace dgs {

// A proto-path of length N: half-edge couples (e_1,f_1)...(e_N,f_N) with no
// consistency constraint at all, plus the split index p: the first `split`
// factors of the expectation functional are centered, the rest are not.
struct ProtoPath {
    std::vector<std::pair<HalfEdge, HalfEdge>> edges;
    int split = 0;

    int length() const { return static_cast<int>(edges.size()); }
};

// Validates kinds, slot ranges and 0 <= split <= N.
ProtoPath make_proto_path(const DegreeSequence& seq,
                          std::vector<std::pair<HalfEdge, HalfEdge>> edges, int split);

// Combinatorial profile of a proto-path, feeding the bound check:
//   a        distinct couples ("edges" of the proto-path)
//   w, w_prime   visits of each distinct couple before / after the split
//   b        inconsistent couples (a half-edge shared with another couple
//            or revisited)
//   a1       consistent couples whose single visit happens before the split
//   simple   every couple visited exactly once
//   omega    prod_s 1/d_plus(vertex of e_s), exact
struct ProtoPathStats {
    int a = 0;
    std::vector<int> w;
    std::vector<int> w_prime;
    int b = 0;
    int a1 = 0;
    bool simple = false;
    Rational omega;
};

ProtoPathStats proto_stats(const DegreeSequence& seq, const ProtoPath& p);

// Exhaustive average of `fn` over all M! environments (lexicographic
// order). Throws TooLarge when M exceeds `cap`.
Rational exact_expectation(const DegreeSequence& seq,
                           const std::function<Rational(const Environment&)>& fn,
                           int cap = 8);

// E[P(i,j)] over the uniform environment, as an exact rational. Equals
// d_minus[j]/M for every i (verified by the test suite, not assumed here).
Rational expected_entry(const DegreeSequence& seq, int i, int j, int cap = 8);

// F_split(p) = E[prod_{s<=split} Abar(e_s,f_s) * prod_{s>split} A(e_s,f_s)],
// computed exactly: per environment the integer product
// prod_{s<=split}(M*1{match}-1) * prod_{s>split} 1{match} is accumulated
// over all M! environments, then scaled by omega / (M^split * M!).
Rational F_value(const DegreeSequence& seq, const ProtoPath& p, int cap = 8);

// |F(p)| against 24 * omega * 3^b * (c/M)^a * (N/sqrt(M))^(a1).
// in_regime marks the N <= sqrt(M) sub-regime where the bound is asserted
// by the acceptance suite; outside it the verdict is informational.
struct TechBoundVerdict {
    double lhs = 0.0;   // |F(p)|
    double rhs = 0.0;   // bound value
    bool satisfied = false;
    bool in_regime = false;
    Rational f;
    ProtoPathStats stats;
};

TechBoundVerdict tech_bound_check(const DegreeSequence& seq, const ProtoPath& p,
                                  double c, int cap = 8);

// Literal format: `p=<split>; (u,i,+)/(v,j,-) (u,i,+)/(v,j,-) ...`
std::string format_proto_path(const ProtoPath& p);
ProtoPath parse_proto_path(const DegreeSequence& seq, const std::string& text);

} // namespace dgs
