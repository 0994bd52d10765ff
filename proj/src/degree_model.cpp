#include "dgs/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dgs/errors.hpp"

namespace dgs {

DegreeSequence validate(std::vector<int> out_degrees, std::vector<int> in_degrees) {
    if (out_degrees.empty() || in_degrees.empty())
        throw EmptySequence("degree sequence is empty");
    if (out_degrees.size() != in_degrees.size())
        throw SizeMismatch("out/in degree sequences have different lengths: " +
                           std::to_string(out_degrees.size()) + " vs " +
                           std::to_string(in_degrees.size()));

    long long sum_out = 0, sum_in = 0;
    int lo = out_degrees[0], hi = out_degrees[0];
    for (size_t i = 0; i < out_degrees.size(); ++i) {
        sum_out += out_degrees[i];
        sum_in += in_degrees[i];
        lo = std::min({lo, out_degrees[i], in_degrees[i]});
        hi = std::max({hi, out_degrees[i], in_degrees[i]});
    }
    if (sum_out != sum_in)
        throw UnbalancedSums("head total " + std::to_string(sum_out) +
                             " != tail total " + std::to_string(sum_in));
    if (lo < 2)
        throw DegreeTooSmall("minimum degree " + std::to_string(lo) +
                             " violates the >= 2 hypothesis");

    DegreeSequence seq;
    seq.d_plus = std::move(out_degrees);
    seq.d_minus = std::move(in_degrees);
    seq.total = sum_out;
    seq.min_degree = lo;
    seq.max_degree = hi;
    return seq;
}

DegreeSequence regular(int n, int d) {
    if (n <= 0) throw EmptySequence("regular(n, d) needs n >= 1");
    return validate(std::vector<int>(n, d), std::vector<int>(n, d));
}

DegreeSequence from_types(const std::vector<DegreeType>& types) {
    std::vector<int> out, in;
    for (const auto& t : types) {
        if (t.count < 0) throw SizeMismatch("negative type count");
        out.insert(out.end(), static_cast<size_t>(t.count), t.d_plus);
        in.insert(in.end(), static_cast<size_t>(t.count), t.d_minus);
    }
    return validate(std::move(out), std::move(in));
}

double rho(const DegreeSequence& seq) {
    double s = 0.0;
    for (int i = 0; i < seq.n(); ++i)
        s += static_cast<double>(seq.d_minus[i]) / seq.d_plus[i];
    return std::sqrt(s / static_cast<double>(seq.total));
}

double rho_tilde(const DegreeSequence& seq) {
    return std::max(rho(seq), 1.0 / seq.min_degree);
}

DegreeSequence parse_degrees(const std::string& text) {
    std::vector<DegreeType> types;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        DegreeType t;
        std::string trailing;
        if (!(row >> t.count >> t.d_plus >> t.d_minus) || (row >> trailing))
            throw IoError("degree file line " + std::to_string(lineno) +
                          ": expected `count d_plus d_minus`");
        if (t.count < 1 || t.d_plus < 0 || t.d_minus < 0)
            throw IoError("degree file line " + std::to_string(lineno) +
                          ": counts must be positive and degrees nonnegative");
        types.push_back(t);
    }
    return from_types(types);
}

std::string serialize_degrees(const DegreeSequence& seq) {
    std::ostringstream out;
    int i = 0;
    while (i < seq.n()) {
        int j = i;
        while (j < seq.n() && seq.d_plus[j] == seq.d_plus[i] &&
               seq.d_minus[j] == seq.d_minus[i])
            ++j;
        out << (j - i) << ' ' << seq.d_plus[i] << ' ' << seq.d_minus[i] << '\n';
        i = j;
    }
    return out.str();
}

DegreeSequence load_degrees(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read degree file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_degrees(buf.str());
}

void save_degrees(const DegreeSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write degree file: " + path);
    out << serialize_degrees(seq);
}

} // namespace dgs
