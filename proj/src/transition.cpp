#include "dgs/transition.hpp"

#include <fstream>
#include <sstream>

#include "dgs/errors.hpp"
#include "dgs/format.hpp"

namespace dgs {

TransitionMatrix build_P(const Digraph& g) {
    const int n = g.n();
    // Integer edge counts first, one division per row afterwards: rows sum
    // to exactly d_plus[u]/d_plus[u] in floating point.
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (int h = 0; h < g.m(); ++h)
        counts(g.head_vertex[h], g.edge_target[h]) += 1.0;
    for (int u = 0; u < n; ++u) counts.row(u) /= static_cast<double>(g.seq.d_plus[u]);
    return TransitionMatrix{std::move(counts), g};
}

Eigen::VectorXd pi_minus(const DegreeSequence& seq) {
    Eigen::VectorXd v(seq.n());
    for (int j = 0; j < seq.n(); ++j)
        v(j) = static_cast<double>(seq.d_minus[j]) / static_cast<double>(seq.total);
    return v;
}

double edge_weight(const Digraph& g, const HalfEdge& e, const HalfEdge& f,
                   bool centered) {
    const int h = head_index(g.seq, e); // KindMismatch if e is not a head
    const int t = tail_index(g.seq, f);
    const double matched = g.env.sigma[h] == t ? 1.0 : 0.0;
    const double num = centered ? matched - 1.0 / static_cast<double>(g.m()) : matched;
    return num / static_cast<double>(g.seq.d_plus[e.vertex]);
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    return out.str();
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_double(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged matrix CSV");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("matrix CSV has no rows");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write matrix CSV: " + path);
    out << matrix_to_csv(m);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read matrix CSV: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_csv(buf.str());
}

} // namespace dgs
