#include "dgs/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dgs/degree_model.hpp"
#include "dgs/errors.hpp"
#include "dgs/format.hpp"

namespace dgs {

SpectrumReport compute_spectrum(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw SizeMismatch("spectrum of a non-square matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("dense eigensolver did not converge");

    SpectrumReport report;
    const auto& vals = solver.eigenvalues();
    report.eigenvalues.assign(vals.data(), vals.data() + vals.size());
    // Moduli are bucketed on a fixed grid before comparing so that values
    // equal up to rounding noise fall back to the real/imaginary order
    // (keeps the comparison a strict weak ordering and the output stable).
    const auto bucket = [](double x) { return std::round(x * 1e9); };
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [&](const std::complex<double>& a, const std::complex<double>& b) {
                  const double ma = bucket(std::abs(a)), mb = bucket(std::abs(b));
                  if (ma != mb) return ma > mb;
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    report.lambda2_mod =
        report.eigenvalues.size() >= 2 ? std::abs(report.eigenvalues[1]) : 0.0;
    return report;
}

SpectrumReport compute_spectrum(const TransitionMatrix& p) {
    SpectrumReport report = compute_spectrum(p.probs);
    report.rho = rho(p.graph.seq);
    report.rho_tilde = rho_tilde(p.graph.seq);
    return report;
}

BoundVerdict check_main_bound(const SpectrumReport& report, double epsilon) {
    if (std::isnan(report.rho_tilde))
        throw Error("check_main_bound needs a spectrum built from a transition matrix");
    BoundVerdict v;
    v.lambda2_mod = report.lambda2_mod;
    v.threshold = report.rho_tilde + epsilon;
    v.margin = v.threshold - v.lambda2_mod;
    v.satisfied = v.lambda2_mod <= v.threshold;
    return v;
}

bool is_ramanujan_digraph(const SpectrumReport& report, int d) {
    const double trivial = 1.0 - 1e-8;
    const double bulk = 1.0 / std::sqrt(static_cast<double>(d)) + 1e-8;
    for (const auto& z : report.eigenvalues) {
        const double m = std::abs(z);
        if (m < trivial && m > bulk) return false;
    }
    return true;
}

std::string spectrum_to_csv(const SpectrumReport& report) {
    std::ostringstream out;
    out << "re,im,modulus\n";
    for (const auto& z : report.eigenvalues)
        out << format_double(z.real()) << ',' << format_double(z.imag()) << ','
            << format_double(std::abs(z)) << '\n';
    return out.str();
}

void save_spectrum_csv(const SpectrumReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum CSV: " + path);
    out << spectrum_to_csv(report);
}

namespace {

// [-1.1, 1.1] -> [0, 640], y flipped.
double svg_x(double v) { return (v + 1.1) * (640.0 / 2.2); }
double svg_y(double v) { return (1.1 - v) * (640.0 / 2.2); }

void svg_circle(std::ostringstream& out, double radius, const char* stroke) {
    out << "<circle cx=\"320\" cy=\"320\" r=\"" << format_double(radius * (640.0 / 2.2))
        << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
}

} // namespace

std::string spectrum_to_svg(const SpectrumReport& report, double rho_radius,
                            double delta_inverse_radius) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n"
        << "<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n"
        << "<line x1=\"0\" y1=\"320\" x2=\"640\" y2=\"320\" stroke=\"#cccccc\" "
           "stroke-width=\"1\"/>\n"
        << "<line x1=\"320\" y1=\"0\" x2=\"320\" y2=\"640\" stroke=\"#cccccc\" "
           "stroke-width=\"1\"/>\n";
    svg_circle(out, 1.0, "#444444");
    svg_circle(out, rho_radius, "#cc2222");
    svg_circle(out, delta_inverse_radius, "#22aa44");
    for (const auto& z : report.eigenvalues)
        out << "<circle cx=\"" << format_double(svg_x(z.real())) << "\" cy=\""
            << format_double(svg_y(z.imag()))
            << "\" r=\"2.5\" fill=\"#20242c\" fill-opacity=\"0.75\"/>\n";
    out << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"13\" "
           "fill=\"#cc2222\">rho = "
        << format_double(rho_radius) << "</text>\n"
        << "<text x=\"10\" y=\"38\" font-family=\"monospace\" font-size=\"13\" "
           "fill=\"#22aa44\">1/delta = "
        << format_double(delta_inverse_radius) << "</text>\n"
        << "<text x=\"10\" y=\"56\" font-family=\"monospace\" font-size=\"13\" "
           "fill=\"#20242c\">|lambda2| = "
        << format_double(report.lambda2_mod) << "</text>\n"
        << "</svg>\n";
    return out.str();
}

void save_spectrum_svg(const SpectrumReport& report, double rho_radius,
                       double delta_inverse_radius, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum SVG: " + path);
    out << spectrum_to_svg(report, rho_radius, delta_inverse_radius);
}

} // namespace dgs
