#include "freedec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace freedec {

std::string format_double(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_spectrum_file(const std::filesystem::path& path, const Spectrum& spectrum)
{
    std::ofstream out(path);
    if (!out) throw invalid_argument("cannot open output file " + path.string());
    for (double v : spectrum.eigenvalues) {
        out << format_double(v) << '\n';
    }
}

Spectrum read_spectrum_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_argument("cannot read spectrum file " + path.string());
    Spectrum s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v = 0.0;
        const char* begin = line.data();
        const char* end = begin + line.size();
        while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
        const auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || !std::isfinite(v)) {
            throw invalid_argument("spectrum file " + path.string() +
                                   ": cannot parse eigenvalue '" + line + "'");
        }
        s.eigenvalues.push_back(v);
    }
    if (s.eigenvalues.empty()) {
        throw invalid_argument("spectrum file " + path.string() + " is empty");
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

SparseMeasure read_measure_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_argument("cannot read measure file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument("measure file " + path.string() + ": " + e.what());
    }
    if (!doc.contains("atoms") || !doc.contains("weights")) {
        throw invalid_argument("measure file " + path.string() +
                               ": expected fields 'atoms' and 'weights'");
    }
    SparseMeasure m;
    try {
        m.atoms = doc["atoms"].get<std::vector<double>>();
        m.weights = doc["weights"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument("measure file " + path.string() + ": " + e.what());
    }
    validate_measure(m);
    return m;
}

void write_measure_file(const std::filesystem::path& path, const SparseMeasure& measure)
{
    nlohmann::ordered_json doc;
    doc["atoms"] = measure.atoms;
    doc["weights"] = measure.weights;
    std::ofstream out(path);
    if (!out) throw invalid_argument("cannot open output file " + path.string());
    out << doc.dump(2) << '\n';
}

void write_landscape_csv(const std::filesystem::path& path, const LossLandscape& landscape)
{
    std::ofstream out(path);
    if (!out) throw invalid_argument("cannot open output file " + path.string());
    const auto n_rows = landscape.full_curves.rows();
    out << "parameter";
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        out << ",log_s" << (r + 1);
    }
    out << '\n';
    for (std::size_t i = 0; i < landscape.parameter_grid.size(); ++i) {
        out << format_double(landscape.parameter_grid[i]);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            const double v = landscape.full_curves(r, static_cast<Eigen::Index>(i));
            out << ',' << (std::isnan(v) ? "nan" : format_double(v));
        }
        out << '\n';
    }
}

Histogram freedman_diaconis_histogram(const Spectrum& spectrum)
{
    validate_spectrum(spectrum);
    const auto& xs = spectrum.eigenvalues;
    const auto n = static_cast<double>(xs.size());
    auto quantile = [&](double p) {
        const double pos = p * (n - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, xs.size() - 1);
        const double frac = pos - std::floor(pos);
        return xs[lo] * (1.0 - frac) + xs[hi] * frac;
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double span = spectrum.max() - spectrum.min();
    const double width = 2.0 * iqr / std::cbrt(n);
    int bins = 1;
    if (width > 0.0 && span > 0.0) {
        bins = static_cast<int>(std::ceil(span / width));
    }
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) {
        h.edges[b] = spectrum.min() + span * b / bins;
    }
    h.counts.assign(bins, 0);
    for (double x : xs) {
        int b = span > 0.0 ? static_cast<int>((x - spectrum.min()) / span * bins) : 0;
        h.counts[std::clamp(b, 0, bins - 1)] += 1;
    }
    return h;
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& histogram)
{
    std::ofstream out(path);
    if (!out) throw invalid_argument("cannot open output file " + path.string());
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
        out << format_double(histogram.edges[b]) << ',' << format_double(histogram.edges[b + 1])
            << ',' << histogram.counts[b] << '\n';
    }
}

}  // namespace freedec
