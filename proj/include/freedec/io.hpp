#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "freedec/noise.hpp"
#include "freedec/types.hpp"

namespace freedec {

/// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);

/// Plain text, one eigenvalue per line, full precision.
void write_spectrum_file(const std::filesystem::path& path, const Spectrum& spectrum);

/// Reads, validates finiteness, sorts ascending.
Spectrum read_spectrum_file(const std::filesystem::path& path);

/// JSON document {"atoms": [...], "weights": [...]}.
SparseMeasure read_measure_file(const std::filesystem::path& path);
void write_measure_file(const std::filesystem::path& path, const SparseMeasure& measure);

/// CSV with header "parameter,log_s1,...", one row per grid value.
void write_landscape_csv(const std::filesystem::path& path, const LossLandscape& landscape);

struct Histogram {
    std::vector<double> edges;  ///< bin edges, size counts.size() + 1
    std::vector<int> counts;
};

/// Freedman-Diaconis binning over the spectral hull.
Histogram freedman_diaconis_histogram(const Spectrum& spectrum);

/// CSV with header "bin_lo,bin_hi,count".
void write_histogram_csv(const std::filesystem::path& path, const Histogram& histogram);

}  // namespace freedec
