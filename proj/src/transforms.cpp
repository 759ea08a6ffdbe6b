#include "freedec/transforms.hpp"

#include <cmath>
#include <string>

#include "freedec/parallel.hpp"

namespace freedec {

cplx empirical_stieltjes(const Spectrum& spectrum, cplx z)
{
    const auto& ev = spectrum.eigenvalues;
    if (ev.empty()) throw invalid_argument("stieltjes: empty spectrum");
    cplx sum = 0.0;
    for (double lambda : ev) {
        const cplx gap = z - lambda;
        if (gap == cplx(0.0, 0.0)) {
            throw numerical_error("empirical_stieltjes",
                                  "evaluation point hits eigenvalue " + std::to_string(lambda));
        }
        sum += 1.0 / gap;
    }
    return sum / static_cast<double>(ev.size());
}

std::vector<cplx> stieltjes_samples_serial(const Spectrum& spectrum,
                                           std::span<const cplx> points)
{
    std::vector<cplx> out(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        out[j] = empirical_stieltjes(spectrum, points[j]);
    }
    return out;
}

std::vector<cplx> stieltjes_samples(const Spectrum& spectrum, std::span<const cplx> points)
{
    std::vector<cplx> out(points.size());
    const auto count = static_cast<std::int64_t>(points.size());
    FREEDEC_PRAGMA_OMP("omp parallel for schedule(static)")
    for (std::int64_t j = 0; j < count; ++j) {
        out[j] = empirical_stieltjes(spectrum, points[j]);
    }
    return out;
}

std::vector<cplx> sample_contour(const Spectrum& spectrum, const ContourConfig& config)
{
    validate_spectrum(spectrum);
    validate_contour_config(config);
    const double center = 0.5 * (spectrum.min() + spectrum.max());
    const double a = std::max((1.0 + config.margin) * spectrum_half_width(spectrum),
                              config.min_semi_axis);
    const double b = config.aspect * a;
    std::vector<cplx> points(config.n_z);
    for (int j = 0; j < config.n_z; ++j) {
        const double theta = 2.0 * M_PI * (j + 0.5) / config.n_z;
        points[j] = cplx(center + a * std::cos(theta), b * std::sin(theta));
    }
    return points;
}

ContourSamples additive_pivot(std::span<const cplx> points, std::span<const cplx> values,
                              double sigma)
{
    if (points.size() != values.size()) {
        throw invalid_argument("additive_pivot: point/value length mismatch");
    }
    const double s2 = sigma * sigma;
    ContourSamples out;
    out.points.resize(points.size());
    out.values.assign(values.begin(), values.end());
    for (std::size_t j = 0; j < points.size(); ++j) {
        out.points[j] = points[j] - s2 * values[j];
    }
    return out;
}

ContourSamples multiplicative_pivot(std::span<const cplx> points,
                                    std::span<const cplx> values, double q)
{
    if (points.size() != values.size()) {
        throw invalid_argument("multiplicative_pivot: point/value length mismatch");
    }
    ContourSamples out;
    if (q == 0.0) {
        // s' = s and the chain collapses algebraically; keep the identity exact
        out.points.assign(points.begin(), points.end());
        out.values.assign(values.begin(), values.end());
        return out;
    }
    out.points.resize(points.size());
    out.values.resize(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        const cplx z = points[j];
        const cplx g = values[j];
        const cplx t = z * g - 1.0;
        if (std::abs(t) < 1e-14) {
            throw numerical_error("multiplicative_pivot",
                                  "t = z g - 1 vanishes at sample " + std::to_string(j) +
                                      "; enlarge or reshape the contour");
        }
        const cplx s = (t + 1.0) / (t * z);
        const cplx s_pivot = s * (1.0 + q * t);
        if (std::abs(s_pivot) < 1e-14) {
            throw numerical_error("multiplicative_pivot",
                                  "pivoted S-value vanishes at sample " + std::to_string(j));
        }
        const cplx z_pivot = (t + 1.0) / (t * s_pivot);
        out.points[j] = z_pivot;
        out.values[j] = (t + 1.0) / z_pivot;
    }
    return out;
}

}  // namespace freedec
