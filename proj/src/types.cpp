#include "freedec/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace freedec {

void validate_measure(const SparseMeasure& m)
{
    if (m.atoms.empty() || m.atoms.size() != m.weights.size()) {
        throw invalid_argument("measure: atoms and weights must be non-empty lists of equal length");
    }
    double mass = 0.0;
    for (std::size_t k = 0; k < m.atoms.size(); ++k) {
        if (!std::isfinite(m.atoms[k]) || !std::isfinite(m.weights[k])) {
            throw invalid_argument("measure: non-finite entry");
        }
        if (k > 0 && !(m.atoms[k] > m.atoms[k - 1])) {
            throw invalid_argument("measure: atoms must be strictly increasing");
        }
        if (!(m.weights[k] > 0.0)) {
            throw invalid_argument("measure: weights must be positive");
        }
        mass += m.weights[k];
    }
    if (std::abs(mass - 1.0) > 1e-12) {
        throw invalid_argument("measure: weights must sum to 1 (got " + std::to_string(mass) + ")");
    }
}

void validate_spectrum(const Spectrum& s)
{
    if (s.eigenvalues.empty()) {
        throw invalid_argument("spectrum: empty eigenvalue list");
    }
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        if (!std::isfinite(s.eigenvalues[i])) {
            throw invalid_argument("spectrum: non-finite eigenvalue");
        }
        if (i > 0 && s.eigenvalues[i] < s.eigenvalues[i - 1]) {
            throw invalid_argument("spectrum: eigenvalues must be non-decreasing");
        }
    }
}

double spectrum_half_width(const Spectrum& s)
{
    validate_spectrum(s);
    return 0.5 * (s.max() - s.min());
}

void validate_contour_samples(const ContourSamples& s, double pair_tol)
{
    if (s.points.size() != s.values.size() || s.points.size() < 2) {
        throw invalid_argument("contour samples: need >= 2 point/value pairs of equal length");
    }
    const int n = s.size();
    const cplx* pts = s.points.data();
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(pts[j].real()) || !std::isfinite(pts[j].imag()) ||
            !std::isfinite(s.values[j].real()) || !std::isfinite(s.values[j].imag())) {
            throw invalid_argument("contour samples: non-finite entry at index " + std::to_string(j));
        }
    }
    // every point needs a conjugate partner whose value is the conjugate value
    std::vector<bool> used(n, false);
    for (int j = 0; j < n; ++j) {
        const cplx target = std::conj(pts[j]);
        int match = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            if (used[k] && k != j) continue;
            const double d = std::abs(pts[k] - target);
            if (d < best) {
                best = d;
                match = k;
            }
        }
        const double scale = std::max(1.0, std::abs(pts[j]));
        if (match < 0 || best > pair_tol * scale) {
            throw invalid_argument("contour samples: points not closed under conjugation");
        }
        const double vscale = std::max(1.0, std::abs(s.values[j]));
        if (std::abs(s.values[match] - std::conj(s.values[j])) > pair_tol * vscale) {
            throw invalid_argument("contour samples: values at conjugate points are not conjugate");
        }
    }
}

void validate_contour_config(const ContourConfig& c)
{
    if (c.n_z < 2 || c.n_z % 2 != 0) {
        throw invalid_argument("contour: n_z must be even and >= 2");
    }
    if (!(c.margin > 0.0)) throw invalid_argument("contour: margin must be > 0");
    if (!(c.aspect > 0.0)) throw invalid_argument("contour: aspect must be > 0");
    if (!(c.min_semi_axis > 0.0)) throw invalid_argument("contour: min_semi_axis must be > 0");
}

const char* noise_kind_name(NoiseParameter::Kind kind)
{
    return kind == NoiseParameter::Kind::AdditiveSigma ? "additive-sigma" : "multiplicative-q";
}

void validate_eigenmatrix_config(const EigenmatrixConfig& c)
{
    if (!(c.x_lo < c.x_hi)) throw invalid_argument("eigenmatrix: requires x_lo < x_hi");
    if (c.n_c < 2) throw invalid_argument("eigenmatrix: n_c must be >= 2");
    if (c.n_l < 1) throw invalid_argument("eigenmatrix: n_l must be >= 1");
    if (!(c.norm_cap > 1.0)) throw invalid_argument("eigenmatrix: norm_cap must be > 1");
    if (!(c.svd_floor > 0.0 && c.svd_floor < 1.0)) {
        throw invalid_argument("eigenmatrix: svd_floor must lie in (0, 1)");
    }
}

EigenmatrixConfig default_eigenmatrix_config(double x_lo, double x_hi, int n, int n_z)
{
    if (n < 1) throw invalid_argument("eigenmatrix: sparsity n must be >= 1");
    EigenmatrixConfig c;
    c.x_lo = x_lo;
    c.x_hi = x_hi;
    c.n_c = std::min(4 * n_z, 1024);
    c.n_l = std::min(std::max(2 * n, 16), n_z - 1);
    validate_eigenmatrix_config(c);
    return c;
}

}  // namespace freedec
