#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freedec {

using cplx = std::complex<double>;

/// Input/configuration problems. The CLI maps these to exit code 2.
struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Failure inside a numerical pipeline stage. The CLI maps these to exit
/// code 3. `stage()` names the operation that failed.
class numerical_error : public std::runtime_error {
public:
    numerical_error(std::string stage, const std::string& msg)
        : std::runtime_error(stage + ": " + msg), stage_(std::move(stage))
    {
    }

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Discrete probability measure: atoms x_k (strictly increasing) with
/// positive weights w_k summing to one.
struct SparseMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;

    std::size_t size() const noexcept { return atoms.size(); }
};

/// Throws invalid_argument unless the measure invariants hold
/// (strictly increasing atoms, positive weights, total mass 1 within 1e-12).
void validate_measure(const SparseMeasure& m);

/// Sorted list of N real eigenvalues.
struct Spectrum {
    std::vector<double> eigenvalues;

    int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
};

void validate_spectrum(const Spectrum& s);

/// Half-width of the spectral hull, (max - min) / 2.
double spectrum_half_width(const Spectrum& s);

/// Paired contour points z_j and transform values g_j (or u_j).
struct ContourSamples {
    std::vector<cplx> points;
    std::vector<cplx> values;

    int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Checks list lengths, finiteness, and closure under complex conjugation
/// (values at conjugate points must be conjugate within `pair_tol` relative).
void validate_contour_samples(const ContourSamples& s, double pair_tol = 1e-10);

/// Elliptic contour geometry around a spectrum.
struct ContourConfig {
    int n_z = 64;                ///< sample count, must be even
    double margin = 0.5;         ///< relative horizontal enlargement of the hull
    double aspect = 0.5;         ///< vertical semi-axis / horizontal semi-axis
    double min_semi_axis = 1.0;  ///< floor on the horizontal semi-axis
};

void validate_contour_config(const ContourConfig& c);

struct NoiseParameter {
    enum class Kind { AdditiveSigma, MultiplicativeQ };
    Kind kind = Kind::AdditiveSigma;
    double value = 0.0;
};

const char* noise_kind_name(NoiseParameter::Kind kind);

/// Solver knobs for the eigenmatrix construction.
struct EigenmatrixConfig {
    double x_lo = -1.0;       ///< search interval X = [x_lo, x_hi]
    double x_hi = 1.0;
    int n_c = 256;            ///< Chebyshev grid size on X
    int n_l = 11;             ///< Krylov depth; T has n_l + 1 columns
    double norm_cap = 10.0;   ///< bound enforced on ||M||_2
    double svd_floor = 1e-12; ///< lower bound on the relative SVD cutoff
};

void validate_eigenmatrix_config(const EigenmatrixConfig& c);

/// Default solver knobs for sparsity n and sample count n_z:
/// n_c = 4 n_z (capped at 1024), n_l = max(2n, 16) capped at n_z - 1.
EigenmatrixConfig default_eigenmatrix_config(double x_lo, double x_hi, int n, int n_z);

}  // namespace freedec
