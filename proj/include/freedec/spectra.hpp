#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "freedec/types.hpp"

namespace freedec {

struct SimulationConfig {
    int N = 1024;
    std::uint64_t seed = 1;
    SparseMeasure measure;
    bool rotate = false;  ///< conjugate the signal by a random orthogonal matrix
};

/// Deterministic eigenvalue multiset of the signal matrix A: largest-remainder
/// rounding of w_k N (ties by atom index). Throws if an atom rounds to zero
/// copies.
Spectrum build_signal_spectrum(const SparseMeasure& measure, int N);

/// Sorted eigenvalues of C = A + B with B a Wigner draw (off-diagonal entry
/// variance sigma^2/N, diagonal 2 sigma^2/N). Deterministic given the seed.
Spectrum sample_additive_model(const SimulationConfig& config, double sigma);

/// Sorted eigenvalues of C = sqrt(A) (X X^T / T) sqrt(A) with X an N x T
/// standard Gaussian matrix and T = round(N / q). Requires all atoms > 0.
Spectrum sample_multiplicative_model(const SimulationConfig& config, double q);

/// Number of Wishart samples realized for a requested ratio, round(N/q) >= 1.
int wishart_sample_count(int N, double q);

/// Ratio actually realized by the simulation, N / round(N/q).
double realized_ratio(int N, double q);

/// Large-N Stieltjes transform of mu_A boxplus semicircle(sigma): the
/// Herglotz-branch solution of g = sum_k w_k / (z - sigma^2 g - x_k) by
/// damped fixed-point iteration (residual <= residual_tol).
cplx limit_stieltjes_additive(const SparseMeasure& measure, double sigma, cplx z,
                              double residual_tol = 1e-13);

/// Large-N Stieltjes transform of mu_A boxtimes MP(q): the Herglotz-branch
/// solution of g = sum_k w_k / (z - x_k (1 - q + q z g)).
cplx limit_stieltjes_multiplicative(const SparseMeasure& measure, double q, cplx z,
                                    double residual_tol = 1e-13);

/// Limit-oracle values along a contour; pairs feed the same pipeline as
/// empirical data. Serial and OpenMP versions are bit-identical.
std::vector<cplx> limit_contour_values_serial(const SparseMeasure& measure,
                                              NoiseParameter noise,
                                              std::span<const cplx> contour);
std::vector<cplx> limit_contour_values(const SparseMeasure& measure, NoiseParameter noise,
                                       std::span<const cplx> contour);
ContourSamples limit_contour_samples(const SparseMeasure& measure, NoiseParameter noise,
                                     std::span<const cplx> contour);

/// Symmetric Wigner draw with the entry variances above; stream-indexed
/// counter RNG, so the parallel fill matches the serial one bit for bit.
Eigen::MatrixXd wigner_matrix_serial(int N, double sigma, std::uint64_t seed,
                                     std::uint64_t stream);
Eigen::MatrixXd wigner_matrix(int N, double sigma, std::uint64_t seed,
                              std::uint64_t stream);

/// Dense standard Gaussian matrix, one counter per entry (column-major).
Eigen::MatrixXd gaussian_matrix_serial(int rows, int cols, std::uint64_t seed,
                                       std::uint64_t stream);
Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed,
                                std::uint64_t stream);

/// Sorted eigenvalues of a symmetric matrix (contents destroyed).
std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd& matrix);

}  // namespace freedec
