#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "freedec/types.hpp"

namespace freedec {

/// The operator M with (c_t, b_hat_{c_t}) as approximate eigenpairs. M acts
/// in coordinates normalized to [-1, 1] (x = center + half_width * eigenvalue),
/// which keeps Krylov powers bounded on wide search intervals.
struct EigenmatrixOperator {
    Eigen::MatrixXcd matrix;              ///< M, n_z x n_z, spectrum inside [-1, 1]
    std::vector<double> chebyshev_nodes;  ///< grid c_t on [x_lo, x_hi]
    double center = 0.0;                  ///< affine map back to spectrum units
    double half_width = 1.0;
    double eigen_residual = 0.0;          ///< max_t ||M b_hat - c_t b_hat||_2 (normalized)
    double operator_norm = 0.0;           ///< ||M||_2
    int rank_kept = 0;                    ///< singular values kept in the pseudoinverse
    double truncation_level = 0.0;        ///< relative cutoff actually used
};

struct KrylovDiagnostics {
    std::vector<double> singular_values;  ///< non-increasing singular values of T
    int n_used = 0;                       ///< sparsity supplied by the caller
    double esprit_max_imag = 0.0;         ///< largest |Im| dropped when mapping to real atoms
};

struct KrylovResult {
    Eigen::MatrixXcd krylov;  ///< T = [u, Mu, ..., M^{n_l} u]
    KrylovDiagnostics diag;
};

struct EspritResult {
    std::vector<double> locations;  ///< sorted increasing, clamped to the interval
    double max_imag = 0.0;
};

struct WeightSolution {
    std::vector<double> weights;   ///< clipped to >= 0 and renormalized to mass 1
    double residual_norm = 0.0;    ///< complex least-squares residual, pre-clipping
    double max_imag = 0.0;         ///< largest |Im| of the raw complex solution
};

struct RecoveryResult {
    SparseMeasure measure;
    KrylovDiagnostics diagnostics;
    double weight_residual = 0.0;
    double eigen_residual = 0.0;
    double operator_norm = 0.0;
    int rank_kept = 0;
    double truncation_level = 0.0;
};

/// G(z, x) = 1 / (z - x). Throws numerical_error on a pole hit.
cplx cauchy_kernel(cplx z, double x);

/// Chebyshev grid (first kind, n_c nodes) on [x_lo, x_hi], increasing.
std::vector<double> chebyshev_nodes(double x_lo, double x_hi, int n_c);

/// Builds M = B_hat Lambda B_hat^+ on the Chebyshev grid of config.interval.
/// The pseudoinverse cutoff is the smallest relative level >= config.svd_floor
/// (over the discrete singular values of B_hat) with ||M||_2 <= config.norm_cap.
EigenmatrixOperator build_eigenmatrix(std::span<const cplx> points,
                                      const EigenmatrixConfig& config);

/// T = [u, Mu, ..., M^{n_l} u] by repeated application, plus its singular values.
KrylovResult build_krylov(const EigenmatrixOperator& op, std::span<const cplx> values,
                          int n_l);

/// Spike locations from the rank-n truncated SVD of T: eigenvalues of
/// Z_H Z_L^+, real parts clamped into the interval, sorted increasing.
EspritResult esprit_locations(const Eigen::MatrixXcd& krylov, int n,
                              std::pair<double, double> interval);

/// Least-squares fit of the weights at fixed atoms against the samples.
WeightSolution solve_weights(const ContourSamples& samples, std::span<const double> atoms);

/// Full pipeline: build_eigenmatrix -> build_krylov -> esprit_locations ->
/// solve_weights. Stage failures propagate as numerical_error tagged with the
/// stage name.
RecoveryResult recover_measure(const ContourSamples& samples, int n,
                               const EigenmatrixConfig& config);

}  // namespace freedec
