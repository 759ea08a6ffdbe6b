#include "freedec/eigenmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace freedec {

cplx cauchy_kernel(cplx z, double x)
{
    const cplx gap = z - x;
    if (gap == cplx(0.0, 0.0)) {
        throw numerical_error("cauchy_kernel", "pole hit: z = x = " + std::to_string(x));
    }
    return 1.0 / gap;
}

std::vector<double> chebyshev_nodes(double x_lo, double x_hi, int n_c)
{
    const double center = 0.5 * (x_lo + x_hi);
    const double half = 0.5 * (x_hi - x_lo);
    std::vector<double> nodes(n_c);
    for (int t = 0; t < n_c; ++t) {
        // first-kind nodes, stored increasing
        nodes[n_c - 1 - t] = center + half * std::cos(M_PI * (t + 0.5) / n_c);
    }
    return nodes;
}

EigenmatrixOperator build_eigenmatrix(std::span<const cplx> points,
                                      const EigenmatrixConfig& config)
{
    validate_eigenmatrix_config(config);
    const int n_z = static_cast<int>(points.size());
    if (n_z < 2) {
        throw invalid_argument("build_eigenmatrix: need at least 2 sample points");
    }
    for (int j = 0; j < n_z; ++j) {
        const cplx z = points[j];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw invalid_argument("build_eigenmatrix: non-finite sample point");
        }
        if (z.imag() == 0.0 && z.real() >= config.x_lo && z.real() <= config.x_hi) {
            throw invalid_argument("build_eigenmatrix: sample point lies on the search interval");
        }
    }

    const std::vector<double> nodes = chebyshev_nodes(config.x_lo, config.x_hi, config.n_c);
    for (int t = 1; t < config.n_c; ++t) {
        if (!(nodes[t] > nodes[t - 1])) {
            throw numerical_error("build_eigenmatrix",
                                  "Chebyshev nodes are not numerically distinct; reduce n_c");
        }
    }

    // normalized kernel columns b_hat_{c_t}
    Eigen::MatrixXcd bhat(n_z, config.n_c);
    for (int t = 0; t < config.n_c; ++t) {
        for (int j = 0; j < n_z; ++j) {
            const cplx gap = points[j] - nodes[t];
            if (gap == cplx(0.0, 0.0)) {
                throw numerical_error("build_eigenmatrix",
                                      "Chebyshev node coincides with a sample point");
            }
            bhat(j, t) = 1.0 / gap;
        }
        bhat.col(t) /= bhat.col(t).norm();
    }

    // eigenvalues in interval-normalized coordinates: Krylov powers stay O(1)
    const double center = 0.5 * (config.x_lo + config.x_hi);
    const double half_width = 0.5 * (config.x_hi - config.x_lo);
    Eigen::VectorXd lambda(config.n_c);
    for (int t = 0; t < config.n_c; ++t) {
        lambda(t) = (nodes[t] - center) / half_width;
    }
    const Eigen::MatrixXcd scaled = bhat * lambda.asDiagonal();  // B_hat Lambda

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bhat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int r_max = 0;
    while (r_max < sv.size() && sv(r_max) >= config.svd_floor * sv(0)) ++r_max;

    // With M_r = G_r U_r^* and orthonormal U_r, ||M_r||_2 = ||G_r||_2, so the
    // cap search only needs the leading eigenvalue of G^* G submatrices.
    Eigen::MatrixXcd gcols(n_z, r_max);
    for (int i = 0; i < r_max; ++i) {
        gcols.col(i) = scaled * svd.matrixV().col(i) / sv(i);
    }
    const Eigen::MatrixXcd gram = gcols.adjoint() * gcols;

    int rank = 0;
    double norm = 0.0;
    for (int r = r_max; r >= 1; --r) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram.topLeftCorner(r, r),
                                                           Eigen::EigenvaluesOnly);
        const double candidate = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
        if (candidate <= config.norm_cap) {
            rank = r;
            norm = candidate;
            break;
        }
    }
    if (rank == 0) {
        throw numerical_error("build_eigenmatrix",
                              "rank-1 truncation already violates the norm cap "
                              "(degenerate contour geometry)");
    }

    EigenmatrixOperator op;
    op.matrix.noalias() = gcols.leftCols(rank) * svd.matrixU().leftCols(rank).adjoint();
    op.chebyshev_nodes = nodes;
    op.center = center;
    op.half_width = half_width;
    op.eigen_residual = (op.matrix * bhat - scaled).colwise().norm().maxCoeff();
    op.operator_norm = norm;
    op.rank_kept = rank;
    op.truncation_level = sv(rank - 1) / sv(0);
    return op;
}

KrylovResult build_krylov(const EigenmatrixOperator& op, std::span<const cplx> values,
                          int n_l)
{
    const auto n_z = op.matrix.rows();
    if (static_cast<Eigen::Index>(values.size()) != n_z) {
        throw invalid_argument("build_krylov: value count does not match the operator size");
    }
    if (n_l < 1) throw invalid_argument("build_krylov: n_l must be >= 1");

    KrylovResult out;
    out.krylov.resize(n_z, n_l + 1);
    out.krylov.col(0) = Eigen::Map<const Eigen::VectorXcd>(values.data(), n_z);
    for (int k = 1; k <= n_l; ++k) {
        out.krylov.col(k).noalias() = op.matrix * out.krylov.col(k - 1);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.krylov);
    out.diag.singular_values.assign(svd.singularValues().data(),
                                    svd.singularValues().data() + svd.singularValues().size());
    return out;
}

EspritResult esprit_locations(const Eigen::MatrixXcd& krylov, int n,
                              std::pair<double, double> interval)
{
    const auto cols = krylov.cols();
    if (n < 1) throw invalid_argument("esprit: n must be >= 1");
    if (n > std::min<Eigen::Index>(krylov.rows(), cols - 1)) {
        throw invalid_argument("esprit: n exceeds min(n_z, n_l)");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(krylov, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!(sv(n - 1) > 0.0)) {
        int actual_rank = 0;
        while (actual_rank < sv.size() && sv(actual_rank) > 0.0) ++actual_rank;
        throw numerical_error("esprit_locations",
                              "requested rank " + std::to_string(n) +
                                  " exceeds the numerical rank " + std::to_string(actual_rank));
    }

    // V^* is n x (n_l + 1); drop the last / first column for Z_L / Z_H
    const Eigen::MatrixXcd vh = svd.matrixV().leftCols(n).adjoint();
    const Eigen::MatrixXcd z_lo = vh.leftCols(cols - 1);
    const Eigen::MatrixXcd z_hi = vh.rightCols(cols - 1);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(z_lo);
    const Eigen::MatrixXcd shift = z_hi * cod.pseudoInverse();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(shift, false);
    const double center = 0.5 * (interval.first + interval.second);
    const double half_width = 0.5 * (interval.second - interval.first);
    EspritResult out;
    out.locations.resize(n);
    for (int k = 0; k < n; ++k) {
        // eigenvalues live in normalized coordinates; map back to spectrum units
        const cplx ev = es.eigenvalues()(k);
        out.max_imag = std::max(out.max_imag, std::abs(ev.imag()) * half_width);
        out.locations[k] =
            std::clamp(center + half_width * ev.real(), interval.first, interval.second);
    }
    std::sort(out.locations.begin(), out.locations.end());
    return out;
}

WeightSolution solve_weights(const ContourSamples& samples, std::span<const double> atoms)
{
    const int n_z = samples.size();
    const int n = static_cast<int>(atoms.size());
    if (n < 1) throw invalid_argument("solve_weights: need at least one atom");

    Eigen::MatrixXcd design(n_z, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n_z; ++j) {
            design(j, k) = cauchy_kernel(samples.points[j], atoms[k]);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!(sv(n - 1) > 1e-14 * sv(0))) {
        throw numerical_error("solve_weights",
                              "Cauchy design matrix is numerically rank-deficient "
                              "(atoms too close to resolve on this contour)");
    }
    const Eigen::Map<const Eigen::VectorXcd> u(samples.values.data(), n_z);
    const Eigen::VectorXcd w = svd.solve(u);

    WeightSolution out;
    out.residual_norm = (design * w - u).norm();
    out.weights.resize(n);
    double mass = 0.0;
    for (int k = 0; k < n; ++k) {
        out.max_imag = std::max(out.max_imag, std::abs(w(k).imag()));
        out.weights[k] = std::max(0.0, w(k).real());
        mass += out.weights[k];
    }
    if (!(mass > 0.0)) {
        throw numerical_error("solve_weights", "all fitted weights clipped to zero");
    }
    for (double& wk : out.weights) wk /= mass;
    return out;
}

RecoveryResult recover_measure(const ContourSamples& samples, int n,
                               const EigenmatrixConfig& config)
{
    validate_contour_samples(samples);
    if (n < 1 || n > std::min(samples.size(), config.n_l)) {
        throw invalid_argument("recover_measure: n must satisfy 1 <= n <= min(n_z, n_l)");
    }
    const EigenmatrixOperator op = build_eigenmatrix(samples.points, config);
    KrylovResult kr = build_krylov(op, samples.values, config.n_l);
    const EspritResult spikes =
        esprit_locations(kr.krylov, n, {config.x_lo, config.x_hi});
    const WeightSolution fit = solve_weights(samples, spikes.locations);

    RecoveryResult out;
    out.measure.atoms = spikes.locations;
    out.measure.weights = fit.weights;
    out.diagnostics = std::move(kr.diag);
    out.diagnostics.n_used = n;
    out.diagnostics.esprit_max_imag = spikes.max_imag;
    out.weight_residual = fit.residual_norm;
    out.eigen_residual = op.eigen_residual;
    out.operator_norm = op.operator_norm;
    out.rank_kept = op.rank_kept;
    out.truncation_level = op.truncation_level;
    return out;
}

}  // namespace freedec
