#include "freedec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <cblas.h>

#include <Eigen/QR>

#include "freedec/parallel.hpp"
#include "freedec/rng.hpp"

extern "C" {
void dsyev_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
            double* w, double* work, const int* lwork, int* info);
}

namespace freedec {

namespace {

constexpr int kFixedPointBudget = 10000;

cplx sparse_cauchy(const SparseMeasure& m, cplx z)
{
    cplx sum = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        sum += m.weights[k] / (z - m.atoms[k]);
    }
    return sum;
}

// Damped fixed-point iteration g <- (1-a) g + a F(g) from g0 = 1/z, halving
// the damping on residual growth; restarts with a smaller initial damping on
// non-convergence. Enforces the Herglotz branch sign when Im z != 0.
template <typename MapFn>
cplx herglotz_fixed_point(const char* stage, cplx z, MapFn&& map, double tol)
{
    const double alphas[] = {0.5, 0.25, 0.125, 0.0625, 0.03125};
    const int per_round = kFixedPointBudget / static_cast<int>(std::size(alphas));
    for (double alpha0 : alphas) {
        cplx g = 1.0 / z;
        double alpha = alpha0;
        double prev_residual = std::numeric_limits<double>::infinity();
        for (int it = 0; it < per_round; ++it) {
            const cplx mapped = map(g);
            const double residual = std::abs(g - mapped);
            if (residual <= tol) {
                if (z.imag() > 0.0 && !(g.imag() < 0.0)) break;
                if (z.imag() < 0.0 && !(g.imag() > 0.0)) break;
                return g;
            }
            if (residual > prev_residual) alpha *= 0.5;
            prev_residual = residual;
            g = (1.0 - alpha) * g + alpha * mapped;
        }
    }
    throw numerical_error(stage, "fixed-point iteration did not converge at z = (" +
                                     std::to_string(z.real()) + ", " +
                                     std::to_string(z.imag()) + ")");
}

Eigen::MatrixXd random_orthogonal(int N, std::uint64_t seed, std::uint64_t stream)
{
    Eigen::MatrixXd g = gaussian_matrix(N, N, seed, stream);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // fix the sign convention so the draw is a deterministic function of the seed
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < N; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

}  // namespace

Spectrum build_signal_spectrum(const SparseMeasure& measure, int N)
{
    validate_measure(measure);
    const int n = static_cast<int>(measure.size());
    if (N < n) {
        throw invalid_argument("signal spectrum: N must be >= number of atoms");
    }
    std::vector<long> counts(n);
    std::vector<double> remainders(n);
    long total = 0;
    for (int k = 0; k < n; ++k) {
        const double exact = measure.weights[k] * N;
        counts[k] = static_cast<long>(std::floor(exact));
        remainders[k] = exact - static_cast<double>(counts[k]);
        total += counts[k];
    }
    // largest-remainder rounding, ties broken by atom index
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return remainders[a] > remainders[b]; });
    for (long r = 0; r < N - total; ++r) {
        counts[order[r % n]] += 1;
    }
    for (int k = 0; k < n; ++k) {
        if (counts[k] == 0) {
            throw numerical_error("build_signal_spectrum",
                                  "atom " + std::to_string(measure.atoms[k]) +
                                      " rounds to zero copies at N = " + std::to_string(N));
        }
    }
    Spectrum out;
    out.eigenvalues.reserve(N);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues.insert(out.eigenvalues.end(), counts[k], measure.atoms[k]);
    }
    return out;
}

Eigen::MatrixXd wigner_matrix_serial(int N, double sigma, std::uint64_t seed,
                                     std::uint64_t stream)
{
    Eigen::MatrixXd b(N, N);
    const CounterRng rng(seed, stream);
    const double off_scale = sigma / std::sqrt(static_cast<double>(N));
    const double diag_scale = sigma * std::sqrt(2.0 / N);
    for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
            const auto counter = static_cast<std::uint64_t>(i) * N + j;
            const double v = (i == j ? diag_scale : off_scale) * rng.gaussian(counter);
            b(i, j) = v;
            b(j, i) = v;
        }
    }
    return b;
}

Eigen::MatrixXd wigner_matrix(int N, double sigma, std::uint64_t seed, std::uint64_t stream)
{
    Eigen::MatrixXd b(N, N);
    const CounterRng rng(seed, stream);
    const double off_scale = sigma / std::sqrt(static_cast<double>(N));
    const double diag_scale = sigma * std::sqrt(2.0 / N);
    FREEDEC_PRAGMA_OMP("omp parallel for schedule(dynamic, 16)")
    for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
            const auto counter = static_cast<std::uint64_t>(i) * N + j;
            const double v = (i == j ? diag_scale : off_scale) * rng.gaussian(counter);
            b(i, j) = v;
            b(j, i) = v;
        }
    }
    return b;
}

Eigen::MatrixXd gaussian_matrix_serial(int rows, int cols, std::uint64_t seed,
                                       std::uint64_t stream)
{
    Eigen::MatrixXd x(rows, cols);
    const CounterRng rng(seed, stream);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            x(i, j) = rng.gaussian(static_cast<std::uint64_t>(j) * rows + i);
        }
    }
    return x;
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream)
{
    Eigen::MatrixXd x(rows, cols);
    const CounterRng rng(seed, stream);
    FREEDEC_PRAGMA_OMP("omp parallel for schedule(static)")
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            x(i, j) = rng.gaussian(static_cast<std::uint64_t>(j) * rows + i);
        }
    }
    return x;
}

std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd& matrix)
{
    const int n = static_cast<int>(matrix.rows());
    std::vector<double> w(n);
    int info = 0;
    int lwork = -1;
    double work_query = 0.0;
    dsyev_("N", "U", &n, matrix.data(), &n, w.data(), &work_query, &lwork, &info);
    lwork = static_cast<int>(work_query);
    std::vector<double> work(static_cast<std::size_t>(lwork));
    dsyev_("N", "U", &n, matrix.data(), &n, w.data(), work.data(), &lwork, &info);
    if (info != 0) {
        throw numerical_error("symmetric_eigenvalues",
                              "dsyev failed with info = " + std::to_string(info));
    }
    return w;
}

Spectrum sample_additive_model(const SimulationConfig& config, double sigma)
{
    if (config.N < 2) throw invalid_argument("simulation: N must be >= 2");
    if (sigma < 0.0) throw invalid_argument("simulation: sigma must be >= 0");
    Spectrum signal = build_signal_spectrum(config.measure, config.N);
    if (sigma == 0.0 && !config.rotate) {
        return signal;
    }
    Eigen::MatrixXd c = wigner_matrix(config.N, sigma, config.seed, 0);
    const Eigen::Map<const Eigen::VectorXd> diag(signal.eigenvalues.data(), config.N);
    if (config.rotate) {
        const Eigen::MatrixXd q = random_orthogonal(config.N, config.seed, 1);
        c.noalias() += q * diag.asDiagonal() * q.transpose();
    } else {
        c.diagonal() += diag;
    }
    Spectrum out;
    out.eigenvalues = symmetric_eigenvalues(c);
    return out;
}

int wishart_sample_count(int N, double q)
{
    if (!(q > 0.0)) throw invalid_argument("simulation: q must be > 0");
    return std::max(1, static_cast<int>(std::lround(N / q)));
}

double realized_ratio(int N, double q)
{
    return static_cast<double>(N) / wishart_sample_count(N, q);
}

Spectrum sample_multiplicative_model(const SimulationConfig& config, double q)
{
    if (config.N < 2) throw invalid_argument("simulation: N must be >= 2");
    validate_measure(config.measure);
    for (double a : config.measure.atoms) {
        if (!(a > 0.0)) {
            throw invalid_argument("simulation: multiplicative model requires atoms > 0");
        }
    }
    const int N = config.N;
    const int T = wishart_sample_count(N, q);
    Spectrum signal = build_signal_spectrum(config.measure, N);

    // accumulate S = X X^T in column blocks to bound memory at large T
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(N, N);
    constexpr int kBlock = 1024;
    for (int t0 = 0; t0 < T; t0 += kBlock) {
        const int bt = std::min(kBlock, T - t0);
        Eigen::MatrixXd x(N, bt);
        const CounterRng rng(config.seed, 0);
        FREEDEC_PRAGMA_OMP("omp parallel for schedule(static)")
        for (int j = 0; j < bt; ++j) {
            const auto col = static_cast<std::uint64_t>(t0 + j);
            for (int i = 0; i < N; ++i) {
                x(i, j) = rng.gaussian(col * N + i);
            }
        }
        cblas_dsyrk(CblasColMajor, CblasUpper, CblasNoTrans, N, bt, 1.0, x.data(), N, 1.0,
                    s.data(), N);
    }

    Eigen::VectorXd sqrt_a(N);
    for (int i = 0; i < N; ++i) sqrt_a(i) = std::sqrt(signal.eigenvalues[i]);
    Eigen::MatrixXd c;
    if (config.rotate) {
        const Eigen::MatrixXd qmat = random_orthogonal(N, config.seed, 1);
        const Eigen::MatrixXd asqrt = qmat * sqrt_a.asDiagonal() * qmat.transpose();
        s.triangularView<Eigen::StrictlyLower>() = s.transpose();
        c = asqrt * (s / T) * asqrt;
    } else {
        c.resize(N, N);
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i <= j; ++i) {
                c(i, j) = sqrt_a(i) * sqrt_a(j) * s(i, j) / T;
            }
        }
    }
    Spectrum out;
    out.eigenvalues = symmetric_eigenvalues(c);
    return out;
}

cplx limit_stieltjes_additive(const SparseMeasure& measure, double sigma, cplx z,
                              double residual_tol)
{
    validate_measure(measure);
    if (sigma < 0.0) throw invalid_argument("oracle: sigma must be >= 0");
    if (sigma == 0.0) {
        return sparse_cauchy(measure, z);
    }
    const double s2 = sigma * sigma;
    return herglotz_fixed_point(
        "limit_stieltjes_additive", z,
        [&](cplx g) { return sparse_cauchy(measure, z - s2 * g); }, residual_tol);
}

cplx limit_stieltjes_multiplicative(const SparseMeasure& measure, double q, cplx z,
                                    double residual_tol)
{
    validate_measure(measure);
    if (q < 0.0) throw invalid_argument("oracle: q must be >= 0");
    for (double a : measure.atoms) {
        if (!(a > 0.0)) throw invalid_argument("oracle: multiplicative model requires atoms > 0");
    }
    if (q == 0.0) {
        return sparse_cauchy(measure, z);
    }
    return herglotz_fixed_point(
        "limit_stieltjes_multiplicative", z,
        [&](cplx g) {
            const cplx shift = 1.0 - q + q * z * g;
            cplx sum = 0.0;
            for (std::size_t k = 0; k < measure.size(); ++k) {
                sum += measure.weights[k] / (z - measure.atoms[k] * shift);
            }
            return sum;
        },
        residual_tol);
}

std::vector<cplx> limit_contour_values_serial(const SparseMeasure& measure,
                                              NoiseParameter noise,
                                              std::span<const cplx> contour)
{
    std::vector<cplx> values(contour.size());
    for (std::size_t j = 0; j < contour.size(); ++j) {
        values[j] = noise.kind == NoiseParameter::Kind::AdditiveSigma
                        ? limit_stieltjes_additive(measure, noise.value, contour[j])
                        : limit_stieltjes_multiplicative(measure, noise.value, contour[j]);
    }
    return values;
}

std::vector<cplx> limit_contour_values(const SparseMeasure& measure, NoiseParameter noise,
                                       std::span<const cplx> contour)
{
    std::vector<cplx> values(contour.size());
    const auto count = static_cast<std::int64_t>(contour.size());
    std::exception_ptr failure;
    FREEDEC_PRAGMA_OMP("omp parallel for schedule(dynamic)")
    for (std::int64_t j = 0; j < count; ++j) {
        try {
            values[j] = noise.kind == NoiseParameter::Kind::AdditiveSigma
                            ? limit_stieltjes_additive(measure, noise.value, contour[j])
                            : limit_stieltjes_multiplicative(measure, noise.value, contour[j]);
        } catch (...) {
            FREEDEC_PRAGMA_OMP("omp critical")
            {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return values;
}

ContourSamples limit_contour_samples(const SparseMeasure& measure, NoiseParameter noise,
                                     std::span<const cplx> contour)
{
    ContourSamples out;
    out.points.assign(contour.begin(), contour.end());
    out.values = limit_contour_values(measure, noise, contour);
    return out;
}

}  // namespace freedec
