#include "freedec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "freedec/parallel.hpp"
#include "freedec/transforms.hpp"

namespace freedec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_log(double s)
{
    return std::log(std::max(s, 1e-300));
}

std::vector<double> uniform_grid(std::pair<double, double> range, int n_grid)
{
    std::vector<double> grid(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        grid[i] = range.first + i * (range.second - range.first) / (n_grid - 1);
    }
    return grid;
}

GridResult assemble(const std::vector<double>& grid,
                    std::vector<std::optional<LossEval>>&& evals,
                    std::vector<std::string>&& failures)
{
    const int n_grid = static_cast<int>(grid.size());
    GridResult out;
    out.landscape.parameter_grid = grid;
    out.landscape.loss_values.assign(n_grid, kNan);
    out.landscape.failures = std::move(failures);

    int n_rows = 0;
    for (const auto& e : evals) {
        if (e) {
            n_rows = static_cast<int>(e->log_singular_values.size());
            break;
        }
    }
    if (n_rows == 0) {
        throw numerical_error("grid_search", "every grid point failed: " +
                                                 out.landscape.failures.front());
    }
    out.landscape.full_curves.setConstant(n_rows, n_grid, kNan);

    double best_loss = kInf;
    for (int i = 0; i < n_grid; ++i) {
        if (!evals[i]) continue;
        out.landscape.loss_values[i] = evals[i]->value;
        for (int r = 0; r < n_rows; ++r) {
            out.landscape.full_curves(r, i) = evals[i]->log_singular_values[r];
        }
        if (evals[i]->value < best_loss) {
            best_loss = evals[i]->value;
            out.best_index = i;
        }
    }
    out.best = grid[out.best_index];
    return out;
}

struct GoldenResult {
    double estimate;
    int iterations;
};

// Golden-section shrink preceded by a uniform prescan of the bracket. The
// prescan re-brackets around the best sampled point, so a minimum far
// narrower than the bracket (the exact-data regime) is still captured.
// Failed evaluations count as +inf; all evaluations stay inside [a, b].
GoldenResult golden_section(const LossFn& loss, double a, double b)
{
    auto value = [&](double x) {
        try {
            return loss(x).value;
        } catch (const numerical_error&) {
            return kInf;
        }
    };
    constexpr int kPrescan = 33;
    const double tol = 1e-4 * (b - a);
    int it = 0;

    const double step = (b - a) / (kPrescan - 1);
    double best = kInf;
    int best_at = 0;
    for (int i = 0; i < kPrescan; ++i) {
        const double f = value(a + i * step);
        ++it;
        if (f < best) {
            best = f;
            best_at = i;
        }
    }
    const double lo = a + std::max(0, best_at - 1) * step;
    const double hi = a + std::min(kPrescan - 1, best_at + 1) * step;
    a = lo;
    b = hi;

    constexpr double ratio = 0.6180339887498949;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = value(x1);
    double f2 = value(x2);
    while (b - a > tol && it < 200) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = value(x2);
        }
        ++it;
    }
    return {0.5 * (a + b), it};
}

}  // namespace

LossEval noise_loss(double noise_value, NoiseParameter::Kind kind,
                    const ContourSamples& base, int n, const EigenmatrixConfig& config)
{
    if (!(noise_value > 0.0)) {
        throw invalid_argument("noise_loss: candidate noise level must be > 0");
    }
    if (n + 1 > std::min(base.size(), config.n_l + 1)) {
        throw invalid_argument("noise_loss: n + 1 exceeds min(n_z, n_l + 1)");
    }
    const ContourSamples pivoted =
        kind == NoiseParameter::Kind::AdditiveSigma
            ? additive_pivot(base.points, base.values, noise_value)
            : multiplicative_pivot(base.points, base.values, noise_value);
    const EigenmatrixOperator op = build_eigenmatrix(pivoted.points, config);
    const KrylovResult kr = build_krylov(op, pivoted.values, config.n_l);

    LossEval out;
    out.log_singular_values.reserve(kr.diag.singular_values.size());
    for (double s : kr.diag.singular_values) {
        out.log_singular_values.push_back(safe_log(s));
    }
    out.value = out.log_singular_values[n];
    return out;
}

GridResult grid_search_serial(const LossFn& loss, std::pair<double, double> range,
                              int n_grid)
{
    if (n_grid < 3) throw invalid_argument("grid_search: n_grid must be >= 3");
    if (!(range.first < range.second)) {
        throw invalid_argument("grid_search: range must have positive length");
    }
    const std::vector<double> grid = uniform_grid(range, n_grid);
    std::vector<std::optional<LossEval>> evals(n_grid);
    std::vector<std::string> failures(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        try {
            evals[i] = loss(grid[i]);
        } catch (const numerical_error& e) {
            failures[i] = e.what();
        }
    }
    return assemble(grid, std::move(evals), std::move(failures));
}

GridResult grid_search(const LossFn& loss, std::pair<double, double> range, int n_grid)
{
    if (n_grid < 3) throw invalid_argument("grid_search: n_grid must be >= 3");
    if (!(range.first < range.second)) {
        throw invalid_argument("grid_search: range must have positive length");
    }
    const std::vector<double> grid = uniform_grid(range, n_grid);
    std::vector<std::optional<LossEval>> evals(n_grid);
    std::vector<std::string> failures(n_grid);
    FREEDEC_PRAGMA_OMP("omp parallel for schedule(dynamic)")
    for (int i = 0; i < n_grid; ++i) {
        try {
            evals[i] = loss(grid[i]);
        } catch (const numerical_error& e) {
            failures[i] = e.what();
        }
    }
    return assemble(grid, std::move(evals), std::move(failures));
}

RefineResult refine(const LossFn& loss, double a, double m, double b)
{
    if (!(a < m && m < b)) {
        throw invalid_argument("refine: bracket must satisfy a < m < b");
    }
    const double fa = loss(a).value;
    const double fm = loss(m).value;
    const double fb = loss(b).value;
    if (!(fm <= std::min(fa, fb))) {
        throw invalid_argument("refine: loss(m) must not exceed loss at the bracket ends");
    }
    const GoldenResult g = golden_section(loss, a, b);
    return {g.estimate, g.iterations};
}

NoiseEstimate estimate_noise(NoiseParameter::Kind kind, const ContourSamples& base, int n,
                             std::pair<double, double> range,
                             const EigenmatrixConfig& config, int n_grid)
{
    const LossFn fn = [&](double theta) { return noise_loss(theta, kind, base, n, config); };
    GridResult grid = grid_search(fn, range, n_grid);

    NoiseEstimate out;
    out.initial_guess = grid.best;
    out.landscape = std::move(grid.landscape);

    const int i = grid.best_index;
    const auto& thetas = out.landscape.parameter_grid;
    const auto& losses = out.landscape.loss_values;
    auto valid = [&](int k) {
        return k >= 0 && k < static_cast<int>(thetas.size()) && std::isfinite(losses[k]);
    };

    double estimate = grid.best;
    int iterations = 0;
    if (valid(i - 1) && valid(i + 1)) {
        const GoldenResult g = golden_section(fn, thetas[i - 1], thetas[i + 1]);
        estimate = g.estimate;
        iterations = g.iterations;
    } else if (valid(i + 1)) {  // minimum at the lower edge of the searched range
        const GoldenResult g = golden_section(fn, thetas[i], thetas[i + 1]);
        estimate = g.estimate;
        iterations = g.iterations;
    } else if (valid(i - 1)) {  // minimum at the upper edge
        const GoldenResult g = golden_section(fn, thetas[i - 1], thetas[i]);
        estimate = g.estimate;
        iterations = g.iterations;
    }

    double loss_at_estimate;
    try {
        loss_at_estimate = fn(estimate).value;
    } catch (const numerical_error&) {
        loss_at_estimate = std::numeric_limits<double>::infinity();
    }
    // keep the grid point if refinement did not actually improve on it
    if (!(loss_at_estimate <= losses[i])) {
        estimate = grid.best;
        loss_at_estimate = losses[i];
    }
    out.estimate = estimate;
    out.loss_at_estimate = loss_at_estimate;
    out.refine_iterations = iterations;
    return out;
}

}  // namespace freedec
