#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "freedec/eigenmatrix.hpp"
#include "freedec/types.hpp"

namespace freedec {

struct LossEval {
    double value = 0.0;                       ///< log s_{n+1}(T)
    std::vector<double> log_singular_values;  ///< full curve for the landscape
};

struct LossLandscape {
    std::vector<double> parameter_grid;  ///< strictly increasing
    std::vector<double> loss_values;     ///< log s_{n+1}; NaN where the build failed
    Eigen::MatrixXd full_curves;         ///< row i = log s_{i+1} across the grid
    std::vector<std::string> failures;   ///< failure reason per grid point, "" if ok
};

struct NoiseEstimate {
    double estimate = 0.0;
    double initial_guess = 0.0;
    double loss_at_estimate = 0.0;
    int refine_iterations = 0;
    LossLandscape landscape;
};

using LossFn = std::function<LossEval(double)>;

/// Pivot the base samples of mu_C at the candidate noise value, rebuild the
/// eigenmatrix on the pivoted points, and return log s_{n+1}(T).
LossEval noise_loss(double noise_value, NoiseParameter::Kind kind,
                    const ContourSamples& base, int n, const EigenmatrixConfig& config);

struct GridResult {
    double best = 0.0;
    int best_index = -1;
    LossLandscape landscape;
};

/// Uniform grid over the range; failed points are recorded, never fabricated.
/// Evaluations are independent; the OpenMP version assembles the identical
/// landscape as the serial one.
GridResult grid_search_serial(const LossFn& loss, std::pair<double, double> range,
                              int n_grid);
GridResult grid_search(const LossFn& loss, std::pair<double, double> range, int n_grid);

struct RefineResult {
    double estimate = 0.0;
    int iterations = 0;
};

/// Golden-section search on [a, b] from a valid bracket (a, m, b); stops when
/// the interval is below 1e-4 of its initial length or 200 iterations.
RefineResult refine(const LossFn& loss, double a, double m, double b);

/// Two-step procedure: coarse grid search, then local refinement around the
/// best grid point.
NoiseEstimate estimate_noise(NoiseParameter::Kind kind, const ContourSamples& base,
                             int n, std::pair<double, double> range,
                             const EigenmatrixConfig& config, int n_grid = 30);

}  // namespace freedec
