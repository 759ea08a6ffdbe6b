#pragma once

#include <optional>
#include <utility>

#include "freedec/eigenmatrix.hpp"
#include "freedec/noise.hpp"
#include "freedec/transforms.hpp"
#include "freedec/types.hpp"

namespace freedec {

/// User-facing knobs with 0 / {0,0} marking "resolve a default".
struct RunConfig {
    NoiseParameter::Kind kind = NoiseParameter::Kind::AdditiveSigma;
    int n = 1;
    ContourConfig contour{64, 0.0, 0.0, 1.0};  ///< margin/aspect 0: kind default
    int n_c = 0;  ///< 0: default 4 n_z
    int n_l = 0;  ///< 0: default max(2n, 16)
    double norm_cap = 10.0;
    double svd_floor = 1e-12;
    std::pair<double, double> noise_range{0.0, 0.0};  ///< {0,0}: kind-dependent default
    int n_grid = 30;
};

/// Everything downstream stages need, with all defaults resolved.
struct PreparedProblem {
    ContourSamples base;                  ///< samples of g_{mu_C} on the contour
    ContourConfig contour;                ///< geometry actually used
    EigenmatrixConfig em;                 ///< interval = spectral hull
    std::pair<double, double> range;      ///< noise search range
    std::pair<double, double> hull;       ///< [lambda_min, lambda_max]
};

/// Support hull of the limit measure mu_C: a conservative widening of the
/// atom hull, tightened by scanning the limit density just off the axis.
std::pair<double, double> oracle_support_hull(const SparseMeasure& measure,
                                              NoiseParameter noise);

/// Contour + empirical Stieltjes samples + resolved solver knobs from an
/// observed spectrum.
PreparedProblem prepare_from_spectrum(const Spectrum& spectrum, const RunConfig& config);

/// Same, but sampling the large-N limit oracle instead of an empirical
/// spectrum (the clean regime).
PreparedProblem prepare_from_oracle(const SparseMeasure& measure, NoiseParameter noise,
                                    const RunConfig& config);

struct PipelineResult {
    RecoveryResult recovery;
    std::optional<NoiseEstimate> estimate;  ///< present only when estimated
    double noise_used = 0.0;
};

/// Pivot at the supplied noise level, then recover.
PipelineResult run_known_noise(const PreparedProblem& problem, double noise_value,
                               const RunConfig& config);

/// Estimate the noise level first, then pivot + recover at the estimate.
PipelineResult run_estimated(const PreparedProblem& problem, const RunConfig& config);

}  // namespace freedec
