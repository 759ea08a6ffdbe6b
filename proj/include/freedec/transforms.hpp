#pragma once

#include <span>
#include <vector>

#include "freedec/types.hpp"

namespace freedec {

/// Empirical Stieltjes transform (1/N) sum_i 1/(z - lambda_i).
cplx empirical_stieltjes(const Spectrum& spectrum, cplx z);

/// Empirical Stieltjes transform at many points. The OpenMP version splits
/// across points only, so both produce bit-identical output.
std::vector<cplx> stieltjes_samples_serial(const Spectrum& spectrum,
                                           std::span<const cplx> points);
std::vector<cplx> stieltjes_samples(const Spectrum& spectrum,
                                    std::span<const cplx> points);

/// Conjugate-symmetric points on an ellipse enclosing the spectral hull.
/// Angles are half-offset so no point lies on the real axis.
std::vector<cplx> sample_contour(const Spectrum& spectrum, const ContourConfig& config);

/// R-transform pivot: z_j' = z_j - sigma^2 g_j, values unchanged.
/// Output samples the Stieltjes transform of mu_A.
ContourSamples additive_pivot(std::span<const cplx> points, std::span<const cplx> values,
                              double sigma);

/// S-transform pivot: t = zg - 1, s = (t+1)/(tz), s' = s (1 + q t),
/// z' = (t+1)/(t s'), g' = (t+1)/z'. Throws numerical_error naming the
/// offending index if t_j or s_j' vanishes.
ContourSamples multiplicative_pivot(std::span<const cplx> points,
                                    std::span<const cplx> values, double q);

}  // namespace freedec
