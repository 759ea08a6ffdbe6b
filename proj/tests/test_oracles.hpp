#pragma once

// Closed-form references used only by tests. These are independent of the
// fixed-point iterations in the library: both limit transforms for a single
// atom reduce to quadratics solved here by the explicit formula.

#include <complex>

namespace testoracle {

using cplx = std::complex<double>;

// branch of sqrt(w^2 - s) that behaves like w at infinity
inline cplx matched_sqrt(cplx w, cplx s)
{
    cplx root = std::sqrt(w * w - s);
    if ((std::conj(w) * root).real() < 0.0) root = -root;
    return root;
}

// Stieltjes transform of delta_a boxplus semicircle(sigma):
// sigma^2 g^2 - (z - a) g + 1 = 0 on the branch with g ~ 1/z.
inline cplx semicircle_stieltjes(double a, double sigma, cplx z)
{
    const cplx w = z - a;
    if (sigma == 0.0) return 1.0 / w;
    const cplx root = matched_sqrt(w, cplx(4.0 * sigma * sigma, 0.0));
    return (w - root) / (2.0 * sigma * sigma);
}

// Stieltjes transform of the Marchenko-Pastur law with ratio q:
// q z g^2 - (z + q - 1) g + 1 = 0 on the branch with g ~ 1/z.
inline cplx marchenko_pastur_stieltjes(double q, cplx z)
{
    if (q == 0.0) return 1.0 / (z - 1.0);
    const cplx w = z + q - 1.0;
    const cplx root = matched_sqrt(w, 4.0 * q * z);
    return (w - root) / (2.0 * q * z);
}

// Stieltjes transform of delta_a boxtimes MP(q): scaling of the MP law.
inline cplx scaled_mp_stieltjes(double a, double q, cplx z)
{
    return marchenko_pastur_stieltjes(q, z / a) / a;
}

}  // namespace testoracle
