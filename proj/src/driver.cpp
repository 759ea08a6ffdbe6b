#include "freedec/driver.hpp"

#include <cmath>

#include "freedec/spectra.hpp"

namespace freedec {

namespace {

// additive pivots push samples away from the axis, so a tight flat contour
// resolves best; multiplicative pivots contract the contour toward the
// support and need the extra clearance
ContourConfig resolve_contour(const RunConfig& cfg)
{
    ContourConfig contour = cfg.contour;
    if (contour.margin == 0.0) {
        contour.margin = cfg.kind == NoiseParameter::Kind::AdditiveSigma ? 0.2 : 0.5;
    }
    if (contour.aspect == 0.0) {
        contour.aspect = cfg.kind == NoiseParameter::Kind::AdditiveSigma ? 0.35 : 0.5;
    }
    validate_contour_config(contour);
    return contour;
}

EigenmatrixConfig resolve_eigenmatrix(std::pair<double, double> hull, const RunConfig& cfg)
{
    EigenmatrixConfig em =
        default_eigenmatrix_config(hull.first, hull.second, cfg.n, cfg.contour.n_z);
    if (cfg.n_c > 0) em.n_c = cfg.n_c;
    if (cfg.n_l > 0) em.n_l = cfg.n_l;
    em.norm_cap = cfg.norm_cap;
    em.svd_floor = cfg.svd_floor;
    validate_eigenmatrix_config(em);
    return em;
}

std::pair<double, double> resolve_range(const RunConfig& cfg, double half_width)
{
    if (cfg.noise_range.first != 0.0 || cfg.noise_range.second != 0.0) {
        if (!(cfg.noise_range.first < cfg.noise_range.second) || cfg.noise_range.first < 0.0) {
            throw invalid_argument("range: need 0 <= lo < hi");
        }
        return cfg.noise_range;
    }
    if (cfg.kind == NoiseParameter::Kind::AdditiveSigma) {
        return {0.02 * half_width, half_width};
    }
    return {0.01, 1.5};
}

}  // namespace

std::pair<double, double> oracle_support_hull(const SparseMeasure& measure,
                                              NoiseParameter noise)
{
    validate_measure(measure);
    const double lo = measure.atoms.front();
    const double hi = measure.atoms.back();
    if (noise.value == 0.0) return {lo, hi};

    // bracket that provably contains the limit support
    double b_lo, b_hi;
    if (noise.kind == NoiseParameter::Kind::AdditiveSigma) {
        b_lo = lo - 2.0 * noise.value;
        b_hi = hi + 2.0 * noise.value;
    } else {
        const double rq = std::sqrt(noise.value);
        b_lo = noise.value >= 1.0 ? 1e-6 : lo * (1.0 - rq) * (1.0 - rq);
        b_hi = hi * (1.0 + rq) * (1.0 + rq);
    }

    // tighten to the observable support: scan the limit density slightly off
    // the real axis, as the empirical hull of a finite draw would see it
    constexpr int kScan = 240;
    constexpr double kEps = 1e-2;
    constexpr double kDensityFloor = 0.015;
    double s_lo = b_hi, s_hi = b_lo;
    for (int i = 0; i < kScan; ++i) {
        const double x = b_lo + (b_hi - b_lo) * i / (kScan - 1);
        const cplx z(x, kEps);
        bool inside = true;  // slow convergence only happens on the support
        try {
            const cplx g = noise.kind == NoiseParameter::Kind::AdditiveSigma
                               ? limit_stieltjes_additive(measure, noise.value, z, 1e-8)
                               : limit_stieltjes_multiplicative(measure, noise.value, z, 1e-8);
            inside = -g.imag() / M_PI > kDensityFloor;
        } catch (const numerical_error&) {
        }
        if (inside) {
            s_lo = std::min(s_lo, x);
            s_hi = std::max(s_hi, x);
        }
    }
    if (!(s_lo < s_hi)) return {b_lo, b_hi};
    return {s_lo, s_hi};
}

PreparedProblem prepare_from_spectrum(const Spectrum& spectrum, const RunConfig& config)
{
    validate_spectrum(spectrum);
    PreparedProblem out;
    out.contour = resolve_contour(config);
    out.hull = {spectrum.min(), spectrum.max()};
    out.base.points = sample_contour(spectrum, out.contour);
    out.base.values = stieltjes_samples(spectrum, out.base.points);
    out.em = resolve_eigenmatrix(out.hull, config);
    out.range = resolve_range(config, 0.5 * (out.hull.second - out.hull.first));
    return out;
}

PreparedProblem prepare_from_oracle(const SparseMeasure& measure, NoiseParameter noise,
                                    const RunConfig& config)
{
    const auto hull = oracle_support_hull(measure, noise);
    Spectrum hull_proxy;
    hull_proxy.eigenvalues = {hull.first, hull.second};
    PreparedProblem out;
    out.contour = resolve_contour(config);
    out.hull = hull;
    out.base.points = sample_contour(hull_proxy, out.contour);
    out.base.values = limit_contour_values(measure, noise, out.base.points);
    out.em = resolve_eigenmatrix(hull, config);
    out.range = resolve_range(config, 0.5 * (hull.second - hull.first));
    return out;
}

PipelineResult run_known_noise(const PreparedProblem& problem, double noise_value,
                               const RunConfig& config)
{
    const ContourSamples pivoted =
        config.kind == NoiseParameter::Kind::AdditiveSigma
            ? additive_pivot(problem.base.points, problem.base.values, noise_value)
            : multiplicative_pivot(problem.base.points, problem.base.values, noise_value);
    PipelineResult out;
    out.recovery = recover_measure(pivoted, config.n, problem.em);
    out.noise_used = noise_value;
    return out;
}

PipelineResult run_estimated(const PreparedProblem& problem, const RunConfig& config)
{
    NoiseEstimate est = estimate_noise(config.kind, problem.base, config.n, problem.range,
                                       problem.em, config.n_grid);
    PipelineResult out = run_known_noise(problem, est.estimate, config);
    out.estimate = std::move(est);
    return out;
}

}  // namespace freedec
