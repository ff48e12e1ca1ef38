#include "interfact/pipeline.hpp"

#include "interfact/backend_michelson.hpp"
#include "interfact/errors.hpp"
#include "interfact/phase_reduction.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace interfact {

namespace {

constexpr double kCalibrationTolerance = 1e-10;
constexpr double kIntegerTargetTolerance = 1e-9;

Calibration make_calibration(std::uint64_t n_bar, int j, PathSet paths)
{
    const auto lambda_bar = static_cast<double>(n_bar);
    for (Eigen::Index m = 0; m < paths.size(); ++m) {
        const double t = paths.turns(m, lambda_bar);
        if (std::min(t, 1.0 - t) > kCalibrationTolerance)
            throw Error("calibration failed: path " + std::to_string(m + 1) +
                        " is not a whole number of turns at lambda_bar");
    }
    return {n_bar, j, lambda_bar, std::move(paths)};
}

// Every integer ell in [2, root] sampled and measurable.
bool integers_covered(const Spectrum& s, std::uint64_t root)
{
    std::uint64_t next = 2;
    for (Eigen::Index i = 0; i < s.size() && next <= root; ++i) {
        const double ell = s.lambda_over_u[i];
        if (ell < static_cast<double>(next))
            continue;
        if (ell > static_cast<double>(next))
            return false;
        if (!s.measurable(i))
            return false;
        ++next;
    }
    return next > root;
}

} // namespace

Calibration calibrate(std::uint64_t n_bar, int j, int m, UnitLength unit)
{
    if (n_bar < 1)
        throw ParameterError("N_bar must be >= 1");
    return make_calibration(n_bar, j, required_paths(n_bar, j, m, unit));
}

Calibration calibrate(std::uint64_t n_bar, int j, std::span<const int> terms, UnitLength unit)
{
    if (n_bar < 1)
        throw ParameterError("N_bar must be >= 1");
    return make_calibration(n_bar, j, required_paths(n_bar, j, terms, unit));
}

std::uint64_t rescaled_target(std::uint64_t n_bar, double alpha)
{
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw ParameterError("alpha must be positive");
    const long double target = static_cast<long double>(alpha) * n_bar;
    const long double rounded = std::round(target);
    if (std::abs(target - rounded) > kIntegerTargetTolerance * std::max(1.0L, target))
        throw ParameterError("alpha * N_bar = " + std::to_string(static_cast<double>(target)) +
                             " is not an integer");
    if (rounded < 2.0L || rounded >= 0x1p63L)
        throw ParameterError("alpha * N_bar must lie in [2, 2^63)");
    return static_cast<std::uint64_t>(rounded);
}

std::variant<PathSet, UnitLength> rescale(const Calibration& c, const RescalePlan& plan,
                                          std::optional<Band> band)
{
    if (!std::isfinite(plan.alpha) || !(plan.alpha > 0.0))
        throw ParameterError("alpha must be positive");
    if (plan.mode == RescaleMode::scale_paths)
        return c.paths.scaled(plan.alpha);

    if (band) {
        const std::uint64_t n = rescaled_target(c.n_bar, plan.alpha);
        const double lo = 2.0 / plan.alpha;
        const double hi = (static_cast<double>(isqrt(n)) + 0.5) / plan.alpha;
        if (lo < band->lo || hi > band->hi)
            throw RangeError("rescaled wavelengths [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]u fall outside the source band [" +
                             std::to_string(band->lo) + ", " + std::to_string(band->hi) + "]u");
    }
    return UnitLength(c.paths.unit().nm() / plan.alpha);
}

std::vector<Divisor> trial_division_oracle(std::uint64_t n)
{
    if (n < 2)
        throw ParameterError("N must be >= 2");
    std::vector<Divisor> out;
    for (std::uint64_t ell = 2; ell <= n / ell; ++ell)
        if (n % ell == 0)
            out.emplace_back(ell, n / ell);
    return out;
}

Verification verify_candidates(std::uint64_t n, const PeakList& peaks)
{
    Verification v;
    for (const Peak& p : peaks.peaks) {
        const std::int64_t ell = p.nearest_integer;
        const bool in_range = ell >= 2 && static_cast<std::uint64_t>(ell) <= n / static_cast<std::uint64_t>(ell);
        if (in_range && n % static_cast<std::uint64_t>(ell) == 0)
            v.verified.emplace_back(static_cast<std::uint64_t>(ell), n / static_cast<std::uint64_t>(ell));
        else
            v.unverified.push_back(ell);
    }
    return v;
}

std::string to_string(BackendKind kind)
{
    switch (kind) {
    case BackendKind::ideal:
        return "ideal";
    case BackendKind::michelson:
        return "michelson";
    case BackendKind::liquid_crystal:
        return "liquid-crystal";
    }
    return "unknown";
}

SourceModel default_source(std::uint64_t n)
{
    return SourceModel::flat(1.0, std::max(2.0, static_cast<double>(isqrt(n)) + 0.5));
}

FactorReport factorize(const FactorizeOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();

    const std::uint64_t n =
        opts.rescale ? rescaled_target(opts.rescale->n_bar, opts.rescale->alpha) : opts.n;
    const std::uint64_t n_bar = opts.rescale ? opts.rescale->n_bar : n;
    const int m = opts.m ? *opts.m : auto_truncation(n, opts.j, opts.safety);
    validate(SumParams{n, opts.j, m, {}});
    if (!(opts.threshold > 0.0 && opts.threshold < 1.0))
        throw ParameterError("threshold must lie in (0, 1)");

    FactorReport report;
    report.n = n;
    report.j = opts.j;
    report.m = m;
    report.threshold = opts.threshold;
    report.backend = to_string(opts.backend.kind);

    std::vector<int> terms;
    if (opts.subset) {
        terms = choose_subset(m, opts.subset->size, opts.subset->seed);
        report.subset = terms;
    } else {
        terms.resize(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k)
            terms[static_cast<std::size_t>(k)] = k + 1;
    }

    // Steps 1-2: fix the paths at lambda_bar = N_bar u.
    const Calibration cal = calibrate(n_bar, opts.j, terms, opts.unit);

    SourceModel source = opts.source ? *opts.source : default_source(n);
    if (!opts.source && opts.rescale && opts.rescale->mode == RescaleMode::scale_unit) {
        // Band in the calibration unit, where trial factor ell sits at ell / alpha.
        const double top = (static_cast<double>(isqrt(n)) + 0.5) / opts.rescale->alpha;
        source = SourceModel::flat(1.0, std::max(2.0, top));
    }
    source.validate();

    // Step 4: bring the calibrated system to N = alpha N_bar. Paths end up in
    // the unit in which trial factor ell sits at wavelength ell.
    PathSet paths = cal.paths;
    if (opts.rescale && n_bar != n) {
        const RescalePlan plan{opts.rescale->alpha, opts.rescale->mode};
        const auto out = rescale(cal, plan, Band{source.band_lo, source.band_hi});
        if (const auto* scaled = std::get_if<PathSet>(&out)) {
            paths = *scaled;
        } else {
            const UnitLength readout = std::get<UnitLength>(out);
            paths = cal.paths.in_unit(readout);
            source.band_lo *= opts.rescale->alpha;
            source.band_hi *= opts.rescale->alpha;
        }
    }
    report.unit_nm = paths.unit().nm();

    Backend backend = paths;
    switch (opts.backend.kind) {
    case BackendKind::ideal:
        break;
    case BackendKind::michelson:
        backend = mirror_positions(paths);
        break;
    case BackendKind::liquid_crystal: {
        if (!opts.backend.curve)
            throw ParameterError("liquid-crystal backend needs a voltage-birefringence curve");
        LcCell cell = opts.backend.cell;
        cell.reference_wavelength_nm = cal.lambda_bar_over_u * cal.paths.unit().nm();
        backend = LcBackend{solve_voltages(paths, cell, *opts.backend.curve), cell};
        break;
    }
    }

    // Step 3: one polychromatic scan over every trial factor.
    const std::uint64_t root = isqrt(n);
    if (root >= 2) {
        const Eigen::ArrayXd grid = build_scan_grid(n, opts.samples_per_unit, source);
        report.spectrum = simulate_spectrum(backend, grid, source);
        report.candidates = detect_peaks(report.spectrum, opts.threshold);
        auto v = verify_candidates(n, report.candidates);
        report.verified_factors = std::move(v.verified);
        report.unverified = std::move(v.unverified);
        report.coverage_complete = integers_covered(report.spectrum, root);
    } else {
        report.spectrum.floor = source.floor;
        report.coverage_complete = true;
    }

    report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace interfact
