#include "interfact/spectro.hpp"

#include "interfact/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace interfact {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

SourceModel SourceModel::flat(double lo, double hi)
{
    SourceModel s;
    s.kind = Kind::flat;
    s.band_lo = lo;
    s.band_hi = hi;
    s.validate();
    return s;
}

SourceModel SourceModel::gaussian(double lo, double hi, double center, double width)
{
    SourceModel s;
    s.kind = Kind::gaussian;
    s.band_lo = lo;
    s.band_hi = hi;
    s.center = center;
    s.width = width;
    s.validate();
    return s;
}

void SourceModel::validate() const
{
    if (!std::isfinite(band_lo) || !std::isfinite(band_hi) || band_lo < 1.0 ||
        !(band_hi > band_lo))
        throw ParameterError("source band must satisfy 1 <= lo < hi");
    if (kind == Kind::gaussian && (!(width > 0.0) || !std::isfinite(center)))
        throw ParameterError("gaussian source needs a finite center and positive width");
    if (!(floor >= 0.0) || floor >= 1.0)
        throw ParameterError("source floor must lie in [0, 1)");
}

double SourceModel::intensity(double lambda_over_u) const
{
    if (lambda_over_u < band_lo || lambda_over_u > band_hi)
        return 0.0;
    if (kind == Kind::flat)
        return 1.0;
    const double z = (lambda_over_u - center) / width;
    return std::exp(-0.5 * z * z);
}

std::string backend_name(const Backend& backend)
{
    return std::visit(overloaded{[](const PathSet&) { return std::string("ideal"); },
                                 [](const LcBackend&) { return std::string("liquid-crystal"); },
                                 [](const MirrorLayout&) { return std::string("michelson"); }},
                      backend);
}

ModeAmplitude superpose(const Backend& backend, double lambda_over_u)
{
    return std::visit(
        overloaded{[&](const PathSet& p) { return superpose(p, lambda_over_u); },
                   [&](const LcBackend& lc) { return superpose(lc.config, lc.cell, lambda_over_u); },
                   [&](const MirrorLayout& l) { return superpose(l, lambda_over_u); }},
        backend);
}

bool Spectrum::measurable(Eigen::Index i) const
{
    return !std::isnan(sum_magnitude_sq[i]);
}

void Spectrum::resize(Eigen::Index n)
{
    lambda_over_u.resize(n);
    source_intensity.resize(n);
    output_intensity.resize(n);
    sum_magnitude_sq.resize(n);
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

Eigen::ArrayXd build_scan_grid(std::uint64_t n, int samples_per_unit, const SourceModel& source)
{
    if (samples_per_unit < 1)
        throw ParameterError("samples per unit must be >= 1");
    source.validate();
    const auto root = static_cast<double>(isqrt(n));
    if (root < 2.0)
        throw CoverageError(2.0, root);
    const double lo = std::max(2.0, source.band_lo);
    const double hi = std::min(root + 0.5, source.band_hi);
    const auto s = static_cast<double>(samples_per_unit);
    const auto k_lo = static_cast<long long>(std::ceil(lo * s));
    const auto k_hi = static_cast<long long>(std::floor(hi * s));
    if (k_hi < k_lo)
        throw CoverageError(2.0, root);
    Eigen::ArrayXd grid(k_hi - k_lo + 1);
    for (long long k = k_lo; k <= k_hi; ++k)
        grid[k - k_lo] = static_cast<double>(k) / s;
    return grid;
}

Spectrum simulate_spectrum(const Backend& backend, const Eigen::ArrayXd& grid,
                           const SourceModel& source)
{
    source.validate();
    Spectrum s;
    s.floor = source.floor;
    s.resize(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ParameterError("scan grid must be strictly increasing");
        const double src = source.intensity(grid[i]);
        s.lambda_over_u[i] = grid[i];
        s.source_intensity[i] = src;
        s.output_intensity[i] = src * superpose(backend, grid[i]).intensity();
    }
    return extract_sum_spectrum(std::move(s));
}

Spectrum extract_sum_spectrum(Spectrum s)
{
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double src = s.source_intensity[i];
        s.sum_magnitude_sq[i] = (src >= s.floor && src > 0.0) ? s.output_intensity[i] / src : kNaN;
    }
    return s;
}

PeakList detect_peaks(const Spectrum& s, double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ParameterError("threshold must lie in (0, 1)");
    constexpr double kLower = -std::numeric_limits<double>::infinity();
    const auto value = [&](Eigen::Index i) {
        return (i >= 0 && i < s.size() && s.measurable(i)) ? s.sum_magnitude_sq[i] : kLower;
    };

    PeakList out;
    // nearest integer -> best peak so far
    std::map<std::int64_t, Peak> by_integer;
    Eigen::Index i = 0;
    while (i < s.size()) {
        if (!s.measurable(i)) {
            ++i;
            continue;
        }
        const double v = s.sum_magnitude_sq[i];
        Eigen::Index end = i;
        while (end + 1 < s.size() && s.measurable(end + 1) && s.sum_magnitude_sq[end + 1] == v)
            ++end;
        if (v > value(i - 1) && v > value(end + 1) && std::sqrt(v) >= threshold) {
            const double lambda = s.lambda_over_u[i];
            Peak p{lambda, v, std::llround(lambda), 0.0};
            p.distance = std::abs(lambda - static_cast<double>(p.nearest_integer));
            if (p.distance > 0.5) {
                out.diagnostics.push_back("peak at lambda/u=" + std::to_string(lambda) +
                                          " discarded: farther than 0.5u from an integer");
            } else {
                auto [it, inserted] = by_integer.try_emplace(p.nearest_integer, p);
                if (!inserted) {
                    const Peak& q = it->second;
                    const bool better = p.distance < q.distance ||
                                        (p.distance == q.distance && p.magnitude_sq > q.magnitude_sq);
                    if (better)
                        it->second = p;
                }
            }
        }
        i = end + 1;
    }
    out.peaks.reserve(by_integer.size());
    for (const auto& [ell, p] : by_integer)
        out.peaks.push_back(p);
    return out;
}

MeasurementPlan plan_measurements(double lo, double hi, double window, double resolution)
{
    if (!std::isfinite(resolution) || !(resolution > 0.0))
        throw ParameterError("resolution must be positive");
    if (resolution > 1.0)
        throw ResolutionError("spectrometer resolution " + std::to_string(resolution) +
                              "u cannot resolve adjacent trial factors (needs <= 1u)");
    if (!std::isfinite(window) || !(window > 0.0))
        throw ParameterError("instrument window must be positive");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw ParameterError("scan range must satisfy lo < hi");

    auto count = static_cast<long long>(std::ceil((hi - lo) / window));
    while (count > 1 && lo + static_cast<double>(count - 1) * window >= hi)
        --count;
    MeasurementPlan plan;
    plan.resolution = resolution;
    plan.windows.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        const double a = lo + static_cast<double>(k) * window;
        const double b = k + 1 == count ? hi : lo + static_cast<double>(k + 1) * window;
        plan.windows.emplace_back(a, b);
    }
    return plan;
}

} // namespace interfact
