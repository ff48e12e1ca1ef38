#pragma once

#include "interfact/backend_lc.hpp"
#include "interfact/backend_michelson.hpp"
#include "interfact/interferometer.hpp"
#include "interfact/sumcore.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace interfact {

inline constexpr int kDefaultSamplesPerUnit = 8;
inline constexpr double kDefaultSourceFloor = 1e-6;

/// Polychromatic source, wavelengths in units of u, peak intensity 1.
struct SourceModel {
    enum class Kind { flat, gaussian };

    Kind kind = Kind::flat;
    double band_lo = 1.0;
    double band_hi = 2.0;
    double center = 0.0;
    double width = 0.0;
    double floor = kDefaultSourceFloor;

    static SourceModel flat(double lo, double hi);
    static SourceModel gaussian(double lo, double hi, double center, double width);

    void validate() const;
    /// |E_S(lambda)|^2; zero outside the band.
    double intensity(double lambda_over_u) const;
};

struct LcBackend {
    LcConfiguration config;
    LcCell cell;
};

/// Any of the three realizations of the M-path interferometer.
using Backend = std::variant<PathSet, LcBackend, MirrorLayout>;

std::string backend_name(const Backend& backend);
ModeAmplitude superpose(const Backend& backend, double lambda_over_u);

/**
 * Sampled output of the spectrometer. Columns share one index; rows are
 * sorted by wavelength. sum_magnitude_sq is NaN where the source is below
 * its floor (the row is kept so coverage gaps stay visible).
 */
struct Spectrum {
    Eigen::ArrayXd lambda_over_u;
    Eigen::ArrayXd source_intensity;
    Eigen::ArrayXd output_intensity;
    Eigen::ArrayXd sum_magnitude_sq;
    double floor = kDefaultSourceFloor;

    Eigen::Index size() const { return lambda_over_u.size(); }
    bool measurable(Eigen::Index i) const;
    void resize(Eigen::Index n);
};

struct Peak {
    double lambda_over_u = 0.0;
    double magnitude_sq = 0.0;
    std::int64_t nearest_integer = 0;
    double distance = 0.0;
};

struct PeakList {
    std::vector<Peak> peaks;
    std::vector<std::string> diagnostics;
};

struct MeasurementPlan {
    std::vector<std::pair<double, double>> windows;
    double resolution = 1.0;

    std::size_t count() const { return windows.size(); }
};

/// floor(sqrt(n)) without floating-point error.
std::uint64_t isqrt(std::uint64_t n);

/**
 * Wavelength grid k / samples_per_unit covering [2, floor(sqrt N) + 1/2]
 * intersected with the source band. ell = 1 is left out: it divides
 * everything. Throws CoverageError when nothing of the trial range is left.
 */
Eigen::ArrayXd build_scan_grid(std::uint64_t n, int samples_per_unit, const SourceModel& source);

Spectrum simulate_spectrum(const Backend& backend, const Eigen::ArrayXd& grid,
                           const SourceModel& source);

/// sum_magnitude_sq = output / source where the source reaches its floor.
Spectrum extract_sum_spectrum(Spectrum s);

/**
 * Local maxima of the extracted |A|^2 with |A| >= threshold.
 *
 * A maximum is strictly above both neighbours; a plateau reports its
 * leftmost sample and a missing or unmeasurable neighbour counts as lower.
 * Each peak is snapped to the nearest integer; peaks sharing an integer
 * collapse to the one closest to it.
 */
PeakList detect_peaks(const Spectrum& s, double threshold = kDefaultThreshold);

/// Contiguous windows of width <= window tiling [lo, hi]; resolution must be <= 1.
MeasurementPlan plan_measurements(double lo, double hi, double window, double resolution = 1.0);

} // namespace interfact
