#pragma once

#include "interfact/backend_lc.hpp"
#include "interfact/interferometer.hpp"
#include "interfact/spectro.hpp"
#include "interfact/sumcore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace interfact {

/// Paths for which every phase is a whole number of turns at lambda_bar = N_bar u.
struct Calibration {
    std::uint64_t n_bar = 1;
    int j = 2;
    double lambda_bar_over_u = 1.0;
    PathSet paths;
};

enum class RescaleMode { scale_paths, scale_unit };

struct RescalePlan {
    double alpha = 1.0;
    RescaleMode mode = RescaleMode::scale_paths;
};

/// Inclusive wavelength band in units of u.
struct Band {
    double lo = 1.0;
    double hi = 2.0;
};

using Divisor = std::pair<std::uint64_t, std::uint64_t>; ///< (ell, N / ell)

Calibration calibrate(std::uint64_t n_bar, int j, int m, UnitLength unit);

/// Same, restricted to the listed terms (random-subset variant).
Calibration calibrate(std::uint64_t n_bar, int j, std::span<const int> terms, UnitLength unit);

/**
 * alpha * N_bar rounded to the integer it must equal, within 1e-9 relative.
 * Throws ParameterError for alpha <= 0 or a non-integer target.
 */
std::uint64_t rescaled_target(std::uint64_t n_bar, double alpha);

/**
 * scale_paths multiplies every optical path by alpha; scale_unit reads the
 * spectrum in the unit u / alpha instead. For scale_unit the wavelengths
 * ell u / alpha of all trial factors must fall inside `band` (units of the
 * original u), else RangeError.
 */
std::variant<PathSet, UnitLength> rescale(const Calibration& c, const RescalePlan& plan,
                                          std::optional<Band> band = std::nullopt);

/// Every divisor in [2, sqrt N] with its cofactor, by plain trial division.
std::vector<Divisor> trial_division_oracle(std::uint64_t n);

struct Verification {
    std::vector<Divisor> verified;
    std::vector<std::int64_t> unverified;
};

/// A candidate is verified iff 2 <= ell <= sqrt N and N mod ell == 0.
Verification verify_candidates(std::uint64_t n, const PeakList& peaks);

enum class BackendKind { ideal, michelson, liquid_crystal };

std::string to_string(BackendKind kind);

struct BackendOptions {
    BackendKind kind = BackendKind::ideal;
    std::optional<LcCurve> curve;  ///< required for liquid_crystal
    LcCell cell;
};

struct RescaleOptions {
    std::uint64_t n_bar = 1;
    double alpha = 1.0;
    RescaleMode mode = RescaleMode::scale_paths;
};

struct SubsetOptions {
    int size = 1;
    std::uint64_t seed = 0;
};

struct FactorizeOptions {
    std::uint64_t n = 0;       ///< ignored when rescale is set (N = alpha * N_bar)
    int j = 2;
    std::optional<int> m;      ///< nullopt selects auto_truncation
    double safety = 1.0;
    BackendOptions backend;
    std::optional<SourceModel> source; ///< defaults to flat over [1, sqrt N + 1/2]
    UnitLength unit{1.0};
    double threshold = kDefaultThreshold;
    int samples_per_unit = kDefaultSamplesPerUnit;
    std::optional<RescaleOptions> rescale;
    std::optional<SubsetOptions> subset;
};

struct FactorReport {
    std::uint64_t n = 0;
    int j = 2;
    int m = 1;
    double unit_nm = 1.0;
    std::string backend;
    double threshold = kDefaultThreshold;
    PeakList candidates;
    std::vector<Divisor> verified_factors;
    std::vector<std::int64_t> unverified;
    bool coverage_complete = false;
    double runtime_ms = 0.0;
    std::vector<int> subset;  ///< terms used; empty for the full path set
    Spectrum spectrum;
};

/// Flat source spanning [1, floor(sqrt N) + 1/2], enough for every trial factor.
SourceModel default_source(std::uint64_t n);

/**
 * One simulated run: calibrate (and rescale), configure the backend, scan
 * the spectrum, extract |A|^2, pick peaks and verify them by exact division.
 */
FactorReport factorize(const FactorizeOptions& opts);

} // namespace interfact
