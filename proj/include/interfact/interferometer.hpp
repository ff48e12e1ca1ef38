#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace interfact {

/// Length unit u in nanometres; integers map to wavelengths and paths through it.
class UnitLength {
  public:
    explicit UnitLength(double nm = 1.0);
    double nm() const noexcept { return nm_; }

  private:
    double nm_;
};

/**
 * The M optical paths of an interferometer, stored as multiples of the unit.
 *
 * Paths built from integers keep an exact 64-bit copy so phases at any
 * wavelength are reduced from the exact value rather than from a rounded
 * double.
 */
class PathSet {
  public:
    /// Throws ParameterError unless paths are finite, positive and strictly increasing.
    PathSet(UnitLength unit, Eigen::VectorXd paths_over_u);

    static PathSet from_integers(UnitLength unit, std::vector<std::uint64_t> paths_over_u);

    UnitLength unit() const noexcept { return unit_; }
    const Eigen::VectorXd& paths() const noexcept { return paths_; }
    Eigen::Index size() const noexcept { return paths_.size(); }

    bool is_exact() const noexcept { return exact_.has_value(); }
    std::span<const std::uint64_t> exact_paths() const;

    /// Multiplies every path by alpha; drops the exact copy unless alpha is 1.
    PathSet scaled(double alpha) const;

    /// Same physical paths expressed in another unit.
    PathSet in_unit(UnitLength unit) const;

    /// Fractional part of path m / lambda (both in units of u), m zero-based.
    double turns(Eigen::Index m, double lambda_over_u) const;

  private:
    UnitLength unit_;
    Eigen::VectorXd paths_;
    std::optional<std::vector<std::uint64_t>> exact_;
};

struct ModeAmplitude {
    double lambda_over_u = 0.0;
    std::complex<double> amplitude;

    double intensity() const { return std::norm(amplitude); }
};

/// op_m = m^j * N for m = 1..M. Throws CapacityError when m^j * N >= 2^63.
PathSet required_paths(std::uint64_t n, int j, int m, UnitLength unit);

/// op_m = m^j * N for the listed terms only (random-subset variant).
PathSet required_paths(std::uint64_t n, int j, std::span<const int> terms, UnitLength unit);

/// 2 pi op / lambda reduced to [0, 2 pi). Throws ParameterError on non-positive input.
double phase(double op_over_u, double lambda_over_u);

/// Equal-weight coherent superposition (1/M) * sum_m exp(i phase_m).
ModeAmplitude superpose(const PathSet& paths, double lambda_over_u);

/// Mean of the unit phasors for the given per-path turns; shared by all backends.
std::complex<double> mean_phasor(const Eigen::Ref<const Eigen::ArrayXd>& turns);

} // namespace interfact
