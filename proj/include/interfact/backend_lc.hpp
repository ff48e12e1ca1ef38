#pragma once

#include "interfact/interferometer.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <istream>
#include <utility>
#include <vector>

namespace interfact {

/**
 * Tabulated voltage -> birefringence curve of a liquid-crystal cell.
 *
 * Samples are sorted by voltage. Only the longest strictly monotone branch
 * (by voltage span, ties to the lower-voltage branch) is used for control;
 * birefringence is linear between samples.
 */
class LcCurve {
  public:
    LcCurve(Eigen::VectorXd voltages, Eigen::VectorXd delta_n);

    const Eigen::VectorXd& voltages() const noexcept { return voltages_; }
    const Eigen::VectorXd& delta_n() const noexcept { return delta_n_; }

    double valid_lo() const { return voltages_[lo_]; }
    double valid_hi() const { return voltages_[hi_]; }
    double min_delta_n() const;
    double max_delta_n() const;
    bool increasing() const noexcept { return increasing_; }

    /// Birefringence at v; v must lie in the valid range.
    double birefringence(double v) const;

    /// Voltage in the valid range producing delta_n; bisection over the
    /// branch samples, then exact inversion of the linear segment.
    double invert(double delta_n) const;

  private:
    Eigen::VectorXd voltages_;
    Eigen::VectorXd delta_n_;
    Eigen::Index lo_ = 0;
    Eigen::Index hi_ = 0;
    bool increasing_ = false;
};

struct LcCell {
    double thickness_um = 8.08;
    double max_birefringence = 0.30;          ///< zero-voltage value
    double dispersion_b_nm2 = 0.0;            ///< first-order Cauchy coefficient
    double reference_wavelength_nm = 632.8;   ///< where the curve and targets hold

    void validate() const;
    double thickness_nm() const { return thickness_um * 1e3; }
};

struct LcConfiguration {
    UnitLength unit;
    Eigen::VectorXd voltages;
    Eigen::VectorXd achieved_paths;  ///< in units of u
    double residual = 0.0;           ///< max relative path error
};

inline constexpr double kLcPathTolerance = 1e-9;

/// Throws FormatError on fewer than 2 records, duplicate voltages or negative
/// birefringence; CurveError when no strictly monotone branch exists.
LcCurve load_curve(std::vector<std::pair<double, double>> records);

/// Two-column CSV with header `voltage_v,delta_n`.
LcCurve read_curve_csv(std::istream& in);
LcCurve read_curve_csv(const std::filesystem::path& path);

/**
 * Per-region voltages with delta_n(V_m) * d = op_m.
 *
 * Throws FeasibilityError naming the first region whose target lies outside
 * [d * min delta_n, d * min(max delta_n, cell max)].
 */
LcConfiguration solve_voltages(const PathSet& targets, const LcCell& cell,
                               const LcCurve& curve);

/// Optical path at lambda under op(l) = op_ref * (1 + b (1/l^2 - 1/l_ref^2)).
double dispersed_path(const LcCell& cell, double op_ref_nm, double lambda_nm);

/// 2 pi op(lambda) / lambda in [0, 2 pi).
double region_phase(const LcCell& cell, double op_ref_nm, double lambda_nm);

/// Grating output: every region weighted 1/M, dispersion applied per region.
ModeAmplitude superpose(const LcConfiguration& config, const LcCell& cell,
                        double lambda_over_u);

} // namespace interfact
