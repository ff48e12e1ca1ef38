#pragma once

#include "interfact/interferometer.hpp"

#include <Eigen/Core>

namespace interfact {

/// Mirror displacements of a symmetric M-path Michelson interferometer.
struct MirrorLayout {
    static constexpr double kRoundTrip = 2.0;

    UnitLength unit;
    Eigen::VectorXd positions_nm; ///< x_m relative to the zero-path reference

    Eigen::Index size() const { return positions_nm.size(); }

    /// op_m = 2 x_m, in units of u.
    PathSet optical_paths() const;
};

/// x_m = op_m / 2 in nanometres; free space has no range limit.
MirrorLayout mirror_positions(const PathSet& targets);

/// 2 pi (2 x_m) / lambda in [0, 2 pi), with n = 1. m is one-based.
double path_phase(const MirrorLayout& layout, int m, double lambda_nm);

/// Output amplitude with every arm weighted 1/M.
ModeAmplitude superpose(const MirrorLayout& layout, double lambda_over_u);

} // namespace interfact
