#include "interfact/backend_michelson.hpp"

#include "interfact/errors.hpp"
#include "interfact/phase_reduction.hpp"

#include <cmath>
#include <string>

namespace interfact {

PathSet MirrorLayout::optical_paths() const
{
    return PathSet(unit, positions_nm * (kRoundTrip / unit.nm()));
}

MirrorLayout mirror_positions(const PathSet& targets)
{
    return {targets.unit(), targets.paths() * (targets.unit().nm() / MirrorLayout::kRoundTrip)};
}

double path_phase(const MirrorLayout& layout, int m, double lambda_nm)
{
    if (m < 1 || m > layout.size())
        throw ParameterError("mirror index " + std::to_string(m) + " outside [1, " +
                             std::to_string(layout.size()) + "]");
    if (!std::isfinite(lambda_nm) || lambda_nm <= 0.0)
        throw ParameterError("wavelength must be positive");
    const double op_nm = MirrorLayout::kRoundTrip * layout.positions_nm[m - 1];
    return turns_to_radians(turns_mod_one(op_nm, lambda_nm));
}

ModeAmplitude superpose(const MirrorLayout& layout, double lambda_over_u)
{
    if (!std::isfinite(lambda_over_u) || lambda_over_u <= 0.0)
        throw ParameterError("wavelength must be positive");
    const double lambda_nm = lambda_over_u * layout.unit.nm();
    Eigen::ArrayXd turns(layout.size());
    for (Eigen::Index m = 0; m < layout.size(); ++m)
        turns[m] = turns_mod_one(MirrorLayout::kRoundTrip * layout.positions_nm[m], lambda_nm);
    return {lambda_over_u, mean_phasor(turns)};
}

} // namespace interfact
