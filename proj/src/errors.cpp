#include "interfact/errors.hpp"

#include <cstdio>

namespace interfact {

namespace {

std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

FeasibilityError::FeasibilityError(int index, double target_nm, double min_nm, double max_nm)
    : Error("liquid-crystal region m=" + std::to_string(index) + ": target path " +
            g17(target_nm) + " nm outside controllable range [" + g17(min_nm) + ", " +
            g17(max_nm) + "] nm (max controllable path " + g17(max_nm) + " nm)"),
      index_{index}, target_nm_{target_nm}, min_nm_{min_nm}, max_nm_{max_nm}
{
}

CoverageError::CoverageError(double uncovered_lo, double uncovered_hi)
    : Error("scan does not cover trial factors in [" + g17(uncovered_lo) + ", " +
            g17(uncovered_hi) + "] (units of u)"),
      lo_{uncovered_lo}, hi_{uncovered_hi}
{
}

} // namespace interfact
