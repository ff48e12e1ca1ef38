#include "interfact/interferometer.hpp"

#include "interfact/errors.hpp"
#include "interfact/phase_reduction.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace interfact {

namespace {

constexpr std::uint64_t kPathLimit = std::uint64_t{1} << 63;

void check_wavelength(double lambda_over_u)
{
    if (!std::isfinite(lambda_over_u) || lambda_over_u <= 0.0)
        throw ParameterError("wavelength must be positive, got " +
                             std::to_string(lambda_over_u));
}

// m^j * n, or nullopt past 2^63.
std::optional<std::uint64_t> checked_path(std::uint64_t m, int j, std::uint64_t n)
{
    unsigned __int128 v = n;
    for (int k = 0; k < j; ++k) {
        v *= m;
        if (v >= kPathLimit)
            return std::nullopt;
    }
    return static_cast<std::uint64_t>(v);
}

} // namespace

UnitLength::UnitLength(double nm) : nm_{nm}
{
    if (!std::isfinite(nm) || nm <= 0.0)
        throw ParameterError("unit length must be positive, got " + std::to_string(nm));
}

PathSet::PathSet(UnitLength unit, Eigen::VectorXd paths_over_u)
    : unit_{unit}, paths_{std::move(paths_over_u)}
{
    if (paths_.size() == 0)
        throw ParameterError("path set is empty");
    for (Eigen::Index i = 0; i < paths_.size(); ++i) {
        if (!std::isfinite(paths_[i]) || paths_[i] <= 0.0)
            throw ParameterError("optical path " + std::to_string(i + 1) +
                                 " must be finite and positive");
        if (i > 0 && paths_[i] <= paths_[i - 1])
            throw ParameterError("optical paths must be strictly increasing");
    }
}

PathSet PathSet::from_integers(UnitLength unit, std::vector<std::uint64_t> paths_over_u)
{
    Eigen::VectorXd p(static_cast<Eigen::Index>(paths_over_u.size()));
    for (std::size_t i = 0; i < paths_over_u.size(); ++i)
        p[static_cast<Eigen::Index>(i)] = static_cast<double>(paths_over_u[i]);
    PathSet ps(unit, std::move(p));
    ps.exact_ = std::move(paths_over_u);
    return ps;
}

std::span<const std::uint64_t> PathSet::exact_paths() const
{
    if (!exact_)
        return {};
    return *exact_;
}

PathSet PathSet::scaled(double alpha) const
{
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw ParameterError("scale factor must be positive");
    if (alpha == 1.0)
        return *this;
    return PathSet(unit_, paths_ * alpha);
}

PathSet PathSet::in_unit(UnitLength unit) const
{
    if (unit.nm() == unit_.nm())
        return *this;
    return PathSet(unit, paths_ * (unit_.nm() / unit.nm()));
}

double PathSet::turns(Eigen::Index m, double lambda_over_u) const
{
    if (exact_)
        return turns_mod_one((*exact_)[static_cast<std::size_t>(m)], lambda_over_u);
    return turns_mod_one(paths_[m], lambda_over_u);
}

PathSet required_paths(std::uint64_t n, int j, int m, UnitLength unit)
{
    if (m < 1)
        throw ParameterError("truncation M must be >= 1");
    std::vector<int> terms(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        terms[static_cast<std::size_t>(k)] = k + 1;
    return required_paths(n, j, terms, unit);
}

PathSet required_paths(std::uint64_t n, int j, std::span<const int> terms, UnitLength unit)
{
    if (n < 1)
        throw ParameterError("N must be positive");
    if (j < 2)
        throw ParameterError("order j must be >= 2");
    if (terms.empty())
        throw ParameterError("no interferometer paths requested");
    std::vector<std::uint64_t> paths;
    paths.reserve(terms.size());
    for (int t : terms) {
        if (t < 1)
            throw ParameterError("path index must be >= 1");
        const auto p = checked_path(static_cast<std::uint64_t>(t), j, n);
        if (!p)
            throw CapacityError("optical path m^j*N for m=" + std::to_string(t) +
                                ", j=" + std::to_string(j) + ", N=" + std::to_string(n) +
                                " exceeds 2^63 units");
        paths.push_back(*p);
    }
    return PathSet::from_integers(unit, std::move(paths));
}

double phase(double op_over_u, double lambda_over_u)
{
    check_wavelength(lambda_over_u);
    if (!std::isfinite(op_over_u) || op_over_u <= 0.0)
        throw ParameterError("optical path must be positive");
    return turns_to_radians(turns_mod_one(op_over_u, lambda_over_u));
}

std::complex<double> mean_phasor(const Eigen::Ref<const Eigen::ArrayXd>& turns)
{
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index m = 0; m < turns.size(); ++m)
        acc += unit_phasor(turns[m]);
    return acc / static_cast<double>(turns.size());
}

ModeAmplitude superpose(const PathSet& paths, double lambda_over_u)
{
    check_wavelength(lambda_over_u);
    Eigen::ArrayXd turns(paths.size());
    for (Eigen::Index m = 0; m < paths.size(); ++m)
        turns[m] = paths.turns(m, lambda_over_u);
    return {lambda_over_u, mean_phasor(turns)};
}

} // namespace interfact
