#include "interfact/backend_lc.hpp"

#include "interfact/errors.hpp"
#include "interfact/phase_reduction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace interfact {

namespace {

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_number(const std::string& field, int line)
{
    const std::string f = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty())
        throw FormatError("curve line " + std::to_string(line) + ": cannot parse '" + f + "'");
    return v;
}

} // namespace

LcCurve::LcCurve(Eigen::VectorXd voltages, Eigen::VectorXd delta_n)
    : voltages_{std::move(voltages)}, delta_n_{std::move(delta_n)}
{
    const Eigen::Index n = voltages_.size();
    if (n < 2 || delta_n_.size() != n)
        throw FormatError("curve needs at least 2 (voltage, delta_n) samples");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(voltages_[i]) || !std::isfinite(delta_n_[i]))
            throw FormatError("curve samples must be finite");
        if (delta_n_[i] < 0.0)
            throw FormatError("birefringence must be non-negative");
        if (i > 0 && voltages_[i] <= voltages_[i - 1])
            throw FormatError("curve voltages must be strictly increasing");
    }

    // Longest strictly monotone run by voltage span; ties keep the earlier run.
    double best_span = -1.0;
    Eigen::Index start = 0;
    while (start + 1 < n) {
        const double step = delta_n_[start + 1] - delta_n_[start];
        if (step == 0.0) {
            ++start;
            continue;
        }
        const bool up = step > 0.0;
        Eigen::Index end = start + 1;
        while (end + 1 < n && ((delta_n_[end + 1] - delta_n_[end]) > 0.0) == up &&
               delta_n_[end + 1] != delta_n_[end])
            ++end;
        const double span = voltages_[end] - voltages_[start];
        if (span > best_span) {
            best_span = span;
            lo_ = start;
            hi_ = end;
            increasing_ = up;
        }
        start = end;
    }
    if (best_span < 0.0)
        throw CurveError("birefringence is constant over the whole curve");
}

double LcCurve::min_delta_n() const
{
    return std::min(delta_n_[lo_], delta_n_[hi_]);
}

double LcCurve::max_delta_n() const
{
    return std::max(delta_n_[lo_], delta_n_[hi_]);
}

double LcCurve::birefringence(double v) const
{
    if (!(v >= valid_lo() && v <= valid_hi()))
        throw ParameterError("voltage " + std::to_string(v) + " outside valid range");
    const auto first = voltages_.data() + lo_;
    const auto last = voltages_.data() + hi_ + 1;
    auto it = std::upper_bound(first, last, v);
    Eigen::Index k = std::clamp<Eigen::Index>((it - voltages_.data()) - 1, lo_, hi_ - 1);
    const double v0 = voltages_[k], v1 = voltages_[k + 1];
    const double n0 = delta_n_[k], n1 = delta_n_[k + 1];
    if (v == v0)
        return n0;
    if (v == v1)
        return n1;
    return n0 + (v - v0) * (n1 - n0) / (v1 - v0);
}

double LcCurve::invert(double target) const
{
    if (!(target >= min_delta_n() && target <= max_delta_n()))
        throw ParameterError("birefringence " + std::to_string(target) +
                             " outside the controllable range");
    // Bisection over sample indices: find k with target between dn[k] and dn[k+1].
    Eigen::Index a = lo_, b = hi_;
    while (b - a > 1) {
        const Eigen::Index mid = a + (b - a) / 2;
        const bool past = increasing_ ? delta_n_[mid] <= target : delta_n_[mid] >= target;
        (past ? a : b) = mid;
    }
    const double v0 = voltages_[a], v1 = voltages_[b];
    const double n0 = delta_n_[a], n1 = delta_n_[b];
    if (target == n0)
        return v0;
    if (target == n1)
        return v1;
    return v0 + (target - n0) * (v1 - v0) / (n1 - n0);
}

void LcCell::validate() const
{
    if (!(thickness_um > 0.0) || !std::isfinite(thickness_um))
        throw ParameterError("cell thickness must be positive");
    if (!(max_birefringence > 0.0) || !std::isfinite(max_birefringence))
        throw ParameterError("zero-voltage birefringence must be positive");
    if (!(dispersion_b_nm2 >= 0.0) || !std::isfinite(dispersion_b_nm2))
        throw ParameterError("dispersion coefficient must be non-negative");
    if (!(reference_wavelength_nm > 0.0) || !std::isfinite(reference_wavelength_nm))
        throw ParameterError("reference wavelength must be positive");
}

LcCurve load_curve(std::vector<std::pair<double, double>> records)
{
    if (records.size() < 2)
        throw FormatError("curve needs at least 2 (voltage, delta_n) records, got " +
                          std::to_string(records.size()));
    std::sort(records.begin(), records.end());
    Eigen::VectorXd v(static_cast<Eigen::Index>(records.size()));
    Eigen::VectorXd dn(v.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i > 0 && records[i].first == records[i - 1].first)
            throw FormatError("duplicate curve voltage " + std::to_string(records[i].first));
        v[static_cast<Eigen::Index>(i)] = records[i].first;
        dn[static_cast<Eigen::Index>(i)] = records[i].second;
    }
    return LcCurve(std::move(v), std::move(dn));
}

LcCurve read_curve_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != "voltage_v,delta_n")
        throw FormatError("curve CSV must start with header 'voltage_v,delta_n'");
    std::vector<std::pair<double, double>> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw FormatError("curve line " + std::to_string(lineno) +
                              ": expected two comma-separated columns");
        records.emplace_back(parse_number(line.substr(0, comma), lineno),
                             parse_number(line.substr(comma + 1), lineno));
    }
    return load_curve(std::move(records));
}

LcCurve read_curve_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open curve file " + path.string());
    return read_curve_csv(in);
}

LcConfiguration solve_voltages(const PathSet& targets, const LcCell& cell,
                               const LcCurve& curve)
{
    cell.validate();
    const double d = cell.thickness_nm();
    const double u = targets.unit().nm();
    const double dn_lo = curve.min_delta_n();
    const double dn_hi = std::min(curve.max_delta_n(), cell.max_birefringence);
    if (dn_hi < dn_lo)
        throw CurveError("curve range lies above the cell's zero-voltage birefringence");

    const Eigen::Index m = targets.size();
    LcConfiguration cfg{targets.unit(), Eigen::VectorXd(m), Eigen::VectorXd(m), 0.0};
    for (Eigen::Index i = 0; i < m; ++i) {
        const double target_nm = targets.paths()[i] * u;
        const double dn = target_nm / d;
        if (dn < dn_lo || dn > dn_hi)
            throw FeasibilityError(static_cast<int>(i + 1), target_nm, d * dn_lo, d * dn_hi);
        cfg.voltages[i] = curve.invert(dn);
        cfg.achieved_paths[i] = curve.birefringence(cfg.voltages[i]) * d / u;
        const double rel =
            std::abs(cfg.achieved_paths[i] - targets.paths()[i]) / targets.paths()[i];
        cfg.residual = std::max(cfg.residual, rel);
    }
    if (cfg.residual > kLcPathTolerance)
        throw Error("voltage inversion residual " + std::to_string(cfg.residual) +
                    " exceeds tolerance");
    return cfg;
}

double dispersed_path(const LcCell& cell, double op_ref_nm, double lambda_nm)
{
    if (!(lambda_nm > 0.0) || !std::isfinite(lambda_nm))
        throw ParameterError("wavelength must be positive");
    if (cell.dispersion_b_nm2 == 0.0)
        return op_ref_nm;
    const double ref = cell.reference_wavelength_nm;
    return op_ref_nm *
           (1.0 + cell.dispersion_b_nm2 * (1.0 / (lambda_nm * lambda_nm) - 1.0 / (ref * ref)));
}

double region_phase(const LcCell& cell, double op_ref_nm, double lambda_nm)
{
    if (!(op_ref_nm > 0.0))
        throw ParameterError("optical path must be positive");
    return turns_to_radians(turns_mod_one(dispersed_path(cell, op_ref_nm, lambda_nm), lambda_nm));
}

ModeAmplitude superpose(const LcConfiguration& config, const LcCell& cell,
                        double lambda_over_u)
{
    if (!(lambda_over_u > 0.0) || !std::isfinite(lambda_over_u))
        throw ParameterError("wavelength must be positive");
    const double u = config.unit.nm();
    const double lambda_nm = lambda_over_u * u;
    Eigen::ArrayXd turns(config.achieved_paths.size());
    for (Eigen::Index m = 0; m < turns.size(); ++m) {
        // Paths stay in units of u so a dispersion-free cell reproduces the
        // ideal interferometer to rounding.
        const double op_u = cell.dispersion_b_nm2 == 0.0
                                ? config.achieved_paths[m]
                                : dispersed_path(cell, config.achieved_paths[m] * u, lambda_nm) / u;
        turns[m] = turns_mod_one(op_u, lambda_over_u);
    }
    return {lambda_over_u, mean_phasor(turns)};
}

} // namespace interfact
