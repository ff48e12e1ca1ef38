#include "interfact/cli.hpp"

#include "interfact/errors.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <system_error>

namespace interfact::cli {

namespace {

constexpr const char* kSpectrumHeader =
    "lambda_over_u,source_intensity,output_intensity,sum_magnitude_sq";

std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Bad flag values; mapped to the usage exit code.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw UsageError(flag + " expects two comma-separated numbers, got '" + text + "'");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double x = std::stod(a, &used_a);
        const double y = std::stod(b, &used_b);
        if (used_a != a.size() || used_b != b.size())
            throw std::invalid_argument(text);
        return {x, y};
    } catch (const std::logic_error&) {
        throw UsageError(flag + " expects two comma-separated numbers, got '" + text + "'");
    }
}

struct RunFlags {
    std::uint64_t n = 0;
    int j = 2;
    std::string m = "auto";
    double safety = 1.0;
    std::string backend = "ideal";
    double unit_nm = 1.0;
    int samples_per_unit = kDefaultSamplesPerUnit;
    double threshold = kDefaultThreshold;
    std::string source = "flat";
    std::string band;
    std::optional<double> window;
    double resolution = 1.0;
    std::optional<double> alpha;
    std::optional<std::uint64_t> nbar;
    std::string rescale_mode = "paths";
    std::string lc_curve;
    double lc_thickness_um = 8.08;
    double lc_max_birefringence = 0.30;
    double lc_dispersion_b = 0.0;
    std::optional<int> subset_size;
    std::uint64_t seed = 0;
    std::string out_spectrum;
    std::string out_report;
    bool timing = false;
};

void add_run_flags(CLI::App& cmd, RunFlags& f)
{
    cmd.add_option("--n", f.n, "Number to factor");
    cmd.add_option("--j", f.j, "Order of the exponential sum (>= 2)")->capture_default_str();
    cmd.add_option("--m", f.m, "Truncation parameter M, or 'auto'")->capture_default_str();
    cmd.add_option("--safety", f.safety, "Multiplier on the automatic truncation")
        ->capture_default_str();
    cmd.add_option("--backend", f.backend, "Interferometer realization")
        ->check(CLI::IsMember({"ideal", "michelson", "liquid-crystal"}))
        ->capture_default_str();
    cmd.add_option("--unit-nm", f.unit_nm, "Unit of length u in nm")->capture_default_str();
    cmd.add_option("--samples-per-unit", f.samples_per_unit, "Spectrometer samples per u")
        ->capture_default_str();
    cmd.add_option("--threshold", f.threshold, "Peak threshold on |A|")->capture_default_str();
    cmd.add_option("--source", f.source, "flat | gauss:center,width")->capture_default_str();
    cmd.add_option("--band", f.band, "Source band lo,hi in units of u");
    cmd.add_option("--window", f.window, "Spectrometer window width in units of u");
    cmd.add_option("--resolution", f.resolution, "Spectrometer resolution in units of u")
        ->capture_default_str();
    cmd.add_option("--alpha", f.alpha, "Rescaling factor, N = alpha * nbar");
    cmd.add_option("--nbar", f.nbar, "Calibration number N_bar = lambda_bar / u");
    cmd.add_option("--rescale-mode", f.rescale_mode, "paths | unit")
        ->check(CLI::IsMember({"paths", "unit"}))
        ->capture_default_str();
    cmd.add_option("--lc-curve", f.lc_curve, "Voltage-birefringence CSV (voltage_v,delta_n)");
    cmd.add_option("--lc-thickness-um", f.lc_thickness_um, "Liquid-crystal cell thickness")
        ->capture_default_str();
    cmd.add_option("--lc-max-birefringence", f.lc_max_birefringence,
                   "Zero-voltage birefringence of the cell")
        ->capture_default_str();
    cmd.add_option("--lc-dispersion-b", f.lc_dispersion_b, "Cauchy dispersion coefficient, nm^2")
        ->capture_default_str();
    cmd.add_option("--subset-size", f.subset_size, "Keep M' randomly chosen terms");
    cmd.add_option("--seed", f.seed, "Seed for the random subset")->capture_default_str();
    cmd.add_option("--out-spectrum", f.out_spectrum, "Spectrum CSV output path");
    cmd.add_option("--out-report", f.out_report, "Report JSON output path");
    cmd.add_flag("--timing", f.timing, "Record runtime_ms in the report");
}

FactorizeOptions to_options(const RunFlags& f)
{
    FactorizeOptions o;
    if (f.alpha.has_value() != f.nbar.has_value())
        throw UsageError("--alpha and --nbar must be given together");
    if (f.alpha) {
        o.rescale = RescaleOptions{*f.nbar, *f.alpha,
                                   f.rescale_mode == "unit" ? RescaleMode::scale_unit
                                                            : RescaleMode::scale_paths};
        const std::uint64_t target = rescaled_target(*f.nbar, *f.alpha);
        if (f.n != 0 && f.n != target)
            throw UsageError("--n " + std::to_string(f.n) + " differs from alpha * nbar = " +
                             std::to_string(target));
        o.n = target;
    } else {
        if (f.n == 0)
            throw UsageError("--n is required");
        o.n = f.n;
    }
    o.j = f.j;
    if (f.m != "auto") {
        try {
            std::size_t used = 0;
            o.m = std::stoi(f.m, &used);
            if (used != f.m.size())
                throw std::invalid_argument(f.m);
        } catch (const std::logic_error&) {
            throw UsageError("--m expects an integer or 'auto', got '" + f.m + "'");
        }
    }
    o.safety = f.safety;
    o.unit = UnitLength(f.unit_nm);
    o.threshold = f.threshold;
    o.samples_per_unit = f.samples_per_unit;

    if (f.backend == "liquid-crystal") {
        if (f.lc_curve.empty())
            throw UsageError("--backend liquid-crystal requires --lc-curve");
        o.backend.kind = BackendKind::liquid_crystal;
        o.backend.curve = read_curve_csv(std::filesystem::path(f.lc_curve));
        o.backend.cell.thickness_um = f.lc_thickness_um;
        o.backend.cell.max_birefringence = f.lc_max_birefringence;
        o.backend.cell.dispersion_b_nm2 = f.lc_dispersion_b;
    } else {
        if (!f.lc_curve.empty())
            throw UsageError("--lc-curve is only valid with --backend liquid-crystal");
        o.backend.kind = f.backend == "michelson" ? BackendKind::michelson : BackendKind::ideal;
    }

    if (f.source != "flat" || !f.band.empty()) {
        const SourceModel base = f.band.empty()
                                     ? default_source(o.n)
                                     : [&] {
                                           const auto [lo, hi] = parse_pair(f.band, "--band");
                                           return SourceModel::flat(lo, hi);
                                       }();
        if (f.source == "flat") {
            o.source = base;
        } else if (f.source.rfind("gauss:", 0) == 0) {
            const auto [c, w] = parse_pair(f.source.substr(6), "--source");
            o.source = SourceModel::gaussian(base.band_lo, base.band_hi, c, w);
        } else {
            throw UsageError("--source expects 'flat' or 'gauss:center,width', got '" +
                             f.source + "'");
        }
    }
    if (f.subset_size)
        o.subset = SubsetOptions{*f.subset_size, f.seed};
    return o;
}

void print_plan(const MeasurementPlan& plan, std::ostream& out)
{
    out << "windows " << plan.count() << " resolution " << g17(plan.resolution) << "\n";
    for (const auto& [lo, hi] : plan.windows)
        out << g17(lo) << " " << g17(hi) << "\n";
}

int run_factor(const RunFlags& f, bool spectrum_only, std::ostream& out, std::ostream& err)
{
    const FactorizeOptions opts = to_options(f);
    if (f.window) {
        const double hi = static_cast<double>(isqrt(opts.n)) + 0.5;
        const MeasurementPlan plan = plan_measurements(2.0, std::max(hi, 2.5), *f.window, f.resolution);
        err << "measurement plan: " << plan.count() << " window(s) of <= " << g17(*f.window)
            << "u at resolution " << g17(f.resolution) << "u\n";
    } else if (f.resolution > 1.0) {
        plan_measurements(2.0, 3.0, 1.0, f.resolution);
    }

    const FactorReport report = factorize(opts);
    if (spectrum_only) {
        if (f.out_spectrum.empty())
            out << format_spectrum(report.spectrum);
        else
            write_spectrum(report.spectrum, f.out_spectrum);
        return kOk;
    }

    if (!f.out_spectrum.empty())
        write_spectrum(report.spectrum, f.out_spectrum);
    if (!f.out_report.empty())
        write_report(report, f.out_report, f.timing);

    out << "N = " << report.n << "  j = " << report.j << "  M = " << report.m
        << "  backend = " << report.backend << "\n";
    for (const auto& [ell, co] : report.verified_factors)
        out << ell << " " << co << "\n";
    if (report.verified_factors.empty())
        out << "no factors in [2, sqrt N]\n";
    if (!report.coverage_complete)
        err << "warning: scan did not cover every trial factor in [2, sqrt N]\n";
    for (const auto& d : report.candidates.diagnostics)
        err << "note: " << d << "\n";
    err << "runtime " << g17(report.runtime_ms) << " ms\n";
    return kOk;
}

} // namespace

std::string format_spectrum(const Spectrum& s)
{
    std::string text = kSpectrumHeader;
    text += '\n';
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        text += g17(s.lambda_over_u[i]);
        text += ',';
        text += g17(s.source_intensity[i]);
        text += ',';
        text += g17(s.output_intensity[i]);
        text += ',';
        text += s.measurable(i) ? g17(s.sum_magnitude_sq[i]) : std::string("NA");
        text += '\n';
    }
    return text;
}

Spectrum parse_spectrum(std::istream& in, double floor)
{
    std::string line;
    if (!std::getline(in, line) || line != kSpectrumHeader)
        throw FormatError(std::string("spectrum CSV must start with header '") + kSpectrumHeader +
                          "'");
    std::vector<std::array<double, 4>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::array<double, 4> row{};
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= 4)
                throw FormatError("spectrum line " + std::to_string(lineno) + ": too many columns");
            if (col == 3 && cell == "NA") {
                row[3] = std::numeric_limits<double>::quiet_NaN();
            } else {
                try {
                    std::size_t used = 0;
                    row[static_cast<std::size_t>(col)] = std::stod(cell, &used);
                    if (used != cell.size())
                        throw std::invalid_argument(cell);
                } catch (const std::logic_error&) {
                    throw FormatError("spectrum line " + std::to_string(lineno) +
                                      ": cannot parse '" + cell + "'");
                }
            }
            ++col;
        }
        if (col != 4)
            throw FormatError("spectrum line " + std::to_string(lineno) + ": expected 4 columns");
        rows.push_back(row);
    }
    Spectrum s;
    s.floor = floor;
    s.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        s.lambda_over_u[k] = rows[i][0];
        s.source_intensity[k] = rows[i][1];
        s.output_intensity[k] = rows[i][2];
        s.sum_magnitude_sq[k] = rows[i][3];
    }
    return s;
}

Spectrum read_spectrum(const std::filesystem::path& path, double floor)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open spectrum file " + path.string());
    return parse_spectrum(in, floor);
}

std::string format_report(const FactorReport& r, bool include_timing)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["j"] = r.j;
    j["m"] = r.m;
    j["unit_nm"] = r.unit_nm;
    j["backend"] = r.backend;
    j["threshold"] = r.threshold;
    auto candidates = nlohmann::ordered_json::array();
    for (const Peak& p : r.candidates.peaks) {
        nlohmann::ordered_json c;
        c["lambda_over_u"] = p.lambda_over_u;
        c["magnitude_sq"] = p.magnitude_sq;
        c["nearest_integer"] = p.nearest_integer;
        c["distance"] = p.distance;
        candidates.push_back(std::move(c));
    }
    j["candidates"] = std::move(candidates);
    auto verified = nlohmann::ordered_json::array();
    for (const auto& [ell, co] : r.verified_factors)
        verified.push_back({ell, co});
    j["verified_factors"] = std::move(verified);
    j["unverified"] = r.unverified;
    j["coverage_complete"] = r.coverage_complete;
    j["runtime_ms"] = include_timing ? nlohmann::ordered_json(r.runtime_ms) : nlohmann::ordered_json();
    if (!r.subset.empty())
        j["subset"] = r.subset;
    return j.dump(2) + "\n";
}

void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at " + path.string());
    }
}

void write_spectrum(const Spectrum& s, const std::filesystem::path& path)
{
    atomic_write(path, format_spectrum(s));
}

void write_report(const FactorReport& r, const std::filesystem::path& path, bool include_timing)
{
    atomic_write(path, format_report(r, include_timing));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulated interferometric factorization via truncated exponential sums",
                 "interfact"};
    app.set_version_flag("--version", std::string("interfact ") + kVersion);
    app.require_subcommand(1);

    RunFlags factor_flags;
    auto* factor = app.add_subcommand("factor", "Find the factors of N in one simulated run");
    add_run_flags(*factor, factor_flags);

    RunFlags spectrum_flags;
    auto* spectrum = app.add_subcommand("spectrum", "Write the simulated spectrum as CSV");
    add_run_flags(*spectrum, spectrum_flags);

    std::uint64_t plan_n = 0;
    std::string plan_range;
    double plan_window = 0.0;
    double plan_resolution = 1.0;
    auto* plan = app.add_subcommand("plan", "Split a scan range into spectrometer windows");
    plan->add_option("--n", plan_n, "Cover the trial factors [2, sqrt N + 1/2] of N");
    plan->add_option("--range", plan_range, "Explicit range lo,hi in units of u");
    plan->add_option("--window", plan_window, "Instrument window width in units of u")->required();
    plan->add_option("--resolution", plan_resolution, "Resolution in units of u")
        ->capture_default_str();

    std::uint64_t oracle_n = 0;
    auto* oracle = app.add_subcommand("oracle", "Divisors in [2, sqrt N] by trial division");
    oracle->add_option("--n", oracle_n, "Number to factor")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*factor)
            return run_factor(factor_flags, false, out, err);
        if (*spectrum)
            return run_factor(spectrum_flags, true, out, err);
        if (*plan) {
            double lo = 2.0, hi = 0.0;
            if (!plan_range.empty()) {
                std::tie(lo, hi) = parse_pair(plan_range, "--range");
            } else if (plan_n >= 4) {
                hi = static_cast<double>(isqrt(plan_n)) + 0.5;
            } else {
                throw UsageError("plan needs --range or --n >= 4");
            }
            print_plan(plan_measurements(lo, hi, plan_window, plan_resolution), out);
            return kOk;
        }
        if (*oracle) {
            for (const auto& [ell, co] : trial_division_oracle(oracle_n))
                out << ell << " " << co << "\n";
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

} // namespace interfact::cli
