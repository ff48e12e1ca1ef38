// Acceptance suite: one PASS/FAIL line per criterion.

#include "interfact/backend_lc.hpp"
#include "interfact/backend_michelson.hpp"
#include "interfact/cli.hpp"
#include "interfact/errors.hpp"
#include "interfact/pipeline.hpp"
#include "interfact/spectro.hpp"
#include "interfact/sumcore.hpp"

#include "oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace interfact;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int k, const std::string& title, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("[%s] criterion %d: %s -- %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k, title.c_str(),
                o.detail.c_str(), s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LcCurve synthetic_curve()
{
    return load_curve({{0.0, 0.30}, {1.0, 0.28}, {2.0, 0.21}, {3.0, 0.12}, {4.0, 0.05}, {6.0, 0.0}});
}

Outcome exact_sums()
{
    const SumParams p{15, 2, 3, {}};
    const double a3 = eval_full_sum(p, 3.0).magnitude_sq;
    const double a2 = std::abs(eval_full_sum(p, 2.0).amplitude);
    const double a4 = eval_full_sum(p, 4.0).magnitude_sq;
    double worst = std::max({std::abs(a3 - 1.0), a2, std::abs(a4 - 0.5)});
    for (double ell : {2.0, 3.0, 4.0})
        worst = std::max(worst, std::abs(eval_full_sum(p, ell).amplitude - oracle::full_sum(15, 2, 3, ell)));
    return {worst <= 1e-12, "|A(3)|^2=" + fmt("%.17g", a3) + " |A(2)|=" + fmt("%.3g", a2) +
                                " |A(4)|^2=" + fmt("%.17g", a4) + " max err " + fmt("%.2e", worst)};
}

Outcome factor_exactness()
{
    double worst = 0.0;
    long checked = 0;
    for (int j : {2, 3, 4}) {
        for (std::uint64_t n = 4; n <= 10000; ++n) {
            const SumParams p{n, j, auto_truncation(n, j), {}};
            for (std::uint64_t ell = 2; ell * ell <= n; ++ell) {
                if (n % ell)
                    continue;
                const double mag = std::abs(eval_reduced_sum(p, static_cast<double>(ell)).amplitude);
                worst = std::max(worst, std::abs(mag - 1.0));
                ++checked;
            }
        }
    }
    return {worst <= 1e-10, std::to_string(checked) + " divisor evaluations, max | |A|-1 | = " +
                                fmt("%.2e", worst)};
}

struct EndToEnd {
    long mismatches = 0;
    long false_negatives = 0;
    std::uint64_t first_bad = 0;
};

EndToEnd end_to_end(int j)
{
    EndToEnd r;
    for (std::uint64_t n = 4; n <= 10000; ++n) {
        FactorizeOptions o;
        o.n = n;
        o.j = j;
        const auto report = factorize(o);
        const auto truth = oracle::small_divisors(n);
        if (report.verified_factors != truth) {
            if (!r.mismatches)
                r.first_bad = n;
            ++r.mismatches;
        }
        std::set<std::int64_t> snapped;
        for (const auto& p : report.candidates.peaks)
            snapped.insert(p.nearest_integer);
        for (const auto& [ell, co] : truth)
            if (!snapped.count(static_cast<std::int64_t>(ell)))
                ++r.false_negatives;
    }
    return r;
}

Outcome end_to_end_outcome(int j)
{
    const auto r = end_to_end(j);
    std::string d = "j=" + std::to_string(j) + ": " + std::to_string(r.mismatches) +
                    " mismatches, " + std::to_string(r.false_negatives) + " false negatives over N in [4, 10000]";
    if (r.mismatches)
        d += " (first N=" + std::to_string(r.first_bad) + ")";
    return {r.mismatches == 0 && r.false_negatives == 0, d};
}

Outcome resource_reduction()
{
    const int m2 = auto_truncation(10000, 2);
    const int m4 = auto_truncation(10000, 4);
    const auto r = end_to_end_outcome(4);
    return {m2 == 10 && m4 == 4 && r.pass,
            "auto-M(10^4): j=2 -> " + std::to_string(m2) + ", j=4 -> " + std::to_string(m4) + "; " + r.detail};
}

Outcome backend_equivalence()
{
    std::mt19937_64 rng(20240);
    const auto curve = synthetic_curve();
    double worst_mich = 0.0, worst_lc = 0.0;
    for (int c = 0; c < 50; ++c) {
        const std::uint64_t n = 4 + rng() % 1997;
        const int j = 2 + static_cast<int>(rng() % 2);
        const auto ps = required_paths(n, j, auto_truncation(n, j), UnitLength(1.0));
        const auto grid = build_scan_grid(n, kDefaultSamplesPerUnit, default_source(n));
        const auto source = default_source(n);

        const auto ideal = simulate_spectrum(ps, grid, source);
        const auto mich = simulate_spectrum(mirror_positions(ps), grid, source);
        LcCell cell;
        cell.thickness_um = 1.1 * ps.paths()[ps.size() - 1] / 0.30 / 1e3;
        const LcBackend lc{solve_voltages(ps, cell, curve), cell};
        const auto lcs = simulate_spectrum(lc, grid, source);
        worst_mich = std::max(worst_mich, (mich.output_intensity - ideal.output_intensity).abs().maxCoeff());
        worst_lc = std::max(worst_lc, (lcs.output_intensity - ideal.output_intensity).abs().maxCoeff());
    }
    return {worst_mich <= 1e-12 && worst_lc <= 1e-9,
            "50 configurations; michelson max dev " + fmt("%.2e", worst_mich) + ", liquid-crystal max dev " +
                fmt("%.2e", worst_lc)};
}

Outcome rescaling()
{
    FactorizeOptions o;
    o.rescale = RescaleOptions{100, 2.21, RescaleMode::scale_paths};
    const auto scaled = factorize(o);
    FactorizeOptions d;
    d.n = 221;
    const auto direct = factorize(d);
    const std::vector<Divisor> want{{13, 17}};
    return {scaled.n == 221 && scaled.verified_factors == want && direct.verified_factors == want,
            "N=" + std::to_string(scaled.n) + ", rescaled " + std::to_string(scaled.verified_factors.size()) +
                " factor(s), direct " + std::to_string(direct.verified_factors.size())};
}

Outcome lc_feasibility()
{
    LcCell cell;  // 8.08 um, 0.30
    const auto curve = synthetic_curve();
    bool named = false;
    try {
        Eigen::VectorXd t(3);
        t << 500.0, 2000.0, 2425.0;
        solve_voltages(PathSet(UnitLength(1.0), t), cell, curve);
    } catch (const FeasibilityError& e) {
        named = e.index() == 3 && std::string(e.what()).find("m=3") != std::string::npos;
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1.0, 2424.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        Eigen::VectorXd t(1);
        t[0] = u(rng);
        const auto cfg = solve_voltages(PathSet(UnitLength(1.0), t), cell, curve);
        const double back = curve.birefringence(cfg.voltages[0]) * cell.thickness_nm();
        worst = std::max(worst, std::abs(back - t[0]) / t[0]);
    }
    return {named && worst <= 1e-9, std::string("2425 nm rejected naming m=3: ") + (named ? "yes" : "no") +
                                        "; 500 round trips, max rel err " + fmt("%.2e", worst)};
}

Outcome localization()
{
    std::string d;
    bool pass = true;
    bool all_factors_seen = true;
    for (std::uint64_t n : {15u, 35u, 77u, 221u}) {
        FactorizeOptions o;
        o.n = n;
        const auto r = factorize(o);
        const auto truth = oracle::small_divisors(n);
        d += "N=" + std::to_string(n) + ":";
        for (const auto& p : r.candidates.peaks) {
            double nearest = 1e300;
            for (const auto& [ell, co] : truth)
                nearest = std::min(nearest, std::abs(p.lambda_over_u - static_cast<double>(ell)));
            const bool ok = nearest <= 0.5;
            pass = pass && ok;
            d += " " + fmt("%g", p.lambda_over_u) + (ok ? "" : "(off-factor)");
        }
        for (const auto& [ell, co] : truth) {
            bool seen = false;
            for (const auto& p : r.candidates.peaks)
                seen = seen || std::abs(p.lambda_over_u - static_cast<double>(ell)) <= 0.5;
            all_factors_seen = all_factors_seen && seen;
        }
        d += "; ";
    }
    d += std::string("every true factor has a peak within 0.5u: ") + (all_factors_seen ? "yes" : "no");
    return {pass && all_factors_seen, d};
}

Outcome planning()
{
    const auto plan = plan_measurements(2.0, 102.0, 10.0);
    bool tiles = plan.count() == 10 && plan.windows.front().first == 2.0 && plan.windows.back().second == 102.0;
    for (std::size_t i = 1; i < plan.windows.size(); ++i)
        tiles = tiles && plan.windows[i].first == plan.windows[i - 1].second;
    bool rejected = false;
    try {
        plan_measurements(2.0, 102.0, 10.0, 2.0);
    } catch (const ResolutionError&) {
        rejected = true;
    }
    return {tiles && rejected, std::to_string(plan.count()) + " windows covering [2, 102]; resolution 2u rejected: " +
                                   (rejected ? "yes" : "no")};
}

Outcome determinism()
{
    const fs::path dir = fs::temp_directory_path() / "interfact_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    bool same = true;
    int runs = 0;
    for (const std::string extra : {"--n 9991", "--n 9991 --m 20 --subset-size 12 --seed 77",
                                    "--alpha 2.21 --nbar 100 --backend michelson"}) {
        std::string blobs[2];
        for (int k = 0; k < 2; ++k) {
            const auto rep = dir / ("r" + std::to_string(k) + ".json");
            const auto spec = dir / ("s" + std::to_string(k) + ".csv");
            const std::string cmd = std::string(INTERFACT_CLI_PATH) + " factor " + extra + " --out-report " +
                                    rep.string() + " --out-spectrum " + spec.string() + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0)
                return {false, "command failed: " + cmd};
            blobs[k] = slurp(rep) + "\x1f" + slurp(spec);
            ++runs;
        }
        same = same && blobs[0] == blobs[1] && blobs[0].size() > 100;
    }
    fs::remove_all(dir);
    return {same, std::to_string(runs) + " CLI runs; report JSON and spectrum CSV byte-identical per flag set"};
}

} // namespace

int main()
{
    criterion(1, "exact sum values for N=15, j=2, M=3", exact_sums);
    criterion(2, "factor-case exactness, N <= 10^4, j in {2,3,4}", factor_exactness);
    criterion(3, "end-to-end oracle equality, j=2", [] { return end_to_end_outcome(2); });
    criterion(4, "resource reduction with higher order", resource_reduction);
    criterion(5, "backend equivalence", backend_equivalence);
    criterion(6, "rescaling N_bar=100, alpha=2.21", rescaling);
    criterion(7, "liquid-crystal feasibility, d=8.08 um, max dn=0.30", lc_feasibility);
    criterion(8, "peak localization within 0.5u of a factor", localization);
    criterion(9, "measurement planning", planning);
    criterion(10, "determinism through the CLI", determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
