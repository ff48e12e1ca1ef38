#pragma once

#include "interfact/pipeline.hpp"
#include "interfact/spectro.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace interfact::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes of run().
enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// CSV: `lambda_over_u,source_intensity,output_intensity,sum_magnitude_sq`,
/// 17 significant digits, `NA` where |A|^2 is unmeasurable.
std::string format_spectrum(const Spectrum& s);
Spectrum parse_spectrum(std::istream& in, double floor = kDefaultSourceFloor);
Spectrum read_spectrum(const std::filesystem::path& path, double floor = kDefaultSourceFloor);

/// Report JSON with keys in fixed order; runtime_ms is null unless timing is requested.
std::string format_report(const FactorReport& r, bool include_timing = false);

/// Writes through a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

void write_spectrum(const Spectrum& s, const std::filesystem::path& path);
void write_report(const FactorReport& r, const std::filesystem::path& path,
                  bool include_timing = false);

/// Command-line entry point; subcommands factor, spectrum, plan and oracle.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace interfact::cli
