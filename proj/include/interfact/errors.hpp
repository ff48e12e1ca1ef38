#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace interfact {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid input values (N < 2, j < 2, non-positive wavelength, ...).
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// An exact integer quantity (m^j * N) does not fit the 64-bit range.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file or record list.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Voltage-birefringence curve without a usable monotone branch.
class CurveError : public Error {
  public:
    using Error::Error;
};

/// A target optical path lies outside what a liquid-crystal region can produce.
class FeasibilityError : public Error {
  public:
    FeasibilityError(int index, double target_nm, double min_nm, double max_nm);

    int index() const noexcept { return index_; }
    double target_nm() const noexcept { return target_nm_; }
    double min_controllable_nm() const noexcept { return min_nm_; }
    double max_controllable_nm() const noexcept { return max_nm_; }

  private:
    int index_;
    double target_nm_;
    double min_nm_;
    double max_nm_;
};

/// The scan grid does not reach the requested trial factors.
class CoverageError : public Error {
  public:
    CoverageError(double uncovered_lo, double uncovered_hi);

    double uncovered_lo() const noexcept { return lo_; }
    double uncovered_hi() const noexcept { return hi_; }

  private:
    double lo_;
    double hi_;
};

/// Spectrometer resolution coarser than one unit of length.
class ResolutionError : public Error {
  public:
    using Error::Error;
};

/// Rescaled wavelengths fall outside the source band.
class RangeError : public Error {
  public:
    using Error::Error;
};

} // namespace interfact
