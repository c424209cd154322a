#pragma once

#include <stdexcept>
#include <string>

namespace rugose {

enum class Errc {
  NonPositiveProfile,
  InvalidEpsilon,
  UnderResolved,
  UnsupportedMode,
  NonPositiveDensity,
  NoConvergence,
  WeightDegenerate,
  NonPositiveData,
  EmptySeries,
  ConfigError,
  InvalidArgument,
  IoError,
};

/// All library failures are thrown as Error (or a subclass) carrying an Errc.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(int iterations, double residual, const std::string& what)
      : Error(Errc::NoConvergence, what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

class NonPositiveDensityError : public Error {
 public:
  NonPositiveDensityError(double t, const std::string& what)
      : Error(Errc::NonPositiveDensity, what), t(t) {}
  double t;  // simulation time at failure
};

/// True for failures caused by bad configuration rather than by the numerics.
inline bool is_config_error(Errc c) {
  switch (c) {
    case Errc::ConfigError:
    case Errc::InvalidEpsilon:
    case Errc::InvalidArgument:
    case Errc::NonPositiveProfile:
    case Errc::UnderResolved:
    case Errc::UnsupportedMode:
    case Errc::NonPositiveData:
    case Errc::EmptySeries:
    case Errc::IoError:
      return true;
    default:
      return false;
  }
}

}  // namespace rugose
