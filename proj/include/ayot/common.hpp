#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace ayot {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Declared evaluation window. All black-box coefficient functions are only
/// trusted on [lo, hi]; quadratures and validations sample within it.
struct Window {
  double lo = -kInf;
  double hi = kInf;
  bool contains(double z) const { return z >= lo && z <= hi; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// A numerical routine failed to converge. Carries the point where the
/// computation was abandoned so callers can report truncation diagnostics.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_ = 0;
};

/// An evaluation was requested outside the declared window (e.g. the outer
/// integral wants to run past the truncated eigenfunction domain).
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Function of the running maximum, defined on [x0, inf). Affine functionals
/// (constant tax, drawdown, relative drawdown) keep slope/intercept explicit
/// so simulation hot loops avoid std::function dispatch.
struct MaxFunctional {
  double slope = 0.0;
  double intercept = 0.0;
  RealFn fn;  // used when !affine
  bool affine = true;

  double operator()(double u) const { return affine ? slope * u + intercept : fn(u); }

  static MaxFunctional zero() { return {}; }
  /// k * (u - x0)
  static MaxFunctional linear(double k, double x0) {
    MaxFunctional m;
    m.slope = k;
    m.intercept = -k * x0;
    return m;
  }
  static MaxFunctional of(RealFn f) {
    MaxFunctional m;
    m.affine = false;
    m.fn = std::move(f);
    return m;
  }
};

/// log(1 - exp(-d)) for d >= 0, accurate near both ends.
inline double log1mexp(double d) {
  return d > 0.6931471805599453 ? std::log1p(-std::exp(-d)) : std::log(-std::expm1(-d));
}

}  // namespace ayot
