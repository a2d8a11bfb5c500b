#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "argmle/common.hpp"

namespace argmle {

enum class NoiseKind { White, MA1, AR1, FGN, Custom };

/// A stationary Gaussian noise law described through its autocorrelation
/// sequence rho, normalized so that rho(0) = 1.
///
/// Built-in laws:
///   White  : rho(n) = 0 for n >= 1
///   MA1(a) : xi_{n+1} = (eps_{n+1} + a * eps_n) / sqrt(1 + a^2),
///            rho(1) = a / (1 + a^2), rho(n) = 0 for n >= 2
///   AR1(a) : xi_{n+1} = sqrt(1 - a^2) * eps_{n+1} + a * xi_n (stationary),
///            rho(n) = a^n
///   FGN(H) : increments of fractional Brownian motion with Hurst index H,
///            rho(n) = ((n+1)^{2H} - 2 n^{2H} + (n-1)^{2H}) / 2
///   Custom : a user-supplied finite sequence, zero beyond its length
struct NoiseModel {
  NoiseKind kind = NoiseKind::White;
  double alpha = 0.0;            // MA1 / AR1 parameter
  double hurst = 0.5;            // FGN parameter
  std::vector<double> rho;       // Custom sequence, rho[0] == 1

  static NoiseModel white() { return NoiseModel{}; }
  static NoiseModel ma1(double a) {
    NoiseModel m;
    m.kind = NoiseKind::MA1;
    m.alpha = a;
    return m;
  }
  static NoiseModel ar1(double a) {
    NoiseModel m;
    m.kind = NoiseKind::AR1;
    m.alpha = a;
    return m;
  }
  static NoiseModel fgn(double h) {
    NoiseModel m;
    m.kind = NoiseKind::FGN;
    m.hurst = h;
    return m;
  }
  static NoiseModel custom(std::vector<double> r) {
    NoiseModel m;
    m.kind = NoiseKind::Custom;
    m.rho = std::move(r);
    return m;
  }

  std::string description() const {
    std::ostringstream os;
    switch (kind) {
      case NoiseKind::White: os << "white"; break;
      case NoiseKind::MA1: os << "ma1:" << alpha; break;
      case NoiseKind::AR1: os << "ar1:" << alpha; break;
      case NoiseKind::FGN: os << "fgn:" << hurst; break;
      case NoiseKind::Custom: os << "custom[" << rho.size() << " lags]"; break;
    }
    return os.str();
  }
};

/// Autocorrelation of fractional Gaussian noise at integer lag n >= 0.
///
/// The textbook expression ((n+1)^{2H} - 2 n^{2H} + (n-1)^{2H}) / 2 is a
/// second difference of n -> n^{2H} and cancels catastrophically for large
/// n, so beyond a small lag it is evaluated through the binomial series
///   rho(n) = sum_{k>=1} C(2H, 2k) * n^{2H - 2k},
/// which carries full relative precision.
inline double fgn_autocorrelation(double hurst, std::int64_t n) {
  if (n == 0) return 1.0;
  const double two_h = 2.0 * hurst;
  const double x = static_cast<double>(n < 0 ? -n : n);
  if (x <= 8.0) {
    return 0.5 * (std::pow(x + 1.0, two_h) - 2.0 * std::pow(x, two_h) +
                  std::pow(x - 1.0, two_h));
  }
  // C(2H, 2k) built incrementally; terms fall off like x^{-2} per step.
  double binom = 1.0;
  double sum = 0.0;
  const double x2 = x * x;
  double power = std::pow(x, two_h - 2.0);
  for (int k = 1; k <= 40; ++k) {
    binom *= (two_h - (2 * k - 2)) / (2 * k - 1);
    binom *= (two_h - (2 * k - 1)) / (2 * k);
    const double term = binom * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    power /= x2;
  }
  return sum;
}

/// Field-by-field diagnostics for a noise model. Never throws; failures are
/// carried in the report.
struct ValidationReport {
  struct Item {
    std::string field;
    bool ok;
    std::string message;
  };
  bool ok = true;
  std::vector<Item> items;

  void add(const std::string& field, bool good, const std::string& message) {
    items.push_back({field, good, message});
    ok = ok && good;
  }
};

inline ValidationReport validate_model(const NoiseModel& model) {
  ValidationReport report;
  switch (model.kind) {
    case NoiseKind::White:
      report.add("kind", true, "white noise has no parameters");
      break;
    case NoiseKind::MA1:
      report.add("alpha", std::abs(model.alpha) < 1.0,
                 std::abs(model.alpha) < 1.0 ? "|alpha| < 1"
                                             : "|alpha| >= 1: MA(1) requires |alpha| < 1");
      break;
    case NoiseKind::AR1:
      report.add("alpha", std::abs(model.alpha) < 1.0,
                 std::abs(model.alpha) < 1.0 ? "|alpha| < 1"
                                             : "|alpha| >= 1: AR(1) requires |alpha| < 1");
      break;
    case NoiseKind::FGN:
      report.add("hurst", model.hurst > 0.0 && model.hurst < 1.0,
                 model.hurst > 0.0 && model.hurst < 1.0
                     ? "H in (0,1)"
                     : "H out of (0,1)");
      break;
    case NoiseKind::Custom: {
      const bool nonempty = !model.rho.empty();
      report.add("rho", nonempty, nonempty ? "sequence present" : "sequence empty");
      if (nonempty) {
        report.add("rho[0]", model.rho[0] == 1.0,
                   model.rho[0] == 1.0 ? "rho(0) = 1" : "rho(0) must equal 1");
        bool bounded = true;
        for (double r : model.rho) bounded = bounded && std::abs(r) <= 1.0;
        report.add("rho bounds", bounded,
                   bounded ? "|rho(n)| <= 1" : "|rho(n)| > 1 at some lag");
      }
      break;
    }
  }
  return report;
}

inline void throw_if_invalid(const NoiseModel& model) {
  const ValidationReport report = validate_model(model);
  if (report.ok) return;
  for (const auto& item : report.items) {
    if (!item.ok) throw validation_error("noise model: " + item.field + ": " + item.message);
  }
}

/// (rho(0), ..., rho(max_lag)) for the given law.
inline std::vector<double> covariance_sequence(const NoiseModel& model,
                                               std::int64_t max_lag) {
  if (max_lag < 0) throw validation_error("covariance_sequence: max_lag must be >= 0");
  throw_if_invalid(model);
  std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
  out[0] = 1.0;
  switch (model.kind) {
    case NoiseKind::White:
      break;
    case NoiseKind::MA1:
      if (max_lag >= 1) out[1] = model.alpha / (1.0 + model.alpha * model.alpha);
      break;
    case NoiseKind::AR1: {
      double r = 1.0;
      for (std::int64_t n = 1; n <= max_lag; ++n) {
        r *= model.alpha;
        out[static_cast<std::size_t>(n)] = r;
      }
      break;
    }
    case NoiseKind::FGN:
      for (std::int64_t n = 1; n <= max_lag; ++n)
        out[static_cast<std::size_t>(n)] = fgn_autocorrelation(model.hurst, n);
      break;
    case NoiseKind::Custom:
      for (std::int64_t n = 1; n <= max_lag; ++n)
        out[static_cast<std::size_t>(n)] =
            static_cast<std::size_t>(n) < model.rho.size() ? model.rho[static_cast<std::size_t>(n)] : 0.0;
      break;
  }
  return out;
}

}  // namespace argmle
