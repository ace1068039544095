#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>

namespace ipress {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Neumaier-compensated running sum. Addition order is the caller's; results
/// are reproducible for a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Accumulates log(sum exp(x_i)) without overflow. Rescales when a larger
/// exponent arrives; the scaled mantissa is summed with compensation.
class LogSumExp {
 public:
  void add(double log_term) noexcept {
    if (log_term == -kInf) return;
    if (log_term == kInf) {
      max_ = kInf;
      return;
    }
    if (max_ == kInf) return;
    if (log_term > max_) {
      if (max_ != -kInf) {
        const double scale = std::exp(max_ - log_term);
        CompensatedSum rescaled;
        rescaled.add(sum_.value() * scale);
        sum_ = rescaled;
      }
      max_ = log_term;
    }
    sum_.add(std::exp(log_term - max_));
  }

  /// log of the accumulated sum; -inf when empty.
  double value() const noexcept {
    if (max_ == -kInf || max_ == kInf) return max_;
    return max_ + std::log(sum_.value());
  }

  bool empty() const noexcept { return max_ == -kInf; }

 private:
  double max_ = -kInf;
  CompensatedSum sum_;
};

/// Outcome of a monotone threshold search.
struct ThresholdSearch {
  enum class Status { Found, AlwaysPositive, NeverPositive };
  Status status = Status::Found;
  double value = 0.0;  ///< threshold estimate when Found
  double lower = 0.0;  ///< g(lower) > 0
  double upper = 0.0;  ///< g(upper) <= 0
  int evaluations = 0;
  int expansions = 0;
};

struct ThresholdOptions {
  double center = 0.0;
  double radius = 1.0;
  double tolerance = 1e-10;
  int max_expansions = 60;
  int max_iterations = 400;
};

/// Locates inf{x : g(x) <= 0} for a nonincreasing g, which may be +-inf on
/// parts of the line. The initial bracket [center - radius, center + radius]
/// is expanded geometrically until it straddles the threshold, then refined by
/// Illinois regula falsi guarded with bisection.
ThresholdSearch find_threshold(const std::function<double(double)>& g,
                               const ThresholdOptions& options);

/// Formats an extended real: finite values with full precision, otherwise
/// "+inf" / "-inf".
std::string format_extended(double x);

}  // namespace ipress
