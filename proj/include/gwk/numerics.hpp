#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

namespace gwk {

// Neumaier compensated accumulator
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::initializer_list<double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// least squares y = a + b x
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// fit on log(x), log(y); entries with y <= 0 are dropped
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

// (e^z - 1)/z with a series near 0
inline double phi1(double z) {
  if (std::abs(z) < 1e-6) return 1.0 + z * (0.5 + z / 6.0);
  return std::expm1(z) / z;
}

// phi1(b + h) - phi1(b) without cancellation when h is small against b
inline double phi1_diff(double b, double h) {
  const double a = b + h;
  if (std::abs(b) < 0.1 && std::abs(a) < 0.1) {
    // sum_j (a^j - b^j)/(j+1)!, with a^j - b^j = h sum_i a^i b^(j-1-i)
    double total = 0.0, fact = 1.0, pa = 1.0;
    std::array<double, 16> pb{};
    pb[0] = 1.0;
    for (int j = 1; j < 16; ++j) pb[j] = pb[j - 1] * b;
    for (int j = 1; j < 15; ++j) {
      fact *= (j + 1);
      double s = 0.0;
      pa = 1.0;
      for (int i = 0; i < j; ++i) {
        s += pa * pb[j - 1 - i];
        pa *= a;
      }
      total += s / fact;
    }
    return h * total;
  }
  if (b == 0.0) return phi1(a) - 1.0;
  // b e^b expm1(h) - h expm1(b), over b (b + h)
  return (b * std::exp(b) * std::expm1(h) - h * std::expm1(b)) / (b * a);
}

}  // namespace gwk
