#include <doctest.h>

#include <vector>

#include "gwk/numerics.hpp"

using namespace gwk;

TEST_CASE("compensated sum recovers cancelled terms") {
  CHECK(compensated_sum({1e16, 1.0, -1e16}) == 1.0);
  std::vector<double> xs(1000, 0.1);
  CHECK(compensated_sum(std::span<const double>(xs)) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("line fits") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
  const LineFit f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  const std::vector<double> xl{0, 1, 2}, yl{1, 3, 5};
  CHECK(fit_line(xl, yl).slope == doctest::Approx(2.0));
}
