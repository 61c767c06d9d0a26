#ifndef STARKWG_LINEFIT_HPP
#define STARKWG_LINEFIT_HPP

#include <cstddef>
#include <vector>

#include "starkwg/errors.hpp"

namespace starkwg {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

// Ordinary least squares y = intercept + slope * x.
inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_line: need two or more matched samples");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error("fit_line: abscissae are all identical");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.n = static_cast<int>(n);
  if (syy == 0.0) {
    // All ordinates equal: the flat line is exact.
    f.r_squared = 1.0;
  } else {
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (f.intercept + f.slope * x[i]);
      ss_res += e * e;
    }
    f.r_squared = 1.0 - ss_res / syy;
  }
  return f;
}

}  // namespace starkwg

#endif
