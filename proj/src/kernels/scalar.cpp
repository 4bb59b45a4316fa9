#include "mlcd/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace mlcd::kernels::scalar {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double l1_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

void affine(std::span<double> x, double a, double b) {
  for (double& v : x) v = a * v + b;
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = a.offsets.size() - 1;
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::uint32_t k = a.offsets[r]; k < a.offsets[r + 1]; ++k) {
      acc += a.values[k] * x[a.columns[k]];
    }
    y[r] = acc;
  }
}

}  // namespace mlcd::kernels::scalar
