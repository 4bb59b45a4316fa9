#include <doctest.h>

#include <vector>

#include "mlcd/kernels.hpp"
#include "mlcd/random.hpp"

using namespace mlcd;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01() * 2.0 - 0.5;
  return v;
}

struct RandomCsr {
  std::vector<std::uint32_t> offsets{0}, columns;
  std::vector<double> values;

  kernels::CsrView view() const { return {offsets, columns, values}; }
};

RandomCsr random_csr(std::size_t rows, std::size_t cols, Rng& rng) {
  RandomCsr m;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t len = rng.uniform_index(13);
    for (std::size_t k = 0; k < len; ++k) {
      m.columns.push_back(static_cast<std::uint32_t>(rng.uniform_index(cols)));
      m.values.push_back(rng.uniform01());
    }
    m.offsets.push_back(static_cast<std::uint32_t>(m.columns.size()));
  }
  return m;
}

}  // namespace

TEST_CASE("scalar kernels on hand values") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> y{1.0, 0.0, 5.0, 4.0, 2.0};
  CHECK(kernels::scalar::sum(x) == 15.0);
  CHECK(kernels::scalar::l1_distance(x, y) == 7.0);
  std::vector<double> z = x;
  kernels::scalar::affine(z, 2.0, 1.0);
  CHECK(z == std::vector<double>{3.0, 5.0, 7.0, 9.0, 11.0});

  // [[1 0 2], [0 0 0], [0 3 0]] * [1 2 3]
  const std::vector<std::uint32_t> off{0, 2, 2, 3}, col{0, 2, 1};
  const std::vector<double> val{1.0, 2.0, 3.0}, v{1.0, 2.0, 3.0};
  std::vector<double> out(3, -1.0);
  kernels::scalar::spmv({off, col, val}, v, out);
  CHECK(out == std::vector<double>{7.0, 0.0, 6.0});
}

TEST_CASE("dispatch selects an available variant") {
  CHECK(kernels::isa_available(kernels::Isa::Scalar));
  CHECK(kernels::isa_available(kernels::active_isa()));
  const auto before = kernels::active_isa();
  REQUIRE(kernels::select_isa(kernels::Isa::Scalar));
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  const std::vector<double> x{0.25, 0.5};
  CHECK(kernels::sum(x) == 0.75);
  kernels::select_isa(before);
}

#if defined(MLCD_HAVE_AVX2)
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kernels::isa_available(kernels::Isa::Avx2)) {
    MESSAGE("CPU lacks AVX2/FMA; skipping equivalence checks");
    return;
  }
  Rng rng(2024);
  for (std::size_t n = 0; n < 70; ++n) {
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    CHECK(kernels::avx2::sum(x) == doctest::Approx(kernels::scalar::sum(x)).epsilon(1e-12));
    CHECK(kernels::avx2::l1_distance(x, y) ==
          doctest::Approx(kernels::scalar::l1_distance(x, y)).epsilon(1e-12));
    auto a = x, b = x;
    kernels::avx2::affine(a, 0.85, 0.0375);
    kernels::scalar::affine(b, 0.85, 0.0375);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
  }
  for (int round = 0; round < 20; ++round) {
    const std::size_t rows = 1 + rng.uniform_index(60), cols = 1 + rng.uniform_index(60);
    const auto m = random_csr(rows, cols, rng);
    const auto x = random_vector(cols, rng);
    std::vector<double> ys(rows), yv(rows);
    kernels::scalar::spmv(m.view(), x, ys);
    kernels::avx2::spmv(m.view(), x, yv);
    for (std::size_t r = 0; r < rows; ++r) CHECK(yv[r] == doctest::Approx(ys[r]).epsilon(1e-12));
  }
}
#endif
