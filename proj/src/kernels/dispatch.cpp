#include <atomic>

#include "mlcd/kernels.hpp"

namespace mlcd::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(MLCD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool select_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

#if defined(MLCD_HAVE_AVX2)
#define MLCD_DISPATCH(fn, ...)                                    \
  return active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define MLCD_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> x) { MLCD_DISPATCH(sum, x); }

double l1_distance(std::span<const double> x, std::span<const double> y) {
  MLCD_DISPATCH(l1_distance, x, y);
}

void affine(std::span<double> x, double a, double b) { MLCD_DISPATCH(affine, x, a, b); }

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  MLCD_DISPATCH(spmv, a, x, y);
}

#undef MLCD_DISPATCH

}  // namespace mlcd::kernels
