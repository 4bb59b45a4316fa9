#pragma once

// Dense and CSR inner loops used by the power iteration. Each kernel has a
// scalar reference in kernels::scalar and, on x86-64 builds, an AVX2 variant
// in kernels::avx2. The unqualified entry points dispatch at runtime to the
// widest variant the CPU supports.

#include <cstdint>
#include <span>
#include <string_view>

namespace mlcd::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Variant used by the dispatching entry points.
Isa active_isa();

/// Overrides the dispatch choice; returns false (and changes nothing) when
/// the variant is unavailable.
bool select_isa(Isa isa);

/// Compressed sparse rows: row r owns entries [offsets[r], offsets[r+1]).
struct CsrView {
  std::span<const std::uint32_t> offsets;
  std::span<const std::uint32_t> columns;
  std::span<const double> values;
};

double sum(std::span<const double> x);
double l1_distance(std::span<const double> x, std::span<const double> y);
/// x[i] = a * x[i] + b
void affine(std::span<double> x, double a, double b);
/// y = A x
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
double sum(std::span<const double> x);
double l1_distance(std::span<const double> x, std::span<const double> y);
void affine(std::span<double> x, double a, double b);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(MLCD_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double l1_distance(std::span<const double> x, std::span<const double> y);
void affine(std::span<double> x, double a, double b);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace mlcd::kernels
