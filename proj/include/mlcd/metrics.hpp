#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "mlcd/assignment.hpp"
#include "mlcd/multilayer.hpp"

namespace mlcd {

/// n_ij = |C_i ∩ C'_j| with rows the reference communities and columns the
/// test communities, each listed in ascending id order.
struct ContingencyMatrix {
  std::vector<CommunityId> row_ids;
  std::vector<CommunityId> col_ids;
  std::vector<std::uint64_t> counts;  ///< row-major
  std::vector<std::uint64_t> row_sums;
  std::vector<std::uint64_t> col_sums;
  std::uint64_t n = 0;

  std::size_t rows() const noexcept { return row_ids.size(); }
  std::size_t cols() const noexcept { return col_ids.size(); }
  std::uint64_t at(std::size_t i, std::size_t j) const { return counts[i * cols() + j]; }

  /// Same matrix with rows and columns swapped.
  ContingencyMatrix transposed() const;
};

struct JaccardMatrix {
  std::vector<CommunityId> row_ids;
  std::vector<CommunityId> col_ids;
  std::vector<double> values;  ///< row-major

  std::size_t rows() const noexcept { return row_ids.size(); }
  std::size_t cols() const noexcept { return col_ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
};

/// Over assignments of the same element universe (index by index).
ContingencyMatrix contingency(const CommunityAssignment& reference, const CommunityAssignment& test);

/// Over the identities both assignments share. A reference given on the
/// Base layer is replicated onto layers 1 and 2 first. Throws DomainError
/// when nothing is shared.
ContingencyMatrix contingency(const LayeredAssignment& reference, const LayeredAssignment& test,
                              bool users_only = false);

/// J_ij = n_ij / (|C_i| + |C'_j| - n_ij), rows and columns in the
/// matrix's id order. Detection output numbers communities by flow rank,
/// so ascending id order is community PageRank order.
JaccardMatrix jaccard_matrix(const ContingencyMatrix& n);

/// Same, with rows and columns reordered to the given id sequences.
JaccardMatrix jaccard_matrix(const ContingencyMatrix& n, std::span<const CommunityId> row_order,
                             std::span<const CommunityId> col_order);

/// VI in bits. Cell terms are summed in sorted order so that
/// VI(C, C') and VI(C', C) agree bit for bit.
double variation_of_information(const ContingencyMatrix& n);

/// Fraction of non-seed truth pairs whose endpoints share a community.
double oracle_accuracy(const AlignmentSet& truth, const SeedSet& seeds,
                       const LayeredAssignment& assignment);

/// CSV with a header row of test ids and a leading column of reference ids.
void write_jaccard_csv(std::ostream& out, const JaccardMatrix& j);

/// Expands a Base-layer assignment onto both layers; leaves others as-is.
LayeredAssignment replicate_base(const LayeredAssignment& assignment);

}  // namespace mlcd
