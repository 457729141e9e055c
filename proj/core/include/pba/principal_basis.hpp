#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pba/dictionary_learning.hpp"
#include "pba/sparse_coding.hpp"

namespace pba {

/// Per-atom reproducibility (l0 count of the atom's coefficient row) and
/// strength (l1 mass of the same row).
struct UsageProfile {
  std::vector<std::size_t> l0_count;
  std::vector<double> l1_mass;
  std::size_t samples = 0;

  [[nodiscard]] std::size_t atoms() const noexcept { return l0_count.size(); }
};

struct AtomRanking {
  std::vector<std::size_t> order;      // order[i] = original index of rank i
  std::vector<std::size_t> sorted_l0;  // nonincreasing
};

struct PrincipalBasis {
  Dictionary dictionary;               // P atoms, ranked order
  std::size_t p = 0;
  std::vector<std::size_t> provenance; // original atom indices
};

struct ReportRow {
  std::size_t atom_index = 0;
  std::size_t l0_count = 0;
  double l1_mass = 0.0;
  std::size_t rank = 0;
  bool selected = false;
};

UsageProfile usage_profile(const SparseCode& code, double numeric_tol);

/// Sort by l0 count descending; ties by larger l1 mass, then lower index.
AtomRanking rank_atoms(const UsageProfile& profile);

/// Histogram the sorted l0 counts with unit bins, take the smallest modal
/// count v*, and keep every atom whose count is strictly above v*. The result
/// is clamped to [1, K].
std::size_t select_p(const AtomRanking& ranking);

/// Bitwise copies of the first P ranked atoms. Throws BadP unless 1 <= P <= K.
PrincipalBasis principal_basis(const Dictionary& dict, const AtomRanking& ranking, std::size_t p);

/// One row per atom, in ranked order. Throws BadP unless 1 <= P <= K.
std::vector<ReportRow> reproducibility_report(const UsageProfile& profile, const AtomRanking& ranking,
                                              std::size_t p);

/// CSV with header `atom_index,l0_count,l1_mass,rank,selected`.
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace pba
