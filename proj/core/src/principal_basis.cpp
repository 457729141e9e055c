#include "pba/principal_basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "pba/error.hpp"

namespace pba {

UsageProfile usage_profile(const SparseCode& code, double numeric_tol) {
  UsageProfile p;
  p.l0_count.assign(code.atoms(), 0);
  p.l1_mass.assign(code.atoms(), 0.0);
  p.samples = code.samples();
  for (std::size_t m = 0; m < code.samples(); ++m) {
    auto s = code.support(m);
    auto c = code.coefficients(m);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double a = std::abs(c[i]);
      if (a > numeric_tol) ++p.l0_count[s[i]];
      p.l1_mass[s[i]] += a;
    }
  }
  return p;
}

AtomRanking rank_atoms(const UsageProfile& profile) {
  AtomRanking r;
  r.order.resize(profile.atoms());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::ranges::sort(r.order, [&](std::size_t a, std::size_t b) {
    if (profile.l0_count[a] != profile.l0_count[b]) return profile.l0_count[a] > profile.l0_count[b];
    if (profile.l1_mass[a] != profile.l1_mass[b]) return profile.l1_mass[a] > profile.l1_mass[b];
    return a < b;
  });
  r.sorted_l0.reserve(r.order.size());
  for (std::size_t k : r.order) r.sorted_l0.push_back(profile.l0_count[k]);
  return r;
}

std::size_t select_p(const AtomRanking& ranking) {
  const std::size_t k_atoms = ranking.sorted_l0.size();
  if (k_atoms == 0) throw Error(ErrorCode::InvalidArgument, "select_p needs at least one atom");
  const std::size_t max_count = *std::ranges::max_element(ranking.sorted_l0);
  std::vector<std::size_t> hist(max_count + 1, 0);
  for (std::size_t c : ranking.sorted_l0) ++hist[c];
  // First maximum = smallest modal count value.
  const auto mode = static_cast<std::size_t>(std::ranges::max_element(hist) - hist.begin());
  const auto above = static_cast<std::size_t>(
      std::ranges::count_if(ranking.sorted_l0, [mode](std::size_t c) { return c > mode; }));
  return std::clamp<std::size_t>(above, 1, k_atoms);
}

PrincipalBasis principal_basis(const Dictionary& dict, const AtomRanking& ranking, std::size_t p) {
  if (ranking.order.size() != dict.atom_count())
    throw Error(ErrorCode::DimensionMismatch, "ranking does not match dictionary");
  if (p < 1 || p > dict.atom_count())
    throw Error(ErrorCode::BadP, "P=" + std::to_string(p) + " outside [1, " + std::to_string(dict.atom_count()) + "]");
  PrincipalBasis out;
  out.p = p;
  out.provenance.assign(ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(p));
  out.dictionary = Dictionary(dict.atoms().select_cols(out.provenance), true);
  return out;
}

std::vector<ReportRow> reproducibility_report(const UsageProfile& profile, const AtomRanking& ranking,
                                              std::size_t p) {
  if (ranking.order.size() != profile.atoms())
    throw Error(ErrorCode::DimensionMismatch, "ranking does not match profile");
  if (p < 1 || p > profile.atoms())
    throw Error(ErrorCode::BadP, "P=" + std::to_string(p) + " outside [1, " + std::to_string(profile.atoms()) + "]");
  std::vector<ReportRow> rows;
  rows.reserve(ranking.order.size());
  for (std::size_t i = 0; i < ranking.order.size(); ++i) {
    const std::size_t k = ranking.order[i];
    rows.push_back({k, profile.l0_count[k], profile.l1_mass[k], i, i < p});
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string s = "atom_index,l0_count,l1_mass,rank,selected\n";
  char buf[64];
  for (const auto& r : rows) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.l1_mass);
    (void)ec;
    s += std::to_string(r.atom_index) + "," + std::to_string(r.l0_count) + ",";
    s.append(buf, ptr);
    s += "," + std::to_string(r.rank) + "," + (r.selected ? "1" : "0") + "\n";
  }
  return s;
}

}  // namespace pba
