#pragma once
// Empirical-constant bookkeeping shared by the lp and harmonic harnesses.
#include <cstdint>
#include <string>
#include <vector>

namespace bsq {

struct HarnessRow {
  std::string lemma;
  std::uint64_t sample_seed = 0;
  double lhs = 0, rhs = 0, ratio = 0;
};

struct HarnessResult {
  std::string lemma;
  std::vector<HarnessRow> rows;
  double max_ratio = 0;
  int skipped = 0;  // degenerate samples (rhs < 1e-14)
  bool finite = true;
  void add(const std::string& lemma_name, std::uint64_t seed, double lhs, double rhs);
};

struct StabilityResult {
  HarnessResult coarse, fine;
  double rel_change = 0;  // |fine - coarse| / coarse on the max ratio
  bool stable(double tol) const { return coarse.finite && fine.finite && rel_change < tol; }
};
StabilityResult compare_resolutions(HarnessResult coarse, HarnessResult fine);

std::string harness_csv_header();
std::string harness_csv_rows(const HarnessResult& r);

}  // namespace bsq
