#include "bsq/harness.hpp"

#include <cmath>
#include <cstdio>

namespace bsq {

void HarnessResult::add(const std::string& lemma_name, std::uint64_t seed, double lhs, double rhs) {
  if (!(rhs >= 1e-14)) {
    ++skipped;
    return;
  }
  HarnessRow r{lemma_name, seed, lhs, rhs, lhs / rhs};
  finite = finite && std::isfinite(r.ratio);
  if (rows.empty() || r.ratio > max_ratio) max_ratio = r.ratio;
  rows.push_back(std::move(r));
}

StabilityResult compare_resolutions(HarnessResult coarse, HarnessResult fine) {
  StabilityResult s;
  s.rel_change = coarse.max_ratio > 0 ? std::abs(fine.max_ratio - coarse.max_ratio) / coarse.max_ratio : INFINITY;
  s.coarse = std::move(coarse);
  s.fine = std::move(fine);
  return s;
}

std::string harness_csv_header() { return "lemma,sample_seed,lhs,rhs,ratio\n"; }

std::string harness_csv_rows(const HarnessResult& r) {
  std::string s;
  char buf[256];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%llu,%.17g,%.17g,%.17g\n", row.lemma.c_str(),
                  static_cast<unsigned long long>(row.sample_seed), row.lhs, row.rhs, row.ratio);
    s += buf;
  }
  return s;
}

}  // namespace bsq
