// Acceptance suite: runs the desk-scale experiment battery, prints one
// PASS/FAIL line per numbered criterion, reruns the battery under the same
// seed and byte-compares every CSV artifact for the determinism criterion.
// Exit status is the number of failing criteria.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "booledyn/experiments.hpp"

namespace fs = std::filesystem;
using booledyn::cli::ExperimentResult;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct CriterionLine {
  int number;
  std::string label;
  std::vector<std::string> experiments;
};

}  // int main below

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  std::string base = "acceptance_out";
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--seed") == 0) seed = std::strtoull(argv[i + 1], nullptr, 10);
    if (std::strcmp(argv[i], "--out-dir") == 0) base = argv[i + 1];
  }
  std::string dir_a = base + "/run_a";
  std::string dir_b = base + "/run_b";
  fs::remove_all(base);

  std::printf("running desk suite (seed %llu) ...\n", (unsigned long long)seed);
  auto suite_a = booledyn::cli::run_suite("desk", seed, dir_a);
  std::printf("running desk suite again for the determinism criterion ...\n");
  auto suite_b = booledyn::cli::run_suite("desk", seed, dir_b);

  std::map<std::string, const ExperimentResult*> by_name;
  for (const auto& exp : suite_a.experiments) by_name[exp.experiment] = &exp;

  const std::vector<CriterionLine> lines = {
      {1, "measure invariance of preimage lengths", {"invariance"}},
      {2, "first-return tail exponent -3/2", {"returns"}},
      {3, "exact escape tail exponent -1/2", {"escapes"}},
      {4, "occupation growth S_n/n^(1/3) diverges", {"occupation"}},
      {5, "normalized occupation half-normal law", {"darling-kac"}},
      {6, "arcsine occupation and last-visit laws", {"arcsine-occ", "arcsine-last"}},
      {7, "wandering rate ~ sqrt(n)", {"wandering"}},
      {8, "Hopf ratio of occupation counts", {"hopf"}},
      {9, "periodic points within the period bound", {"periodic"}},
      {10, "mapping-property clauses", {"mapping"}},
      {11, "AFN certificate for the conjugated map", {"afn-check"}},
      {12, "return-map cylinder distortion", {"distortion"}},
      {13, "boundary conjugacy identities", {"identities"}},
      {14, "symbol-code block statistics", {"codes"}},
      {15, "hair landing and contraction", {"hairs"}},
      {16, "circle-model finite-measure checks", {"circle-model"}},
  };

  int failures = 0;
  for (const auto& line : lines) {
    bool pass = true;
    std::string detail;
    for (const auto& name : line.experiments) {
      const ExperimentResult* exp = by_name.at(name);
      for (const auto& c : exp->criteria) {
        pass = pass && c.pass;
        if (!c.pass)
          detail += " [" + c.name + "=" + booledyn::cli::format_double(c.measured) +
                    " wanted " + c.threshold + "]";
      }
    }
    if (!pass) ++failures;
    std::printf("CRITERION %02d %-46s %s%s\n", line.number, line.label.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    for (const auto& name : line.experiments) {
      const ExperimentResult* exp = by_name.at(name);
      for (const auto& c : exp->criteria)
        std::printf("    %-14s %-38s %-4s measured=%s threshold=%s\n", name.c_str(),
                    c.name.c_str(), c.pass ? "ok" : "FAIL",
                    booledyn::cli::format_double(c.measured).c_str(), c.threshold.c_str());
    }
  }

  // Criterion 17: byte-identical CSV artifacts across the rerun.
  bool deterministic = true;
  long long compared = 0;
  std::string mismatch;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    if (entry.path().extension() != ".csv") continue;
    fs::path twin = fs::path(dir_b) / entry.path().filename();
    ++compared;
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
      deterministic = false;
      mismatch = entry.path().filename().string();
    }
  }
  deterministic = deterministic && compared > 0;
  if (!deterministic) ++failures;
  std::printf("CRITERION 17 %-46s %s (%lld CSV artifacts%s%s)\n",
              "determinism of the full desk suite", deterministic ? "PASS" : "FAIL", compared,
              mismatch.empty() ? "" : " mismatch: ", mismatch.c_str());

  std::printf("acceptance: %d of 17 criteria pass\n", 17 - failures);
  return failures;
}
