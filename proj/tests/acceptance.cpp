// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   acceptance [--only <id>] [--threads <n>] [--csv <file>]

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "dephase/scenario/acceptance.hpp"

int main(int argc, char** argv) {
  std::string only;
  std::string csv;
  unsigned threads = dephase::scenario::default_threads();
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (i + 1 < argc && arg == "--only") {
      only = argv[++i];
    } else if (i + 1 < argc && arg == "--threads") {
      threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else if (i + 1 < argc && arg == "--csv") {
      csv = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--only <id>] [--threads <n>] [--csv <file>]\n";
      return 2;
    }
  }
  try {
    const auto results = dephase::scenario::acceptance_suite(only, threads);
    std::cout << dephase::scenario::render_text(results);
    if (!csv.empty()) std::ofstream(csv, std::ios::binary) << dephase::scenario::render_csv(results);
    for (const auto& r : results) {
      if (!r.pass) return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
