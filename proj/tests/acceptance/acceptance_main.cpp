// Runs every registered acceptance criterion against a baseline config and
// prints one PASS/FAIL line each. Exit status is non-zero if any fails.

#include <iostream>
#include <string>

#include "pscrd/acceptance.hpp"
#include "pscrd/config.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : PSCRD_SOURCE_DIR "/configs/baseline.toml";
  try {
    const auto base = pscrd::config::parse_config(path);
    std::cout << "acceptance criteria against " << path << "\n";
    const bool ok = pscrd::acceptance::run_all(base, std::cout);
    std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
}
