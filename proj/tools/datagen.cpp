// Regenerates the bundled datasets under data/. The synthetic benchmark is
// sampled from its generating parameter set; the Hochstetten files are
// synthesized from the bundled GA-calibrated parameter set with fixed-seed
// digitization noise (see data/hochstetten/README.md).

#include <filesystem>
#include <iostream>

#include "hypocal/io.hpp"
#include "hypocal/reference.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace hypocal;

  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("data");
  fs::create_directories(root / "synthetic");
  fs::create_directories(root / "hochstetten");

  const ExperimentalDataset synthetic = reference::synthetic_dataset();
  for (const auto& test : synthetic.tests) {
    const fs::path path = root / "synthetic" / (test.name + ".csv");
    io::write_experimental_csv(path.string(), test);
    std::cout << path.string() << '\n';
  }

  const ExperimentalDataset hochstetten = reference::hochstetten_dataset();
  for (const auto& test : hochstetten.tests) {
    const fs::path path = root / "hochstetten" / (test.name + ".csv");
    io::write_experimental_csv(path.string(), test);
    std::cout << path.string() << '\n';
  }
  return 0;
}
