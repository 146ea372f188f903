// Writes minimal JPEG fixtures with standard tables, optionally with
// randomly perturbed single steps, into a directory.

#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "jpegqf/corpus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate minimal JPEG fixtures carrying IJG standard quantization tables."};
  std::string dir;
  int first = 50;
  int last = 100;
  int perturbed = 0;
  unsigned seed = 1;
  app.add_option("dir", dir, "output directory")->required();
  app.add_option("--from", first, "lowest quality factor")->check(CLI::Range(1, 100));
  app.add_option("--to", last, "highest quality factor")->check(CLI::Range(1, 100));
  app.add_option("--perturbed", perturbed, "number of extra single-step perturbed fixtures");
  app.add_option("--seed", seed, "seed for perturbation choice");
  CLI11_PARSE(app, argc, argv);

  try {
    for (int q = first; q <= last; ++q)
      std::cout << jpegqf::write_fixture_file(dir, jpegqf::standard_fixture(jpegqf::QualityFactor(q))).string() << '\n';

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> quality(first, last), pos(1, 8), coin(0, 1);
    for (int n = 0; n < perturbed;) {
      const auto spec = jpegqf::standard_fixture(jpegqf::QualityFactor(quality(rng)));
      const auto channel = coin(rng) ? jpegqf::Channel::Luminance : jpegqf::Channel::Chrominance;
      const int row = pos(rng), col = pos(rng), delta = coin(rng) ? 1 : -1;
      try {
        const auto edited = jpegqf::perturb(spec, channel, row, col, delta);
        std::cout << jpegqf::write_fixture_file(dir, edited).string() << '\n';
        ++n;
      } catch (const std::invalid_argument&) {
        // step at the range boundary; draw again
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
