// Generates the synthetic digit corpus as canonical IDX files, for running
// the desk-scale experiments when no MNIST copy is available.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lumen/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lumen-make-digits: synthetic digit IDX fixture generator"};
    std::string out_dir = "data/synth";
    std::size_t n_train = 12000;
    std::size_t n_test = 2500;
    std::uint64_t seed = 1001;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--train", n_train, "Training sample count");
    app.add_option("--test", n_test, "Test sample count");
    app.add_option("--seed", seed, "Generator seed");
    CLI11_PARSE(app, argc, argv);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    lumen::write_synthetic_digits(dir / "train-images-idx3-ubyte",
                                  dir / "train-labels-idx1-ubyte", n_train, seed);
    lumen::write_synthetic_digits(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte",
                                  n_test, seed + 1001);
    std::cout << "wrote " << n_train << " train and " << n_test << " test digits under "
              << dir.string() << "\n";
    return 0;
}
