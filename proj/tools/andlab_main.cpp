#include <exception>
#include <iostream>

#include "andlab/cli.hpp"
#include "andlab/experiments.hpp"

// Exit codes: 0 success, 1 a tracked inequality or statistic flag tripped,
// 2 invalid configuration or arguments, 3 output could not be written.

int main(int argc, char** argv) {
  andlab::CliParser parser;
  andlab::ExperimentConfig cfg;
  try {
    cfg = parser.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return parser.app.exit(e) == 0 ? 0 : 2;
  }

  try {
    andlab::RunResult result = andlab::run_experiment(cfg);
    for (const auto& [key, value] : result.summary)
      std::cout << key << " = " << value << "\n";
    for (const std::string& file : result.files)
      std::cout << "wrote " << file << "\n";
    for (const std::string& reason : result.flag_reasons)
      std::cout << "FLAG: " << reason << "\n";
    return result.exit_code;
  } catch (const andlab::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
