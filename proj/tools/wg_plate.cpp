// Command-line driver for refinement sweeps.

#include "wgplate/experiment.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  using namespace wgplate;
  const std::vector<std::string> args(argv + 1, argv + argc);
  ExperimentConfig config;
  try {
    config = parse_config(args);
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  try {
    std::cerr << "problem " << config.problem << ", " << to_string(config.family) << ", " << config.degrees.label()
              << '\n';
    const ExperimentResult result = run_experiment(config, &std::cerr);
    for (const auto& path : write_outputs(result)) std::cout << "wrote " << path << '\n';
    if (config.out.empty()) write_markdown(std::cout, result);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
