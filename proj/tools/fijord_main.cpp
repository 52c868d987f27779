#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fijord/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fijord: verification and decomposition of additive maps on finitary incidence rings "
      "over Z/n"};
  app.require_subcommand(1);

  std::string config_path;
  fijord::RunOptions opt;

  CLI::App* verify = app.add_subcommand("verify", "run the requested suites against the config");
  CLI::App* decompose = app.add_subcommand(
      "decompose", "run the decomposition pipeline and print the component maps");
  app.add_subcommand("suites", "list the suites and the identity each one certifies");

  for (CLI::App* sub : {verify, decompose}) {
    sub->add_option("config", config_path, "instance config file")->required();
    sub->add_option("--seed", opt.seed, "seed for the sampled checks");
    sub->add_option("--cap", opt.cap, "cap on exhaustive enumerations");
    sub->add_option("--samples", opt.samples, "sample count for the sampled checks");
    sub->add_option("--report", opt.report_path, "also write the report to this file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version print normally; bad usage is a parse error
  }

  if (app.got_subcommand("suites")) {
    std::cout << fijord::list_suites_text();
    return 0;
  }

  opt.decompose = app.got_subcommand("decompose");
  fijord::RunOutcome out = fijord::run_config_file(config_path, opt);
  std::cout << out.report;
  return out.exit_code;
}
