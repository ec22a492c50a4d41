// compocheck: check, explain and simulate hierarchical component models.
#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "compocheck/cli.hpp"

namespace {

bool use_color() {
  const char* mode = std::getenv("COMPOCHECK_COLOR");
  const std::string value = mode ? mode : "auto";
  if (value == "always") return true;
  if (value == "never") return false;
  return isatty(STDOUT_FILENO) != 0 && std::getenv("NO_COLOR") == nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  using compocheck::InputFormat;
  using compocheck::cli::Command;
  using compocheck::cli::OutputFormat;

  CLI::App app{"Well-formedness checker and routing simulator for composite-structure models"};
  app.require_subcommand(1);

  compocheck::cli::CliConfig config;
  std::string downgrade;
  std::string root;

  const std::map<std::string, InputFormat> formats{
      {"auto", InputFormat::Auto}, {"dsl", InputFormat::Dsl}, {"json", InputFormat::Json}};
  const std::map<std::string, OutputFormat> outputs{{"text", OutputFormat::Text}, {"json", OutputFormat::Json}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", config.input_path, "Model file (.csm or .csm.json)")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", config.format, "Input format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--output", config.output, "Output format")
        ->transform(CLI::CheckedTransformer(outputs, CLI::ignore_case));
  };

  auto* check = app.add_subcommand("check", "Run the well-formedness rules");
  add_common(check);
  check->add_option("--downgrade", downgrade, "Comma-separated rule codes to report as warnings");

  auto* explain = app.add_subcommand("explain", "Show derived typing for one element");
  add_common(explain);
  explain->add_option("element", config.element, "Element path: Class.port, Class.part.port, Class#index, ...")
      ->required();

  auto* simulate = app.add_subcommand("simulate", "Route requests through the instantiated structure");
  add_common(simulate);
  simulate->add_option("--root", root, "Root class (defaults to the model's root)");
  simulate->add_option("--inject", config.injections, "Injection LOC:IFACE[:OP]; repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? compocheck::cli::kExitOk : compocheck::cli::kExitInputError;
  }

  if (check->parsed()) config.command = Command::Check;
  if (explain->parsed()) config.command = Command::Explain;
  if (simulate->parsed()) config.command = Command::Simulate;
  config.downgrade = compocheck::cli::parse_code_list(downgrade);
  if (!root.empty()) config.root = root;
  config.color = use_color() && config.output == OutputFormat::Text;

  return compocheck::cli::run(config, std::cout, std::cerr);
}
