#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "compocheck/ingest.hpp"
#include "compocheck/simulator.hpp"

namespace compocheck::cli {

enum class Command { Check, Explain, Simulate };
enum class OutputFormat { Text, Json };

struct CliConfig {
  Command command = Command::Check;
  std::string input_path;
  InputFormat format = InputFormat::Auto;
  OutputFormat output = OutputFormat::Text;
  std::set<std::string> downgrade;
  std::optional<std::string> root;
  std::vector<std::string> injections;  // "LOC:IFACE[:OP]"
  std::string element;                  // explain target
  bool color = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitInputError = 2;

/// Splits a comma-separated code list, trimming blanks.
std::set<std::string> parse_code_list(std::string_view text);

/// `LOC:IFACE` or `LOC:IFACE:OP`.
std::optional<Injection> parse_injection(std::string_view text);

int cmd_check(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_explain(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err);

int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace compocheck::cli
