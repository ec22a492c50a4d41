#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compocheck/model.hpp"

namespace compocheck {

struct ParseError {
  SourceSpan span;
  std::string message;
  std::optional<std::string> expected;

  bool operator==(const ParseError&) const = default;
};

/// `file:line:column: error: message (expected ...)`
std::string to_string(const ParseError& error);

/// Either a model or the errors that prevented building one.
struct ParseResult {
  std::optional<Model> model;
  std::vector<ParseError> errors;

  bool ok() const { return model.has_value(); }
};

/// Parses the `.csm` textual notation:
///
///   interface NAME [group] [: G1, G2] { op NAME; ... }
///   class NAME [passive|active|protected|observer] [: G1, ...] {
///     realizes I, ...;  uses I, ...;  attr NAME: TYPE;
///     part NAME: TYPE [xN];  port NAME: IFACE [reversed];
///     connector END, END [via ASSOC];
///   }
///   assoc NAME (TYPE [nav], TYPE [nav]);
///   root NAME;
///
/// END is `part`, `part.port` or `self.port`. Semicolons before `}` are
/// optional. After an error the parser resumes at the next statement, so one
/// run reports every independent syntax error.
ParseResult parse_dsl(std::string_view text, std::string_view file_name = "<input>");

/// Parses the `.csm.json` interchange format (`"formatVersion": 1`).
ParseResult parse_json(std::string_view text, std::string_view file_name = "<input>");

/// Canonical JSON: fixed key order, declaration order for elements, two-space
/// indentation, trailing newline. Synthesized associations carry
/// `"synthesized": true`.
std::string serialize_json(const Model& model);

enum class InputFormat { Auto, Dsl, Json };

/// `.csm.json` and `.json` select JSON; everything else is DSL.
InputFormat detect_format(std::string_view path);

/// Reads and parses a file. An unreadable file yields a single ParseError.
ParseResult load_model_file(const std::string& path, InputFormat format = InputFormat::Auto);

/// A parsed model after integrity checking and deleg synthesis, or the
/// parse errors / integrity diagnostics that stopped it.
struct PreparedModel {
  std::optional<Model> model;
  std::vector<ParseError> parse_errors;
  std::vector<Diagnostic> integrity;

  bool ok() const { return model.has_value(); }
};

PreparedModel prepare(ParseResult parsed);
PreparedModel prepare_file(const std::string& path, InputFormat format = InputFormat::Auto);

}  // namespace compocheck
