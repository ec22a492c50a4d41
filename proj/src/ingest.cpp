#include <fstream>
#include <sstream>

#include "compocheck/ingest.hpp"

namespace compocheck {

InputFormat detect_format(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends_with(".json") ? InputFormat::Json : InputFormat::Dsl;
}

ParseResult load_model_file(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult result;
    result.errors.push_back(ParseError{SourceSpan{path, 1, 1}, "cannot open file", std::nullopt});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (format == InputFormat::Auto) format = detect_format(path);
  return format == InputFormat::Json ? parse_json(text, path) : parse_dsl(text, path);
}

PreparedModel prepare(ParseResult parsed) {
  PreparedModel out;
  if (!parsed.ok()) {
    out.parse_errors = std::move(parsed.errors);
    return out;
  }
  out.integrity = validate_integrity(*parsed.model);
  if (!out.integrity.empty()) return out;
  out.model = synthesize_deleg_associations(*parsed.model);
  return out;
}

PreparedModel prepare_file(const std::string& path, InputFormat format) {
  return prepare(load_model_file(path, format));
}

}  // namespace compocheck
