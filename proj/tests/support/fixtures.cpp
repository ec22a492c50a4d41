#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "compocheck/ingest.hpp"
#include "compocheck/rules.hpp"

namespace fixtures {

namespace {

compocheck::Model unwrap(compocheck::PreparedModel prepared) {
  if (prepared.ok()) return std::move(*prepared.model);
  std::string text;
  for (const auto& error : prepared.parse_errors) text += compocheck::to_string(error) + "\n";
  for (const auto& diagnostic : prepared.integrity) text += compocheck::render_text(diagnostic) + "\n";
  throw std::runtime_error(text);
}

}  // namespace

std::string path(std::string_view relative) { return std::string(COMPOCHECK_FIXTURE_DIR) + "/" + std::string(relative); }

compocheck::Model load(std::string_view relative) { return unwrap(compocheck::prepare_file(path(relative))); }

compocheck::Model from_dsl(std::string_view text) { return unwrap(compocheck::prepare(compocheck::parse_dsl(text))); }

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace fixtures
