#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <vector>

#include "compocheck/ingest.hpp"

namespace compocheck {

namespace {

enum class TokenKind { Identifier, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::End:
      return "end of input";
    case TokenKind::Punct:
      return "'" + token.text + "'";
    default:
      return "'" + token.text + "'";
  }
}

struct LexResult {
  std::vector<Token> tokens;
  std::vector<ParseError> errors;
};

LexResult lex(std::string_view text, const std::string& file) {
  LexResult out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const int start_line = line;
      const int start_column = column;
      advance(2);
      while (i < text.size() && !(text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/')) advance();
      if (i >= text.size()) {
        out.errors.push_back({{file, start_line, start_column}, "unterminated block comment", std::nullopt});
        break;
      }
      advance(2);
      continue;
    }
    Token token;
    token.line = line;
    token.column = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      token.kind = TokenKind::Identifier;
      token.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      token.kind = TokenKind::Number;
      token.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("{}():;,.").find(c) != std::string_view::npos) {
      token.kind = TokenKind::Punct;
      token.text = std::string(1, c);
      advance();
    } else {
      out.errors.push_back({{file, line, column}, std::string("unexpected character '") + c + "'", std::nullopt});
      advance();
      continue;
    }
    out.tokens.push_back(std::move(token));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.tokens.push_back(end);
  return out;
}

struct SyntaxError {
  ParseError error;
};

const std::set<std::string, std::less<>> kTopKeywords = {"interface", "class", "assoc", "root"};
const std::set<std::string, std::less<>> kClassKeywords = {"realizes", "uses", "attr", "part", "port", "connector"};

class DslParser {
 public:
  DslParser(std::vector<Token> tokens, std::string file) : tokens_(std::move(tokens)), file_(std::move(file)) {}

  ParseResult run(std::vector<ParseError> lex_errors) {
    errors_ = std::move(lex_errors);
    while (!at_end()) {
      const std::size_t start = pos_;
      try {
        parse_top_level();
      } catch (const SyntaxError& e) {
        errors_.push_back(e.error);
        synchronize_top_level();
        if (pos_ == start) take();
      }
    }
    ParseResult result;
    if (errors_.empty()) {
      result.model = std::move(model_);
    } else {
      result.errors = std::move(errors_);
    }
    return result;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& take() {
    const Token& token = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return token;
  }

  bool is_punct(char c, std::size_t ahead = 0) const {
    const auto& token = peek(ahead);
    return token.kind == TokenKind::Punct && token.text.size() == 1 && token.text[0] == c;
  }
  bool is_word(std::string_view word) const {
    return peek().kind == TokenKind::Identifier && peek().text == word;
  }

  SourceSpan span_of(const Token& token) const { return SourceSpan{file_, token.line, token.column}; }

  [[noreturn]] void fail(const Token& at, std::string message, std::optional<std::string> expected) const {
    throw SyntaxError{ParseError{span_of(at), std::move(message), std::move(expected)}};
  }

  const Token& expect_punct(char c, std::string_view context) {
    if (!is_punct(c)) {
      fail(peek(), "expected '" + std::string(1, c) + "' " + std::string(context) + ", found " + describe(peek()),
           std::string("'") + c + "'");
    }
    return take();
  }

  const Token& expect_identifier(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) {
      fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()), "identifier");
    }
    return take();
  }

  void end_statement(const std::set<std::string, std::less<>>& next_keywords) {
    if (is_punct(';')) {
      take();
      return;
    }
    if (is_punct('}') || at_end()) return;
    if (peek().kind == TokenKind::Identifier && next_keywords.count(peek().text) != 0) return;
    fail(peek(), "expected ';' after statement, found " + describe(peek()), "';'");
  }

  std::vector<std::string> identifier_list(std::string_view what) {
    std::vector<std::string> names;
    names.push_back(expect_identifier(what).text);
    while (is_punct(',')) {
      take();
      names.push_back(expect_identifier(what).text);
    }
    return names;
  }

  void synchronize_top_level() {
    int depth = 0;
    while (!at_end()) {
      if (depth == 0 && peek().kind == TokenKind::Identifier && kTopKeywords.count(peek().text) != 0) return;
      if (is_punct('{')) ++depth;
      if (is_punct('}') && --depth <= 0) {
        take();
        if (is_punct(';')) take();
        return;
      }
      take();
    }
  }

  // Skips the rest of a statement inside a braced body. Leaves '}' in place.
  void synchronize_statement(const std::set<std::string, std::less<>>& keywords) {
    bool skipped = false;
    while (!at_end()) {
      if (is_punct(';')) {
        take();
        return;
      }
      if (is_punct('}')) return;
      if (skipped && peek().kind == TokenKind::Identifier && keywords.count(peek().text) != 0) return;
      take();
      skipped = true;
    }
  }

  void parse_top_level() {
    const Token& keyword = peek();
    if (keyword.kind != TokenKind::Identifier || kTopKeywords.count(keyword.text) == 0) {
      fail(keyword, "expected 'interface', 'class', 'assoc' or 'root', found " + describe(keyword),
           "top-level declaration");
    }
    if (keyword.text == "interface") {
      parse_interface();
    } else if (keyword.text == "class") {
      parse_class();
    } else if (keyword.text == "assoc") {
      parse_association();
    } else {
      parse_root();
    }
  }

  void parse_interface() {
    take();
    Interface iface;
    const Token& name = expect_identifier("interface name");
    iface.name = name.text;
    iface.origin.span = span_of(name);
    if (is_word("group")) {
      take();
      iface.is_group = true;
    }
    if (is_punct(':')) {
      take();
      iface.generals = identifier_list("general interface name");
    }
    expect_punct('{', "to open the interface body");
    const std::set<std::string, std::less<>> keywords = {"op", "signal"};
    while (!is_punct('}')) {
      if (at_end()) fail(peek(), "unexpected end of input inside interface '" + iface.name + "'", "'}'");
      try {
        if (!is_word("op") && !is_word("signal")) {
          fail(peek(), "expected 'op' in interface body, found " + describe(peek()), "'op'");
        }
        take();
        iface.operations.push_back(expect_identifier("operation name").text);
        end_statement(keywords);
      } catch (const SyntaxError& e) {
        errors_.push_back(e.error);
        synchronize_statement(keywords);
      }
    }
    take();
    if (is_punct(';')) take();
    model_.interfaces.push_back(std::move(iface));
  }

  EndRef parse_end() {
    const Token& first = expect_identifier("connector end");
    if (!is_punct('.')) {
      if (first.text == "self") fail(peek(), "expected '.' after 'self'", "'.'");
      return EndRef::of_part(first.text);
    }
    take();
    const Token& second = expect_identifier("port name");
    if (first.text == "self") return EndRef::of_self_port(second.text);
    return EndRef::of_part_port(first.text, second.text);
  }

  void parse_class_statement(Class& cls) {
    const Token& keyword = peek();
    if (keyword.kind != TokenKind::Identifier || kClassKeywords.count(keyword.text) == 0) {
      fail(keyword, "expected a class member declaration, found " + describe(keyword),
           "'realizes', 'uses', 'attr', 'part', 'port' or 'connector'");
    }
    const std::string word = take().text;
    if (word == "realizes") {
      auto names = identifier_list("interface name");
      cls.realizes.insert(cls.realizes.end(), names.begin(), names.end());
    } else if (word == "uses") {
      auto names = identifier_list("interface name");
      cls.usages.insert(cls.usages.end(), names.begin(), names.end());
    } else if (word == "attr") {
      Attribute attr;
      attr.name = expect_identifier("attribute name").text;
      expect_punct(':', "after attribute name");
      attr.type = expect_identifier("attribute type").text;
      cls.attributes.push_back(std::move(attr));
    } else if (word == "part") {
      Part part;
      const Token& name = expect_identifier("part name");
      part.name = name.text;
      part.origin.span = span_of(name);
      expect_punct(':', "after part name");
      part.type = expect_identifier("part type").text;
      if (peek().kind == TokenKind::Identifier && peek().text.size() > 1 && peek().text[0] == 'x' &&
          std::isdigit(static_cast<unsigned char>(peek().text[1]))) {
        const Token& mult = take();
        const auto digits = std::string_view(mult.text).substr(1);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
          fail(mult, "malformed multiplicity '" + mult.text + "'", "xN");
        }
        part.multiplicity = value;
      }
      cls.parts.push_back(std::move(part));
    } else if (word == "port") {
      Port port;
      const Token& name = expect_identifier("port name");
      port.name = name.text;
      port.origin.span = span_of(name);
      expect_punct(':', "after port name");
      port.contract = expect_identifier("port contract").text;
      if (is_word("reversed")) {
        take();
        port.reversed = true;
      }
      cls.ports.push_back(std::move(port));
    } else {
      Connector connector;
      connector.origin.span = span_of(keyword);
      connector.end1 = parse_end();
      expect_punct(',', "between connector ends");
      connector.end2 = parse_end();
      if (is_punct(',')) {
        fail(peek(), "connectors are binary; n-ary connectors are not supported", std::nullopt);
      }
      if (is_word("via")) {
        take();
        connector.association = expect_identifier("association name").text;
      }
      cls.connectors.push_back(std::move(connector));
    }
    end_statement(kClassKeywords);
  }

  void parse_class() {
    take();
    Class cls;
    const Token& name = expect_identifier("class name");
    cls.name = name.text;
    cls.origin.span = span_of(name);
    if (peek().kind == TokenKind::Identifier) {
      if (auto kind = class_kind_from_string(peek().text)) {
        take();
        cls.kind = *kind;
      }
    }
    if (is_punct(':')) {
      take();
      cls.generals = identifier_list("general class name");
    }
    expect_punct('{', "to open the class body");
    while (!is_punct('}')) {
      if (at_end()) fail(peek(), "unexpected end of input inside class '" + cls.name + "'", "'}'");
      try {
        parse_class_statement(cls);
      } catch (const SyntaxError& e) {
        errors_.push_back(e.error);
        synchronize_statement(kClassKeywords);
      }
    }
    take();
    if (is_punct(';')) take();
    model_.classes.push_back(std::move(cls));
  }

  AssociationEnd parse_association_end() {
    AssociationEnd end;
    end.type = expect_identifier("association end type").text;
    if (is_word("nav")) {
      take();
      end.navigable = true;
    }
    return end;
  }

  void parse_association() {
    take();
    Association assoc;
    const Token& name = expect_identifier("association name");
    assoc.name = name.text;
    assoc.origin.span = span_of(name);
    expect_punct('(', "to open the association ends");
    assoc.end1 = parse_association_end();
    expect_punct(',', "between association ends");
    assoc.end2 = parse_association_end();
    expect_punct(')', "to close the association ends");
    end_statement(kTopKeywords);
    model_.associations.push_back(std::move(assoc));
  }

  void parse_root() {
    const Token& keyword = take();
    const Token& name = expect_identifier("root class name");
    if (model_.root) fail(keyword, "root is declared more than once", std::nullopt);
    model_.root = name.text;
    end_statement(kTopKeywords);
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::size_t pos_ = 0;
  Model model_;
  std::vector<ParseError> errors_;
};

}  // namespace

std::string to_string(const ParseError& error) {
  std::string text = error.span.file + ":" + std::to_string(error.span.line) + ":" +
                     std::to_string(error.span.column) + ": error: " + error.message;
  if (error.expected) text += " (expected " + *error.expected + ")";
  return text;
}

ParseResult parse_dsl(std::string_view text, std::string_view file_name) {
  const std::string file(file_name);
  auto lexed = lex(text, file);
  return DslParser(std::move(lexed.tokens), file).run(std::move(lexed.errors));
}

}  // namespace compocheck
