#include "depl/native_format.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "frontend_common.hpp"

namespace depl {

namespace {

bool is_ident_start(char c) {
  return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool is_ident_char(char c) {
  return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_ident_start(text.front())) return false;
  for (char c : text) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

enum class TokKind { Ident, Str, Int, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;  // identifier spelling, punctuation, or unescaped string
  std::int64_t int_value = 0;
  SourceLocation loc;
};

struct LexOutput {
  std::vector<Token> tokens;
  std::vector<ParseDiagnostic> diagnostics;  // non-empty aborts the parse
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  LexOutput run() {
    LexOutput out;
    while (true) {
      skip_trivia();
      SourceLocation loc{line_, column_};
      if (pos_ >= text_.size()) {
        out.tokens.push_back({TokKind::End, "", 0, loc});
        return out;
      }
      char c = text_[pos_];
      if (is_ident_start(c)) {
        out.tokens.push_back(lex_ident(loc));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        if (!lex_int(loc, false, out)) return out;
      } else if (c == '-') {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          advance();
          advance();
          out.tokens.push_back({TokKind::Punct, "->", 0, loc});
        } else if (pos_ + 1 < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          advance();
          if (!lex_int(loc, true, out)) return out;
        } else {
          out.diagnostics.push_back(
              {diag::kSyntax, loc, "stray '-' (did you mean '->'?)"});
          return out;
        }
      } else if (c == '"') {
        if (!lex_string(loc, out)) return out;
      } else if (c == '{' || c == '}' || c == ':' || c == '=' || c == '.' ||
                 c == '@') {
        advance();
        out.tokens.push_back({TokKind::Punct, std::string(1, c), 0, loc});
      } else {
        out.diagnostics.push_back(
            {diag::kSyntax, loc,
             std::string("unexpected character '") + c + "'"});
        return out;
      }
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token lex_ident(SourceLocation loc) {
    std::string text;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      text.push_back(text_[pos_]);
      advance();
    }
    return {TokKind::Ident, std::move(text), 0, loc};
  }

  bool lex_int(SourceLocation loc, bool negative, LexOutput& out) {
    const std::uint64_t limit =
        negative ? static_cast<std::uint64_t>(
                       std::numeric_limits<std::int64_t>::max()) +
                       1
                 : static_cast<std::uint64_t>(
                       std::numeric_limits<std::int64_t>::max());
    std::uint64_t acc = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::uint64_t digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (acc > (limit - digit) / 10) {
        out.diagnostics.push_back(
            {diag::kSyntax, loc, "integer literal out of range"});
        return false;
      }
      acc = acc * 10 + digit;
      advance();
    }
    std::int64_t value =
        negative ? -static_cast<std::int64_t>(acc - 1) - 1
                 : static_cast<std::int64_t>(acc);
    out.tokens.push_back({TokKind::Int, "", value, loc});
    return true;
  }

  bool lex_string(SourceLocation loc, LexOutput& out) {
    advance();  // opening quote
    std::string text;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        out.diagnostics.push_back(
            {diag::kSyntax, loc, "unterminated string literal"});
        return false;
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        out.tokens.push_back({TokKind::Str, std::move(text), 0, loc});
        return true;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) {
          out.diagnostics.push_back(
              {diag::kSyntax, loc, "unterminated string literal"});
          return false;
        }
        char esc = text_[pos_];
        switch (esc) {
          case '\\': text.push_back('\\'); break;
          case '"': text.push_back('"'); break;
          case 'n': text.push_back('\n'); break;
          case 'r': text.push_back('\r'); break;
          case 't': text.push_back('\t'); break;
          default:
            out.diagnostics.push_back(
                {diag::kSyntax,
                 {line_, column_},
                 std::string("unknown escape sequence '\\") + esc + "'"});
            return false;
        }
        advance();
      } else {
        text.push_back(c);
        advance();
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// Internal signal: the grammar cannot continue past this point.
struct ParseAbort {};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult<Configuration> run() {
    ParseResult<Configuration> result;
    try {
      while (peek().kind != TokKind::End) {
        const Token& t = peek();
        if (t.kind != TokKind::Ident) {
          fail(t.loc,
               "expected a declaration (type, instance, bind, contain)");
        }
        if (t.text == "type") {
          parse_type();
        } else if (t.text == "instance") {
          parse_instance();
        } else if (t.text == "bind") {
          parse_bind();
        } else if (t.text == "contain") {
          parse_contain();
        } else {
          fail(t.loc, "unknown declaration '" + t.text + "'");
        }
      }
    } catch (const ParseAbort&) {
      result.diagnostics = std::move(diags_);
      return result;
    }
    for (const std::string& name : used_interfaces_) {
      config_.interfaces.push_back({name});
    }
    if (diags_.empty()) {
      frontend::append_semantic_diagnostics(config_, subject_locs_, diags_);
    }
    frontend::sort_by_location(diags_);
    result.diagnostics = std::move(diags_);
    if (result.ok()) result.value = std::move(config_);
    return result;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  Token next() { return toks_[pos_++]; }

  [[noreturn]] void fail(SourceLocation loc, std::string message) {
    diags_.push_back({diag::kSyntax, loc, std::move(message)});
    throw ParseAbort{};
  }

  Token expect_ident(const std::string& what) {
    if (peek().kind != TokKind::Ident) fail(peek().loc, "expected " + what);
    return next();
  }

  Token expect_string(const std::string& what) {
    if (peek().kind != TokKind::Str) fail(peek().loc, "expected " + what);
    return next();
  }

  void expect_punct(const std::string& spelling) {
    if (peek().kind != TokKind::Punct || peek().text != spelling) {
      fail(peek().loc, "expected '" + spelling + "'");
    }
    next();
  }

  bool try_punct(const std::string& spelling) {
    if (peek().kind == TokKind::Punct && peek().text == spelling) {
      next();
      return true;
    }
    return false;
  }

  // Records the source position for a validation subject; first wins.
  void remember(const std::string& subject, SourceLocation loc) {
    subject_locs_.emplace(subject, loc);
  }

  Value parse_literal() {
    const Token& t = peek();
    if (t.kind == TokKind::Str) return Value(next().text);
    if (t.kind == TokKind::Int) return Value(next().int_value);
    if (t.kind == TokKind::Ident && (t.text == "true" || t.text == "false")) {
      return Value(next().text == "true");
    }
    fail(t.loc, "expected a literal (string, integer, or true/false)");
  }

  void parse_type() {
    next();  // 'type'
    Token name = expect_ident("a type name");
    remember(name.text, name.loc);
    ComponentType type;
    type.name = name.text;
    expect_punct("{");
    std::set<std::string> declared_attrs;
    bool artifact_seen = false;
    while (true) {
      if (peek().kind == TokKind::End) fail(peek().loc, "expected '}'");
      if (try_punct("}")) break;
      Token member = expect_ident(
          "a type member (provides, requires, attribute, artifact)");
      if (member.text == "provides" || member.text == "requires") {
        Token port = expect_ident("a port name");
        expect_punct(":");
        Token iface = expect_ident("an interface name");
        type.ports.push_back({port.text,
                              member.text == "provides"
                                  ? PortDirection::Provided
                                  : PortDirection::Required,
                              iface.text});
        remember(type.name + "." + port.text, port.loc);
        used_interfaces_.insert(iface.text);
      } else if (member.text == "attribute") {
        Token attr = expect_ident("an attribute name");
        expect_punct(":");
        Token kind_tok =
            expect_ident("a value kind (string, integer, boolean)");
        auto kind = value_kind_from(kind_tok.text);
        if (!kind) {
          fail(kind_tok.loc, "unknown value kind '" + kind_tok.text +
                                 "' (expected string, integer, or boolean)");
        }
        if (!declared_attrs.insert(attr.text).second) {
          diags_.push_back({diag::kDuplicate, attr.loc,
                            "attribute " + attr.text +
                                " is declared more than once on " +
                                type.name});
        } else {
          type.attributes[attr.text] = *kind;
        }
      } else if (member.text == "artifact") {
        Token value = expect_string("an artifact identifier (quoted)");
        if (artifact_seen) {
          diags_.push_back({diag::kDuplicate, member.loc,
                            "type " + type.name +
                                " declares artifact more than once"});
        } else {
          type.artifact = value.text;
          artifact_seen = true;
        }
      } else {
        fail(member.loc, "unknown type member '" + member.text + "'");
      }
    }
    config_.types.push_back(std::move(type));
  }

  void parse_instance() {
    next();  // 'instance'
    Token id = expect_ident("an instance id");
    remember(id.text, id.loc);
    expect_punct(":");
    Token type = expect_ident("a type name");
    Instance instance;
    instance.id = id.text;
    instance.type = type.text;
    if (try_punct("@")) {
      const Token& site = peek();
      if (site.kind == TokKind::Ident) {
        instance.site = next().text;
      } else if (site.kind == TokKind::Str) {
        if (site.text.empty()) fail(site.loc, "site label must be non-empty");
        instance.site = next().text;
      } else {
        fail(site.loc, "expected a site label after '@'");
      }
    }
    if (try_punct("{")) {
      std::set<std::string> assigned;
      while (true) {
        if (peek().kind == TokKind::End) fail(peek().loc, "expected '}'");
        if (try_punct("}")) break;
        Token attr = expect_ident("an attribute name");
        remember(id.text + "." + attr.text, attr.loc);
        expect_punct("=");
        Value value = parse_literal();
        if (!assigned.insert(attr.text).second) {
          diags_.push_back({diag::kDuplicate, attr.loc,
                            "attribute " + attr.text +
                                " is assigned more than once on " + id.text});
        } else {
          instance.attribute_values.emplace(attr.text, std::move(value));
        }
      }
    }
    config_.instances.push_back(std::move(instance));
  }

  void parse_bind() {
    Token kw = next();  // 'bind'
    Token client = expect_ident("a client instance id");
    expect_punct(".");
    Token client_port = expect_ident("a client port name");
    expect_punct("->");
    Token server = expect_ident("a server instance id");
    expect_punct(".");
    Token server_port = expect_ident("a server port name");
    Binding binding{client.text, client_port.text, server.text,
                    server_port.text};
    remember(binding.client_endpoint() + " -> " + server.text + "." +
                 server_port.text,
             kw.loc);
    // Last declaration wins so double-binding reports point at the repeat.
    subject_locs_[binding.client_endpoint()] = kw.loc;
    config_.bindings.push_back(std::move(binding));
  }

  void parse_contain() {
    Token kw = next();  // 'contain'
    Token parent = expect_ident("a parent instance id");
    Token child = expect_ident("a child instance id");
    Token as_kw = expect_ident("'as'");
    if (as_kw.text != "as") fail(as_kw.loc, "expected 'as'");
    Token name = expect_ident("a child name");
    remember(parent.text + "/" + child.text, kw.loc);
    remember(parent.text + "/" + name.text, kw.loc);
    remember(child.text, kw.loc);
    config_.containments.push_back({parent.text, child.text, name.text});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Configuration config_;
  std::vector<ParseDiagnostic> diags_;
  std::map<std::string, SourceLocation> subject_locs_;
  std::set<std::string> used_interfaces_;
};

std::string site_text(const std::string& site) {
  return is_identifier(site) ? site : quoted(site);
}

}  // namespace

ParseResult<Configuration> parse_native(std::string_view text) {
  LexOutput lexed = Lexer(text).run();
  if (!lexed.diagnostics.empty()) {
    ParseResult<Configuration> result;
    result.diagnostics = std::move(lexed.diagnostics);
    return result;
  }
  return Parser(std::move(lexed.tokens)).run();
}

std::string emit_native(const Configuration& config) {
  Configuration c = canonical(config);
  std::string out;
  bool first = true;
  auto gap = [&] {
    if (!first) out += "\n";
    first = false;
  };
  for (const ComponentType& type : c.types) {
    gap();
    out += "type " + type.name + " {\n";
    for (const PortDecl& port : type.ports) {
      out += "  " + std::string(to_string(port.direction)) + " " + port.name +
             ": " + port.interface + "\n";
    }
    for (const auto& [name, kind] : type.attributes) {
      out += "  attribute " + name + ": " + std::string(to_string(kind)) +
             "\n";
    }
    if (!type.artifact.empty()) {
      out += "  artifact " + quoted(type.artifact) + "\n";
    }
    out += "}\n";
  }
  for (const Instance& instance : c.instances) {
    gap();
    out += "instance " + instance.id + ": " + instance.type;
    if (instance.site != "local") out += " @ " + site_text(instance.site);
    if (instance.attribute_values.empty()) {
      out += "\n";
      continue;
    }
    out += " {\n";
    for (const auto& [name, value] : instance.attribute_values) {
      out += "  " + name + " = " + value.to_text() + "\n";
    }
    out += "}\n";
  }
  if (!c.bindings.empty()) {
    gap();
    for (const Binding& b : c.bindings) {
      out += "bind " + b.client_instance + "." + b.client_port + " -> " +
             b.server_instance + "." + b.server_port + "\n";
    }
  }
  if (!c.containments.empty()) {
    gap();
    for (const Containment& cont : c.containments) {
      out += "contain " + cont.parent + " " + cont.child + " as " +
             cont.child_name + "\n";
    }
  }
  return out;
}

}  // namespace depl
