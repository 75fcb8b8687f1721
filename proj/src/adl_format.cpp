#include "depl/adl_format.hpp"

#include <cctype>
#include <map>
#include <set>
#include <vector>

#include "frontend_common.hpp"

namespace depl {

namespace {

// ---------------------------------------------------------------------------
// A minimal XML reader: elements, attributes, comments, and the XML
// declaration — just enough for the dialect, with exact source positions.
// ---------------------------------------------------------------------------

struct XmlAttr {
  std::string name;
  std::string value;
  SourceLocation loc;
};

struct XmlElement {
  std::string name;
  SourceLocation loc;
  std::vector<XmlAttr> attrs;
  std::vector<XmlElement> children;

  const XmlAttr* find_attr(std::string_view attr_name) const {
    for (const XmlAttr& attr : attrs) {
      if (attr.name == attr_name) return &attr;
    }
    return nullptr;
  }
};

struct XmlAbort {};

class XmlReader {
 public:
  explicit XmlReader(std::string_view text) : text_(text) {}

  // On failure, diagnostics() is non-empty and the element is meaningless.
  XmlElement run() {
    try {
      skip_prolog();
      if (pos_ >= text_.size() || text_[pos_] != '<') {
        fail(here(), "expected a root element");
      }
      XmlElement root = parse_element();
      skip_trivia();
      if (pos_ < text_.size()) fail(here(), "content after the root element");
      return root;
    } catch (const XmlAbort&) {
      return {};
    }
  }

  std::vector<ParseDiagnostic>& diagnostics() { return diags_; }

 private:
  SourceLocation here() const { return {line_, column_}; }

  [[noreturn]] void fail(SourceLocation loc, std::string message) {
    diags_.push_back({diag::kSyntax, loc, std::move(message)});
    throw XmlAbort{};
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool starts_with(std::string_view prefix) const {
    return text_.substr(pos_, prefix.size()) == prefix;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(here(), std::string("expected '") + c + "'");
    }
    advance();
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  void skip_comment() {
    SourceLocation loc = here();
    for (int i = 0; i < 4; ++i) advance();  // "<!--"
    while (!starts_with("-->")) {
      if (pos_ >= text_.size()) fail(loc, "unterminated comment");
      advance();
    }
    for (int i = 0; i < 3; ++i) advance();
  }

  // Whitespace and comments between markup.
  void skip_trivia() {
    while (true) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else {
        return;
      }
    }
  }

  // Whitespace, comments, and an optional <?xml ...?> declaration.
  void skip_prolog() {
    skip_trivia();
    if (starts_with("<?")) {
      SourceLocation loc = here();
      while (!starts_with("?>")) {
        if (pos_ >= text_.size()) fail(loc, "unterminated declaration");
        advance();
      }
      advance();
      advance();
      skip_trivia();
    }
  }

  static bool is_name_start(char c) {
    return c == '_' || std::isalpha(static_cast<unsigned char>(c));
  }

  static bool is_name_char(char c) {
    return c == '_' || c == '-' || c == '.' ||
           std::isalnum(static_cast<unsigned char>(c));
  }

  std::string parse_name(const char* what) {
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) {
      fail(here(), std::string("expected ") + what);
    }
    std::string name;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) {
      name.push_back(text_[pos_]);
      advance();
    }
    return name;
  }

  std::string parse_attr_value() {
    if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
      fail(here(), "expected a quoted attribute value");
    }
    char quote = text_[pos_];
    SourceLocation start = here();
    advance();
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) fail(start, "unterminated attribute value");
      char c = text_[pos_];
      if (c == quote) {
        advance();
        return value;
      }
      if (c == '<') fail(here(), "'<' is not allowed in an attribute value");
      if (c == '&') {
        SourceLocation amp = here();
        advance();
        std::string entity;
        while (pos_ < text_.size() && text_[pos_] != ';' &&
               entity.size() <= 4) {
          entity.push_back(text_[pos_]);
          advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != ';') {
          fail(amp, "malformed entity reference");
        }
        advance();
        if (entity == "amp") value.push_back('&');
        else if (entity == "lt") value.push_back('<');
        else if (entity == "gt") value.push_back('>');
        else if (entity == "quot") value.push_back('"');
        else if (entity == "apos") value.push_back('\'');
        else fail(amp, "unknown entity reference '&" + entity + ";'");
      } else {
        value.push_back(c);
        advance();
      }
    }
  }

  XmlElement parse_element() {
    XmlElement element;
    element.loc = here();
    expect('<');
    element.name = parse_name("an element name");
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) fail(element.loc, "unterminated element");
      if (starts_with("/>")) {
        advance();
        advance();
        return element;
      }
      if (text_[pos_] == '>') {
        advance();
        parse_children(element);
        return element;
      }
      XmlAttr attr;
      attr.loc = here();
      attr.name = parse_name("an attribute name");
      skip_ws();
      expect('=');
      skip_ws();
      attr.value = parse_attr_value();
      if (element.find_attr(attr.name) != nullptr) {
        diags_.push_back({diag::kDuplicate, attr.loc,
                          "attribute " + attr.name +
                              " appears more than once on <" + element.name +
                              ">"});
      } else {
        element.attrs.push_back(std::move(attr));
      }
    }
  }

  void parse_children(XmlElement& element) {
    while (true) {
      SourceLocation loc = here();
      if (pos_ >= text_.size()) {
        fail(element.loc, "missing closing tag for <" + element.name + ">");
      }
      char c = text_[pos_];
      if (c == '<') {
        if (starts_with("<!--")) {
          skip_comment();
        } else if (starts_with("</")) {
          advance();
          advance();
          std::string closing = parse_name("a closing tag name");
          if (closing != element.name) {
            fail(loc, "closing tag </" + closing + "> does not match <" +
                          element.name + ">");
          }
          skip_ws();
          expect('>');
          return;
        } else {
          element.children.push_back(parse_element());
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        fail(loc, "text content is not allowed here");
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  std::vector<ParseDiagnostic> diags_;
};

// ---------------------------------------------------------------------------
// Mapping the element tree onto the configuration model
// ---------------------------------------------------------------------------

class AdlMapper {
 public:
  ParseResult<Configuration> map(const XmlElement& root) {
    ParseResult<Configuration> result;
    if (root.name != "definition") {
      diags_.push_back({diag::kUnsupportedElement, root.loc,
                        "unknown element <" + root.name +
                            "> (expected <definition>)"});
    } else {
      require_attr(root, "name");
      for (const XmlElement& child : root.children) {
        if (child.name == "component") {
          map_component(child);
        } else if (child.name == "binding") {
          map_binding(child);
        } else {
          unsupported(child, "definition");
        }
      }
    }
    for (const std::string& name : type_order_) {
      config_.types.push_back(types_.at(name));
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

  std::vector<ParseDiagnostic>& diagnostics() { return diags_; }

 private:
  void unsupported(const XmlElement& element, const std::string& context) {
    diags_.push_back({diag::kUnsupportedElement, element.loc,
                      "element <" + element.name + "> is not allowed in <" +
                          context + ">"});
  }

  // Fetches a required, non-empty attribute, or reports and returns null.
  const XmlAttr* require_attr(const XmlElement& element,
                              const std::string& name) {
    const XmlAttr* attr = element.find_attr(name);
    if (attr == nullptr) {
      diags_.push_back({diag::kSyntax, element.loc,
                        "<" + element.name + "> requires attribute '" + name +
                            "'"});
      return nullptr;
    }
    if (attr->value.empty()) {
      diags_.push_back({diag::kSyntax, attr->loc,
                        "attribute '" + name + "' on <" + element.name +
                            "> must be non-empty"});
      return nullptr;
    }
    return attr;
  }

  ComponentType& type_record(const std::string& name, SourceLocation loc) {
    auto it = types_.find(name);
    if (it == types_.end()) {
      it = types_.emplace(name, ComponentType{name, {}, {}, ""}).first;
      type_order_.push_back(name);
      subject_locs_.emplace(name, loc);
    }
    return it->second;
  }

  void map_component(const XmlElement& element) {
    const XmlAttr* name = require_attr(element, "name");
    const XmlAttr* type_name = require_attr(element, "definition");
    if (name == nullptr || type_name == nullptr) return;

    subject_locs_.emplace(name->value, element.loc);
    ComponentType& type = type_record(type_name->value, element.loc);

    Instance instance;
    instance.id = name->value;
    instance.type = type_name->value;

    for (const XmlElement& child : element.children) {
      if (child.name == "interface") {
        map_interface(child, type);
      } else if (child.name == "attributes") {
        map_attributes(child, type, instance);
      } else if (child.name == "component") {
        map_component(child);
        const XmlAttr* child_name = child.find_attr("name");
        if (child_name != nullptr && !child_name->value.empty()) {
          subject_locs_.emplace(instance.id + "/" + child_name->value,
                                child.loc);
          config_.containments.push_back(
              {instance.id, child_name->value, child_name->value});
        }
      } else if (child.name == "binding") {
        map_binding(child);
      } else {
        unsupported(child, "component");
      }
    }
    config_.instances.push_back(std::move(instance));
  }

  void map_interface(const XmlElement& element, ComponentType& type) {
    const XmlAttr* name = require_attr(element, "name");
    const XmlAttr* role = require_attr(element, "role");
    const XmlAttr* signature = require_attr(element, "signature");
    if (name == nullptr || role == nullptr || signature == nullptr) return;

    PortDirection direction;
    if (role->value == "client") {
      direction = PortDirection::Required;
    } else if (role->value == "server") {
      direction = PortDirection::Provided;
    } else {
      diags_.push_back({diag::kSyntax, role->loc,
                        "role must be 'client' or 'server', got '" +
                            role->value + "'"});
      return;
    }

    PortDecl decl{name->value, direction, signature->value};
    const PortDecl* existing = type.find_port(decl.name);
    if (existing != nullptr) {
      if (!(*existing == decl)) {
        diags_.push_back({diag::kDuplicate, element.loc,
                          "port " + decl.name + " on " + type.name +
                              " is redeclared with a different role or "
                              "signature"});
      }
      return;  // identical redeclaration across components of one type
    }
    subject_locs_.emplace(type.name + "." + decl.name, element.loc);
    used_interfaces_.insert(decl.interface);
    type.ports.push_back(std::move(decl));
  }

  void map_attributes(const XmlElement& element, ComponentType& type,
                      Instance& instance) {
    for (const XmlElement& child : element.children) {
      if (child.name != "attribute") {
        unsupported(child, "attributes");
        continue;
      }
      const XmlAttr* name = require_attr(child, "name");
      const XmlAttr* value = child.find_attr("value");
      if (value == nullptr) {
        diags_.push_back({diag::kSyntax, child.loc,
                          "<attribute> requires attribute 'value'"});
      }
      if (name == nullptr || value == nullptr) continue;
      // Values in this dialect are plain text, so declarations are
      // string-kind by construction.
      type.attributes.emplace(name->value, ValueKind::String);
      subject_locs_.emplace(instance.id + "." + name->value, child.loc);
      if (instance.attribute_values.count(name->value) != 0) {
        diags_.push_back({diag::kDuplicate, child.loc,
                          "attribute " + name->value +
                              " is assigned more than once on " +
                              instance.id});
        continue;
      }
      instance.attribute_values.emplace(name->value, Value(value->value));
    }
  }

  // Splits "component.port"; reports and returns false when malformed.
  bool split_endpoint(const XmlAttr& attr, std::string& instance,
                      std::string& port) {
    auto dot = attr.value.find('.');
    if (dot == std::string::npos || dot != attr.value.rfind('.') ||
        dot == 0 || dot + 1 == attr.value.size()) {
      diags_.push_back({diag::kSyntax, attr.loc,
                        "endpoint '" + attr.value +
                            "' must have the form component.port"});
      return false;
    }
    instance = attr.value.substr(0, dot);
    port = attr.value.substr(dot + 1);
    return true;
  }

  void map_binding(const XmlElement& element) {
    const XmlAttr* client = require_attr(element, "client");
    const XmlAttr* server = require_attr(element, "server");
    if (client == nullptr || server == nullptr) return;

    Binding binding;
    if (!split_endpoint(*client, binding.client_instance,
                        binding.client_port) ||
        !split_endpoint(*server, binding.server_instance,
                        binding.server_port)) {
      return;
    }
    subject_locs_.emplace(binding.client_endpoint() + " -> " +
                              binding.server_instance + "." +
                              binding.server_port,
                          element.loc);
    subject_locs_[binding.client_endpoint()] = element.loc;
    config_.bindings.push_back(std::move(binding));
  }

  Configuration config_;
  std::map<std::string, ComponentType> types_;
  std::vector<std::string> type_order_;
  std::map<std::string, SourceLocation> subject_locs_;
  std::set<std::string> used_interfaces_;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace

ParseResult<Configuration> parse_adl(std::string_view xml) {
  XmlReader reader(xml);
  XmlElement root = reader.run();
  if (!reader.diagnostics().empty()) {
    ParseResult<Configuration> result;
    result.diagnostics = std::move(reader.diagnostics());
    return result;
  }
  return AdlMapper().map(root);
}

}  // namespace depl
