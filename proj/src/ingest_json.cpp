
#include "json.hpp"

#include "compocheck/ingest.hpp"

namespace compocheck {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

SourceSpan position_of(std::string_view text, std::size_t byte, const std::string& file) {
  SourceSpan span{file, 1, 1};
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++span.line;
      span.column = 1;
    } else {
      ++span.column;
    }
  }
  return span;
}

// Reads the schema, collecting one error per offending field. JSON values carry
// no positions, so errors point at the document start and name the JSON pointer.
class JsonReader {
 public:
  explicit JsonReader(std::string file) : file_(std::move(file)) {}

  ParseResult read(const json& doc) {
    Model model;
    if (!doc.is_object()) {
      report("", "top-level value must be an object");
      return finish(std::move(model));
    }
    if (doc.contains("formatVersion")) {
      const auto& version = doc["formatVersion"];
      if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
        report("/formatVersion", "unsupported formatVersion (expected 1)");
      }
    }
    for_each(doc, "interfaces", "", [&](const json& item, const std::string& at) {
      model.interfaces.push_back(read_interface(item, at));
    });
    for_each(doc, "classes", "", [&](const json& item, const std::string& at) {
      model.classes.push_back(read_class(item, at));
    });
    for_each(doc, "associations", "", [&](const json& item, const std::string& at) {
      model.associations.push_back(read_association(item, at));
    });
    if (doc.contains("root")) model.root = string_field(doc, "root", "");
    return finish(std::move(model));
  }

 private:
  ParseResult finish(Model model) {
    ParseResult result;
    if (errors_.empty()) {
      result.model = std::move(model);
    } else {
      result.errors = std::move(errors_);
    }
    return result;
  }

  void report(const std::string& pointer, const std::string& message) {
    errors_.push_back(ParseError{SourceSpan{file_, 1, 1}, (pointer.empty() ? "/" : pointer) + ": " + message,
                                 std::nullopt});
  }

  template <typename Fn>
  void for_each(const json& object, const char* key, const std::string& at, Fn&& fn) {
    if (!object.contains(key)) return;
    const auto& array = object[key];
    const auto pointer = at + "/" + key;
    if (!array.is_array()) {
      report(pointer, "must be an array");
      return;
    }
    for (std::size_t i = 0; i < array.size(); ++i) fn(array[i], pointer + "/" + std::to_string(i));
  }

  std::string string_field(const json& object, const char* key, const std::string& at, bool required = true) {
    if (!object.is_object() || !object.contains(key)) {
      if (required) report(at, std::string("missing '") + key + "'");
      return {};
    }
    const auto& value = object[key];
    if (!value.is_string()) {
      report(at + "/" + key, "must be a string");
      return {};
    }
    return value.get<std::string>();
  }

  bool bool_field(const json& object, const char* key, const std::string& at) {
    if (!object.is_object() || !object.contains(key)) return false;
    const auto& value = object[key];
    if (!value.is_boolean()) {
      report(at + "/" + key, "must be a boolean");
      return false;
    }
    return value.get<bool>();
  }

  std::vector<std::string> string_list(const json& object, const char* key, const std::string& at) {
    std::vector<std::string> out;
    for_each(object, key, at, [&](const json& item, const std::string& pointer) {
      if (item.is_string()) {
        out.push_back(item.get<std::string>());
      } else {
        report(pointer, "must be a string");
      }
    });
    return out;
  }

  bool expect_object(const json& item, const std::string& at) {
    if (item.is_object()) return true;
    report(at, "must be an object");
    return false;
  }

  Interface read_interface(const json& item, const std::string& at) {
    Interface iface;
    if (!expect_object(item, at)) return iface;
    iface.name = string_field(item, "name", at);
    iface.is_group = bool_field(item, "interfaceGroup", at);
    iface.generals = string_list(item, "generals", at);
    iface.operations = string_list(item, "operations", at);
    return iface;
  }

  EndRef read_end(const json& item, const std::string& at) {
    EndRef end;
    if (!expect_object(item, at)) return end;
    if (item.contains("part")) end.part = string_field(item, "part", at);
    if (item.contains("port")) end.port = string_field(item, "port", at);
    return end;
  }

  Class read_class(const json& item, const std::string& at) {
    Class cls;
    if (!expect_object(item, at)) return cls;
    cls.name = string_field(item, "name", at);
    if (item.contains("kind")) {
      const auto kind_text = string_field(item, "kind", at);
      if (auto kind = class_kind_from_string(kind_text)) {
        cls.kind = *kind;
      } else {
        report(at + "/kind", "unknown class kind '" + kind_text + "'");
      }
    }
    cls.generals = string_list(item, "generals", at);
    cls.realizes = string_list(item, "realizes", at);
    cls.usages = string_list(item, "uses", at);
    for_each(item, "attributes", at, [&](const json& attr, const std::string& pointer) {
      if (!expect_object(attr, pointer)) return;
      cls.attributes.push_back(Attribute{string_field(attr, "name", pointer), string_field(attr, "type", pointer)});
    });
    for_each(item, "parts", at, [&](const json& part_json, const std::string& pointer) {
      if (!expect_object(part_json, pointer)) return;
      Part part;
      part.name = string_field(part_json, "name", pointer);
      part.type = string_field(part_json, "type", pointer);
      if (part_json.contains("multiplicity")) {
        const auto& mult = part_json["multiplicity"];
        if (mult.is_number_integer()) {
          part.multiplicity = mult.get<int>();
        } else {
          report(pointer + "/multiplicity", "must be an integer");
        }
      }
      cls.parts.push_back(std::move(part));
    });
    for_each(item, "ports", at, [&](const json& port_json, const std::string& pointer) {
      if (!expect_object(port_json, pointer)) return;
      Port port;
      port.name = string_field(port_json, "name", pointer);
      port.contract = string_field(port_json, "contract", pointer);
      port.reversed = bool_field(port_json, "reversed", pointer);
      cls.ports.push_back(std::move(port));
    });
    for_each(item, "connectors", at, [&](const json& conn_json, const std::string& pointer) {
      if (!expect_object(conn_json, pointer)) return;
      if (conn_json.contains("ends") || conn_json.contains("end3")) {
        report(pointer, "connectors are binary; n-ary connectors are not supported");
        return;
      }
      Connector connector;
      if (!conn_json.contains("end1") || !conn_json.contains("end2")) {
        report(pointer, "a connector needs 'end1' and 'end2'");
        return;
      }
      connector.end1 = read_end(conn_json["end1"], pointer + "/end1");
      connector.end2 = read_end(conn_json["end2"], pointer + "/end2");
      if (conn_json.contains("association")) connector.association = string_field(conn_json, "association", pointer);
      cls.connectors.push_back(std::move(connector));
    });
    return cls;
  }

  AssociationEnd read_association_end(const json& item, const std::string& at) {
    AssociationEnd end;
    if (!expect_object(item, at)) return end;
    end.type = string_field(item, "type", at);
    end.navigable = bool_field(item, "navigable", at);
    return end;
  }

  Association read_association(const json& item, const std::string& at) {
    Association assoc;
    if (!expect_object(item, at)) return assoc;
    assoc.name = string_field(item, "name", at);
    if (!item.contains("end1") || !item.contains("end2")) {
      report(at, "an association needs 'end1' and 'end2'");
      return assoc;
    }
    assoc.end1 = read_association_end(item["end1"], at + "/end1");
    assoc.end2 = read_association_end(item["end2"], at + "/end2");
    assoc.synthesized = bool_field(item, "synthesized", at);
    return assoc;
  }

  std::string file_;
  std::vector<ParseError> errors_;
};

ordered_json strings(const std::vector<std::string>& values) {
  ordered_json array = ordered_json::array();
  for (const auto& value : values) array.push_back(value);
  return array;
}

ordered_json end_json(const EndRef& end) {
  ordered_json out = ordered_json::object();
  if (end.part) out["part"] = *end.part;
  if (end.port) out["port"] = *end.port;
  return out;
}

}  // namespace

ParseResult parse_json(std::string_view text, std::string_view file_name) {
  const std::string file(file_name);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ParseResult result;
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    result.errors.push_back(ParseError{position_of(text, byte, file), "malformed JSON: " + std::string(e.what()),
                                       std::nullopt});
    return result;
  }
  return JsonReader(file).read(doc);
}

std::string serialize_json(const Model& model) {
  ordered_json doc;
  doc["formatVersion"] = kFormatVersion;

  ordered_json classes = ordered_json::array();
  for (const auto& cls : model.classes) {
    ordered_json c;
    c["name"] = cls.name;
    c["kind"] = std::string(to_string(cls.kind));
    c["generals"] = strings(cls.generals);
    c["realizes"] = strings(cls.realizes);
    c["uses"] = strings(cls.usages);
    ordered_json attributes = ordered_json::array();
    for (const auto& attr : cls.attributes) {
      ordered_json a;
      a["name"] = attr.name;
      a["type"] = attr.type;
      attributes.push_back(std::move(a));
    }
    c["attributes"] = std::move(attributes);
    ordered_json parts = ordered_json::array();
    for (const auto& part : cls.parts) {
      ordered_json p;
      p["name"] = part.name;
      p["type"] = part.type;
      p["multiplicity"] = part.multiplicity;
      parts.push_back(std::move(p));
    }
    c["parts"] = std::move(parts);
    ordered_json ports = ordered_json::array();
    for (const auto& port : cls.ports) {
      ordered_json p;
      p["name"] = port.name;
      p["contract"] = port.contract;
      p["reversed"] = port.reversed;
      ports.push_back(std::move(p));
    }
    c["ports"] = std::move(ports);
    ordered_json connectors = ordered_json::array();
    for (const auto& connector : cls.connectors) {
      ordered_json k;
      k["end1"] = end_json(connector.end1);
      k["end2"] = end_json(connector.end2);
      if (connector.association) k["association"] = *connector.association;
      connectors.push_back(std::move(k));
    }
    c["connectors"] = std::move(connectors);
    classes.push_back(std::move(c));
  }
  doc["classes"] = std::move(classes);

  ordered_json interfaces = ordered_json::array();
  for (const auto& iface : model.interfaces) {
    ordered_json i;
    i["name"] = iface.name;
    i["interfaceGroup"] = iface.is_group;
    i["generals"] = strings(iface.generals);
    i["operations"] = strings(iface.operations);
    interfaces.push_back(std::move(i));
  }
  doc["interfaces"] = std::move(interfaces);

  ordered_json associations = ordered_json::array();
  for (const auto& assoc : model.associations) {
    ordered_json a;
    a["name"] = assoc.name;
    a["end1"] = ordered_json{{"type", assoc.end1.type}, {"navigable", assoc.end1.navigable}};
    a["end2"] = ordered_json{{"type", assoc.end2.type}, {"navigable", assoc.end2.navigable}};
    a["synthesized"] = assoc.synthesized;
    associations.push_back(std::move(a));
  }
  doc["associations"] = std::move(associations);

  if (model.root) doc["root"] = *model.root;
  return doc.dump(2) + "\n";
}

}  // namespace compocheck
