#include <cctype>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pichan/ifgen.hpp"
#include "pichan/parser.hpp"

namespace pichan {

namespace {

using nlohmann::json;

bool valid_identifier(const std::string& s) {
  static const std::set<std::string> reserved = {"nil",  "new",   "in",   "repeat", "true",
                                                 "false", "unit", "extern", "void", "int",
                                                 "string", "bool"};
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  return !reserved.count(s);
}

BaseSort sort_field(const json& j, bool allow_void, const std::string& where) {
  if (!j.is_string()) throw ManifestParseError(where + ": sort must be a string");
  auto s = parse_sort_name(j.get<std::string>());
  if (!s || (!allow_void && *s == BaseSort::Void)) {
    throw UnknownSort(where + ": unknown sort '" + j.get<std::string>() + "'" +
                      (s ? " (void is only allowed as a return sort)" : ""));
  }
  return *s;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ManifestParseError(where + ": unexpected key '" + key + "'");
  }
}

}  // namespace

ClassManifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestParseError("manifest must be a JSON object");
  only_keys(doc, {"class", "constructor_effects", "methods"}, "manifest");

  ClassManifest m;
  if (!doc.contains("class") || !doc["class"].is_string()) {
    throw ManifestParseError("manifest needs a string \"class\"");
  }
  m.class_name = doc["class"].get<std::string>();
  if (!valid_identifier(m.class_name)) {
    throw ManifestParseError("class name '" + m.class_name + "' is not an identifier");
  }
  if (doc.contains("constructor_effects")) {
    if (!doc["constructor_effects"].is_boolean()) {
      throw ManifestParseError("\"constructor_effects\" must be a boolean");
    }
    m.constructor_effects = doc["constructor_effects"].get<bool>();
  }
  if (!doc.contains("methods") || !doc["methods"].is_array()) {
    throw ManifestParseError("manifest needs a \"methods\" array");
  }

  std::set<std::string> seen;
  for (const auto& entry : doc["methods"]) {
    if (!entry.is_object()) throw ManifestParseError("each method must be an object");
    only_keys(entry, {"name", "params", "returns"}, "method");
    if (!entry.contains("name") || !entry["name"].is_string()) {
      throw ManifestParseError("method needs a string \"name\"");
    }
    ManifestMethod mm;
    mm.name = entry["name"].get<std::string>();
    const std::string where = "method '" + mm.name + "'";
    if (!valid_identifier(mm.name)) throw ManifestParseError(where + ": name is not an identifier");
    if (!entry.contains("params") || !entry["params"].is_array()) {
      throw ManifestParseError(where + ": needs a \"params\" array");
    }
    for (const auto& p : entry["params"]) mm.params.push_back(sort_field(p, false, where));
    if (!entry.contains("returns")) throw ManifestParseError(where + ": needs \"returns\"");
    mm.returns = sort_field(entry["returns"], true, where);
    if (!seen.insert(mm.name).second) {
      throw DuplicateMethod("method '" + mm.name + "' appears twice in the manifest");
    }
    m.methods.push_back(std::move(mm));
  }
  return m;
}

ClassManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

ExternDecl interface_decl(const ClassManifest& m, const std::string& alias) {
  if (!valid_identifier(alias)) throw AliasClash("alias '" + alias + "' is not an identifier");
  std::set<std::string> taken;
  for (const auto& mm : m.methods) taken.insert(mm.name);
  if (taken.count(alias)) throw AliasClash("alias '" + alias + "' collides with a method name");

  ExternDecl d;
  d.alias = alias;
  d.class_name = m.class_name;
  NameSupply names;
  for (std::size_t i = 0; i < m.methods.size(); ++i) {
    const auto& mm = m.methods[i];
    std::string ret = "Ret" + std::to_string(i + 1);
    while (taken.count(ret)) ret += "_";
    if (ret == alias) throw AliasClash("alias '" + alias + "' collides with return channel '" + ret + "'");
    taken.insert(ret);

    ExternMethod em;
    em.name = mm.name;
    em.params = mm.params;
    em.returns = mm.returns;
    em.call_channel = names.fresh(mm.name, NameOrigin::Source);
    em.return_channel = names.fresh(ret, NameOrigin::Source);
    em.protocol = canonical_protocol(em);
    em.explicit_protocol = true;
    d.methods.push_back(std::move(em));
  }
  return d;
}

std::string generate_interface(const ClassManifest& m, const std::string& alias) {
  return format(interface_decl(m, alias)) + "\n";
}

}  // namespace pichan
