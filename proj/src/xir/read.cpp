#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "pichan/xir.hpp"

namespace pichan {

namespace {

using boost::property_tree::ptree;

constexpr const char* kAttrs = "<xmlattr>";
constexpr const char* kText = "<xmltext>";
constexpr const char* kComment = "<xmlcomment>";

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::vector<BaseSort>> parse_sorts(const std::string& text) {
  std::vector<BaseSort> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto s = parse_sort_name(item);
    if (!s || *s == BaseSort::Void) return std::nullopt;
    out.push_back(*s);
  }
  if (text.back() == ',') return std::nullopt;
  return out;
}

// Walks the tree, collecting every schema problem it can find instead of
// stopping at the first one.
class Reader {
 public:
  explicit Reader(std::string file) : file_(std::move(file)) {}

  std::vector<Diagnostic> diags;

  Program read(std::string_view text) {
    ptree tree;
    try {
      std::istringstream in{std::string(text)};
      boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error& e) {
      schema("malformed XML: " + e.message() + " (line " + std::to_string(e.line()) + ")");
      return {};
    }

    Program prog;
    const ptree* root = nullptr;
    for (const auto& [tag, node] : tree) {
      if (tag == kComment) continue;
      if (tag != "pic" || root) {
        schema("document must have a single <pic> root, found <" + tag + ">");
        continue;
      }
      root = &node;
    }
    if (!root) {
      if (diags.empty()) schema("missing <pic> root element");
      return prog;
    }

    auto attrs = attributes(*root, "pic", {"version"});
    if (auto it = attrs.find("version"); it != attrs.end() && it->second != "1") {
      diags.push_back(Diagnostic{span(), Severity::Error, "E-VERSION",
                                 "unsupported XIR version '" + it->second + "'"});
      return prog;
    }

    auto kids = children(*root, "pic");
    if (kids.size() != 2 || kids[0].first != "externs" || kids[1].first != "process") {
      schema("<pic> must contain <externs> followed by <process>");
    }
    for (const auto& [tag, node] : kids) {
      if (tag == "externs") {
        attributes(*node, "externs", {});
        for (const auto& [etag, enode] : children(*node, "externs")) {
          if (etag != "extern") {
            schema("unexpected <" + etag + "> in <externs>");
            continue;
          }
          prog.externs.push_back(extern_decl(*enode));
        }
      } else if (tag == "process") {
        attributes(*node, "process", {});
        auto body = children(*node, "process");
        if (body.size() != 1) {
          schema("<process> must contain exactly one process element, found " +
                 std::to_string(body.size()));
        }
        for (std::size_t i = 0; i < body.size(); ++i) {
          Process p = process(body[i].first, *body[i].second);
          if (i == 0) prog.main = p;
        }
      } else {
        schema("unexpected <" + tag + "> in <pic>");
      }
    }
    return prog;
  }

 private:
  using Children = std::vector<std::pair<std::string, const ptree*>>;

  SourceSpan span() const { return SourceSpan{file_, 0, 0, 1}; }

  void schema(std::string message) {
    diags.push_back(Diagnostic{span(), Severity::Error, "E-SCHEMA", std::move(message)});
  }

  // Attribute map of `node`; reports unknown and missing attributes.
  std::map<std::string, std::string> attributes(const ptree& node, const std::string& tag,
                                                std::initializer_list<const char*> allowed) {
    std::map<std::string, std::string> out;
    if (auto a = node.get_child_optional(kAttrs)) {
      for (const auto& [key, value] : *a) {
        bool known = false;
        for (const char* k : allowed) known = known || key == k;
        if (!known) {
          schema("unknown attribute '" + key + "' on <" + tag + ">");
          continue;
        }
        out[key] = value.data();
      }
    }
    for (const char* k : allowed) {
      if (!out.count(k)) schema("<" + tag + "> is missing attribute '" + k + "'");
    }
    return out;
  }

  Children children(const ptree& node, const std::string& tag) {
    Children out;
    for (const auto& [key, child] : node) {
      if (key == kAttrs || key == kComment) continue;
      if (key == kText) {
        if (child.data().find_first_not_of(" \t\r\n") != std::string::npos) {
          schema("unexpected text inside <" + tag + ">");
        }
        continue;
      }
      out.emplace_back(key, &child);
    }
    if (!node.data().empty() && node.data().find_first_not_of(" \t\r\n") != std::string::npos) {
      schema("unexpected text inside <" + tag + ">");
    }
    return out;
  }

  Name name(const std::string& text) {
    auto hash = text.rfind('#');
    auto id = hash == std::string::npos ? std::nullopt
                                        : parse_u64(std::string_view(text).substr(hash + 1));
    if (!id || *id == 0) {
      schema("malformed name '" + text + "' (expected display#id)");
      return Name{0, text, NameOrigin::Source};
    }
    Name n{*id, text.substr(0, hash), NameOrigin::Source};
    auto [it, inserted] = spellings_.emplace(n.id, n.display);
    if (!inserted && it->second != n.display) {
      schema("name id " + std::to_string(n.id) + " is spelled both '" + it->second +
             "' and '" + n.display + "'");
    }
    return n;
  }

  Value fusion_operand(const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    if (text == "unit") return Unit{};
    if (auto i = parse_i64(text)) return *i;
    if (!text.empty() && text.front() == '"') {
      std::string out;
      for (std::size_t i = 1; i < text.size(); ++i) {
        char c = text[i];
        if (c == '"' && i + 1 == text.size()) return out;
        if (c == '\\' && i + 1 < text.size()) {
          char e = text[++i];
          if (e == 'n') out += '\n';
          else if (e == 't') out += '\t';
          else if (e == '"' || e == '\\') out += e;
          else break;
          continue;
        }
        out += c;
      }
      schema("malformed string operand " + text);
      return out;
    }
    return name(text);
  }

  Value argument(const ptree& node, bool names_only) {
    auto attrs = attributes(node, "arg", {"kind", "value"});
    if (!children(node, "arg").empty()) schema("<arg> must be empty");
    const std::string& kind = attrs["kind"];
    const std::string& value = attrs["value"];
    if (names_only && kind != "name") {
      schema("<in> arguments must be names, found kind '" + kind + "'");
      return name(value);
    }
    if (kind == "name") return name(value);
    if (kind == "int") {
      if (auto i = parse_i64(value)) return *i;
      schema("bad int value '" + value + "'");
      return std::int64_t{0};
    }
    if (kind == "str") return value;
    if (kind == "bool") {
      if (value == "true" || value == "false") return value == "true";
      schema("bad bool value '" + value + "'");
      return false;
    }
    if (kind == "unit") {
      if (value != "unit") schema("unit argument must have value 'unit'");
      return Unit{};
    }
    schema("unknown argument kind '" + kind + "'");
    return Unit{};
  }

  Process expect_one(const ptree& node, const std::string& tag) {
    auto kids = children(node, tag);
    if (kids.size() != 1) {
      schema("<" + tag + "> must have exactly one child, found " + std::to_string(kids.size()));
    }
    return kids.empty() ? Process() : process(kids.front().first, *kids.front().second);
  }

  Process process(const std::string& tag, const ptree& node) {
    if (tag == "nil") {
      attributes(node, tag, {});
      if (!children(node, tag).empty()) schema("<nil> must be empty");
      return Process();
    }
    if (tag == "par") {
      attributes(node, tag, {});
      auto kids = children(node, tag);
      if (kids.size() != 2) {
        schema("<par> must have exactly two children, found " + std::to_string(kids.size()));
      }
      Process left = kids.size() > 0 ? process(kids[0].first, *kids[0].second) : Process();
      Process right = kids.size() > 1 ? process(kids[1].first, *kids[1].second) : Process();
      for (std::size_t i = 2; i < kids.size(); ++i) process(kids[i].first, *kids[i].second);
      return Process::par(left, right);
    }
    if (tag == "new") {
      auto attrs = attributes(node, tag, {"name"});
      Name n = attrs.count("name") ? name(attrs["name"]) : Name{};
      return Process::restrict(n, expect_one(node, tag));
    }
    if (tag == "repeat") {
      attributes(node, tag, {});
      return Process::repeat(expect_one(node, tag));
    }
    if (tag == "fusion") {
      auto attrs = attributes(node, tag, {"left", "right"});
      if (!children(node, tag).empty()) schema("<fusion> must be empty");
      Value l = attrs.count("left") ? fusion_operand(attrs["left"]) : Value{Unit{}};
      Value r = attrs.count("right") ? fusion_operand(attrs["right"]) : Value{Unit{}};
      return Process::fusion(l, r);
    }
    if (tag == "out" || tag == "in") {
      auto attrs = attributes(node, tag, {"subject"});
      Name subject = attrs.count("subject") ? name(attrs["subject"]) : Name{};
      std::vector<Value> objects;
      Process cont;
      bool seen_cont = false;
      for (const auto& [ktag, knode] : children(node, tag)) {
        if (seen_cont) {
          schema("<cont> must be the last child of <" + tag + ">");
          break;
        }
        if (ktag == "arg") {
          objects.push_back(argument(*knode, tag == "in"));
        } else if (ktag == "cont") {
          attributes(*knode, "cont", {});
          cont = expect_one(*knode, "cont");
          seen_cont = true;
        } else {
          schema("unexpected <" + ktag + "> in <" + tag + ">");
        }
      }
      if (!seen_cont) schema("<" + tag + "> is missing its <cont>");
      if (tag == "out") return Process::output(subject, std::move(objects), cont);
      std::vector<Name> names;
      for (const auto& v : objects) {
        if (is_name(v)) names.push_back(as_name(v));
      }
      return Process::input(subject, std::move(names), false, cont);
    }
    schema("unknown element <" + tag + ">");
    return Process();
  }

  std::vector<BaseSort> sorts_attr(std::map<std::string, std::string>& attrs,
                                   const std::string& tag) {
    auto sorts = parse_sorts(attrs["sorts"]);
    if (!sorts) {
      schema("bad sort list '" + attrs["sorts"] + "' on <" + tag + ">");
      return {};
    }
    return *sorts;
  }

  Name channel(std::map<std::string, std::string>& attrs) {
    if (!attrs.count("channel")) return Name{};
    Name n = name(attrs["channel"]);
    if (n.id != 0 && !channels_.insert(n.id).second) {
      schema("extern channel '" + attrs["channel"] + "' is declared twice");
    }
    return n;
  }

  ExternDecl extern_decl(const ptree& node) {
    ExternDecl d;
    auto attrs = attributes(node, "extern", {"alias", "class"});
    d.alias = attrs["alias"];
    d.class_name = attrs["class"];
    for (const auto& [tag, mnode] : children(node, "extern")) {
      if (tag != "method") {
        schema("unexpected <" + tag + "> in <extern>");
        continue;
      }
      d.methods.push_back(method(*mnode));
    }
    return d;
  }

  ExternMethod method(const ptree& node) {
    ExternMethod m;
    m.name = attributes(node, "method", {"name"})["name"];
    bool have_call = false, have_ret = false;
    std::optional<ProtocolAutomaton> protocol;
    std::vector<std::pair<std::string, std::vector<BaseSort>>> steps;
    for (const auto& [tag, child] : children(node, "method")) {
      if (tag == "call" && !have_call && !have_ret && !protocol) {
        auto attrs = attributes(*child, tag, {"channel", "sorts"});
        if (!children(*child, tag).empty()) schema("<call> must be empty");
        m.call_channel = channel(attrs);
        m.params = sorts_attr(attrs, tag);
        have_call = true;
      } else if (tag == "ret" && have_call && !have_ret) {
        auto attrs = attributes(*child, tag, {"channel", "sort"});
        if (!children(*child, tag).empty()) schema("<ret> must be empty");
        m.return_channel = channel(attrs);
        auto s = parse_sort_name(attrs["sort"]);
        if (!s) schema("bad sort '" + attrs["sort"] + "' on <ret>");
        m.returns = s.value_or(BaseSort::Void);
        have_ret = true;
      } else if (tag == "protocol" && have_ret && !protocol) {
        auto attrs = attributes(*child, tag, {"var"});
        std::vector<std::pair<Name, std::vector<BaseSort>>> actions;
        for (const auto& [stag, snode] : children(*child, tag)) {
          if (stag != "step") {
            schema("unexpected <" + stag + "> in <protocol>");
            continue;
          }
          auto sattrs = attributes(*snode, stag, {"channel", "sorts"});
          if (!children(*snode, stag).empty()) schema("<step> must be empty");
          Name ch = sattrs.count("channel") ? name(sattrs["channel"]) : Name{};
          actions.emplace_back(ch, sorts_attr(sattrs, stag));
        }
        if (actions.empty()) schema("<protocol> needs at least one <step>");
        protocol = ProtocolAutomaton::cycle(attrs["var"], std::move(actions));
      } else {
        schema("unexpected <" + tag + "> in <method> (expected call, ret, optional protocol)");
      }
    }
    if (!have_call || !have_ret) schema("<method> needs <call> and <ret>");
    if (protocol) {
      m.protocol = std::move(*protocol);
      m.explicit_protocol = true;
    } else {
      m.protocol = canonical_protocol(m);
    }
    return m;
  }

  std::string file_;
  std::map<std::uint64_t, std::string> spellings_;
  std::set<std::uint64_t> channels_;
};

}  // namespace

Program from_xml(std::string_view text, const std::string& file) {
  Reader reader(file);
  Program p = reader.read(text);
  if (!reader.diags.empty()) throw DiagnosticError(reader.diags);
  return p;
}

std::vector<Diagnostic> validate(std::string_view text, const std::string& file) {
  Reader reader(file);
  reader.read(text);
  return reader.diags;
}

}  // namespace pichan
