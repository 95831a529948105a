#include <sstream>

#include "pichan/xir.hpp"

namespace pichan {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sorts_text(const std::vector<BaseSort>& sorts) {
  std::string out;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (i) out += ',';
    out += sort_name(sorts[i]);
  }
  return out;
}

class Writer {
 public:
  explicit Writer(std::ostringstream& out) : out_(out) {}

  void program(const Program& p) {
    out_ << "<pic version=\"1\">\n";
    if (p.externs.empty()) {
      line(1, "<externs/>");
    } else {
      line(1, "<externs>");
      for (const auto& d : p.externs) extern_decl(d, 2);
      line(1, "</externs>");
    }
    line(1, "<process>");
    process(p.main, 2);
    line(1, "</process>");
    out_ << "</pic>\n";
  }

 private:
  void line(int depth, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text << '\n';
  }

  static std::string attr(const char* key, const std::string& value) {
    return std::string(" ") + key + "=\"" + escape(value) + "\"";
  }

  void extern_decl(const ExternDecl& d, int depth) {
    const std::string open = "<extern" + attr("alias", d.alias) + attr("class", d.class_name);
    if (d.methods.empty()) {
      line(depth, open + "/>");
      return;
    }
    line(depth, open + ">");
    for (const auto& m : d.methods) {
      line(depth + 1, "<method" + attr("name", m.name) + ">");
      line(depth + 2, "<call" + attr("channel", qualified(m.call_channel)) +
                          attr("sorts", sorts_text(m.params)) + "/>");
      line(depth + 2, "<ret" + attr("channel", qualified(m.return_channel)) +
                          attr("sort", std::string(sort_name(m.returns))) + "/>");
      auto cycle = m.protocol.as_cycle();
      if (m.explicit_protocol && cycle) {
        line(depth + 2, "<protocol" + attr("var", m.protocol.var) + ">");
        for (const auto& t : *cycle) {
          line(depth + 3, "<step" + attr("channel", qualified(t.channel)) +
                              attr("sorts", sorts_text(t.payload)) + "/>");
        }
        line(depth + 2, "</protocol>");
      }
      line(depth + 1, "</method>");
    }
    line(depth, "</extern>");
  }

  static std::pair<std::string, std::string> arg(const Value& v) {
    if (is_name(v)) return {"name", qualified(as_name(v))};
    return std::visit(
        [](const auto& x) -> std::pair<std::string, std::string> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::int64_t>) {
            return {"int", std::to_string(x)};
          } else if constexpr (std::is_same_v<T, std::string>) {
            return {"str", x};
          } else if constexpr (std::is_same_v<T, bool>) {
            return {"bool", x ? "true" : "false"};
          } else {
            return {"unit", "unit"};
          }
        },
        *as_literal(v));
  }

  void prefix(const char* tag, const Name& subject, const std::vector<Value>& objects,
              const Process& cont, int depth) {
    line(depth, std::string("<") + tag + attr("subject", qualified(subject)) + ">");
    for (const auto& o : objects) {
      auto [kind, value] = arg(o);
      line(depth + 1, "<arg" + attr("kind", kind) + attr("value", value) + "/>");
    }
    line(depth + 1, "<cont>");
    process(cont, depth + 2);
    line(depth + 1, "</cont>");
    line(depth, std::string("</") + tag + ">");
  }

  void process(const Process& p, int depth) {
    if (p.is<Nil>()) {
      line(depth, "<nil/>");
    } else if (auto* x = p.get_if<Par>()) {
      line(depth, "<par>");
      process(x->left, depth + 1);
      process(x->right, depth + 1);
      line(depth, "</par>");
    } else if (auto* x = p.get_if<New>()) {
      line(depth, "<new" + attr("name", qualified(x->name)) + ">");
      process(x->body, depth + 1);
      line(depth, "</new>");
    } else if (auto* x = p.get_if<Out>()) {
      prefix("out", x->subject, x->objects, x->cont, depth);
    } else if (auto* x = p.get_if<In>()) {
      if (x->binding) throw SurfaceFormError("XIR requires core terms (desugar first)");
      std::vector<Value> objects(x->objects.begin(), x->objects.end());
      prefix("in", x->subject, objects, x->cont, depth);
    } else if (auto* x = p.get_if<Repeat>()) {
      line(depth, "<repeat>");
      process(x->body, depth + 1);
      line(depth, "</repeat>");
    } else if (auto* x = p.get_if<Fusion>()) {
      line(depth, "<fusion" + attr("left", value_text(x->left)) +
                      attr("right", value_text(x->right)) + "/>");
    }
  }

  std::ostringstream& out_;
};

}  // namespace

std::string to_xml(const Program& p) {
  std::ostringstream out;
  Writer(out).program(p);
  return out.str();
}

}  // namespace pichan
