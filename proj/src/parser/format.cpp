#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "pichan/parser.hpp"

namespace pichan {

namespace {

std::string sort_list(const std::vector<BaseSort>& sorts) {
  std::string out;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (i) out += ", ";
    out += sort_name(sorts[i]);
  }
  return out;
}

void write_extern(std::ostream& out, const ExternDecl& d) {
  out << "extern " << d.alias << " -> class " << d.class_name << " {";
  if (d.methods.empty()) {
    out << " }";
    return;
  }
  out << '\n';
  for (const auto& m : d.methods) {
    out << "  " << sort_name(m.returns) << ' ' << m.name << '(' << sort_list(m.params)
        << ") { call " << m.call_channel.display << ": "
        << (m.params.empty() ? "void" : sort_list(m.params)) << "; return "
        << m.return_channel.display << ": " << sort_name(m.returns) << "; }";
    // Automata that are not a single cycle have no source syntax; those are
    // printed without the clause, i.e. as the canonical protocol.
    auto cycle = m.protocol.as_cycle();
    if (m.explicit_protocol && cycle) {
      out << " acceded as {rec " << m.protocol.var << " {";
      for (const auto& t : *cycle) {
        out << t.channel.display << '(' << sort_list(t.payload) << ").";
      }
      out << m.protocol.var << "}}";
    }
    out << '\n';
  }
  out << '}';
}

class ProcessPrinter {
 public:
  ProcessPrinter(const Process& p, const std::vector<ExternDecl>& externs) {
    for (const auto& d : externs) {
      for (const auto& m : d.methods) {
        assign(m.call_channel);
        assign(m.return_channel);
      }
    }
    for (const auto& n : free_names(p)) assign(n);
  }

  enum class Pos { Top, Left, Atom };

  void print(std::ostream& out, const Process& p, Pos pos, bool tail) {
    if (p.is<Nil>()) {
      out << "nil";
    } else if (auto* x = p.get_if<Par>()) {
      if (pos != Pos::Top) {
        out << '(';
        print(out, p, Pos::Top, true);
        out << ')';
        return;
      }
      print(out, x->left, Pos::Left, false);
      out << " | ";
      print(out, x->right, Pos::Top, tail);
    } else if (p.is<New>()) {
      if (!tail) {
        out << '(';
        print(out, p, Pos::Top, true);
        out << ')';
        return;
      }
      out << "new ";
      const Process* cur = &p;
      bool first = true;
      while (auto* n = cur->get_if<New>()) {
        if (!first) out << ", ";
        out << assign(n->name);
        first = false;
        cur = &n->body;
      }
      out << " in ";
      print(out, *cur, Pos::Top, true);
    } else if (auto* x = p.get_if<Out>()) {
      out << name(x->subject) << "!(";
      for (std::size_t i = 0; i < x->objects.size(); ++i) {
        if (i) out << ", ";
        out << value(x->objects[i]);
      }
      out << ')';
      cont(out, x->cont, tail);
    } else if (auto* x = p.get_if<In>()) {
      out << name(x->subject) << "?" << (x->binding ? '(' : '<');
      for (std::size_t i = 0; i < x->objects.size(); ++i) {
        if (i) out << ", ";
        out << (x->binding ? assign(x->objects[i]) : name(x->objects[i]));
      }
      out << (x->binding ? ')' : '>');
      cont(out, x->cont, tail);
    } else if (auto* x = p.get_if<Repeat>()) {
      out << "repeat ";
      print(out, x->body, Pos::Atom, tail);
    } else if (auto* x = p.get_if<Fusion>()) {
      out << value(x->left) << " = " << value(x->right);
    }
  }

 private:
  void cont(std::ostream& out, const Process& p, bool tail) {
    if (p.is<Nil>()) return;
    out << '.';
    print(out, p, Pos::Atom, tail);
  }

  // Every name gets one printed spelling, unique across the whole text.
  const std::string& assign(const Name& n) {
    auto it = printed_.find(n.id);
    if (it != printed_.end()) return it->second;
    std::string base = detail::is_identifier(n.display) ? n.display : "n";
    std::string text = base;
    for (std::size_t k = 1; used_.count(text); ++k) text = base + "_" + std::to_string(k);
    used_.insert(text);
    return printed_.emplace(n.id, text).first->second;
  }

  std::string name(const Name& n) { return assign(n); }

  std::string value(const Value& v) {
    return is_name(v) ? name(as_name(v)) : literal_text(*as_literal(v));
  }

  std::map<std::uint64_t, std::string> printed_;
  std::set<std::string> used_;
};

}  // namespace

std::string format(const ExternDecl& d) {
  std::ostringstream out;
  write_extern(out, d);
  return out.str();
}

std::string format(const Process& p) {
  std::ostringstream out;
  ProcessPrinter(p, {}).print(out, p, ProcessPrinter::Pos::Top, true);
  return out.str();
}

std::string format(const Program& p) {
  std::ostringstream out;
  for (const auto& d : p.externs) {
    write_extern(out, d);
    out << '\n';
  }
  ProcessPrinter(p.main, p.externs).print(out, p.main, ProcessPrinter::Pos::Top, true);
  return out.str();
}

}  // namespace pichan
