#include "pichan/typecheck.hpp"

namespace pichan {

Sort Sort::of(BaseSort s) {
  switch (s) {
    case BaseSort::Int: return Sort{Kind::Int, {}};
    case BaseSort::Str: return Sort{Kind::Str, {}};
    case BaseSort::Bool: return Sort{Kind::Bool, {}};
    case BaseSort::Void: return Sort{Kind::Unit, {}};
  }
  return Sort{};
}

std::string Sort::to_string() const {
  switch (kind) {
    case Kind::Int: return "int";
    case Kind::Str: return "string";
    case Kind::Bool: return "bool";
    case Kind::Unit: return "unit";
    case Kind::Chan: break;
  }
  std::string out = "chan(";
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (i) out += ", ";
    out += payload[i].to_string();
  }
  return out + ")";
}

namespace {

// Union-find over sort variables. A root is either unknown or a constructor
// whose arguments are further variables.
class Unifier {
 public:
  enum class Tag { Unknown, Chan, Int, Str, Bool, Unit };

  int fresh(Tag tag = Tag::Unknown, std::vector<int> args = {}) {
    nodes_.push_back(Node{static_cast<int>(nodes_.size()), tag, std::move(args)});
    return nodes_.back().parent;
  }

  int of(const Sort& s) {
    switch (s.kind) {
      case Sort::Kind::Int: return fresh(Tag::Int);
      case Sort::Kind::Str: return fresh(Tag::Str);
      case Sort::Kind::Bool: return fresh(Tag::Bool);
      case Sort::Kind::Unit: return fresh(Tag::Unit);
      case Sort::Kind::Chan: break;
    }
    std::vector<int> args;
    for (const auto& p : s.payload) args.push_back(of(p));
    return fresh(Tag::Chan, std::move(args));
  }

  int find(int v) {
    while (nodes_[v].parent != v) {
      nodes_[v].parent = nodes_[nodes_[v].parent].parent;
      v = nodes_[v].parent;
    }
    return v;
  }

  // Empty string on success, otherwise a description of the conflict.
  std::string unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return {};
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (na.tag == Tag::Unknown || nb.tag == Tag::Unknown) {
      int var = na.tag == Tag::Unknown ? a : b;
      int other = var == a ? b : a;
      if (occurs(var, other)) return "recursive channel sort";
      nodes_[var].parent = other;
      return {};
    }
    if (na.tag != nb.tag) return "expected " + show(a) + " but found " + show(b);
    if (na.tag == Tag::Chan) {
      if (na.args.size() != nb.args.size()) {
        return "channel carries " + std::to_string(na.args.size()) + " value(s), used with " +
               std::to_string(nb.args.size());
      }
      std::vector<int> xs = na.args, ys = nb.args;
      std::string before_a = show(a), before_b = show(b);
      nodes_[b].parent = a;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (auto err = unify(xs[i], ys[i]); !err.empty()) {
          return "expected " + before_a + " but found " + before_b;
        }
      }
      return {};
    }
    nodes_[b].parent = a;
    return {};
  }

  Sort resolve(int v, int depth = 0) {
    v = find(v);
    const Node& n = nodes_[v];
    switch (n.tag) {
      case Tag::Int: return Sort::of(BaseSort::Int);
      case Tag::Str: return Sort::of(BaseSort::Str);
      case Tag::Bool: return Sort::of(BaseSort::Bool);
      case Tag::Unit: return Sort::of(BaseSort::Void);
      case Tag::Unknown: return Sort::chan();
      case Tag::Chan: break;
    }
    std::vector<Sort> payload;
    if (depth < 32) {
      for (int a : n.args) payload.push_back(resolve(a, depth + 1));
    }
    return Sort::chan(std::move(payload));
  }

  std::string show(int v) {
    v = find(v);
    if (nodes_[v].tag == Tag::Unknown) return "_";
    return resolve(v).to_string();
  }

 private:
  struct Node {
    int parent;
    Tag tag;
    std::vector<int> args;
  };

  bool occurs(int var, int in) {
    in = find(in);
    if (in == var) return true;
    std::vector<int> args = nodes_[in].args;
    for (int a : args) {
      if (occurs(var, a)) return true;
    }
    return false;
  }

  std::vector<Node> nodes_;
};

class SortChecker {
 public:
  SortResult run(const Program& p) {
    for (const auto& d : p.externs) {
      for (const auto& m : d.methods) {
        std::vector<Sort> params;
        for (auto s : m.params) params.push_back(Sort::of(s));
        std::vector<Sort> ret;
        for (auto s : m.return_payload()) ret.push_back(Sort::of(s));
        vars_[m.call_channel.id] = u_.of(Sort::chan(params));
        vars_[m.return_channel.id] = u_.of(Sort::chan(ret));
      }
    }
    walk(p.main);
    SortResult out;
    for (const auto& [id, v] : vars_) out.sorts[id] = u_.resolve(v);
    out.diagnostics = std::move(diags_);
    return out;
  }

 private:
  int var(const Name& n) {
    auto [it, inserted] = vars_.try_emplace(n.id, 0);
    if (inserted) it->second = u_.fresh();
    return it->second;
  }

  int var(const Value& v) {
    if (is_name(v)) return var(as_name(v));
    return std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::int64_t>) {
            return u_.fresh(Unifier::Tag::Int);
          } else if constexpr (std::is_same_v<T, std::string>) {
            return u_.fresh(Unifier::Tag::Str);
          } else if constexpr (std::is_same_v<T, bool>) {
            return u_.fresh(Unifier::Tag::Bool);
          } else {
            return u_.fresh(Unifier::Tag::Unit);
          }
        },
        *as_literal(v));
  }

  void report(const SourceSpan& span, const std::string& message) {
    diags_.push_back(Diagnostic{span, Severity::Error, "E-SORT", message});
  }

  void use(const Name& subject, const std::vector<int>& args, const SourceSpan& span,
           const char* what) {
    int chan = u_.fresh(Unifier::Tag::Chan, args);
    if (auto err = u_.unify(var(subject), chan); !err.empty()) {
      report(span, std::string(what) + " on '" + subject.display + "': " + err);
    }
  }

  void walk(const Process& p) {
    if (auto* x = p.get_if<Par>()) {
      walk(x->left);
      walk(x->right);
    } else if (auto* x = p.get_if<New>()) {
      var(x->name);
      walk(x->body);
    } else if (auto* x = p.get_if<Out>()) {
      std::vector<int> args;
      for (const auto& o : x->objects) args.push_back(var(o));
      use(x->subject, args, p.span(), "output");
      walk(x->cont);
    } else if (auto* x = p.get_if<In>()) {
      std::vector<int> args;
      for (const auto& o : x->objects) args.push_back(var(o));
      use(x->subject, args, p.span(), "input");
      walk(x->cont);
    } else if (auto* x = p.get_if<Repeat>()) {
      walk(x->body);
    } else if (auto* x = p.get_if<Fusion>()) {
      if (auto err = u_.unify(var(x->left), var(x->right)); !err.empty()) {
        report(p.span(), "fusion " + value_text(x->left) + " = " + value_text(x->right) +
                             ": " + err);
      }
    }
  }

  Unifier u_;
  std::map<std::uint64_t, int> vars_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

SortResult infer_sorts(const Program& p) { return SortChecker().run(p); }

std::vector<Diagnostic> check_sorts(const Program& p) { return infer_sorts(p).diagnostics; }

}  // namespace pichan
