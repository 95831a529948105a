#include "pichan/process.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pichan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const std::shared_ptr<const ProcessNode>& shared_nil() {
  static const auto nil = std::make_shared<const ProcessNode>(ProcessNode{Nil{}, {}});
  return nil;
}


}  // namespace

Process::Process() : node_(shared_nil()) {}

const SourceSpan& Process::span() const { return node_->span; }

Process Process::nil(SourceSpan span) {
  if (!span.known()) return Process();
  return Process(std::make_shared<const ProcessNode>(ProcessNode{Nil{}, std::move(span)}));
}

Process Process::par(Process left, Process right, SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{Par{std::move(left), std::move(right)}, std::move(span)}));
}

Process Process::restrict(Name name, Process body, SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{New{std::move(name), std::move(body)}, std::move(span)}));
}

Process Process::output(Name subject, std::vector<Value> objects, Process cont,
                        SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(ProcessNode{
      Out{std::move(subject), std::move(objects), std::move(cont)}, std::move(span)}));
}

Process Process::input(Name subject, std::vector<Name> objects, bool binding,
                       Process cont, SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{In{std::move(subject), std::move(objects), binding, std::move(cont)},
                  std::move(span)}));
}

Process Process::repeat(Process body, SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{Repeat{std::move(body)}, std::move(span)}));
}

Process Process::fusion(Value left, Value right, SourceSpan span) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{Fusion{std::move(left), std::move(right)}, std::move(span)}));
}

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  const auto& ta = a.node_->term;
  const auto& tb = b.node_->term;
  if (ta.index() != tb.index()) return false;
  return std::visit(
      overloaded{
          [](const Nil&) { return true; },
          [&](const Par& x) {
            const auto& y = std::get<Par>(tb);
            return x.left == y.left && x.right == y.right;
          },
          [&](const New& x) {
            const auto& y = std::get<New>(tb);
            return x.name == y.name && x.body == y.body;
          },
          [&](const Out& x) {
            const auto& y = std::get<Out>(tb);
            return x.subject == y.subject && x.objects == y.objects && x.cont == y.cont;
          },
          [&](const In& x) {
            const auto& y = std::get<In>(tb);
            return x.subject == y.subject && x.objects == y.objects &&
                   x.binding == y.binding && x.cont == y.cont;
          },
          [&](const Repeat& x) { return x.body == std::get<Repeat>(tb).body; },
          [&](const Fusion& x) {
            const auto& y = std::get<Fusion>(tb);
            return x.left == y.left && x.right == y.right;
          },
      },
      ta);
}

namespace {

void collect_free(const Process& p, std::set<Name>& bound, std::set<Name>& out) {
  auto use = [&](const Name& n) {
    if (!bound.contains(n)) out.insert(n);
  };
  auto use_value = [&](const Value& v) {
    if (is_name(v)) use(as_name(v));
  };
  std::visit(overloaded{
                 [](const Nil&) {},
                 [&](const Par& x) {
                   collect_free(x.left, bound, out);
                   collect_free(x.right, bound, out);
                 },
                 [&](const New& x) {
                   bool added = bound.insert(x.name).second;
                   collect_free(x.body, bound, out);
                   if (added) bound.erase(x.name);
                 },
                 [&](const Out& x) {
                   use(x.subject);
                   for (const auto& v : x.objects) use_value(v);
                   collect_free(x.cont, bound, out);
                 },
                 [&](const In& x) {
                   use(x.subject);
                   if (!x.binding) {
                     for (const auto& n : x.objects) use(n);
                     collect_free(x.cont, bound, out);
                     return;
                   }
                   std::vector<Name> added;
                   for (const auto& n : x.objects) {
                     if (bound.insert(n).second) added.push_back(n);
                   }
                   collect_free(x.cont, bound, out);
                   for (const auto& n : added) bound.erase(n);
                 },
                 [&](const Repeat& x) { collect_free(x.body, bound, out); },
                 [&](const Fusion& x) {
                   use_value(x.left);
                   use_value(x.right);
                 },
             },
             p.node().term);
}

class Substituter {
 public:
  Substituter(const Name& from, const Name& to, std::uint64_t first_fresh)
      : from_(from), to_(to), supply_(first_fresh) {}

  Process run(const Process& p) {
    const SourceSpan& span = p.span();
    return std::visit(
        overloaded{
            [&](const Nil&) { return p; },
            [&](const Par& x) {
              return Process::par(run(x.left), run(x.right), span);
            },
            [&](const New& x) {
              if (x.name == from_) return p;
              if (x.name == to_ && free_names(x.body).contains(from_)) {
                Name renamed = supply_.fresh(x.name.display, x.name.origin);
                Process body = substitute(x.body, x.name, renamed);
                return Process::restrict(renamed, run(body), span);
              }
              return Process::restrict(x.name, run(x.body), span);
            },
            [&](const Out& x) {
              std::vector<Value> objects;
              objects.reserve(x.objects.size());
              for (const auto& v : x.objects) objects.push_back(value(v));
              return Process::output(name(x.subject), std::move(objects), run(x.cont), span);
            },
            [&](const In& x) {
              if (!x.binding) {
                std::vector<Name> objects;
                for (const auto& n : x.objects) objects.push_back(name(n));
                return Process::input(name(x.subject), std::move(objects), false,
                                      run(x.cont), span);
              }
              auto binds = [&](const Name& n) {
                return std::find(x.objects.begin(), x.objects.end(), n) != x.objects.end();
              };
              if (binds(from_)) {
                return Process::input(name(x.subject), x.objects, true, x.cont, span);
              }
              std::vector<Name> objects = x.objects;
              Process cont = x.cont;
              if (binds(to_) && free_names(cont).contains(from_)) {
                for (auto& n : objects) {
                  if (n == to_) {
                    Name renamed = supply_.fresh(n.display, n.origin);
                    cont = substitute(cont, n, renamed);
                    n = renamed;
                  }
                }
              }
              return Process::input(name(x.subject), std::move(objects), true, run(cont),
                                    span);
            },
            [&](const Repeat& x) { return Process::repeat(run(x.body), span); },
            [&](const Fusion& x) {
              return Process::fusion(value(x.left), value(x.right), span);
            },
        },
        p.node().term);
  }

 private:
  const Name& name(const Name& n) const { return n == from_ ? to_ : n; }
  Value value(const Value& v) const {
    if (is_name(v) && as_name(v) == from_) return to_;
    return v;
  }

  Name from_;
  Name to_;
  NameSupply supply_;
};

}  // namespace

std::set<Name> free_names(const Process& p) {
  std::set<Name> bound, out;
  collect_free(p, bound, out);
  return out;
}

Process substitute(const Process& p, const Name& from, const Name& to) {
  if (from == to) return p;
  std::uint64_t first = std::max({max_name_id(p), from.id, to.id}) + 1;
  return Substituter(from, to, first).run(p);
}

std::size_t ast_size(const Process& p) {
  return std::visit(
      overloaded{
          [](const Nil&) -> std::size_t { return 1; },
          [](const Par& x) { return 1 + ast_size(x.left) + ast_size(x.right); },
          [](const New& x) { return 2 + ast_size(x.body); },
          [](const Out& x) { return 2 + x.objects.size() + ast_size(x.cont); },
          [](const In& x) { return 2 + x.objects.size() + ast_size(x.cont); },
          [](const Repeat& x) { return 1 + ast_size(x.body); },
          [](const Fusion&) -> std::size_t { return 3; },
      },
      p.node().term);
}

std::uint64_t max_name_id(const Process& p) {
  auto of_value = [](const Value& v) -> std::uint64_t {
    return is_name(v) ? as_name(v).id : 0;
  };
  return std::visit(
      overloaded{
          [](const Nil&) -> std::uint64_t { return 0; },
          [](const Par& x) { return std::max(max_name_id(x.left), max_name_id(x.right)); },
          [](const New& x) { return std::max(x.name.id, max_name_id(x.body)); },
          [&](const Out& x) {
            std::uint64_t m = std::max(x.subject.id, max_name_id(x.cont));
            for (const auto& v : x.objects) m = std::max(m, of_value(v));
            return m;
          },
          [](const In& x) {
            std::uint64_t m = std::max(x.subject.id, max_name_id(x.cont));
            for (const auto& n : x.objects) m = std::max(m, n.id);
            return m;
          },
          [](const Repeat& x) { return max_name_id(x.body); },
          [&](const Fusion& x) { return std::max(of_value(x.left), of_value(x.right)); },
      },
      p.node().term);
}

bool is_core(const Process& p) {
  return std::visit(overloaded{
                        [](const Nil&) { return true; },
                        [](const Par& x) { return is_core(x.left) && is_core(x.right); },
                        [](const New& x) { return is_core(x.body); },
                        [](const Out& x) { return is_core(x.cont); },
                        [](const In& x) { return !x.binding && is_core(x.cont); },
                        [](const Repeat& x) { return is_core(x.body); },
                        [](const Fusion&) { return true; },
                    },
                    p.node().term);
}

namespace {

class AlphaComparer {
 public:
  explicit AlphaComparer(FreeNameMatch match) : match_(match) {}

  bool same(const Process& a, const Process& b) {
    const auto& ta = a.node().term;
    const auto& tb = b.node().term;
    if (ta.index() != tb.index()) return false;
    return std::visit(
        overloaded{
            [](const Nil&) { return true; },
            [&](const Par& x) {
              const auto& y = std::get<Par>(tb);
              return same(x.left, y.left) && same(x.right, y.right);
            },
            [&](const New& x) {
              const auto& y = std::get<New>(tb);
              Scope s(*this, {x.name}, {y.name});
              return same(x.body, y.body);
            },
            [&](const Out& x) {
              const auto& y = std::get<Out>(tb);
              if (!same_name(x.subject, y.subject) || x.objects.size() != y.objects.size())
                return false;
              for (std::size_t i = 0; i < x.objects.size(); ++i) {
                if (!same_value(x.objects[i], y.objects[i])) return false;
              }
              return same(x.cont, y.cont);
            },
            [&](const In& x) {
              const auto& y = std::get<In>(tb);
              if (x.binding != y.binding || !same_name(x.subject, y.subject) ||
                  x.objects.size() != y.objects.size())
                return false;
              if (x.binding) {
                Scope s(*this, x.objects, y.objects);
                return same(x.cont, y.cont);
              }
              for (std::size_t i = 0; i < x.objects.size(); ++i) {
                if (!same_name(x.objects[i], y.objects[i])) return false;
              }
              return same(x.cont, y.cont);
            },
            [&](const Repeat& x) { return same(x.body, std::get<Repeat>(tb).body); },
            [&](const Fusion& x) {
              const auto& y = std::get<Fusion>(tb);
              return same_value(x.left, y.left) && same_value(x.right, y.right);
            },
        },
        ta);
  }

 private:
  // Binds names on both sides to a shared depth marker for the lifetime of
  // the object.
  class Scope {
   public:
    Scope(AlphaComparer& c, const std::vector<Name>& left, const std::vector<Name>& right)
        : c_(c) {
      for (std::size_t i = 0; i < left.size(); ++i) {
        std::uint64_t mark = ++c_.depth_;
        saved_left_.emplace_back(left[i].id, c_.bind(c_.left_, left[i].id, mark));
        saved_right_.emplace_back(right[i].id, c_.bind(c_.right_, right[i].id, mark));
      }
    }
    ~Scope() {
      for (auto it = saved_left_.rbegin(); it != saved_left_.rend(); ++it)
        c_.restore(c_.left_, it->first, it->second);
      for (auto it = saved_right_.rbegin(); it != saved_right_.rend(); ++it)
        c_.restore(c_.right_, it->first, it->second);
    }

   private:
    AlphaComparer& c_;
    std::vector<std::pair<std::uint64_t, std::optional<std::uint64_t>>> saved_left_, saved_right_;
  };

  using Env = std::map<std::uint64_t, std::uint64_t>;

  std::optional<std::uint64_t> bind(Env& env, std::uint64_t id, std::uint64_t mark) {
    std::optional<std::uint64_t> old;
    if (auto it = env.find(id); it != env.end()) old = it->second;
    env[id] = mark;
    return old;
  }
  void restore(Env& env, std::uint64_t id, std::optional<std::uint64_t> old) {
    if (old) {
      env[id] = *old;
    } else {
      env.erase(id);
    }
  }

  bool same_name(const Name& a, const Name& b) const {
    auto ia = left_.find(a.id);
    auto ib = right_.find(b.id);
    bool bound_a = ia != left_.end();
    bool bound_b = ib != right_.end();
    if (bound_a || bound_b) return bound_a && bound_b && ia->second == ib->second;
    return match_ == FreeNameMatch::ById ? a.id == b.id : a.display == b.display;
  }
  bool same_value(const Value& a, const Value& b) const {
    if (is_name(a) != is_name(b)) return false;
    if (is_name(a)) return same_name(as_name(a), as_name(b));
    return a == b;
  }

  FreeNameMatch match_;
  Env left_, right_;
  std::uint64_t depth_ = 0;
};

void write_sexpr(const Process& p, std::ostream& out) {
  std::visit(overloaded{
                 [&](const Nil&) { out << "nil"; },
                 [&](const Par& x) {
                   out << "(par ";
                   write_sexpr(x.left, out);
                   out << ' ';
                   write_sexpr(x.right, out);
                   out << ')';
                 },
                 [&](const New& x) {
                   out << "(new " << qualified(x.name) << ' ';
                   write_sexpr(x.body, out);
                   out << ')';
                 },
                 [&](const Out& x) {
                   out << "(out " << qualified(x.subject) << " (";
                   for (std::size_t i = 0; i < x.objects.size(); ++i)
                     out << (i ? " " : "") << value_text(x.objects[i]);
                   out << ") ";
                   write_sexpr(x.cont, out);
                   out << ')';
                 },
                 [&](const In& x) {
                   out << (x.binding ? "(in! " : "(in ") << qualified(x.subject) << " (";
                   for (std::size_t i = 0; i < x.objects.size(); ++i)
                     out << (i ? " " : "") << qualified(x.objects[i]);
                   out << ") ";
                   write_sexpr(x.cont, out);
                   out << ')';
                 },
                 [&](const Repeat& x) {
                   out << "(repeat ";
                   write_sexpr(x.body, out);
                   out << ')';
                 },
                 [&](const Fusion& x) {
                   out << "(= " << value_text(x.left) << ' ' << value_text(x.right) << ')';
                 },
             },
             p.node().term);
}

}  // namespace

bool alpha_equivalent(const Process& a, const Process& b, FreeNameMatch match) {
  return AlphaComparer(match).same(a, b);
}

std::string sexpr(const Process& p) {
  std::ostringstream out;
  write_sexpr(p, out);
  return out.str();
}

}  // namespace pichan
