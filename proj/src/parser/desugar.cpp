#include <map>

#include "pichan/parser.hpp"

namespace pichan {

namespace {

class Desugarer {
 public:
  explicit Desugarer(std::uint64_t first) : supply_(first) {}

  using Renaming = std::map<std::uint64_t, Name>;

  Process run(const Process& p, const Renaming& env) {
    const SourceSpan& span = p.span();
    if (p.is<Nil>()) return p;
    if (auto* x = p.get_if<Par>()) {
      return Process::par(run(x->left, env), run(x->right, env), span);
    }
    if (auto* x = p.get_if<New>()) {
      Renaming inner = env;
      inner.erase(x->name.id);
      return Process::restrict(x->name, run(x->body, inner), span);
    }
    if (auto* x = p.get_if<Out>()) {
      std::vector<Value> objects;
      for (const auto& v : x->objects) {
        objects.push_back(is_name(v) ? Value{rename(as_name(v), env)} : v);
      }
      return Process::output(rename(x->subject, env), std::move(objects),
                             run(x->cont, env), span);
    }
    if (auto* x = p.get_if<In>()) {
      if (!x->binding) {
        std::vector<Name> objects;
        for (const auto& o : x->objects) objects.push_back(rename(o, env));
        return Process::input(rename(x->subject, env), std::move(objects), false,
                              run(x->cont, env), span);
      }
      Renaming inner = env;
      std::vector<Name> fresh;
      for (const auto& o : x->objects) {
        fresh.push_back(supply_.fresh(o.display));
        inner[o.id] = fresh.back();
      }
      Process body = Process::input(rename(x->subject, env), fresh, false,
                                    run(x->cont, inner), span);
      for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) {
        body = Process::restrict(*it, std::move(body), span);
      }
      return body;
    }
    if (auto* x = p.get_if<Repeat>()) return Process::repeat(run(x->body, env), span);
    const auto& f = *p.get_if<Fusion>();
    auto value = [&](const Value& v) { return is_name(v) ? Value{rename(as_name(v), env)} : v; };
    return Process::fusion(value(f.left), value(f.right), span);
  }

 private:
  static Name rename(const Name& n, const Renaming& env) {
    auto it = env.find(n.id);
    return it == env.end() ? n : it->second;
  }

  NameSupply supply_;
};

}  // namespace

Program desugar(const Program& p) {
  Program out = p;
  out.main = Desugarer(max_name_id(p) + 1).run(p.main, {});
  return out;
}

}  // namespace pichan
