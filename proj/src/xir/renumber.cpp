#include <map>

#include "pichan/xir.hpp"

namespace pichan {

namespace {

class Renumberer {
 public:
  Name operator()(const Name& n) {
    auto [it, inserted] = ids_.try_emplace(n.id, ids_.size() + 1);
    return Name{it->second, n.display, n.origin};
  }

  Value value(const Value& v) { return is_name(v) ? Value{(*this)(as_name(v))} : v; }

  // Visits names in the order the writer emits them.
  Process process(const Process& p) {
    if (p.is<Nil>()) return p;
    if (auto* x = p.get_if<Par>()) {
      Process l = process(x->left);
      return Process::par(l, process(x->right), p.span());
    }
    if (auto* x = p.get_if<New>()) {
      Name n = (*this)(x->name);
      return Process::restrict(n, process(x->body), p.span());
    }
    if (auto* x = p.get_if<Out>()) {
      Name s = (*this)(x->subject);
      std::vector<Value> objects;
      for (const auto& o : x->objects) objects.push_back(value(o));
      return Process::output(s, std::move(objects), process(x->cont), p.span());
    }
    if (auto* x = p.get_if<In>()) {
      Name s = (*this)(x->subject);
      std::vector<Name> objects;
      for (const auto& o : x->objects) objects.push_back((*this)(o));
      return Process::input(s, std::move(objects), x->binding, process(x->cont), p.span());
    }
    if (auto* x = p.get_if<Repeat>()) return Process::repeat(process(x->body), p.span());
    const auto& f = *p.get_if<Fusion>();
    Value l = value(f.left);
    return Process::fusion(l, value(f.right), p.span());
  }

 private:
  std::map<std::uint64_t, std::uint64_t> ids_;
};

}  // namespace

Program renumber(const Program& p) {
  Renumberer r;
  Program out = p;
  for (auto& d : out.externs) {
    for (auto& m : d.methods) {
      m.call_channel = r(m.call_channel);
      m.return_channel = r(m.return_channel);
      // Only written (and so only visited) when it is an explicit cycle.
      auto cycle = m.explicit_protocol ? m.protocol.as_cycle() : std::nullopt;
      if (cycle) {
        for (const auto& t : *cycle) r(t.channel);
      }
      for (auto& t : m.protocol.transitions) t.channel = r(t.channel);
    }
  }
  out.main = r.process(p.main);
  return out;
}

}  // namespace pichan
