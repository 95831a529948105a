#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace pichan::testing {

namespace {

struct Ref {
  bool bound = false;
  std::uint64_t idx = 0;  // de Bruijn index when bound, name id when free
  friend bool operator==(const Ref&, const Ref&) = default;
};

struct T {
  enum Kind { Nil, Par, New, Out, In, Rep, Fus } k = Nil;
  std::vector<Ref> refs;  // Out/In: subject then objects; Fus: both sides
  std::vector<T> kids;    // Par: >= 2 components; New/Out/In/Rep: one child
  std::string key;
};

std::string ref_key(const Ref& r) {
  return (r.bound ? "d" : "f") + std::to_string(r.idx);
}

std::string render(const T& t) {
  std::string s;
  switch (t.k) {
    case T::Nil: return "0";
    case T::Par:
      s = "(|";
      for (const auto& k : t.kids) s += " " + k.key;
      return s + ")";
    case T::New: return "(nu " + t.kids[0].key + ")";
    case T::Rep: return "(! " + t.kids[0].key + ")";
    case T::Fus: return "(= " + ref_key(t.refs[0]) + " " + ref_key(t.refs[1]) + ")";
    case T::Out:
    case T::In:
      s = t.k == T::Out ? "(o" : "(i";
      for (const auto& r : t.refs) s += " " + ref_key(r);
      return s + " . " + t.kids[0].key + ")";
  }
  return s;
}

std::size_t size_of(const T& t) {
  switch (t.k) {
    case T::Nil: return 1;
    case T::Fus: return 3;
    case T::Par: {
      std::size_t n = t.kids.size() - 1;
      for (const auto& k : t.kids) n += size_of(k);
      return n;
    }
    case T::New: return 2 + size_of(t.kids[0]);
    case T::Rep: return 1 + size_of(t.kids[0]);
    case T::Out:
    case T::In: return 1 + t.refs.size() + size_of(t.kids[0]);
  }
  return 0;
}

using RefMap = std::function<Ref(const Ref&)>;

// Applies `fn` to every reference that points outside `t` (coordinates
// relative to the top of `t`). The result is not normalized.
T rename(const T& t, const RefMap& fn, std::uint64_t depth = 0) {
  T r;
  r.k = t.k;
  for (const auto& ref : t.refs) {
    if (ref.bound && ref.idx < depth) {
      r.refs.push_back(ref);
      continue;
    }
    Ref outer = ref.bound ? Ref{true, ref.idx - depth} : ref;
    Ref m = fn(outer);
    r.refs.push_back(m.bound ? Ref{true, m.idx + depth} : m);
  }
  for (const auto& k : t.kids) r.kids.push_back(rename(k, fn, depth + (t.k == T::New ? 1 : 0)));
  return r;
}

bool mentions(const T& t, const Ref& outer, std::uint64_t depth = 0) {
  for (const auto& ref : t.refs) {
    if (ref.bound) {
      if (outer.bound && ref.idx >= depth && ref.idx - depth == outer.idx) return true;
    } else if (!outer.bound && ref.idx == outer.idx) {
      return true;
    }
  }
  for (const auto& k : t.kids) {
    if (mentions(k, outer, depth + (t.k == T::New ? 1 : 0))) return true;
  }
  return false;
}

void outer_refs(const T& t, std::vector<Ref>& out, std::uint64_t depth = 0) {
  for (const auto& ref : t.refs) {
    if (ref.bound && ref.idx < depth) continue;
    Ref o = ref.bound ? Ref{true, ref.idx - depth} : ref;
    if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  }
  for (const auto& k : t.kids) outer_refs(k, out, depth + (t.k == T::New ? 1 : 0));
}

const Ref kB0{true, 0};

Ref shift_down(const Ref& r) { return r.bound ? Ref{true, r.idx - 1} : r; }
Ref shift_up(const Ref& r) { return r.bound ? Ref{true, r.idx + 1} : r; }

T normalize(T t) {
  for (auto& k : t.kids) k = normalize(std::move(k));
  switch (t.k) {
    case T::Par: {
      std::vector<T> flat;
      for (auto& k : t.kids) {
        if (k.k == T::Par) {
          for (auto& kk : k.kids) flat.push_back(std::move(kk));
        } else if (k.k != T::Nil) {
          flat.push_back(std::move(k));
        }
      }
      if (flat.empty()) return normalize(T{});
      if (flat.size() == 1) return std::move(flat.front());
      std::sort(flat.begin(), flat.end(), [](const T& a, const T& b) { return a.key < b.key; });
      t.kids = std::move(flat);
      break;
    }
    case T::New:
      if (!mentions(t.kids[0], kB0)) return normalize(rename(t.kids[0], shift_down));
      break;
    case T::Fus:
      if (t.refs[0] == t.refs[1]) return normalize(T{});
      if (ref_key(t.refs[1]) < ref_key(t.refs[0])) std::swap(t.refs[0], t.refs[1]);
      break;
    default:
      break;
  }
  t.key = render(t);
  return t;
}

T make(T::Kind k, std::vector<Ref> refs, std::vector<T> kids) {
  T t;
  t.k = k;
  t.refs = std::move(refs);
  t.kids = std::move(kids);
  return t;
}

T par_of(std::vector<T> kids) {
  if (kids.empty()) return T{};
  if (kids.size() == 1) return std::move(kids.front());
  return make(T::Par, {}, std::move(kids));
}

std::vector<T> without(const std::vector<T>& kids, std::size_t i, std::size_t j = SIZE_MAX) {
  std::vector<T> out;
  for (std::size_t k = 0; k < kids.size(); ++k) {
    if (k != i && k != j) out.push_back(kids[k]);
  }
  return out;
}

T from_process(const Process& p, std::vector<std::uint64_t>& binders) {
  auto ref = [&](const Name& n) {
    for (std::size_t i = binders.size(); i-- > 0;) {
      if (binders[i] == n.id) return Ref{true, binders.size() - 1 - i};
    }
    return Ref{false, n.id};
  };
  if (p.is<Nil>()) return T{};
  if (auto x = p.get_if<Par>()) {
    return make(T::Par, {}, {from_process(x->left, binders), from_process(x->right, binders)});
  }
  if (auto x = p.get_if<New>()) {
    binders.push_back(x->name.id);
    T body = from_process(x->body, binders);
    binders.pop_back();
    return make(T::New, {}, {std::move(body)});
  }
  if (auto x = p.get_if<Out>()) {
    std::vector<Ref> refs{ref(x->subject)};
    for (const auto& v : x->objects) {
      if (!is_name(v)) throw std::invalid_argument("oracle terms carry no literals");
      refs.push_back(ref(as_name(v)));
    }
    return make(T::Out, std::move(refs), {from_process(x->cont, binders)});
  }
  if (auto x = p.get_if<In>()) {
    if (x->binding) throw std::invalid_argument("oracle terms are core terms");
    std::vector<Ref> refs{ref(x->subject)};
    for (const auto& n : x->objects) refs.push_back(ref(n));
    return make(T::In, std::move(refs), {from_process(x->cont, binders)});
  }
  if (auto x = p.get_if<Repeat>()) return make(T::Rep, {}, {from_process(x->body, binders)});
  const auto& f = *p.get_if<Fusion>();
  if (!is_name(f.left) || !is_name(f.right)) throw std::invalid_argument("oracle terms carry no literals");
  return make(T::Fus, {ref(as_name(f.left)), ref(as_name(f.right))}, {});
}

T convert(const Process& p) {
  std::vector<std::uint64_t> binders;
  return normalize(from_process(p, binders));
}

// One-step rewrites of `t` at its root (results not normalized).
void root_rewrites(const T& t, bool pure, std::vector<T>& out) {
  switch (t.k) {
    case T::New: {
      const T& body = t.kids[0];
      if (body.k == T::New) {
        T inner = rename(body.kids[0], [](const Ref& r) {
          if (r.bound && r.idx < 2) return Ref{true, 1 - r.idx};
          return r;
        });
        out.push_back(make(T::New, {}, {make(T::New, {}, {std::move(inner)})}));
      }
      std::vector<T> parts = body.k == T::Par ? body.kids : std::vector<T>{body};
      for (std::size_t i = 0; i < parts.size(); ++i) {
        // scope extrusion, one component at a time
        if (body.k == T::Par && !mentions(parts[i], kB0)) {
          out.push_back(par_of({rename(parts[i], shift_down),
                                make(T::New, {}, {par_of(without(parts, i))})}));
        }
        // new x in (x=y | P) -> P{y/x}
        if (parts[i].k == T::Fus) {
          const auto& f = parts[i].refs;
          for (int side = 0; side < 2; ++side) {
            if (!(f[side] == kB0) || f[1 - side] == kB0) continue;
            Ref y = f[1 - side];
            T rest = par_of(without(parts, i));
            out.push_back(rename(rest, [y](const Ref& r) { return shift_down(r == kB0 ? y : r); }));
          }
        }
      }
      break;
    }
    case T::Par: {
      const auto& kids = t.kids;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (i == j) continue;
          // P | new x in Q -> new x in (P | Q)
          if (kids[i].k == T::New) {
            auto rest = without(kids, i, j);
            rest.push_back(make(T::New, {}, {par_of({kids[i].kids[0], rename(kids[j], shift_up)})}));
            out.push_back(par_of(std::move(rest)));
          }
          // P | repeat P -> repeat P
          if (kids[i].k == T::Rep && kids[i].kids[0].key == kids[j].key) out.push_back(par_of(without(kids, j)));
        }
        if (!pure && kids[i].k == T::Fus) {
          Ref u = kids[i].refs[0], v = kids[i].refs[1];
          for (int dir = 0; dir < 2; ++dir) {
            Ref from = dir ? v : u, to = dir ? u : v;
            T rest = rename(par_of(without(kids, i)), [from, to](const Ref& r) { return r == from ? to : r; });
            out.push_back(par_of({kids[i], std::move(rest)}));
          }
        }
      }
      break;
    }
    case T::Rep:
      out.push_back(par_of({t.kids[0], t}));
      break;
    default:
      break;
  }
  if (pure && t.k != T::Nil) {
    // P{y/x} -> new x in (x=y | P), with every occurrence of y abstracted
    std::vector<Ref> names;
    outer_refs(t, names);
    for (const auto& y : names) {
      Ref yu = shift_up(y);
      T body = rename(t, [yu](const Ref& r) {
        Ref s = shift_up(r);
        return s == yu ? kB0 : s;
      });
      out.push_back(make(T::New, {}, {par_of({make(T::Fus, {kB0, yu}, {}), std::move(body)})}));
    }
  }
}

void rewrites(const T& t, bool pure, std::vector<T>& out) {
  std::vector<T> raw;
  root_rewrites(t, pure, raw);
  for (auto& r : raw) out.push_back(normalize(std::move(r)));
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    std::vector<T> sub;
    rewrites(t.kids[i], pure, sub);
    for (auto& s : sub) {
      T copy = t;
      copy.kids[i] = std::move(s);
      out.push_back(normalize(std::move(copy)));
    }
  }
}

}  // namespace

struct CongruenceOracle::Impl {
  OracleOptions opts;
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> parent;
  std::size_t expanded = 0;
  bool exhausted = false;

  std::size_t id_of(const std::string& k, bool& fresh) {
    auto [it, inserted] = ids.emplace(k, parent.size());
    fresh = inserted;
    if (inserted) parent.push_back(it->second);
    return it->second;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

CongruenceOracle::CongruenceOracle(OracleOptions opts) : impl_(std::make_unique<Impl>()) {
  impl_->opts = opts;
}

CongruenceOracle::~CongruenceOracle() = default;

void CongruenceOracle::explore(const Process& p) {
  T start = convert(p);
  bool fresh = false;
  std::size_t sid = impl_->id_of(start.key, fresh);
  if (!fresh) return;
  std::deque<std::pair<T, std::size_t>> queue;
  queue.emplace_back(std::move(start), sid);
  while (!queue.empty()) {
    if (impl_->expanded >= impl_->opts.node_budget) {
      impl_->exhausted = true;
      return;
    }
    auto [t, id] = std::move(queue.front());
    queue.pop_front();
    ++impl_->expanded;
    std::vector<T> next;
    rewrites(t, impl_->opts.pure_axioms, next);
    for (auto& n : next) {
      if (size_of(n) > impl_->opts.size_bound) continue;
      std::size_t nid = impl_->id_of(n.key, fresh);
      impl_->unite(id, nid);
      if (fresh) queue.emplace_back(std::move(n), nid);
    }
  }
}

std::size_t CongruenceOracle::class_of(const Process& p) {
  auto it = impl_->ids.find(convert(p).key);
  if (it == impl_->ids.end()) throw std::logic_error("term not explored");
  return impl_->find(it->second);
}

bool CongruenceOracle::same_class(const Process& p, const Process& q) {
  explore(p);
  explore(q);
  return class_of(p) == class_of(q);
}

std::size_t CongruenceOracle::visited() const { return impl_->ids.size(); }
bool CongruenceOracle::budget_exhausted() const { return impl_->exhausted; }

std::string CongruenceOracle::key(const Process& p) { return convert(p).key; }

}  // namespace pichan::testing
