#include "pichan/congruence.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace pichan {

namespace {

// Normal form.
//
// A Level is the parallel composition found at one position of a term: a set
// of name=name fusions plus the remaining parallel components ("molecules").
// Restrictions are scoped minimally, so a Restr molecule binds names that
// connect all of its body, and never has fusions at its own level (a bound
// name in a fusion is eliminated, a fusion of outer names is moved out).
// Replicated bodies never hold name=name fusions either:
// !(u=v | B) == u=v | !B{v/u}, so they are extracted to the enclosing level.
//
// Which member of a fusion class stands for the class depends on how bound
// names get labelled, so the fusion substitution and the absorption
// !B | B == !B are both carried out while rendering, under a fixed labelling.

struct Mol;

struct Level {
  std::vector<std::pair<Name, Name>> fusions;
  std::vector<Mol> mols;
};

struct Mol {
  enum class Kind { Out, In, Repeat, LitFusion, Restr };
  Kind kind = Kind::Out;
  Name subject;
  std::vector<Value> objects;
  Value left, right;
  std::vector<Name> binders;
  Level body;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool mentions(const Level& level, const Name& x);

bool mentions(const Mol& m, const Name& x) {
  auto value_is = [&](const Value& v) { return is_name(v) && as_name(v) == x; };
  switch (m.kind) {
    case Mol::Kind::Out:
    case Mol::Kind::In:
      if (m.subject == x) return true;
      if (std::any_of(m.objects.begin(), m.objects.end(), value_is)) return true;
      return mentions(m.body, x);
    case Mol::Kind::Repeat:
    case Mol::Kind::Restr:
      return mentions(m.body, x);
    case Mol::Kind::LitFusion:
      return value_is(m.left) || value_is(m.right);
  }
  return false;
}

bool mentions(const Level& level, const Name& x) {
  for (const auto& [a, b] : level.fusions) {
    if (a == x || b == x) return true;
  }
  return std::any_of(level.mols.begin(), level.mols.end(),
                     [&](const Mol& m) { return mentions(m, x); });
}

Process to_process(const Level& level);

Process to_process(const Mol& m) {
  switch (m.kind) {
    case Mol::Kind::Out:
      return Process::output(m.subject, m.objects, to_process(m.body));
    case Mol::Kind::In: {
      std::vector<Name> objects;
      for (const auto& v : m.objects) objects.push_back(as_name(v));
      return Process::input(m.subject, std::move(objects), false, to_process(m.body));
    }
    case Mol::Kind::Repeat:
      return Process::repeat(to_process(m.body));
    case Mol::Kind::LitFusion:
      return Process::fusion(m.left, m.right);
    case Mol::Kind::Restr: {
      Process p = to_process(m.body);
      for (auto it = m.binders.rbegin(); it != m.binders.rend(); ++it) {
        p = Process::restrict(*it, p);
      }
      return p;
    }
  }
  return Process();
}

Process to_process(const Level& level) {
  std::vector<Process> parts;
  for (const auto& [a, b] : level.fusions) parts.push_back(Process::fusion(a, b));
  for (const auto& m : level.mols) parts.push_back(to_process(m));
  if (parts.empty()) return Process();
  Process p = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) p = Process::par(parts[i], p);
  return p;
}

void append(Level& into, Level from) {
  into.fusions.insert(into.fusions.end(), from.fusions.begin(), from.fusions.end());
  for (auto& m : from.mols) into.mols.push_back(std::move(m));
}

// Gives every binder a fresh id so later substitutions never capture.
class Uniquifier {
 public:
  explicit Uniquifier(std::uint64_t first) : supply_(first) {}

  Process run(const Process& p) {
    return std::visit(
        overloaded{
            [&](const Nil&) { return p; },
            [&](const Par& x) { return Process::par(run(x.left), run(x.right)); },
            [&](const New& x) {
              Name fresh = supply_.fresh(x.name.display);
              return Process::restrict(fresh, run(substitute(x.body, x.name, fresh)));
            },
            [&](const Out& x) { return Process::output(x.subject, x.objects, run(x.cont)); },
            [&](const In& x) {
              return Process::input(x.subject, x.objects, false, run(x.cont));
            },
            [&](const Repeat& x) { return Process::repeat(run(x.body)); },
            [&](const Fusion&) { return p; },
        },
        p.node().term);
  }

 private:
  NameSupply supply_;
};

Level normalize(const Process& p);

Level restrict_level(const Name& x, Level body) {
  for (const auto& [a, b] : body.fusions) {
    if (a == x || b == x) {
      // (new x)(x=y | P) == P{y/x}; any other member of x's class will do,
      // the rendering makes the choice irrelevant.
      const Name& y = a == x ? b : a;
      return normalize(substitute(to_process(body), x, y));
    }
  }
  if (!mentions(body, x)) return body;

  Level out;
  out.fusions = std::move(body.fusions);
  Mol restr;
  restr.kind = Mol::Kind::Restr;
  restr.binders.push_back(x);
  for (auto& m : body.mols) {
    if (!mentions(m, x)) {
      out.mols.push_back(std::move(m));
    } else if (m.kind == Mol::Kind::Restr) {
      restr.binders.insert(restr.binders.end(), m.binders.begin(), m.binders.end());
      for (auto& inner : m.body.mols) restr.body.mols.push_back(std::move(inner));
    } else {
      restr.body.mols.push_back(std::move(m));
    }
  }
  out.mols.push_back(std::move(restr));
  return out;
}

Level normalize(const Process& p) {
  return std::visit(
      overloaded{
          [](const Nil&) { return Level{}; },
          [](const Par& x) {
            Level l = normalize(x.left);
            append(l, normalize(x.right));
            return l;
          },
          [](const New& x) { return restrict_level(x.name, normalize(x.body)); },
          [](const Out& x) {
            Mol m;
            m.kind = Mol::Kind::Out;
            m.subject = x.subject;
            m.objects = x.objects;
            m.body = normalize(x.cont);
            Level l;
            l.mols.push_back(std::move(m));
            return l;
          },
          [](const In& x) {
            if (x.binding) throw SurfaceFormError("congruence requires core terms");
            Mol m;
            m.kind = Mol::Kind::In;
            m.subject = x.subject;
            m.objects.assign(x.objects.begin(), x.objects.end());
            m.body = normalize(x.cont);
            Level l;
            l.mols.push_back(std::move(m));
            return l;
          },
          [](const Repeat& x) {
            Level body = normalize(x.body);
            Level l;
            l.fusions = std::move(body.fusions);
            body.fusions.clear();
            Mol m;
            m.kind = Mol::Kind::Repeat;
            m.body = std::move(body);
            l.mols.push_back(std::move(m));
            return l;
          },
          [](const Fusion& x) {
            Level l;
            if (x.left == x.right) return l;
            if (is_name(x.left) && is_name(x.right)) {
              l.fusions.emplace_back(as_name(x.left), as_name(x.right));
              return l;
            }
            Mol m;
            m.kind = Mol::Kind::LitFusion;
            m.left = x.left;
            m.right = x.right;
            l.mols.push_back(std::move(m));
            return l;
          },
      },
      p.node().term);
}

// ---------------------------------------------------------------------------
// Rendering

struct Context {
  std::map<std::uint64_t, std::string> labels;  // bound names in scope
  std::map<std::string, std::string> rep;       // fusion class representative
};

struct Rendered {
  std::string partition;
  std::vector<std::string> mols;
  // Multisets that replicated components can spawn (bodies, transitively).
  std::vector<std::vector<std::string>> generators;
};

std::string name_text(const Name& n, const Context& ctx) {
  auto it = ctx.labels.find(n.id);
  std::string s = it != ctx.labels.end() ? it->second : "n" + std::to_string(n.id);
  auto r = ctx.rep.find(s);
  return r != ctx.rep.end() ? r->second : s;
}

std::string value_text(const Value& v, const Context& ctx) {
  if (is_name(v)) return name_text(as_name(v), ctx);
  return "L" + literal_text(*as_literal(v));
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

Rendered render_level(const Level& level, const Context& outer, std::size_t depth);

std::string render_body(const Level& level, const Context& ctx, std::size_t depth) {
  Rendered r = render_level(level, ctx, depth);
  return r.partition + ";" + join(r.mols, ',');
}

// Least rendering over all labellings of the binders. Beyond kMaxExact
// binders the labels follow first occurrence instead, which is deterministic
// but can separate alpha-equivalent terms.
constexpr std::size_t kMaxExact = 7;

std::string render_restr(const Mol& m, const Context& ctx, std::size_t depth) {
  const std::size_t k = m.binders.size();
  auto label = [&](std::size_t i) {
    return "v" + std::to_string(depth) + "_" + std::to_string(i);
  };
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);

  auto render_with = [&](const std::vector<std::size_t>& perm) {
    Context inner = ctx;
    for (std::size_t i = 0; i < k; ++i) inner.labels[m.binders[perm[i]].id] = label(i);
    return render_body(m.body, inner, depth + 1);
  };

  std::string best;
  if (k <= kMaxExact) {
    bool first = true;
    do {
      std::string s = render_with(order);
      if (first || s < best) best = std::move(s);
      first = false;
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    Context anon = ctx;
    for (const auto& b : m.binders) anon.labels[b.id] = "?";
    std::vector<std::pair<std::string, std::size_t>> keyed;
    for (std::size_t i = 0; i < m.body.mols.size(); ++i) {
      Level single;
      single.mols.push_back(m.body.mols[i]);
      keyed.emplace_back(render_body(single, anon, depth + 1), i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> perm;
    for (const auto& [key, i] : keyed) {
      for (std::size_t b = 0; b < k; ++b) {
        if (std::find(perm.begin(), perm.end(), b) == perm.end() &&
            mentions(m.body.mols[i], m.binders[b])) {
          perm.push_back(b);
        }
      }
    }
    best = render_with(perm);
  }
  return "nu" + std::to_string(k) + "{" + best + "}";
}

Rendered render_level(const Level& level, const Context& outer, std::size_t depth) {
  Context ctx = outer;
  Rendered out;

  // Fusion classes over the names as the enclosing levels already see them.
  std::map<std::string, std::string> parent;
  auto find = [&](std::string s) {
    while (parent.count(s) && parent[s] != s) s = parent[s];
    return s;
  };
  for (const auto& [a, b] : level.fusions) {
    std::string sa = name_text(a, outer), sb = name_text(b, outer);
    parent.try_emplace(sa, sa);
    parent.try_emplace(sb, sb);
    std::string ra = find(sa), rb = find(sb);
    if (ra == rb) continue;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;  // the least member is always the root
  }
  std::map<std::string, std::vector<std::string>> classes;
  for (const auto& [s, _] : parent) classes[find(s)].push_back(s);
  std::vector<std::string> class_text;
  for (auto& [root, members] : classes) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    class_text.push_back("[" + join(members, ' ') + "]");
    for (const auto& s : members) ctx.rep[s] = root;
    for (auto& [k, v] : ctx.rep) {
      if (std::find(members.begin(), members.end(), v) != members.end()) v = root;
    }
  }
  std::sort(class_text.begin(), class_text.end());
  out.partition = join(class_text, ' ');

  for (const auto& m : level.mols) {
    switch (m.kind) {
      case Mol::Kind::Out:
      case Mol::Kind::In: {
        std::string s = m.kind == Mol::Kind::Out ? "o(" : "i(";
        s += name_text(m.subject, ctx) + "|";
        for (std::size_t i = 0; i < m.objects.size(); ++i) {
          if (i) s += ' ';
          s += value_text(m.objects[i], ctx);
        }
        s += ")[" + render_body(m.body, ctx, depth) + "]";
        out.mols.push_back(std::move(s));
        break;
      }
      case Mol::Kind::Repeat: {
        Rendered body = render_level(m.body, ctx, depth);
        out.mols.push_back("!{" + body.partition + ";" + join(body.mols, ',') + "}");
        out.generators.push_back(body.mols);
        for (auto& g : body.generators) out.generators.push_back(std::move(g));
        break;
      }
      case Mol::Kind::LitFusion: {
        std::string a = value_text(m.left, ctx), b = value_text(m.right, ctx);
        if (b < a) std::swap(a, b);
        out.mols.push_back("=(" + a + " " + b + ")");
        break;
      }
      case Mol::Kind::Restr:
        out.mols.push_back(render_restr(m, ctx, depth));
        break;
    }
  }

  // Absorption. Every generator is spawned by a replicated component that is
  // strictly larger than the generator's members, so removing members never
  // removes the last source of a generator.
  for (auto& g : out.generators) std::sort(g.begin(), g.end());
  std::sort(out.generators.begin(), out.generators.end(),
            [](const auto& a, const auto& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  out.generators.erase(std::unique(out.generators.begin(), out.generators.end()),
                       out.generators.end());
  std::sort(out.mols.begin(), out.mols.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : out.generators) {
      if (g.empty()) continue;
      while (std::includes(out.mols.begin(), out.mols.end(), g.begin(), g.end())) {
        std::vector<std::string> rest;
        std::set_difference(out.mols.begin(), out.mols.end(), g.begin(), g.end(),
                            std::back_inserter(rest));
        out.mols = std::move(rest);
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace

std::string canonical_form(const Process& p) {
  if (!is_core(p)) throw SurfaceFormError("congruence requires core terms");
  Process unique = Uniquifier(max_name_id(p) + 1).run(p);
  Level level = normalize(unique);
  return render_body(level, Context{}, 0);
}

bool congruent(const Process& p, const Process& q) {
  return canonical_form(p) == canonical_form(q);
}

}  // namespace pichan
