#include <algorithm>
#include <map>
#include <tuple>

#include "pichan/parser.hpp"
#include "pichan/vm.hpp"

namespace pichan {

Rng::Rng(std::uint64_t seed) {
  // splitmix64, so that nearby seeds give unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z != 0 ? z : 0x2545F4914F6CDD1DULL;
}

std::uint64_t Rng::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Comm: return "comm";
    case EventKind::FusionApplied: return "fusion-applied";
    case EventKind::RepeatUnfold: return "repeat-unfold";
    case EventKind::HostCall: return "host-call";
    case EventKind::HostReturn: return "host-return";
    case EventKind::Clash: return "clash";
    case EventKind::Violation: return "violation";
    case EventKind::Fault: return "fault";
  }
  return "?";
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Terminated: return "terminated";
    case RunStatus::Stuck: return "stuck-with-residuals";
    case RunStatus::Clash: return "clash";
    case RunStatus::Violation: return "violation";
    case RunStatus::StepLimit: return "step-limit";
    case RunStatus::Fault: return "fault";
  }
  return "?";
}

std::string StuckReport::to_string() const {
  std::string out;
  for (const auto& r : residuals) {
    out += std::string("blocked ") + (r.output ? "output" : "input") + " on " + r.subject +
           "/" + std::to_string(r.arity) + "\n";
  }
  for (const auto& u : undelivered) out += "undelivered host return of " + u + "\n";
  return out;
}

namespace {

// Renames free occurrences of `from`; `to` is fresh, so nothing can capture it.
Process rename_free(const Process& p, std::uint64_t from, const Name& to) {
  auto name = [&](const Name& n) { return n.id == from ? to : n; };
  auto value = [&](const Value& v) { return is_name(v) ? Value{name(as_name(v))} : v; };
  if (p.is<Nil>()) return p;
  if (auto* x = p.get_if<Par>()) {
    return Process::par(rename_free(x->left, from, to), rename_free(x->right, from, to));
  }
  if (auto* x = p.get_if<New>()) {
    if (x->name.id == from) return p;
    return Process::restrict(x->name, rename_free(x->body, from, to));
  }
  if (auto* x = p.get_if<Out>()) {
    std::vector<Value> objects;
    for (const auto& o : x->objects) objects.push_back(value(o));
    return Process::output(name(x->subject), std::move(objects), rename_free(x->cont, from, to));
  }
  if (auto* x = p.get_if<In>()) {
    if (x->binding) {
      bool shadowed = std::any_of(x->objects.begin(), x->objects.end(),
                                  [&](const Name& o) { return o.id == from; });
      return Process::input(name(x->subject), x->objects, true,
                            shadowed ? x->cont : rename_free(x->cont, from, to));
    }
    std::vector<Name> objects;
    for (const auto& o : x->objects) objects.push_back(name(o));
    return Process::input(name(x->subject), std::move(objects), false,
                          rename_free(x->cont, from, to));
  }
  if (auto* x = p.get_if<Repeat>()) return Process::repeat(rename_free(x->body, from, to));
  const auto& f = *p.get_if<Fusion>();
  return Process::fusion(value(f.left), value(f.right));
}

struct ChannelRef {
  std::size_t decl;
  std::size_t method;
  bool call;
};

using ExternIndex = std::map<std::uint64_t, ChannelRef>;

ExternIndex index_externs(const Program& prog, const FusionEnv& env) {
  ExternIndex out;
  for (std::size_t d = 0; d < prog.externs.size(); ++d) {
    const auto& methods = prog.externs[d].methods;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      out.emplace(env.representative(methods[m].call_channel), ChannelRef{d, m, true});
      out.emplace(env.representative(methods[m].return_channel), ChannelRef{d, m, false});
    }
  }
  return out;
}

// A prefix that a thread (or an unfolded copy of a replicated body) offers.
struct Action {
  bool output = true;
  bool bound = false;  // subject is restricted inside the replicated body
  std::uint64_t key = 0;
  std::size_t arity = 0;
};

struct FirstActions {
  std::vector<Action> actions;
  bool has_fusion = false;
};

void collect_first(const Process& p, const FusionEnv& env, std::vector<std::uint64_t>& bound,
                   FirstActions& out) {
  if (auto* x = p.get_if<Par>()) {
    collect_first(x->left, env, bound, out);
    collect_first(x->right, env, bound, out);
  } else if (auto* x = p.get_if<New>()) {
    bound.push_back(x->name.id);
    collect_first(x->body, env, bound, out);
    bound.pop_back();
  } else if (auto* x = p.get_if<Repeat>()) {
    collect_first(x->body, env, bound, out);
  } else if (p.is<Fusion>()) {
    out.has_fusion = true;
  } else {
    const Name* subject = nullptr;
    Action a;
    if (auto* o = p.get_if<Out>()) {
      subject = &o->subject;
      a.arity = o->objects.size();
    } else if (auto* i = p.get_if<In>()) {
      subject = &i->subject;
      a.output = false;
      a.arity = i->objects.size();
    } else {
      return;
    }
    a.bound = std::find(bound.begin(), bound.end(), subject->id) != bound.end();
    a.key = a.bound ? subject->id : env.representative(*subject);
    out.actions.push_back(a);
  }
}

}  // namespace

Machine::Machine(const Program& program, const HostRegistry& registry)
    : program_(is_core(program.main) ? program : desugar(program)),
      bindings_(resolve_externs(program_.externs, registry)),
      fresh_(max_name_id(program_) + 1) {
  for (const auto& d : program_.externs) endpoints_.push_back(EndpointState::initial(d));
  insert(program_.main);
}

void Machine::insert(const Process& p) {
  if (p.is<Nil>()) return;
  if (auto* x = p.get_if<Par>()) {
    insert(x->left);
    insert(x->right);
    return;
  }
  if (auto* x = p.get_if<New>()) {
    Name fresh = fresh_.fresh(x->name.display);
    insert(rename_free(x->body, x->name.id, fresh));
    return;
  }
  soup_.push_back(p);
}

std::vector<Redex> Machine::enumerate_redexes() const {
  std::vector<Redex> out;
  if (halted_) return out;
  const ExternIndex externs = index_externs(program_, env_);

  std::map<std::pair<std::uint64_t, std::size_t>, std::vector<std::size_t>> outs, ins;
  std::vector<std::size_t> repeats;
  for (std::size_t i = 0; i < soup_.size(); ++i) {
    const Process& t = soup_[i];
    if (auto* x = t.get_if<Out>()) {
      std::uint64_t rep = env_.representative(x->subject);
      auto ext = externs.find(rep);
      if (ext == externs.end()) {
        outs[{rep, x->objects.size()}].push_back(i);
      } else if (ext->second.call) {
        const auto& m = program_.externs[ext->second.decl].methods[ext->second.method];
        if (x->objects.size() == m.params.size()) {
          out.push_back(Redex{RedexKind::HostCall, i, 0, ext->second.decl, ext->second.method});
        }
      }
    } else if (auto* x = t.get_if<In>()) {
      std::uint64_t rep = env_.representative(x->subject);
      auto ext = externs.find(rep);
      if (ext == externs.end()) {
        ins[{rep, x->objects.size()}].push_back(i);
      } else if (!ext->second.call) {
        const auto& [d, m, call] = ext->second;
        const auto& method = program_.externs[d].methods[m];
        if (endpoints_[d].pending[m] && x->objects.size() == method.return_payload().size()) {
          out.push_back(Redex{RedexKind::HostReturn, i, 0, d, m});
        }
      }
    } else if (t.is<Fusion>()) {
      out.push_back(Redex{RedexKind::Fusion, i, 0, 0, 0});
    } else if (t.is<Repeat>()) {
      repeats.push_back(i);
    }
  }
  for (const auto& [key, senders] : outs) {
    auto it = ins.find(key);
    if (it == ins.end()) continue;
    for (auto i : senders) {
      for (auto j : it->second) out.push_back(Redex{RedexKind::Comm, i, j, 0, 0});
    }
  }

  // Demand-limited unfolding: a copy is only worth making if one of its first
  // actions can meet a partner.
  std::vector<FirstActions> firsts(repeats.size());
  for (std::size_t r = 0; r < repeats.size(); ++r) {
    std::vector<std::uint64_t> bound;
    collect_first(soup_[repeats[r]].get_if<Repeat>()->body, env_, bound, firsts[r]);
  }
  auto meets = [&](const Action& a, std::size_t self) {
    if (!a.bound) {
      if (auto ext = externs.find(a.key); ext != externs.end()) {
        const auto& [d, m, call] = ext->second;
        const auto& method = program_.externs[d].methods[m];
        if (call) return a.output && a.arity == method.params.size();
        return !a.output && endpoints_[d].pending[m] &&
               a.arity == method.return_payload().size();
      }
      const auto& partners = a.output ? ins : outs;
      if (partners.count({a.key, a.arity})) return true;
    }
    for (std::size_t r = 0; r < firsts.size(); ++r) {
      for (const auto& b : firsts[r].actions) {
        if (b.output == a.output || b.key != a.key || b.arity != a.arity) continue;
        if (b.bound != a.bound) continue;
        if (a.bound && r != self) continue;
        return true;
      }
    }
    return false;
  };
  std::vector<Redex> unfolds;
  for (std::size_t r = 0; r < repeats.size(); ++r) {
    bool wanted = firsts[r].has_fusion;
    for (const auto& a : firsts[r].actions) wanted = wanted || meets(a, r);
    if (wanted) unfolds.push_back(Redex{RedexKind::Unfold, repeats[r], 0, 0, 0});
  }
  if (out.empty() && unfolds.empty()) {
    for (auto i : repeats) unfolds.push_back(Redex{RedexKind::Unfold, i, 0, 0, 0});
  }
  out.insert(out.end(), unfolds.begin(), unfolds.end());

  std::sort(out.begin(), out.end(), [](const Redex& a, const Redex& b) {
    return std::tie(a.first, a.second, a.kind, a.decl, a.method) <
           std::tie(b.first, b.second, b.kind, b.decl, b.method);
  });
  return out;
}

TraceEvent Machine::halt(RunStatus status, EventKind kind, std::string details,
                         std::string message) {
  halted_ = status;
  halt_message_ = std::move(message);
  return TraceEvent{step_++, kind, std::move(details)};
}

TraceEvent Machine::apply(const Redex& r) {
  if (halted_) throw Error("machine has halted");
  if (r.first >= soup_.size() || (r.kind == RedexKind::Comm && r.second >= soup_.size())) {
    throw Error("redex refers to a thread that does not exist");
  }

  auto remove = [&](std::vector<std::size_t> idx) {
    std::sort(idx.rbegin(), idx.rend());
    for (auto i : idx) soup_.erase(soup_.begin() + static_cast<std::ptrdiff_t>(i));
  };
  auto clash = [&](const FusionClash& e) {
    return halt(RunStatus::Clash, EventKind::Clash,
                "left=" + literal_text(e.left()) + " right=" + literal_text(e.right()), e.what());
  };

  switch (r.kind) {
    case RedexKind::Comm: {
      const Process out = soup_[r.first];
      const Process in = soup_[r.second];
      const Out& o = *out.get_if<Out>();
      const In& i = *in.get_if<In>();
      std::string fuse;
      for (std::size_t k = 0; k < o.objects.size(); ++k) {
        if (k) fuse += ", ";
        fuse += value_text(o.objects[k]) + "=" + qualified(i.objects[k]);
      }
      std::string details =
          "out=" + qualified(o.subject) + " in=" + qualified(i.subject) + " fuse=[" + fuse + "]";
      try {
        for (std::size_t k = 0; k < o.objects.size(); ++k) env_.merge(o.objects[k], i.objects[k]);
      } catch (const FusionClash& e) {
        return clash(e);
      }
      remove({r.first, r.second});
      insert(o.cont);
      insert(i.cont);
      return TraceEvent{step_++, EventKind::Comm, details};
    }
    case RedexKind::Fusion: {
      const Fusion f = *soup_[r.first].get_if<Fusion>();
      try {
        env_.merge(f.left, f.right);
      } catch (const FusionClash& e) {
        return clash(e);
      }
      remove({r.first});
      return TraceEvent{step_++, EventKind::FusionApplied,
                        "left=" + value_text(f.left) + " right=" + value_text(f.right)};
    }
    case RedexKind::Unfold: {
      const Process body = soup_[r.first].get_if<Repeat>()->body;
      insert(body);
      return TraceEvent{step_++, EventKind::RepeatUnfold, "body=" + sexpr(body)};
    }
    case RedexKind::HostCall: {
      const Process thread = soup_[r.first];
      const Out& o = *thread.get_if<Out>();
      const ExternDecl& decl = program_.externs[r.decl];
      const ExternMethod& m = decl.methods[r.method];
      const std::string who = "alias=" + decl.alias + " method=" + m.name;
      std::vector<HostValue> args;
      try {
        args = ground_arguments(o.objects, env_);
        dispatch_call(endpoints_[r.decl], decl, r.method, bindings_[r.decl], args, effects_,
                      step_);
      } catch (const ProtocolViolation& e) {
        return halt(RunStatus::Violation, EventKind::Violation,
                    who + " channel=" + qualified(m.call_channel), e.what());
      } catch (const InteropError& e) {
        return halt(RunStatus::Fault, EventKind::Fault, who + " reason=" + e.what(), e.what());
      }
      std::string shown;
      for (std::size_t k = 0; k < args.size(); ++k) {
        shown += (k ? ", " : "") + literal_text(args[k]);
      }
      remove({r.first});
      insert(o.cont);
      return TraceEvent{step_++, EventKind::HostCall, who + " args=[" + shown + "]"};
    }
    case RedexKind::HostReturn: {
      const Process thread = soup_[r.first];
      const In& i = *thread.get_if<In>();
      const ExternDecl& decl = program_.externs[r.decl];
      const ExternMethod& m = decl.methods[r.method];
      const std::string who = "alias=" + decl.alias + " method=" + m.name;
      HostValue value;
      try {
        value = complete_return(endpoints_[r.decl], decl, r.method);
        if (!i.objects.empty()) env_.merge(i.objects.front(), to_value(value));
      } catch (const ProtocolViolation& e) {
        return halt(RunStatus::Violation, EventKind::Violation,
                    who + " channel=" + qualified(m.return_channel), e.what());
      } catch (const FusionClash& e) {
        return clash(e);
      }
      remove({r.first});
      insert(i.cont);
      return TraceEvent{step_++, EventKind::HostReturn, who + " value=" + literal_text(value)};
    }
  }
  throw Error("unknown redex kind");
}

std::optional<TraceEvent> Machine::step(Rng& rng) {
  if (halted_) return std::nullopt;
  auto redexes = enumerate_redexes();
  if (redexes.empty()) return std::nullopt;
  return apply(redexes[rng.pick(redexes.size())]);
}

StuckReport Machine::detect_stuck() const {
  if (!enumerate_redexes().empty()) throw NotStuck("machine still has redexes");
  StuckReport report;
  for (const auto& t : soup_) {
    if (auto* x = t.get_if<Out>()) {
      report.residuals.push_back(Residual{qualified(x->subject), true, x->objects.size()});
    } else if (auto* x = t.get_if<In>()) {
      report.residuals.push_back(Residual{qualified(x->subject), false, x->objects.size()});
    }
  }
  for (std::size_t d = 0; d < endpoints_.size(); ++d) {
    for (std::size_t m = 0; m < endpoints_[d].pending.size(); ++m) {
      if (endpoints_[d].pending[m]) {
        report.undelivered.push_back(program_.externs[d].alias + "." +
                                     program_.externs[d].methods[m].name);
      }
    }
  }
  return report;
}

}  // namespace pichan
