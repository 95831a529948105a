#include <optional>
#include <set>

#include "pichan/typecheck.hpp"

namespace pichan {

namespace {

class UsageChecker {
 public:
  explicit UsageChecker(const Program& p) : prog_(p) {}

  std::vector<Diagnostic> run() {
    walk(prog_.main, Awaiting(prog_.externs.size()));
    return std::move(diags_);
  }

 private:
  // Per extern block: the method whose return this thread still owes.
  using Awaiting = std::vector<std::optional<std::size_t>>;

  void error(const SourceSpan& span, std::string message) {
    diags_.push_back(Diagnostic{span, Severity::Error, "E-USE", std::move(message)});
  }

  const ExternMethod& method(const ExternChannel& c) const {
    return prog_.externs[c.decl].methods[c.method];
  }

  std::optional<ExternChannel> channel(const Name& n) const {
    return find_extern_channel(prog_, n);
  }

  void check_objects(const std::vector<Value>& objects, const SourceSpan& span) {
    for (const auto& o : objects) {
      if (is_name(o) && channel(as_name(o))) {
        error(span, "extern channel '" + as_name(o).display +
                        "' cannot be sent, received or bound as data");
      }
    }
  }

  // Extern blocks whose channels occur anywhere in p.
  std::set<std::size_t> blocks_used(const Process& p) const {
    std::set<std::size_t> out;
    auto note = [&](const Value& v) {
      if (!is_name(v)) return;
      if (auto c = channel(as_name(v))) out.insert(c->decl);
    };
    if (auto* x = p.get_if<Par>()) {
      out = blocks_used(x->left);
      out.merge(blocks_used(x->right));
    } else if (auto* x = p.get_if<New>()) {
      out = blocks_used(x->body);
    } else if (auto* x = p.get_if<Out>()) {
      out = blocks_used(x->cont);
      note(x->subject);
      for (const auto& o : x->objects) note(o);
    } else if (auto* x = p.get_if<In>()) {
      out = blocks_used(x->cont);
      note(x->subject);
      for (const auto& o : x->objects) note(o);
    } else if (auto* x = p.get_if<Repeat>()) {
      out = blocks_used(x->body);
    } else if (auto* x = p.get_if<Fusion>()) {
      note(x->left);
      note(x->right);
    }
    return out;
  }

  void warn_parallel(const SourceSpan& span, std::size_t decl, const char* how) {
    diags_.push_back(Diagnostic{span, Severity::Warning, "W-PAR",
                                "channels of '" + prog_.externs[decl].alias + "' are used " +
                                    how + "; the runtime monitor decides"});
  }

  void walk(const Process& p, Awaiting state) {
    if (auto* x = p.get_if<Par>()) {
      auto left = blocks_used(x->left);
      for (auto d : blocks_used(x->right)) {
        if (left.count(d)) warn_parallel(p.span(), d, "from parallel branches");
      }
      walk(x->left, state);
      walk(x->right, state);
    } else if (auto* x = p.get_if<New>()) {
      walk(x->body, state);
    } else if (auto* x = p.get_if<Repeat>()) {
      for (auto d : blocks_used(x->body)) warn_parallel(p.span(), d, "under repeat");
      walk(x->body, state);
    } else if (auto* x = p.get_if<Out>()) {
      check_objects(x->objects, p.span());
      if (auto c = channel(x->subject)) {
        const ExternMethod& m = method(*c);
        if (!c->is_call) {
          error(p.span(), "'" + x->subject.display + "' is the return channel of '" +
                              m.name + "' and can only be received on");
        } else if (auto owed = state[c->decl]) {
          const ExternMethod& pending = prog_.externs[c->decl].methods[*owed];
          error(p.span(), "call on '" + x->subject.display + "' while '" +
                              prog_.externs[c->decl].alias + "' still owes the return on '" +
                              pending.return_channel.display + "'");
        } else {
          state[c->decl] = c->method;
        }
      }
      walk(x->cont, state);
    } else if (auto* x = p.get_if<In>()) {
      std::vector<Value> objects(x->objects.begin(), x->objects.end());
      check_objects(objects, p.span());
      if (auto c = channel(x->subject)) {
        const ExternMethod& m = method(*c);
        auto owed = state[c->decl];
        if (c->is_call) {
          error(p.span(), "'" + x->subject.display + "' is the call channel of '" + m.name +
                              "' and can only be sent on");
        } else if (owed && *owed != c->method) {
          const ExternMethod& pending = prog_.externs[c->decl].methods[*owed];
          error(p.span(), "receive on '" + x->subject.display + "' while '" +
                              prog_.externs[c->decl].alias + "' owes the return on '" +
                              pending.return_channel.display + "'");
        }
        state[c->decl].reset();
      }
      walk(x->cont, state);
    } else if (auto* x = p.get_if<Fusion>()) {
      auto l = is_name(x->left) ? channel(as_name(x->left)) : std::nullopt;
      auto r = is_name(x->right) ? channel(as_name(x->right)) : std::nullopt;
      if (l && r) {
        error(p.span(), "fusion of two extern channels");
      } else if ((l && l->is_call) || (r && r->is_call)) {
        error(p.span(), "an extern call channel cannot be fused");
      } else if ((l && !is_name(x->right)) || (r && !is_name(x->left))) {
        error(p.span(), "an extern channel cannot be fused with a literal");
      }
    }
  }

  const Program& prog_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> check_extern_usage(const Program& p) { return UsageChecker(p).run(); }

std::vector<Diagnostic> check_program(const Program& p) {
  std::vector<Diagnostic> out = check_sorts(p);
  for (const auto& d : p.externs) {
    auto more = check_protocol_schema(d);
    out.insert(out.end(), more.begin(), more.end());
  }
  auto usage = check_extern_usage(p);
  out.insert(out.end(), usage.begin(), usage.end());
  return out;
}

}  // namespace pichan
