#include <map>
#include <set>

#include "lexer.hpp"
#include "pichan/parser.hpp"

namespace pichan {

namespace {

using detail::Token;
using detail::TokenKind;

[[noreturn]] void syntax_error(const SourceSpan& span, const std::string& message) {
  throw DiagnosticError({Diagnostic{span, Severity::Error, "E-SYNTAX", message}});
}

struct PendingAction {
  std::string channel;
  std::vector<BaseSort> payload;
  SourceSpan span;
};

struct PendingProtocol {
  std::size_t method = 0;  // position among all methods, in source order
  std::string var;
  std::vector<PendingAction> actions;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program run() {
    Program prog;
    if (peek().kind == TokenKind::End) syntax_error(peek().span, "empty program");
    while (is_word("extern")) prog.externs.push_back(parse_extern());
    resolve_protocols(prog);
    if (!dups_.empty()) throw DiagnosticError(dups_);
    if (peek().kind == TokenKind::End) return prog;
    prog.main = parse_proc();
    if (peek().kind != TokenKind::End) {
      syntax_error(peek().span, "unexpected '" + describe(peek()) + "' after process");
    }
    return prog;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::Str: return "string literal";
      default: return t.text;
    }
  }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Symbol && t.text == s;
  }
  bool is_word(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Ident && t.text == s;
  }
  const Token& expect_sym(std::string_view s) {
    if (!is_sym(s)) {
      syntax_error(peek().span, "expected '" + std::string(s) + "', found '" +
                                    describe(peek()) + "'");
    }
    return next();
  }
  const Token& expect_word(std::string_view s) {
    if (!is_word(s)) {
      syntax_error(peek().span, "expected '" + std::string(s) + "', found '" +
                                    describe(peek()) + "'");
    }
    return next();
  }
  const Token& expect_ident(const char* what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Ident || detail::is_keyword(t.text)) {
      syntax_error(t.span, std::string("expected ") + what + ", found '" + describe(t) + "'");
    }
    return next();
  }

  // -- names ----------------------------------------------------------------

  Name bind(const std::string& display) {
    Name n = supply_.fresh(display, NameOrigin::Source);
    scope_.emplace_back(display, n);
    return n;
  }

  Name ref(const std::string& display) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == display) return it->second;
    }
    auto [it, inserted] = globals_.try_emplace(display);
    if (inserted) it->second = supply_.fresh(display, NameOrigin::Source);
    return it->second;
  }

  // -- extern blocks --------------------------------------------------------

  BaseSort parse_sort(bool allow_void) {
    const Token& t = peek();
    auto s = t.kind == TokenKind::Ident ? parse_sort_name(t.text) : std::nullopt;
    if (!s || (!allow_void && *s == BaseSort::Void)) {
      syntax_error(t.span, "expected a sort (" +
                               std::string(allow_void ? "void, " : "") +
                               "int, string, bool), found '" + describe(t) + "'");
    }
    next();
    return *s;
  }

  std::vector<BaseSort> parse_sort_list(std::string_view close) {
    std::vector<BaseSort> out;
    if (is_sym(close)) return out;
    out.push_back(parse_sort(false));
    while (is_sym(",")) {
      next();
      out.push_back(parse_sort(false));
    }
    return out;
  }

  Name declare_channel(const Token& tok) {
    if (globals_.count(tok.text)) {
      dups_.push_back(Diagnostic{tok.span, Severity::Error, "E-DUP",
                                 "extern channel '" + tok.text + "' is declared twice"});
      return globals_.at(tok.text);
    }
    Name n = supply_.fresh(tok.text, NameOrigin::Source);
    globals_.emplace(tok.text, n);
    return n;
  }

  ExternDecl parse_extern() {
    ExternDecl d;
    d.span = expect_word("extern").span;
    const Token& alias = expect_ident("extern alias");
    d.alias = alias.text;
    if (!aliases_.insert(d.alias).second) {
      dups_.push_back(Diagnostic{alias.span, Severity::Error, "E-DUP",
                                 "extern alias '" + d.alias + "' is declared twice"});
    }
    expect_sym("->");
    expect_word("class");
    d.class_name = expect_ident("class name").text;
    expect_sym("{");
    std::set<std::string> method_names;
    while (!is_sym("}")) {
      ExternMethod m = parse_method();
      if (!method_names.insert(m.name).second) {
        dups_.push_back(Diagnostic{m.span, Severity::Error, "E-DUP",
                                   "method '" + m.name + "' is declared twice in '" +
                                       d.alias + "'"});
      }
      d.methods.push_back(std::move(m));
    }
    expect_sym("}");
    return d;
  }

  ExternMethod parse_method() {
    ExternMethod m;
    m.span = peek().span;
    m.returns = parse_sort(true);
    m.name = expect_ident("method name").text;
    expect_sym("(");
    m.params = parse_sort_list(")");
    expect_sym(")");
    expect_sym("{");

    expect_word("call");
    const Token& call_tok = expect_ident("call channel");
    expect_sym(":");
    std::vector<BaseSort> call_sorts;
    const Token& call_sort_tok = peek();
    if (is_word("void")) {
      next();
    } else {
      call_sorts = parse_sort_list(";");
    }
    if (call_sorts != m.params) {
      syntax_error(call_sort_tok.span, "call sorts of '" + m.name +
                                           "' do not match its parameter list");
    }
    expect_sym(";");

    expect_word("return");
    const Token& ret_tok = expect_ident("return channel");
    expect_sym(":");
    const Token& ret_sort_tok = peek();
    if (parse_sort(true) != m.returns) {
      syntax_error(ret_sort_tok.span,
                   "return sort of '" + m.name + "' does not match its result type");
    }
    expect_sym(";");
    expect_sym("}");

    m.call_channel = declare_channel(call_tok);
    m.return_channel = declare_channel(ret_tok);

    if (is_word("acceded")) {
      next();
      expect_word("as");
      expect_sym("{");
      expect_word("rec");
      PendingProtocol proto;
      proto.var = expect_ident("protocol variable").text;
      expect_sym("{");
      while (!(is_word(proto.var) && is_sym("}", 1))) {
        PendingAction act;
        const Token& ch = expect_ident("protocol action");
        act.channel = ch.text;
        act.span = ch.span;
        expect_sym("(");
        act.payload = parse_sort_list(")");
        expect_sym(")");
        expect_sym(".");
        proto.actions.push_back(std::move(act));
      }
      next();
      expect_sym("}");
      expect_sym("}");
      proto.method = method_index_;
      protocols_.push_back(std::move(proto));
      m.explicit_protocol = true;
    } else {
      m.protocol = canonical_protocol(m);
    }
    ++method_index_;
    return m;
  }

  void resolve_protocols(Program& prog) {
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t d = 0; d < prog.externs.size(); ++d) {
      for (std::size_t m = 0; m < prog.externs[d].methods.size(); ++m) where.emplace_back(d, m);
    }
    for (auto& proto : protocols_) {
      std::vector<std::pair<Name, std::vector<BaseSort>>> actions;
      for (auto& act : proto.actions) {
        auto it = globals_.find(act.channel);
        if (it == globals_.end()) {
          syntax_error(act.span, "protocol mentions '" + act.channel +
                                     "', which is not an extern channel");
        }
        actions.emplace_back(it->second, std::move(act.payload));
      }
      auto [d, m] = where.at(proto.method);
      prog.externs[d].methods[m].protocol =
          ProtocolAutomaton::cycle(proto.var, std::move(actions));
    }
  }

  // -- processes ------------------------------------------------------------

  // proc := atom ('|' proc)?
  Process parse_proc() {
    Process left = parse_atom();
    if (!is_sym("|")) return left;
    SourceSpan span = next().span;
    Process right = parse_proc();
    return Process::par(std::move(left), std::move(right), span);
  }

  Value parse_value() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Int:
        next();
        return t.number;
      case TokenKind::Str:
        next();
        return t.text;
      case TokenKind::Ident:
        if (t.text == "true") return next(), Value{true};
        if (t.text == "false") return next(), Value{false};
        if (t.text == "unit") return next(), Value{Unit{}};
        return ref(expect_ident("name").text);
      default:
        syntax_error(t.span, "expected a name or literal, found '" + describe(t) + "'");
    }
  }

  std::vector<std::string> parse_ident_list(std::string_view close) {
    std::vector<std::string> out;
    if (is_sym(close)) return out;
    out.push_back(expect_ident("name").text);
    while (is_sym(",")) {
      next();
      out.push_back(expect_ident("name").text);
    }
    return out;
  }

  Process parse_cont() {
    if (!is_sym(".")) return Process::nil();
    next();
    return parse_atom();
  }

  Process parse_atom() {
    const Token& t = peek();
    const SourceSpan span = t.span;

    if (is_sym("(")) {
      next();
      Process p = parse_proc();
      expect_sym(")");
      return p;
    }
    if (is_word("nil")) {
      next();
      return Process::nil(span);
    }
    if (is_word("repeat")) {
      next();
      return Process::repeat(parse_atom(), span);
    }
    if (is_word("new")) {
      next();
      std::vector<std::string> names{expect_ident("name").text};
      while (is_sym(",")) {
        next();
        names.push_back(expect_ident("name").text);
      }
      expect_word("in");
      const std::size_t mark = scope_.size();
      std::vector<Name> binders;
      for (const auto& n : names) binders.push_back(bind(n));
      Process body = parse_proc();
      scope_.resize(mark);
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = Process::restrict(*it, std::move(body), span);
      }
      return body;
    }

    if (t.kind == TokenKind::Ident && !detail::is_keyword(t.text) && is_sym("!", 1)) {
      Name subject = ref(next().text);
      next();
      expect_sym("(");
      std::vector<Value> objects;
      if (!is_sym(")")) {
        objects.push_back(parse_value());
        while (is_sym(",")) {
          next();
          objects.push_back(parse_value());
        }
      }
      expect_sym(")");
      return Process::output(std::move(subject), std::move(objects), parse_cont(), span);
    }

    if (t.kind == TokenKind::Ident && !detail::is_keyword(t.text) && is_sym("?", 1)) {
      Name subject = ref(next().text);
      next();
      if (is_sym("<")) {
        next();
        std::vector<Name> objects;
        for (const auto& n : parse_ident_list(">")) objects.push_back(ref(n));
        expect_sym(">");
        return Process::input(std::move(subject), std::move(objects), false, parse_cont(),
                              span);
      }
      expect_sym("(");
      auto names = parse_ident_list(")");
      expect_sym(")");
      const std::size_t mark = scope_.size();
      std::vector<Name> objects;
      for (const auto& n : names) objects.push_back(bind(n));
      Process cont = parse_cont();
      scope_.resize(mark);
      return Process::input(std::move(subject), std::move(objects), true, std::move(cont),
                            span);
    }

    if (t.kind == TokenKind::Ident || t.kind == TokenKind::Int || t.kind == TokenKind::Str) {
      Value left = parse_value();
      if (!is_sym("=")) {
        syntax_error(peek().span, "expected '!', '?' or '=' after '" + t.text + "'");
      }
      next();
      Value right = parse_value();
      return Process::fusion(std::move(left), std::move(right), span);
    }
    syntax_error(span, "expected a process, found '" + describe(t) + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  NameSupply supply_{1};
  std::map<std::string, Name> globals_;
  std::vector<std::pair<std::string, Name>> scope_;
  std::set<std::string> aliases_;
  std::vector<Diagnostic> dups_;
  std::vector<PendingProtocol> protocols_;
  std::size_t method_index_ = 0;
};

}  // namespace

Program parse_program(std::string_view text, const std::string& file) {
  return Parser(detail::tokenize(text, file)).run();
}

}  // namespace pichan
