#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "helpers.hpp"

using namespace pichan;
using namespace pichan::testing;

namespace {

std::string first_code(const std::string& text) {
  try {
    parse_program(text);
  } catch (const DiagnosticError& e) {
    return e.diagnostics().front().code;
  }
  return "";
}

}  // namespace

TEST_CASE("the Account interface block") {
  Program p = parse_program(kAccountBlock);
  REQUIRE(p.externs.size() == 1);
  const ExternDecl& d = p.externs[0];
  CHECK(d.alias == "FClass");
  CHECK(d.class_name == "Account");
  REQUIRE(d.methods.size() == 2);

  const ExternMethod& readn = d.methods[0];
  CHECK(readn.name == "readn");
  CHECK(readn.params.empty());
  CHECK(readn.returns == BaseSort::Void);
  CHECK(readn.call_channel.display == "readn");
  CHECK(readn.return_channel.display == "Ret1");
  CHECK(readn.protocol == canonical_protocol(readn));

  const ExternMethod& read = d.methods[1];
  CHECK(read.name == "read");
  CHECK(read.params.empty());
  CHECK(read.returns == BaseSort::Int);
  CHECK(read.call_channel.display == "read");
  CHECK(read.return_channel.display == "Ret2");
  CHECK(read.return_payload() == std::vector<BaseSort>{BaseSort::Int});
  CHECK(read.protocol == canonical_protocol(read));
  CHECK(p.main == Process::nil());
}

TEST_CASE("extern channels are shared with main") {
  Program p = parse_program(std::string(kAccountBlock) + "read!() | Ret2?(v).nil");
  const Par& par = *p.main.get_if<Par>();
  CHECK(par.left.get_if<Out>()->subject == p.externs[0].methods[1].call_channel);
  CHECK(par.right.get_if<In>()->subject == p.externs[0].methods[1].return_channel);
}

TEST_CASE("omitted protocol is the canonical one") {
  Program p = parse_program(
      "extern F -> class Account { void readn(){ call readn: void; return Ret1: void; } }");
  const ExternMethod& m = p.externs[0].methods[0];
  CHECK_FALSE(m.explicit_protocol);
  auto parsed = ProtocolAutomaton::cycle("S", {{m.call_channel, {}}, {m.return_channel, {}}});
  CHECK(m.protocol == parsed);
}

TEST_CASE("protocol payloads accept comma-separated sorts") {
  Program p = parse_program(
      "extern F -> class K { int f(int, bool){ call f: int, bool; return R: int; } "
      "acceded as {rec S {f(int, bool).R(int).S}} }");
  const ExternMethod& m = p.externs[0].methods[0];
  CHECK(m.params == std::vector<BaseSort>{BaseSort::Int, BaseSort::Bool});
  CHECK(m.protocol == canonical_protocol(m));
}

TEST_CASE("non-canonical protocols still parse") {
  Program p = parse_program(
      "extern F -> class Account { int read(){ call read: void; return Ret2: int; } "
      "acceded as {rec S {read().read().Ret2(int).S}} }");
  const ExternMethod& m = p.externs[0].methods[0];
  CHECK(m.protocol.state_count == 3);
  CHECK_FALSE(m.protocol == canonical_protocol(m));
}

TEST_CASE("nil and the empty program") {
  Program p = parse_program("nil");
  CHECK(p.externs.empty());
  CHECK(p.main == Process::nil());
  CHECK(format(Program{}) == "nil");
  CHECK(first_code("") == "E-SYNTAX");
  CHECK(first_code("// only a comment\n") == "E-SYNTAX");
}

TEST_CASE("syntax and duplicate diagnostics") {
  CHECK(first_code("a!(") == "E-SYNTAX");
  CHECK(first_code("a?(x") == "E-SYNTAX");
  CHECK(first_code("new in nil") == "E-SYNTAX");
  CHECK(first_code("extern F -> class K { void f(){ call c: void; return r: void; } }\n"
                   "extern G -> class L { void g(){ call c: void; return s: void; } }") == "E-DUP");
  CHECK(first_code("extern F -> class K { int f(){ call c: void; return r: void; } }") ==
        "E-SYNTAX");
  try {
    parse_program("nil |\n  )", "demo.pi");
    FAIL("expected a diagnostic");
  } catch (const DiagnosticError& e) {
    const Diagnostic& d = e.diagnostics().front();
    CHECK(d.span.line == 2);
    CHECK(d.span.column == 3);
    CHECK(d.to_string().rfind("demo.pi:2:3: error E-SYNTAX ", 0) == 0);
  }
}

TEST_CASE("grammar: precedence, continuations, literals, comments") {
  Program p = parse_program("a!(1, \"s\\\"q\", true, unit, -4).b?<a> | new x, y in x = y // tail\n");
  const Par& par = *p.main.get_if<Par>();
  const Out& out = *par.left.get_if<Out>();
  REQUIRE(out.objects.size() == 5);
  CHECK(out.objects[0] == Value{std::int64_t{1}});
  CHECK(out.objects[1] == Value{std::string("s\"q")});
  CHECK(out.objects[2] == Value{true});
  CHECK(out.objects[3] == Value{Unit{}});
  CHECK(out.objects[4] == Value{std::int64_t{-4}});
  CHECK_FALSE(out.cont.get_if<In>()->binding);
  const New& outer = *par.right.get_if<New>();
  CHECK(outer.body.get_if<New>()->body.is<Fusion>());

  Program right = parse_program("a!() | b!() | c!()");
  CHECK(right.main.get_if<Par>()->right.is<Par>());
  Program cont = parse_program("a!().b!() | c!()");
  CHECK(cont.main.get_if<Par>()->left.get_if<Out>()->cont.is<Out>());
}

TEST_CASE("desugar examples") {
  Program p = desugar(parse_program("x?(v).v!()"));
  const New& n = *p.main.get_if<New>();
  CHECK(n.name.origin == NameOrigin::Fresh);
  const In& in = *n.body.get_if<In>();
  CHECK_FALSE(in.binding);
  REQUIRE(in.objects.size() == 1);
  CHECK(in.objects[0] == n.name);
  CHECK(in.cont.get_if<Out>()->subject == n.name);

  Program zero = desugar(parse_program("x?().y!()"));
  const In& z = *zero.main.get_if<In>();
  CHECK_FALSE(z.binding);
  CHECK(z.objects.empty());

  Program nested = desugar(parse_program("x?(v).y?(w).v!(w) | v!()"));
  CHECK(is_core(nested.main));
  auto free = free_names(nested.main);
  std::set<std::string> shown;
  for (const auto& n : free) shown.insert(n.display);
  CHECK(shown == std::set<std::string>{"x", "y", "v"});
}

TEST_CASE("desugar is idempotent and keeps free names") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    Program p = random_program(rng);
    Program once = desugar(p);
    CHECK(is_core(once.main));
    CHECK(desugar(once) == once);
    CHECK(free_names(once.main) == free_names(p.main));
  }
}

TEST_CASE("format then parse is the identity up to alpha") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    Program p = random_program(rng);
    std::string text = format(p);
    Program back;
    try {
      back = parse_program(text);
    } catch (const DiagnosticError& e) {
      FAIL_CHECK(e.diagnostics().front().to_string() << "\n" << text);
      continue;
    }
    if (!equivalent(back, p)) FAIL_CHECK(text);
  }
}

TEST_CASE("format of the Account block re-parses to an equal declaration") {
  Program p = parse_program(kAccountBlock);
  Program back = parse_program(format(p));
  CHECK(equivalent(back.externs[0], p.externs[0]));
  CHECK(format(p.externs[0]).find("acceded as {rec S {read().Ret2(int).S}}") != std::string::npos);
}
