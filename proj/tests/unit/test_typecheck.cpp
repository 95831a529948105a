#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "automata.hpp"
#include "explore.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "pichan/typecheck.hpp"

using namespace pichan;
using namespace pichan::testing;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

bool has(const std::vector<Diagnostic>& diags, const std::string& code) {
  for (const auto& d : diags) {
    if (d.code == code) return true;
  }
  return false;
}

const ExternMethod& account_read() {
  static const Program p = parse_program(kAccountBlock);
  return p.externs[0].methods[1];
}

Value literal_of(BaseSort s, std::mt19937_64& rng) {
  switch (s) {
    case BaseSort::Int: return static_cast<std::int64_t>(rng() % 100);
    case BaseSort::Str: return std::string(rng() % 2 ? "x" : "yy");
    case BaseSort::Bool: return rng() % 2 == 0;
    case BaseSort::Void: break;
  }
  return Unit{};
}

// Channels with fixed payload sorts, each written to at least twice with
// literals of those sorts and read once.
Program well_sorted(std::mt19937_64& rng) {
  NameSupply supply;
  static const BaseSort sorts[] = {BaseSort::Int, BaseSort::Str, BaseSort::Bool};
  Process main;
  std::size_t channels = 1 + rng() % 3;
  for (std::size_t c = 0; c < channels; ++c) {
    Name ch = supply.fresh("c" + std::to_string(c), NameOrigin::Source);
    std::vector<BaseSort> sig;
    for (std::size_t k = 1 + rng() % 2; k > 0; --k) sig.push_back(sorts[rng() % 3]);
    for (std::size_t w = 2 + rng() % 2; w > 0; --w) {
      std::vector<Value> objs;
      for (auto s : sig) objs.push_back(literal_of(s, rng));
      main = Process::par(Process::output(ch, objs, Process::nil()), main);
    }
    std::vector<Name> params;
    for (std::size_t k = 0; k < sig.size(); ++k) params.push_back(supply.fresh("v", NameOrigin::Source));
    main = Process::par(main, Process::input(ch, params, true, Process::nil()));
  }
  return desugar(Program{{}, main});
}

// Replaces one literal by a literal of another sort.
Process swap_one_literal(const Process& p, std::size_t& target, std::mt19937_64& rng) {
  if (auto x = p.get_if<Par>()) {
    Process l = swap_one_literal(x->left, target, rng);
    Process r = swap_one_literal(x->right, target, rng);
    return Process::par(l, r);
  }
  if (auto x = p.get_if<New>()) return Process::restrict(x->name, swap_one_literal(x->body, target, rng));
  if (auto x = p.get_if<Out>()) {
    auto objs = x->objects;
    for (auto& v : objs) {
      if (is_name(v)) continue;
      if (target-- == 0) {
        BaseSort now = std::holds_alternative<std::int64_t>(v)  ? BaseSort::Int
                       : std::holds_alternative<std::string>(v) ? BaseSort::Str
                                                                : BaseSort::Bool;
        static const BaseSort sorts[] = {BaseSort::Int, BaseSort::Str, BaseSort::Bool};
        BaseSort other = now;
        while (other == now) other = sorts[rng() % 3];
        v = literal_of(other, rng);
      }
    }
    return Process::output(x->subject, objs, x->cont);
  }
  return p;
}

std::size_t count_literals(const Process& p) {
  if (auto x = p.get_if<Par>()) return count_literals(x->left) + count_literals(x->right);
  if (auto x = p.get_if<New>()) return count_literals(x->body);
  if (auto x = p.get_if<Out>()) {
    std::size_t n = 0;
    for (const auto& v : x->objects) n += is_name(v) ? 0 : 1;
    return n;
  }
  return 0;
}

bool mentions_extern(const Program& p) {
  for (const auto& n : free_names(p.main)) {
    if (find_extern_channel(p, n)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("sorts of the Account program") {
  Program p = account_program("read!() | Ret2?(v).nil");
  CHECK(check_sorts(p).empty());
  SortResult r = infer_sorts(p);
  const ExternMethod& read = p.externs[0].methods[1];
  CHECK(r.sorts.at(read.call_channel.id) == Sort::chan());
  CHECK(r.sorts.at(read.return_channel.id) == Sort::chan({Sort::of(BaseSort::Int)}));
  CHECK(Sort::chan({Sort::of(BaseSort::Int), Sort::chan()}).to_string() == "chan(int, chan())");
}

TEST_CASE("sort errors") {
  CHECK(codes(check_sorts(account_program("Ret2?(v, w).nil"))) == std::vector<std::string>{"E-SORT"});
  CHECK(has(check_sorts(account_program("read!(1)")), "E-SORT"));
  CHECK(has(check_sorts(account_program("Ret2?(v).v!()")), "E-SORT"));
  CHECK(has(check_sorts(desugar(parse_program("a!(1) | a!(true)"))), "E-SORT"));
  CHECK(has(check_sorts(desugar(parse_program("a!(b) | b!() | b!(b)"))), "E-SORT"));
  CHECK(check_sorts(desugar(parse_program("a!(b) | a?(c).c!(1) | b?(n).nil"))).empty());
  CHECK(has(check_sorts(desugar(parse_program("a?(x).x!(x)"))), "E-SORT"));
}

TEST_CASE("one literal-sort swap breaks a well-sorted program") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    Program p = well_sorted(rng);
    REQUIRE(check_sorts(p).empty());
    std::size_t target = rng() % count_literals(p.main);
    Program mutant{p.externs, swap_one_literal(p.main, target, rng)};
    CHECK(has(check_sorts(mutant), "E-SORT"));
  }
}

TEST_CASE("protocol schema") {
  CHECK(check_protocol_schema(parse_program(kAccountBlock).externs[0]).empty());
  auto bad = parse_program(
      "extern FClass -> class Account { int read(){ call read: void; return Ret2: int; } "
      "acceded as {rec S {read().read().Ret2(int).S}} }");
  CHECK(codes(check_protocol_schema(bad.externs[0])) == std::vector<std::string>{"E-PROTO"});
  auto wrong_payload = parse_program(
      "extern FClass -> class Account { int read(){ call read: void; return Ret2: int; } "
      "acceded as {rec S {read().Ret2().S}} }");
  CHECK(has(check_protocol_schema(wrong_payload.externs[0]), "E-PROTO"));

  auto omitted = parse_program(
      "extern FClass -> class Account { void readn(){ call readn: void; return Ret1: void; } }");
  auto spelled = parse_program(
      "extern FClass -> class Account { void readn(){ call readn: void; return Ret1: void; } "
      "acceded as {rec S {readn().Ret1().S}} }");
  CHECK(omitted.externs[0].methods[0].protocol == spelled.externs[0].methods[0].protocol);
  CHECK(check_protocol_schema(omitted.externs[0]).empty());
}

TEST_CASE("small automata: accepted iff isomorphic to the canonical one") {
  const ExternMethod& m = account_read();
  const ProtocolAutomaton canonical = canonical_protocol(m);
  std::size_t accepted = 0;
  std::size_t total = for_each_automaton(m, 2, [&](const ProtocolAutomaton& a) {
    bool verdict = is_canonical_protocol(m, a);
    CHECK(verdict == isomorphic(a, canonical));
    accepted += verdict;
  });
  CHECK(total == 1 * 9 + 2 * 625);
  CHECK(accepted == 2);  // the canonical automaton from either start state
}

TEST_CASE("extern usage") {
  CHECK(check_extern_usage(account_program("read!().Ret2?(v).nil")).empty());
  CHECK(check_extern_usage(account_program("read!().Ret2?(v).readn!().Ret1?().nil")).empty());

  auto twice = check_extern_usage(account_program("read!().read!().Ret2?(v).nil"));
  CHECK(codes(twice) == std::vector<std::string>{"E-USE"});

  auto parallel = check_extern_usage(account_program("(read!().Ret2?(v).nil) | (read!().Ret2?(w).nil)"));
  CHECK_FALSE(parallel.empty());
  CHECK_FALSE(has_errors(parallel));
  CHECK(has(parallel, "W-PAR"));

  CHECK(has(check_extern_usage(account_program("Ret2!(1)")), "E-USE"));
  CHECK(has(check_extern_usage(account_program("read = Ret2")), "E-USE"));
  CHECK(has(check_extern_usage(account_program("Ret2 = 5")), "E-USE"));
  CHECK(has(check_extern_usage(account_program("a!(read)")), "E-USE"));
  CHECK_FALSE(has_errors(check_extern_usage(account_program("x = Ret2 | read!().x?(v).nil"))));
  CHECK(has(check_extern_usage(account_program("repeat read!().Ret2?(v).nil")), "W-PAR"));
}

TEST_CASE("check_program runs every pass") {
  CHECK(check_program(account_program("read!().Ret2?(v).nil")).empty());
  auto split = check_program(account_program("read!() | Ret2?(v).nil"));
  CHECK(codes(split) == std::vector<std::string>{"W-PAR"});
  auto diags = check_program(account_program("read!(1).read!().Ret2?(v, w).nil"));
  CHECK(has(diags, "E-SORT"));
  for (const auto& d : diags) CHECK(d.to_string().find(d.code) != std::string::npos);
}

TEST_CASE("programs that pass without warnings never trip the monitor") {
  std::mt19937_64 rng(23);
  HostRegistry reg = builtin_registry();
  GenOptions opts;
  opts.externs = parse_program(kAccountBlock).externs;
  opts.max_depth = 3;
  opts.free_names = 2;
  opts.literals = false;
  ExploreOptions eopts;
  eopts.max_depth = 16;
  eopts.max_states = 20'000;
  std::size_t checked = 0;
  for (int i = 0; i < 4000 && checked < 150; ++i) {
    Program p = random_core_program(rng, opts);
    if (!mentions_extern(p) || !check_program(p).empty()) continue;
    ++checked;
    Machine m(p, reg);
    for (const auto& o : explore_all(m, eopts).outcomes) {
      if (o.status == RunStatus::Violation) FAIL_CHECK(format(p));
    }
  }
  CHECK(checked >= 100);
}
