#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pichan/ifgen.hpp"
#include "pichan/interop.hpp"
#include "pichan/typecheck.hpp"

using namespace pichan;
using namespace pichan::testing;

namespace {

const char* const kAccountManifest =
    R"({"class":"Account","methods":[{"name":"readn","params":[],"returns":"void"},)"
    R"({"name":"read","params":[],"returns":"int"}]})";

ClassManifest random_manifest(std::mt19937_64& rng) {
  static const BaseSort params[] = {BaseSort::Int, BaseSort::Str, BaseSort::Bool};
  static const BaseSort results[] = {BaseSort::Void, BaseSort::Int, BaseSort::Str, BaseSort::Bool};
  ClassManifest m;
  m.class_name = "C" + std::to_string(rng() % 100);
  std::size_t n = rng() % 11;
  for (std::size_t i = 0; i < n; ++i) {
    ManifestMethod mm;
    // names that sometimes collide with the Ret scheme
    mm.name = rng() % 5 == 0 ? "Ret" + std::to_string(1 + rng() % 4) : "op" + std::to_string(i);
    bool dup = false;
    for (const auto& o : m.methods) dup = dup || o.name == mm.name;
    if (dup) mm.name = "op" + std::to_string(i);
    for (std::size_t k = rng() % 3; k > 0; --k) mm.params.push_back(params[rng() % 3]);
    mm.returns = results[rng() % 4];
    m.methods.push_back(std::move(mm));
  }
  return m;
}

// A host class implementing `m`, returning a default of the right sort.
HostClass fixture(const ClassManifest& m) {
  HostClass c;
  c.name = m.class_name;
  for (const auto& mm : m.methods) {
    BaseSort r = mm.returns;
    c.methods[mm.name] = HostMethod{mm.params, r, [r](HostState&, const std::vector<HostValue>&, Effects&) -> HostValue {
                                      switch (r) {
                                        case BaseSort::Int: return std::int64_t{0};
                                        case BaseSort::Str: return std::string();
                                        case BaseSort::Bool: return false;
                                        case BaseSort::Void: break;
                                      }
                                      return Unit{};
                                    }};
  }
  return c;
}

}  // namespace

TEST_CASE("manifests") {
  ClassManifest m = parse_manifest(kAccountManifest);
  CHECK(m.class_name == "Account");
  REQUIRE(m.methods.size() == 2);
  CHECK(m.methods[0].name == "readn");
  CHECK(m.methods[0].returns == BaseSort::Void);
  CHECK(m.methods[1].returns == BaseSort::Int);

  CHECK(parse_manifest(R"({"class":"Empty","methods":[]})").methods.empty());
  CHECK(parse_manifest(R"({"class":"E","constructor_effects":true,"methods":[]})").constructor_effects);

  CHECK_THROWS_AS(parse_manifest(R"({"class":"F","methods":[{"name":"f","params":[],"returns":"float"}]})"),
                  UnknownSort);
  CHECK_THROWS_AS(parse_manifest(R"({"class":"F","methods":[{"name":"f","params":["void"],"returns":"int"}]})"),
                  UnknownSort);
  CHECK_THROWS_AS(parse_manifest(R"({"class":"F","methods":[{"name":"f","params":[],"returns":"int"},)"
                                 R"({"name":"f","params":["int"],"returns":"int"}]})"),
                  DuplicateMethod);
  CHECK_THROWS_AS(parse_manifest("{not json"), ManifestParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"methods":[]})"), ManifestParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"class":"F","methods":[],"extra":1})"), ManifestParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"class":"bad name","methods":[]})"), ManifestParseError);
  CHECK_THROWS_AS(load_manifest("/nonexistent/x.manifest.json"), IoError);
  CHECK(load_manifest(PICHAN_PROGRAMS_DIR "/account.manifest.json").methods.size() == 2);
}

TEST_CASE("the Account interface") {
  std::string text = generate_interface(parse_manifest(kAccountManifest), "FClass");
  Program generated = parse_program(text);
  Program reference = parse_program(kAccountBlock);
  REQUIRE(generated.externs.size() == 1);
  CHECK(equivalent(generated.externs[0], reference.externs[0]));
  CHECK(check_protocol_schema(generated.externs[0]).empty());
  CHECK_NOTHROW(resolve_externs(generated.externs, builtin_registry()));
  CHECK(text.back() == '\n');
}

TEST_CASE("empty class") {
  ClassManifest m{"C", false, {}};
  CHECK(generate_interface(m, "X") == "extern X -> class C { }\n");
  CHECK(parse_program(generate_interface(m, "X")).externs[0].methods.empty());
}

TEST_CASE("alias clashes and return-channel collisions") {
  ClassManifest m = parse_manifest(kAccountManifest);
  CHECK_THROWS_AS(generate_interface(m, "read"), AliasClash);
  CHECK_THROWS_AS(generate_interface(m, "Ret2"), AliasClash);

  ClassManifest clash{"K", false, {{"Ret2", {}, BaseSort::Int}, {"get", {}, BaseSort::Int}}};
  ExternDecl d = interface_decl(clash, "F");
  CHECK(d.methods[0].call_channel.display == "Ret2");
  CHECK(d.methods[0].return_channel.display == "Ret1");
  CHECK(d.methods[1].return_channel.display == "Ret2_");
  CHECK(parse_program(generate_interface(clash, "F")).externs[0].methods.size() == 2);
}

TEST_CASE("random manifests") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    ClassManifest m = random_manifest(rng);
    std::string text = generate_interface(m, "Gen");
    Program p;
    try {
      p = parse_program(text);
    } catch (const DiagnosticError& e) {
      FAIL_CHECK(e.diagnostics().front().to_string() << "\n" << text);
      continue;
    }
    REQUIRE(p.externs.size() == 1);
    const ExternDecl& d = p.externs[0];
    REQUIRE(d.methods.size() == m.methods.size());
    std::set<std::string> channels;
    for (std::size_t k = 0; k < d.methods.size(); ++k) {
      CHECK(d.methods[k].name == m.methods[k].name);
      CHECK(d.methods[k].call_channel.display == m.methods[k].name);
      CHECK(d.methods[k].params == m.methods[k].params);
      CHECK(d.methods[k].returns == m.methods[k].returns);
      CHECK(d.methods[k].explicit_protocol);
      channels.insert(d.methods[k].call_channel.display);
      channels.insert(d.methods[k].return_channel.display);
    }
    CHECK(channels.size() == 2 * m.methods.size());
    CHECK(check_protocol_schema(d).empty());
    CHECK(check_program(desugar(p)).empty());
    HostRegistry reg;
    reg.register_class(fixture(m));
    CHECK_NOTHROW(resolve_externs(p.externs, reg));
  }
}

TEST_CASE("adding a method changes one entry and appends one return channel") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    ClassManifest m = random_manifest(rng);
    ClassManifest bigger = m;
    bigger.methods.push_back(ManifestMethod{"added", {BaseSort::Int}, BaseSort::Bool});
    ExternDecl a = interface_decl(m, "G"), b = interface_decl(bigger, "G");
    REQUIRE(b.methods.size() == a.methods.size() + 1);
    for (std::size_t k = 0; k < a.methods.size(); ++k) {
      CHECK(b.methods[k].call_channel.display == a.methods[k].call_channel.display);
      CHECK(b.methods[k].return_channel.display == a.methods[k].return_channel.display);
      CHECK(b.methods[k].params == a.methods[k].params);
    }
    std::string ret = b.methods.back().return_channel.display;
    CHECK(ret.rfind("Ret" + std::to_string(b.methods.size()), 0) == 0);
  }
}
