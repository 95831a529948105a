#include <json.hpp>

#include "pichan/interop.hpp"

namespace pichan {

void HostRegistry::register_class(HostClass c) {
  std::string name = c.name;
  if (classes_.count(name)) throw DuplicateClass("host class '" + name + "' is already registered");
  classes_.emplace(std::move(name), std::make_shared<const HostClass>(std::move(c)));
}

std::shared_ptr<const HostClass> HostRegistry::find(const std::string& name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second;
}

std::vector<std::string> HostRegistry::class_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : classes_) out.push_back(name);
  return out;
}

std::string effects_jsonl(const std::vector<EffectRecord>& log) {
  std::string out;
  for (const auto& e : log) {
    nlohmann::ordered_json j;
    j["class"] = e.class_name;
    j["event"] = e.event;
    j["step"] = e.step;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

HostMethod method(std::vector<BaseSort> params, BaseSort returns,
                  std::function<HostValue(HostState&, const std::vector<HostValue>&, Effects&)> body) {
  return HostMethod{std::move(params), returns, std::move(body)};
}

std::int64_t int_field(const HostState& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? 0 : std::get<std::int64_t>(it->second);
}

HostClass logging_class(const std::string& name) {
  HostClass c;
  c.name = name;
  c.constructor = [name](HostState&, Effects& fx) { fx.push_back("ctor:" + name); };
  c.methods["ping"] = method({}, BaseSort::Void, [](HostState& s, const auto&, Effects& fx) {
    s["pings"] = int_field(s, "pings") + 1;
    fx.push_back("ping");
    return HostValue{Unit{}};
  });
  c.methods["count"] = method({}, BaseSort::Int, [](HostState& s, const auto&, Effects&) {
    return HostValue{int_field(s, "pings")};
  });
  return c;
}

}  // namespace

HostRegistry builtin_registry(const std::string& name) {
  if (name != "std") throw UnknownRegistry("unknown host registry '" + name + "'");
  HostRegistry reg;

  HostClass account;
  account.name = "Account";
  account.constructor = [](HostState&, Effects& fx) { fx.push_back("ctor:Account"); };
  account.methods["readn"] = method({}, BaseSort::Void, [](HostState&, const auto&, Effects&) {
    return HostValue{Unit{}};
  });
  account.methods["read"] = method({}, BaseSort::Int, [](HostState&, const auto&, Effects&) {
    return HostValue{std::int64_t{1976528}};
  });
  reg.register_class(std::move(account));

  HostClass console;
  console.name = "Console";
  console.constructor = [](HostState&, Effects& fx) { fx.push_back("ctor:Console"); };
  auto printer = [](HostState&, const std::vector<HostValue>& args, Effects& fx) {
    fx.push_back("print:" + literal_text(args.at(0)));
    return HostValue{Unit{}};
  };
  console.methods["print"] = method({BaseSort::Int}, BaseSort::Void, printer);
  console.methods["print_string"] = method({BaseSort::Str}, BaseSort::Void, printer);
  console.methods["print_bool"] = method({BaseSort::Bool}, BaseSort::Void, printer);
  reg.register_class(std::move(console));

  reg.register_class(logging_class("LoggingCtor"));
  reg.register_class(logging_class("LoggingCtor2"));

  HostClass counter;
  counter.name = "Counter";
  counter.constructor = [](HostState& s, Effects& fx) {
    s["value"] = std::int64_t{0};
    fx.push_back("ctor:Counter");
  };
  counter.methods["inc"] = method({}, BaseSort::Int, [](HostState& s, const auto&, Effects&) {
    s["value"] = int_field(s, "value") + 1;
    return s["value"];
  });
  counter.methods["get"] = method({}, BaseSort::Int, [](HostState& s, const auto&, Effects&) {
    return HostValue{int_field(s, "value")};
  });
  counter.methods["add"] = method({BaseSort::Int}, BaseSort::Int,
                                  [](HostState& s, const std::vector<HostValue>& args, Effects&) {
                                    s["value"] = int_field(s, "value") +
                                                 std::get<std::int64_t>(args.at(0));
                                    return s["value"];
                                  });
  reg.register_class(std::move(counter));
  return reg;
}

std::vector<std::string> builtin_registry_names() { return {"std"}; }

}  // namespace pichan
