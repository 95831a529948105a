#include "pichan/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pichan/ifgen.hpp"
#include "pichan/parser.hpp"
#include "pichan/typecheck.hpp"
#include "pichan/vm.hpp"
#include "pichan/xir.hpp"

namespace pichan {

namespace {

enum Exit : int {
  kOk = 0,
  kSyntax = 1,
  kManifest = 1,
  kType = 2,
  kSchema = 2,
  kIo = 3,
  kStuck = 4,
  kHalted = 5,
  kStepLimit = 6,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write '" + path + "'");
}

std::string default_output(const std::string& src) {
  const std::string ext = ".pi";
  if (src.size() > ext.size() && src.compare(src.size() - ext.size(), ext.size(), ext) == 0) {
    return src.substr(0, src.size() - ext.size()) + ".xir.xml";
  }
  return src + ".xir.xml";
}

void print(std::ostream& err, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) err << d.to_string() << '\n';
}

// Front end shared by compile and check. Returns the exit code; `prog` is
// set when the program passed.
int front_end(const std::string& path, std::ostream& err, Program& prog) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  try {
    prog = desugar(parse_program(text, path));
  } catch (const DiagnosticError& e) {
    print(err, e.diagnostics());
    return kSyntax;
  }
  auto diags = check_program(prog);
  print(err, diags);
  return has_errors(diags) ? kType : kOk;
}

int cmd_compile(const std::string& src, std::string out_path, std::ostream& err) {
  Program prog;
  if (int code = front_end(src, err, prog); code != kOk) return code;
  if (out_path.empty()) out_path = default_output(src);
  try {
    write_file(out_path, to_xml(renumber(prog)));
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

int cmd_check(const std::string& src, std::ostream& err) {
  Program prog;
  return front_end(src, err, prog);
}

int cmd_run(const std::string& path, std::uint64_t seed, std::uint64_t max_steps,
            const std::string& format, const std::string& registry_name, std::ostream& out,
            std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  Program prog;
  try {
    prog = from_xml(text, path);
  } catch (const DiagnosticError& e) {
    print(err, e.diagnostics());
    return kSchema;
  }

  Trace trace;
  try {
    HostRegistry registry = builtin_registry(registry_name);
    trace = run(prog, seed, max_steps, registry);
  } catch (const InteropError& e) {
    err << "error: " << e.what() << '\n';
    return kSchema;
  } catch (const SurfaceFormError& e) {
    err << "error: " << e.what() << '\n';
    return kSchema;
  }

  out << (format == "json" ? trace_json(trace) : trace_lines(trace));
  err << "status: " << status_name(trace.status) << '\n';
  if (!trace.message.empty()) err << trace.message << '\n';
  if (trace.stuck) err << trace.stuck->to_string();

  switch (trace.status) {
    case RunStatus::Terminated: return kOk;
    case RunStatus::Stuck: return kStuck;
    case RunStatus::Clash:
    case RunStatus::Violation:
    case RunStatus::Fault: return kHalted;
    case RunStatus::StepLimit: return kStepLimit;
  }
  return kHalted;
}

int cmd_gen_iface(const std::string& manifest_path, const std::string& alias,
                  const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    ClassManifest m = load_manifest(manifest_path);
    text = generate_interface(m, alias);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ManifestError& e) {
    err << "error: " << e.what() << '\n';
    return kManifest;
  }
  if (out_path.empty()) {
    out << text;
    return kOk;
  }
  try {
    write_file(out_path, text);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pichan: compiler and virtual machine for a pi-calculus with extern channels"};
  app.name(args.empty() ? "pichan" : args.front());
  app.require_subcommand(1);

  std::string input, output, alias, trace_format = "lines", registry = "std";
  std::uint64_t seed = 0;
  std::uint32_t max_steps = 10000;

  auto* compile = app.add_subcommand("compile", "compile a .pi file to XIR");
  compile->add_option("source", input, "source file")->required();
  compile->add_option("-o", output, "output path (default: <source>.xir.xml)");

  auto* check = app.add_subcommand("check", "parse and check a .pi file");
  check->add_option("source", input, "source file")->required();

  auto* run_cmd = app.add_subcommand("run", "execute an XIR file");
  run_cmd->add_option("program", input, "XIR file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "scheduler seed (default: $PIC_SEED or 0)");
  run_cmd->add_option("--max-steps", max_steps, "step bound")->capture_default_str();
  run_cmd->add_option("--trace", trace_format, "trace format")
      ->check(CLI::IsMember({"lines", "json"}))
      ->capture_default_str();
  run_cmd->add_option("--registry", registry, "built-in host registry")->capture_default_str();

  auto* gen = app.add_subcommand("gen-iface", "generate an extern block from a class manifest");
  gen->add_option("manifest", input, "manifest JSON file")->required();
  gen->add_option("--alias", alias, "extern alias")->required();
  gen->add_option("-o", output, "output path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kType;
  }

  if (*compile) return cmd_compile(input, output, err);
  if (*check) return cmd_check(input, err);
  if (*gen) return cmd_gen_iface(input, alias, output, out, err);

  if (seed_opt->count() == 0) {
    if (const char* env = std::getenv("PIC_SEED")) {
      try {
        std::size_t used = 0;
        seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        err << "error: PIC_SEED must be an unsigned integer\n";
        return kType;
      }
    }
  }
  return cmd_run(input, seed, max_steps, trace_format, registry, out, err);
}

}  // namespace pichan
