#include "xcsp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xcsp/document.hpp"
#include "xcsp/semantics.hpp"
#include "xcsp/stats.hpp"
#include "xcsp/validate.hpp"

namespace xcsp {

namespace {

using Json = nlohmann::ordered_json;

struct Common {
  bool quiet = false;
  std::string format = "text";

  bool machine() const { return format == "machine"; }
};

// Exit with a status after a message on stderr.
struct Exit {
  int code;
};

std::optional<std::string> read_input(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(path, std::ios::binary);
  if (!file) return std::nullopt;
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) return std::nullopt;
  return buffer.str();
}

Json cost_json(const Cost& c) { return c.is_infinite() ? Json("infinity") : Json(c.value()); }

Json assignment_json(const Instance& inst, const Assignment& a) {
  Json j = Json::object();
  for (const auto& v : inst.variables)
    if (auto it = a.find(v.name); it != a.end()) j[v.name] = it->second;
  return j;
}

/// "Name=value" bindings separated by commas or whitespace.
Assignment parse_assignment(std::string_view text) {
  Assignment a;
  std::size_t i = 0;
  auto separator = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    if (separator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !separator(text[j])) ++j;
    const std::string_view token = text.substr(i, j - i);
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size())
      throw Error("MalformedAssignment", "expected Name=value, got '" + std::string(token) + "'", i);
    const std::string_view name = token.substr(0, eq), digits = token.substr(eq + 1);
    Int value = 0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || end != digits.data() + digits.size())
      throw Error("MalformedAssignment", "'" + std::string(digits) + "' is not an integer", i + eq + 1);
    if (!a.emplace(std::string(name), value).second)
      throw Error("MalformedAssignment", "variable " + std::string(name) + " is bound twice", i);
    i = j;
  }
  return a;
}

class Runner {
public:
  Runner(std::ostream& out, std::ostream& err, std::istream& in) : out_(out), err_(err), in_(in) {}

  int validate(const Common& common, const std::string& path, bool strict) {
    const std::string bytes = read(path);
    LoadResult loaded = load_instance(bytes);
    std::vector<Diagnostic> diagnostics = loaded.diagnostics;
    bool passed = loaded.ok();
    if (!loaded.ok()) {
      const bool xml_failure = std::any_of(diagnostics.begin(), diagnostics.end(),
                                           [](const Diagnostic& d) { return d.code == "XmlError"; });
      if (xml_failure) {
        note(common, format_text(diagnostics), true);
        return exit_hard;
      }
    } else {
      const ValidationReport report =
          strict ? validate_competition(*loaded.instance) : validate_structure(*loaded.instance);
      diagnostics.insert(diagnostics.end(), report.diagnostics.begin(), report.diagnostics.end());
      passed = report.passed;
    }
    if (!common.quiet) {
      if (common.machine()) {
        out_ << format_json_lines(diagnostics);
      } else {
        out_ << format_text(diagnostics);
        out_ << (passed ? "valid" : "invalid") << (strict ? " (competition)" : "") << "\n";
      }
    }
    return passed ? exit_ok : exit_negative;
  }

  int convert(const Common& common, const std::string& path, const std::string& to, const std::string& output) {
    const Instance inst = load(common, path);
    const std::string text = write_instance(inst, *notation_from_string(to));
    if (output.empty() || output == "-") {
      out_ << text;
      return exit_ok;
    }
    std::ofstream file(output, std::ios::binary);
    file << text;
    file.close();
    if (!file) {
      err_ << "error: cannot write " << output << "\n";
      return exit_usage;
    }
    return exit_ok;
  }

  int check(const Common& common, const std::string& path, const std::optional<std::string>& inline_text,
            const std::optional<std::string>& file) {
    if (inline_text.has_value() == file.has_value()) {
      err_ << "error: give exactly one of --assignment and --assignment-file\n";
      return exit_usage;
    }
    const Instance inst = load(common, path);
    Assignment assignment;
    try {
      assignment = parse_assignment(inline_text ? *inline_text : read(*file));
    } catch (const Error& e) {
      err_ << "error: " << e.code() << ": " << e.what() << "\n";
      return exit_usage;
    }
    const SolutionReport report = evaluate([&] { return check_solution(inst, assignment); });
    const bool ok = report.kind == InstanceType::wcsp ? report.consistent : report.satisfied;
    if (common.machine()) {
      Json j;
      j["satisfied"] = report.satisfied;
      if (report.kind == InstanceType::wcsp) {
        j["totalCost"] = cost_json(report.total_cost);
        j["consistent"] = report.consistent;
      } else {
        j["violated"] = report.violated;
      }
      out_ << j.dump() << "\n";
    } else if (report.kind == InstanceType::wcsp) {
      out_ << "totalCost=" << report.total_cost.to_string() << "\n";
      out_ << (report.consistent ? "consistent" : "inconsistent") << "\n";
    } else if (report.satisfied) {
      out_ << "satisfied\n";
    } else {
      out_ << "violated";
      for (const auto& name : report.violated) out_ << ' ' << name;
      out_ << "\n";
    }
    return ok ? exit_ok : exit_negative;
  }

  int solve(const Common& common, const std::string& path, std::optional<std::string> mode,
            std::optional<std::uint64_t> limit) {
    std::uint64_t budget = default_node_limit;
    if (limit) {
      budget = *limit;
    } else if (const char* env = std::getenv(node_limit_env); env && *env) {
      const std::string_view text(env);
      auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), budget);
      if (ec != std::errc() || end != text.data() + text.size() || budget == 0) {
        err_ << "error: " << node_limit_env << " must be a positive integer\n";
        return exit_usage;
      }
    }

    const Instance inst = load(common, path);
    const bool quantified = inst.type() == InstanceType::qcsp || inst.type() == InstanceType::qcsp_plus;
    if (!mode) mode = quantified ? "qcsp" : "first";
    if ((*mode == "qcsp") != quantified) {
      err_ << "error: mode " << *mode << " does not apply to " << to_string(inst.type()) << " instances\n";
      return exit_usage;
    }

    if (*mode == "qcsp") {
      const bool value = evaluate([&] { return eval_qcsp(inst, budget); });
      if (common.machine())
        out_ << Json{{"value", value}}.dump() << "\n";
      else
        out_ << (value ? "TRUE" : "FALSE") << "\n";
      return value ? exit_ok : exit_negative;
    }

    SolveOptions options;
    options.node_limit = budget;
    options.mode = *mode == "first"   ? SolveMode::first
                   : *mode == "all"   ? SolveMode::all
                   : *mode == "count" ? SolveMode::count
                                      : SolveMode::min_cost;
    options.on_solution = [&](const Assignment& a) {
      if (common.machine())
        out_ << assignment_json(inst, a).dump() << "\n";
      else
        out_ << format_assignment(inst, a) << "\n";
      out_.flush();
    };
    const SolveResult result = evaluate([&] { return solve_bruteforce(inst, options); });
    if (options.mode == SolveMode::count) {
      if (common.machine())
        out_ << Json{{"count", result.count}}.dump() << "\n";
      else
        out_ << result.count << "\n";
    } else if (options.mode == SolveMode::min_cost && result.best) {
      if (common.machine()) {
        Json j;
        j["cost"] = cost_json(*result.best_cost);
        j["assignment"] = assignment_json(inst, *result.best);
        out_ << j.dump() << "\n";
      } else {
        out_ << result.best_cost->to_string() << "\n" << format_assignment(inst, *result.best) << "\n";
      }
    }
    if (result.count == 0) note(common, "no solution\n", false);
    return result.count > 0 ? exit_ok : exit_negative;
  }

  int stats(const Common& common, const std::string& path) {
    const Instance inst = load(common, path);
    const InstanceStats s = compute_stats(inst);
    out_ << (common.machine() ? stats_json(s) + "\n" : stats_text(s));
    if (!s.warnings.empty()) note(common, format_text(s.warnings), false);
    return exit_ok;
  }

private:
  std::string read(const std::string& path) {
    auto bytes = read_input(path, in_);
    if (!bytes) {
      err_ << "error: cannot read " << path << "\n";
      throw Exit{exit_usage};
    }
    return std::move(*bytes);
  }

  Instance load(const Common& common, const std::string& path) {
    LoadResult loaded = load_instance(read(path));
    if (!loaded.ok()) {
      std::vector<Diagnostic> errors;
      for (const auto& d : loaded.diagnostics)
        if (d.severity == Severity::error) errors.push_back(d);
      err_ << format_text(errors);
      throw Exit{exit_hard};
    }
    std::vector<Diagnostic> warnings = loaded.diagnostics;
    note(common, format_text(warnings), false);
    return std::move(*loaded.instance);
  }

  // Evaluation failures are hard errors; a budget stop reports progress.
  template <class F>
  auto evaluate(F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const BudgetExceeded& e) {
      err_ << "error: BudgetExceeded: " << e.what() << "\n";
      throw Exit{exit_hard};
    } catch (const Error& e) {
      err_ << "error: " << e.code() << ": " << e.what() << "\n";
      throw Exit{e.code() == "UnsupportedInstanceType" ? exit_usage : exit_hard};
    }
  }

  void note(const Common& common, const std::string& text, bool always) {
    if (text.empty() || (common.quiet && !always)) return;
    err_ << text;
  }

  std::ostream& out_;
  std::ostream& err_;
  std::istream& in_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Reader, validator, converter and reference evaluator for XCSP 2.1 instances", "xcsp21"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("-q,--quiet", common.quiet, "Suppress warnings and notes");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
  };

  std::string path;
  bool strict = false;
  std::string to, output;
  std::optional<std::string> assignment, assignment_file, mode;
  std::optional<std::uint64_t> limit;

  auto* validate = app.add_subcommand("validate", "Report structural or competition diagnostics");
  add_common(validate);
  validate->add_flag("--strict-competition", strict, "Apply the competition restrictions");
  validate->add_option("path", path, "Instance file, or - for standard input")->required();

  auto* convert = app.add_subcommand("convert", "Rewrite an instance in one notation");
  add_common(convert);
  convert->add_option("--to", to, "Target notation")->required()->check(CLI::IsMember({"tagged", "abridged"}));
  convert->add_option("-o,--output", output, "Output file (default standard output)");
  convert->add_option("path", path, "Instance file, or - for standard input")->required();

  auto* check = app.add_subcommand("check", "Evaluate a total assignment");
  add_common(check);
  check->add_option("--assignment", assignment, "Bindings such as \"V0=2,V1=4\"");
  check->add_option("--assignment-file", assignment_file, "File with one Name=value binding per line");
  check->add_option("path", path, "Instance file, or - for standard input")->required();

  auto* solve = app.add_subcommand("solve", "Enumerate assignments by exhaustive search");
  add_common(solve);
  solve->add_option("--mode", mode, "Search mode")
      ->check(CLI::IsMember({"first", "all", "count", "min-cost", "qcsp"}));
  solve->add_option("--limit", limit, "Node budget (default 10000000 or $XCSP21_NODE_LIMIT)")
      ->check(CLI::PositiveNumber);
  solve->add_option("path", path, "Instance file, or - for standard input")->required();

  auto* stats = app.add_subcommand("stats", "Summarize an instance");
  add_common(stats);
  stats->add_option("path", path, "Instance file, or - for standard input")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return exit_usage;
  }

  Runner runner(out, err, in);
  try {
    if (validate->parsed()) return runner.validate(common, path, strict);
    if (convert->parsed()) return runner.convert(common, path, to, output);
    if (check->parsed()) return runner.check(common, path, assignment, assignment_file);
    if (solve->parsed()) return runner.solve(common, path, mode, limit);
    return runner.stats(common, path);
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return exit_hard;
  }
}

}  // namespace xcsp
