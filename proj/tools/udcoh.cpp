#include <iostream>

#include "CLI11.hpp"
#include "udcoh/cli.hpp"

using namespace udcoh;

namespace {

// Flags as a configuration document; lists may be given with or without brackets.
cli::json flag_document(const std::string& primes, long modulus, bool has_modulus, int n_max, bool has_n_max,
                        const std::string& ideal, const std::string& checks, const std::string& format,
                        const std::string& out) {
  auto bracket = [](const std::string& s) { return !s.empty() && s.front() == '[' ? s : "[" + s + "]"; };
  std::string text;
  if (!primes.empty()) text += "primes = " + bracket(primes) + "\n";
  if (has_modulus) text += "modulus = " + std::to_string(modulus) + "\n";
  if (has_n_max) text += "n_max = " + std::to_string(n_max) + "\n";
  if (!ideal.empty()) text += "ideal = " + ideal + "\n";
  if (!checks.empty()) text += "checks = " + bracket(checks) + "\n";
  if (!format.empty()) text += "format = " + format + "\n";
  if (!out.empty()) text += "out = " + out + "\n";
  return cli::parse_document(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galois cohomology of universal ordinary distributions"};
  app.require_subcommand(1);

  std::string primes, ideal, checks, format, out, config_path;
  long modulus = 2;
  int n_max = 2;
  bool timing = false;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"basis", "canonical basis of U_r and the invariant family mod M"},
      {"cohomology", "H^n(G, U) by Smith form and mod M class counts"},
      {"verify", "run the suites named by --checks"},
      {"lift", "prime cocycles, their lifts and the mod M class counts"},
      {"cup", "cup products: closed form against the explicit diagonal"},
      {"report", "run every suite"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--primes", primes, "odd primes, e.g. 3,7");
    sub->add_option("--modulus", modulus, "M, dividing every l - 1 (0 for integral only)");
    sub->add_option("--n-max", n_max, "largest cohomological degree");
    sub->add_option("--ideal", ideal, "maximal sets of the order ideal, e.g. [[3],[7]]");
    sub->add_option("--checks", checks, "suites: anderson, theorem-a, theorem-b, cup, quasi-iso, lift, appendix, all");
    sub->add_option("--format", format, "json or markdown");
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_option("--config", config_path, "key=value or JSON file; its values override flags");
    sub->add_flag("--timing", timing, "include wall times in the report metadata");
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = nullptr;
  for (auto* sub : subs)
    if (sub->parsed()) chosen = sub;
  const std::string command = chosen->get_name();

  cli::RunConfig rc;
  try {
    cli::json doc = flag_document(primes, modulus, chosen->count("--modulus") > 0, n_max, chosen->count("--n-max") > 0,
                                  ideal, checks, format, out);
    if (!config_path.empty()) {
      const cli::json file = cli::parse_document(cli::read_file(config_path));
      for (const auto& [key, v] : file.items()) doc[key] = v;
    }
    rc = cli::config_from_document(doc);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> names;
  if (command == "basis") names = {"basis", "theorem-b"};
  else if (command == "cohomology") names = {"theorem-a"};
  else if (command == "lift") names = {"lift"};
  else if (command == "cup") names = {"cup"};
  else if (command == "report") names = cli::check_names();
  else names = rc.expanded_checks();

  const auto report = cli::run_suites(rc, names, timing);
  try {
    const std::string text = cli::emit_report(report, rc.format);
    if (rc.out.empty()) std::cout << text;
    else cli::write_file(rc.out, text);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return report.pass() ? 0 : 1;
}
