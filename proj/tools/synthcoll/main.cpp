#include <fmt/format.h>

#include <iostream>

#include "common.hpp"
#include "synthcoll/error.hpp"

namespace {

using namespace synthcoll::cli;

CLI::App* selected(CLI::App& app) {
  const auto subs = app.get_subcommands();
  return subs.empty() ? nullptr : subs.front();
}

// First "--flag" that the selected subcommand does not define.
std::optional<std::string> unknown_flag(CLI::App& scope, const std::vector<std::string>& argv) {
  for (const auto& a : argv) {
    if (a.rfind("--", 0) != 0 || a == "--") continue;
    const auto name = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
    bool known = false;
    for (const auto* opt : scope.get_options()) {
      for (const auto& l : opt->get_lnames()) known = known || l == name;
    }
    if (!known) return a;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic test-collection toolkit: generate, index, search, evaluate, analyse.",
               "synthcoll"};
  app.set_version_flag("--version", SYNTHCOLL_VERSION);
  app.require_subcommand(0, 1);
  Registry reg;
  for (int i = 0; i < argc; ++i) reg.argv.emplace_back(argv[i]);
  register_forge(app, reg);
  register_retrieval(app, reg);
  register_eval(app, reg);
  register_stats(app, reg);

  if (argc < 2) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << (selected(app) ? selected(app)->help() : app.help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << SYNTHCOLL_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* scope = selected(app) ? selected(app) : &app;
    const std::vector<std::string> args(reg.argv.begin() + 1, reg.argv.end());
    if (const auto flag = unknown_flag(*scope, args)) {
      std::cerr << fmt::format("error: unknown option '{}'", *flag);
      if (const auto hint = nearest_option(*scope, *flag)) {
        std::cerr << fmt::format("; did you mean '{}'?", *hint);
      }
      std::cerr << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    std::cerr << fmt::format("run '{} --help' for usage\n",
                             scope == &app ? std::string("synthcoll") : "synthcoll " + scope->get_name());
    return kUsage;
  }
  CLI::App* sub = selected(app);
  if (!sub) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    return reg.actions.at(sub)();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const synthcoll::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
