#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fraclap/config.hpp"
#include "fraclap/error.hpp"
#include "fraclap/pipelines.hpp"

using namespace fraclap;

int main(int argc, char** argv) {
  CLI::App app{"Variational solver for the higher-order fractional Laplacian on an interval"};
  app.require_subcommand(1, 1);
  app.allow_extras();

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& cmd : pipeline_commands()) {
    auto* sub = app.add_subcommand(cmd);
    sub->add_option("-c,--config", config_path, "key=value configuration file");
    sub->allow_extras();
    for (const auto& key : config_keys()) {
      sub->add_option_function<std::string>("--" + key,
                                            [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
                                            "override " + key);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto extras = sub->remaining();
  if (!extras.empty()) {
    std::string key = extras.front();
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    std::cerr << "error: UnknownKey: unknown key '" << key << "'\n";
    return kExitValidation;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    for (const auto& [key, value] : overrides) set_config_value(cfg, key, value);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitNotAccepted;
  }
  return run_pipeline(sub->get_name(), cfg, std::cout, std::cerr);
}
