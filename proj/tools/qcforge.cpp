#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qc/io.hpp"
#include "qc/parallel.hpp"

using qc::io::json;

namespace {

int fail(const json& err) {
  std::cerr << err.dump() << "\n";
  return 1;
}

std::string describe_defaults() {
  std::string s = "config keys (defaults):\n";
  for (auto& k : qc::io::config_keys()) {
    std::string d = k.default_value.is_string() ? k.default_value.get<std::string>() : k.default_value.dump();
    s += "  " + k.name + " = " + (d.empty() ? "\"\"" : d) + "  " + k.help + "\n";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcforge: multigrid and cut-and-project quasicrystal pipelines"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(describe_defaults());

  unsigned threads = 0;
  if (const char* e = std::getenv("QCFORGE_THREADS")) threads = static_cast<unsigned>(std::strtoul(e, nullptr, 10));
  app.add_option("--threads", threads, "worker cap (QCFORGE_THREADS if unset, 0 = all cores)");

  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> opts;
  std::string config_path, target;

  std::vector<CLI::App*> jobs;
  for (std::string cmd : {"generate", "analyze", "verify", "export"}) {
    auto* sub = app.add_subcommand(cmd, cmd + " pipelines");
    sub->add_option("target", target, "pipeline")->required()->check(CLI::IsMember(qc::io::targets(cmd)));
    sub->add_option("--config", config_path, "JSON object of config keys; flags override it");
    for (auto& k : qc::io::config_keys()) {
      std::string d = k.default_value.is_string() ? k.default_value.get<std::string>() : k.default_value.dump();
      std::string help = k.help + " [default: " + (d.empty() ? "\"\"" : d) + "]";
      if (!k.choices.empty()) {
        help += " {";
        for (std::size_t i = 0; i < k.choices.size(); ++i) help += (i ? "|" : "") + k.choices[i];
        help += "}";
      }
      opts[cmd + "/" + k.name] = sub->add_option("--" + k.name, given[cmd + "/" + k.name], help);
    }
    jobs.push_back(sub);
  }

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "rerun a manifest and compare artifact hashes");
  replay->add_option("manifest", manifest_path, "run manifest")->required();
  replay->add_option("--out", replay_out, "output directory override");

  app.add_subcommand("keys", "print the defaults table as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail({{"error", "BadArguments"}, {"message", e.what()}});
  }

  qc::set_threads(threads);
  try {
    if (app.got_subcommand("keys")) {
      json t = json::array();
      for (auto& k : qc::io::config_keys())
        t.push_back({{"key", k.name}, {"type", k.type}, {"default", k.default_value}, {"help", k.help}, {"choices", k.choices}});
      std::cout << t.dump(1) << "\n";
      return 0;
    }
    if (app.got_subcommand("replay")) {
      json m = json::parse(qc::io::read_file(manifest_path));
      auto cfg = qc::io::JobConfig::from_manifest(m);
      if (!replay_out.empty()) cfg.values["out"] = replay_out;
      auto r = qc::io::run(cfg);
      bool same = r.manifest.at("outputs") == m.at("outputs") && r.manifest.at("inputs") == m.at("inputs");
      std::cout << json{{"replayed", cfg.command + " " + cfg.target}, {"identical", same}}.dump() << "\n";
      if (!same) return fail({{"error", "ReplayMismatch"}, {"message", "artifacts differ from the manifest"}});
      return 0;
    }
    for (auto* sub : jobs) {
      if (!sub->parsed()) continue;
      std::string cmd = sub->get_name();
      json over = json::object();
      if (!config_path.empty()) {
        over = json::parse(qc::io::read_file(config_path));
        if (!over.is_object()) return fail({{"error", "BadConfig"}, {"message", "config file must hold a JSON object"}});
      }
      for (auto& k : qc::io::config_keys())
        if (opts[cmd + "/" + k.name]->count()) over[k.name] = given[cmd + "/" + k.name];
      auto cfg = qc::io::JobConfig::make(cmd, target, over);
      auto r = qc::io::run(cfg);
      json files = json::array();
      for (auto& a : r.artifacts) files.push_back(a.file);
      std::cout << json{{"command", cmd + " " + target}, {"artifacts", files}, {"summary", r.summary}}.dump(1) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    return fail(qc::io::error_json(e));
  }
  return fail({{"error", "BadArguments"}, {"message", "no command"}});
}
