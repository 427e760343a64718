#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "telsim/driver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

telsim::KeyValueConfig load_config(const std::string& path, bool have_seed,
                                   std::uint64_t seed, const std::string& mode) {
  telsim::KeyValueConfig cfg = telsim::KeyValueConfig::parse_file(path);
  if (have_seed) cfg.set("run.seed", std::to_string(seed));
  if (!mode.empty()) cfg.set("run.mode", mode);
  return cfg;
}

int with_output(const std::string& out_path,
                const std::function<void(std::ostream&)>& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << '\n';
    return kExitRuntime;
  }
  fn(out);
  if (!out.good()) {
    std::cerr << "error: write failed: " << out_path << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded CV teleportation channel simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, mode;
  std::uint64_t seed = 0;
  bool have_seed = false;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "key=value config file");
    if (config_required) c->required();
    sub->add_option("--seed", seed, "RNG seed (overrides run.seed)")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--mode", mode, "analytic|mc (overrides run.mode)")
        ->check(CLI::IsMember({"analytic", "mc", "montecarlo"}));
  };

  auto* sim = app.add_subcommand("simulate", "single run report");
  add_common(sim, true);

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(sweep, true);

  auto* cmap = app.add_subcommand("channel-map", "classify a (tau, nu) point");
  double tau = 1.0, nu = 0.0, r_choi = 2.0;
  cmap->add_option("--tau", tau, "channel transmissivity")->required();
  cmap->add_option("--nu", nu, "channel added noise")->required();
  cmap->add_option("--choi-r", r_choi, "Choi probe squeezing parameter");
  cmap->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) {
      const telsim::KeyValueConfig cfg = load_config(config_path, have_seed, seed, mode);
      return with_output(out_path, [&](std::ostream& out) {
        telsim::run_simulate(cfg, out);
      });
    }
    if (sweep->parsed()) {
      const telsim::KeyValueConfig cfg = load_config(config_path, have_seed, seed, mode);
      const telsim::SweepSpec spec = telsim::sweep_from_config(cfg);
      const std::string target = !out_path.empty() ? out_path : spec.output_path;
      return with_output(target, [&](std::ostream& out) {
        telsim::run_sweep(spec, out);
      });
    }
    telsim::ChannelParams params{tau, nu};
    return with_output(out_path, [&](std::ostream& out) {
      telsim::run_channel_map(params, r_choi, out);
    });
  } catch (const telsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
