#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "newton_measure/app.hpp"

namespace {

// "a,b,c" -> numbers; CLI11 handles the vector form, this keeps the flag a
// single token as documented.
template <typename T>
bool split_numbers(const std::string& text, std::vector<T>& out) {
  std::stringstream ss(text);
  std::string item;
  out.clear();
  while (std::getline(ss, item, ',')) {
    std::stringstream one(item);
    T value{};
    if (!(one >> value) || !one.eof()) return false;
    out.push_back(value);
  }
  return !out.empty();
}

}  // namespace

int main(int argc, char** argv) {
  using nmeasure::RunConfig;
  RunConfig cfg;
  CLI::App app{"Newton-map basins, asymptotics and measure checks for g = int p e^q + c"};
  app.require_subcommand(1);

  std::string window, disk, resolutions, budgets;
  std::optional<double> mu, alpha, r1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg.config_path, "problem JSON");
    sub->add_option("--window", window, "x0,y0,x1,y1");
    sub->add_option("--res", cfg.res, "resolution (pixels per side / samples)");
    sub->add_option("--budget", cfg.budget, "Newton iteration budget");
    sub->add_option("--seed", cfg.seed, "sampler seed");
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    sub->add_option("--sector", cfg.sector, "sector index j");
    sub->add_option("--samples", cfg.samples, "samples per shape");
  };

  auto* info = app.add_subcommand("info", "print the normalized problem and its sector constants");
  auto* render = app.add_subcommand("render", "z-plane basin image");
  auto* render_w = app.add_subcommand("render-w", "w-plane image of one sector with the Gamma curves");
  auto* zeros = app.add_subcommand("zeros", "refine the anchored zeros, CSV");
  zeros->add_option("--k-lo", cfg.k_lo);
  zeros->add_option("--k-hi", cfg.k_hi);
  auto* verify = app.add_subcommand("verify", "run one verification suite");
  verify->add_option("target", cfg.target, "asymptotics | gamma | basins | preimages")->required();
  verify->add_option("--k-lo", cfg.k_lo);
  verify->add_option("--k-hi", cfg.k_hi);
  auto* dens = app.add_subcommand("density", "Fatou density of a disk or window, CSV");
  dens->add_option("--disk", disk, "cx,cy,r");
  auto* area = app.add_subcommand("area-study", "unresolved fraction over resolutions x budgets, CSV");
  area->add_option("--resolutions", resolutions, "comma list, increasing");
  area->add_option("--budgets", budgets, "comma list, increasing");
  area->add_option("--ceiling", cfg.ceiling, "largest acceptable final unresolved fraction");
  auto* check = app.add_subcommand("check", "postsingular and thinness conditions");
  check->add_option("--r0", cfg.r0);
  check->add_option("--r1", r1);
  auto* curve = app.add_subcommand("curve", "sample the partition curve gamma, CSV");
  curve->add_option("--mu", mu);
  curve->add_option("--alpha", alpha);
  for (auto* sub : {info, render, render_w, zeros, verify, dens, area, check, curve}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nmeasure::kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.mu = mu;
  cfg.alpha = alpha;
  cfg.r1 = r1;

  std::vector<double> nums;
  if (!window.empty()) {
    if (!split_numbers(window, nums) || nums.size() != 4) {
      std::cerr << "config error: --window expects x0,y0,x1,y1\n";
      return nmeasure::kExitConfig;
    }
    cfg.window = std::array<double, 4>{nums[0], nums[1], nums[2], nums[3]};
  }
  if (!disk.empty()) {
    if (!split_numbers(disk, nums) || nums.size() != 3) {
      std::cerr << "config error: --disk expects cx,cy,r\n";
      return nmeasure::kExitConfig;
    }
    cfg.disk = std::array<double, 3>{nums[0], nums[1], nums[2]};
  }
  if (!resolutions.empty() && !split_numbers(resolutions, cfg.resolutions)) {
    std::cerr << "config error: --resolutions expects a comma list of integers\n";
    return nmeasure::kExitConfig;
  }
  if (!budgets.empty() && !split_numbers(budgets, cfg.budgets)) {
    std::cerr << "config error: --budgets expects a comma list of integers\n";
    return nmeasure::kExitConfig;
  }
  return nmeasure::run(cfg, std::cout, std::cerr);
}
