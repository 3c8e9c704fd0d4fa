// Command-line front end: grid, price, converge, bench.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "stretchfd/config.hpp"
#include "stretchfd/error.hpp"
#include "stretchfd/harness.hpp"

using namespace stretchfd;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct Source {
  std::string config;
  int table = 0;

  KeyValueConfig load() const {
    if (table != 0) {
      if (!config.empty()) throw SpecError("--config and --table are exclusive");
      return KeyValueConfig::load(std::filesystem::path(STRETCHFD_CONFIG_DIR) /
                                  ("table" + std::to_string(table) + ".cfg"));
    }
    if (config.empty()) throw SpecError("one of --config or --table is required");
    return KeyValueConfig::load(config);
  }
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--config", src.config, "key = value run configuration");
  cmd->add_option("--table", src.table, "bundled table configuration")->check(CLI::Range(1, 6));
}

// Writes to --out when given, stdout otherwise.
void write_output(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + out);
}

std::string grid_csv(const KeyValueConfig& kv, std::optional<std::size_t> steps) {
  RunConfig c = run_config_from(kv);
  c.stretch.validate();
  std::size_t n = steps.value_or(62);
  if (!steps) {
    if (auto v = kv.get("grid.steps")) n = std::stoul(*v);
  }
  Grid g = build_grid(c, n);
  std::ostringstream os;
  os << "j,u,s,spacing\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    double u = static_cast<double>(j) / static_cast<double>(g.size() - 1);
    os << j << ',' << fmt(u) << ',' << fmt(g.points[j]) << ',';
    if (j > 0) os << fmt(g.points[j] - g.points[j - 1]);
    os << '\n';
  }
  return os.str();
}

std::string price_csv(const KeyValueConfig& kv, std::optional<std::size_t> steps) {
  TableConfig t = table_config_from(kv);
  std::ostringstream os;
  os << "label,I,spot,price\n";
  for (const auto& c : t.columns) {
    std::size_t n = steps ? *steps : (c.space_steps.empty() ? 0 : c.space_steps.back());
    if (n < 2) throw SpecError("no space step count: pass --steps or set run.space_steps");
    auto prices = price_spots(c, n);
    for (std::size_t s = 0; s < c.spots.size(); ++s)
      os << c.label << ',' << n << ',' << fmt(c.spots[s]) << ',' << fmt(prices[s]) << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stretched-grid finite differences for option pricing"};
  app.require_subcommand(1);

  Source src;
  std::string out;
  std::optional<std::size_t> steps;
  std::size_t samples = 10'000'000;

  auto* grid = app.add_subcommand("grid", "emit the grid points of a stretch configuration");
  add_source(grid, src);
  grid->add_option("--steps", steps, "space steps I");
  grid->add_option("--out", out, "output CSV path");

  auto* price = app.add_subcommand("price", "value the configured contract at the report spots");
  add_source(price, src);
  price->add_option("--steps", steps, "space steps I (default: largest of run.space_steps)");
  price->add_option("--out", out, "output CSV path");

  auto* converge = app.add_subcommand("converge", "convergence table in the space steps");
  add_source(converge, src);
  converge->add_option("--out", out, "output CSV path");

  auto* bench = app.add_subcommand("bench", "cubic against sinh map evaluation time");
  bench->add_option("--samples", samples, "number of u samples")->check(CLI::Range(1'000'000ul, 1'000'000'000ul));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*grid) {
      write_output(out, grid_csv(src.load(), steps));
    } else if (*price) {
      write_output(out, price_csv(src.load(), steps));
    } else if (*converge) {
      TableConfig t = table_config_from(src.load());
      auto reports = run_convergence(t.columns);
      std::ostringstream os;
      emit_csv(reports, os);
      write_output(out, os.str());
    } else if (*bench) {
      TransformTiming t = bench_transforms(samples);
      std::cout << "samples,cubic_seconds,sinh_seconds,ratio\n"
                << t.samples << ',' << fmt(t.cubic_seconds) << ',' << fmt(t.sinh_seconds) << ','
                << fmt(t.ratio()) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "stretchfd: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
