#include "stretchfd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "stretchfd/error.hpp"
#include "stretchfd/kernels.hpp"

namespace stretchfd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string column_name(const std::string& label, const char* what, double spot) {
  std::string name = label.empty() ? std::string() : label + "_";
  return name + what + "_" + format_number(spot);
}

}  // namespace

void RunConfig::validate() const {
  contract.validate();
  market.validate();
  if (space_steps.empty()) throw SpecError("run.space_steps is empty");
  if (!std::is_sorted(space_steps.begin(), space_steps.end())) throw SpecError("run.space_steps must be increasing");
  for (auto i : space_steps)
    if (i < 2) throw SpecError("space steps must be at least 2");
  if (reference_steps <= *std::max_element(space_steps.begin(), space_steps.end()))
    throw SpecError("run.reference_steps must exceed every space step count");
  if (spots.empty()) throw SpecError("run.spots is empty");
  for (double s : spots)
    if (!(s > stretch.s_min && s < stretch.s_max))
      throw SpecError("report spot " + format_number(s) + " outside the grid bounds");
  if (pad_cells < 0.0) throw SpecError("grid.pad_cells must be nonnegative");
  // The smallest pad is the tightest check on the critical points.
  stretch_for(std::max(reference_steps, space_steps.back())).validate();
  if (!time_steps_follow_space && pde.time_steps < 1) throw SpecError("pde.time_steps must be positive");
}

PdeConfig RunConfig::pde_for(std::size_t steps) const {
  PdeConfig out = pde;
  if (time_steps_follow_space) out.time_steps = steps;
  return out;
}

StretchSpec RunConfig::stretch_for(std::size_t steps) const {
  StretchSpec spec = stretch;
  if (pad_cells > 0.0) {
    double pad = pad_cells * spec.range() / static_cast<double>(steps);
    spec.s_min -= pad;
    spec.s_max += pad;
  }
  return spec;
}

Grid build_grid(const RunConfig& config, std::size_t steps) {
  StretchMap map = build_map(config.stretch_for(steps), steps);
  return apply_placement(sample_grid(map, steps), config.placement);
}

Valuation value_grid(const RunConfig& config, std::size_t steps) {
  Valuation out;
  out.grid = build_grid(config, steps);
  out.values = solve_backward(config.contract, config.market, out.grid, config.pde_for(steps));
  return out;
}

std::vector<double> price_spots(const RunConfig& config, std::size_t steps) {
  Valuation v = value_grid(config, steps);
  std::vector<double> out;
  out.reserve(config.spots.size());
  for (double s : config.spots) out.push_back(value_at(v.grid, v.values, s));
  return out;
}

std::vector<ConvergenceReport> run_convergence(std::span<const RunConfig> columns) {
  for (const auto& c : columns) c.validate();
  for (const auto& c : columns)
    if (c.space_steps != columns.front().space_steps)
      throw SpecError("all columns must share run.space_steps");

  struct Cell {
    std::size_t column;
    std::size_t steps;
    std::vector<double> prices;
    std::string status = "ok";
  };
  // One reference cell per column followed by its rows.
  std::vector<Cell> cells;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    cells.push_back({c, columns[c].reference_steps, {}, "ok"});
    for (auto i : columns[c].space_steps) cells.push_back({c, i, {}, "ok"});
  }

  const auto n = static_cast<std::ptrdiff_t>(cells.size());
  // Largest cells first keeps the dynamic schedule balanced.
  std::vector<std::ptrdiff_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return cells[a].steps > cells[b].steps; });
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    Cell& cell = cells[order[k]];
    try {
      cell.prices = price_spots(columns[cell.column], cell.steps);
    } catch (const std::exception& e) {
      cell.status = e.what();
      cell.prices.assign(columns[cell.column].spots.size(), kNaN);
    }
  }

  std::vector<ConvergenceReport> reports;
  std::size_t next = 0;
  for (const auto& config : columns) {
    ConvergenceReport rep;
    rep.label = config.label;
    rep.spots = config.spots;
    rep.reference_steps = config.reference_steps;
    rep.reference_prices = cells[next].prices;
    rep.reference_status = cells[next].status;
    ++next;
    for (std::size_t r = 0; r < config.space_steps.size(); ++r, ++next) {
      ConvergenceRow row;
      row.steps = cells[next].steps;
      row.prices = cells[next].prices;
      row.status = cells[next].status;
      if (row.ok() && rep.reference_status != "ok") row.status = "reference failed: " + rep.reference_status;
      for (std::size_t s = 0; s < rep.spots.size(); ++s) {
        double err = std::abs(row.prices[s] - rep.reference_prices[s]) * 1e5;
        row.errors.push_back(err);
        double order = kNaN;
        if (r > 0) {
          double prev = rep.rows.back().errors[s];
          if (prev > 0.0 && err > 0.0) order = std::log2(prev / err);
        }
        row.orders.push_back(order);
      }
      rep.rows.push_back(std::move(row));
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

ConvergenceReport run_convergence(const RunConfig& config) {
  return run_convergence(std::span<const RunConfig>(&config, 1)).front();
}

std::size_t emit_csv(std::span<const ConvergenceReport> reports, std::ostream& out) {
  std::size_t rows = 0;
  for (const auto& rep : reports) rows = std::max(rows, rep.rows.size());
  for (const auto& rep : reports)
    if (!rep.rows.empty() && rep.rows.size() != rows)
      throw SpecError("reports have different row counts");

  std::vector<std::string> header{"I"};
  for (const auto& rep : reports)
    for (double s : rep.spots) {
      header.push_back(column_name(rep.label, "price", s));
      header.push_back(column_name(rep.label, "error", s));
    }
  for (const auto& rep : reports)
    for (double s : rep.spots) header.push_back(column_name(rep.label, "order", s));
  header.push_back("status");

  std::ostringstream buf;
  auto write_line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) buf << (i ? "," : "") << csv_field(fields[i]);
    buf << '\n';
  };
  write_line(header);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::string> line;
    const ConvergenceRow* first = nullptr;
    for (const auto& rep : reports)
      if (!rep.rows.empty()) first = &rep.rows[r];
    line.push_back(std::to_string(first->steps));
    std::string status;
    for (const auto& rep : reports)
      for (std::size_t s = 0; s < rep.spots.size(); ++s) {
        line.push_back(format_number(rep.rows[r].prices[s]));
        line.push_back(format_number(rep.rows[r].errors[s]));
      }
    for (const auto& rep : reports) {
      for (std::size_t s = 0; s < rep.spots.size(); ++s)
        line.push_back(format_number(rep.rows[r].orders[s]));
      if (!rep.rows[r].ok()) {
        if (!status.empty()) status += "; ";
        status += (rep.label.empty() ? "" : rep.label + ": ") + rep.rows[r].status;
      }
    }
    line.push_back(status.empty() ? "ok" : status);
    write_line(line);
  }
  std::string text = buf.str();
  out << text;
  return text.size();
}

std::size_t emit_csv(const ConvergenceReport& report, std::ostream& out) {
  return emit_csv(std::span<const ConvergenceReport>(&report, 1), out);
}

std::size_t emit_csv(std::span<const ConvergenceReport> reports, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::size_t n = emit_csv(reports, f);
  f.flush();
  if (!f) throw std::runtime_error("write to " + path.string() + " failed");
  return n;
}

double time_map(const StretchMap& map, std::size_t samples, int repeats) {
  std::vector<double> u(samples), out(samples);
  for (std::size_t i = 0; i < samples; ++i) u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    evaluate_serial(map, u, out);
    auto t1 = std::chrono::steady_clock::now();
    // Keep the result observable so the loop is not elided.
    volatile double sink = out[samples / 2];
    (void)sink;
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

TransformTiming bench_transforms(std::size_t samples) {
  StretchSpec spec;
  spec.s_min = 0.0;
  spec.s_max = 150.0;
  spec.critical_points = {125.0};
  spec.alphas = {1.5};
  spec.kind = StretchKind::Cubic;
  StretchMap cubic = build_map(spec);
  spec.kind = StretchKind::Sinh;
  StretchMap sinh = build_map(spec);
  TransformTiming t;
  t.samples = samples;
  t.cubic_seconds = time_map(cubic, samples);
  t.sinh_seconds = time_map(sinh, samples);
  return t;
}

}  // namespace stretchfd
