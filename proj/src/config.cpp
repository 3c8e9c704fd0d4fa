#include "stretchfd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "stretchfd/error.hpp"

namespace stretchfd {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    std::string item = trim(std::string_view(s).substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw SpecError("key '" + key + "': '" + text + "' is not a number");
  return v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw SpecError("key '" + key + "': '" + text + "' is not a nonnegative integer");
  return v;
}

// Column-aware lookup: "<column>.<key>" wins over "<key>".
class Reader {
 public:
  Reader(const KeyValueConfig& kv, const std::string& column) : kv_(kv), column_(column) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (!column_.empty())
      if (auto v = kv_.get(column_ + "." + key)) return v;
    return kv_.get(key);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }
  std::string required(const std::string& key) const {
    auto v = raw(key);
    if (!v) throw SpecError("missing key '" + key + "'");
    return *v;
  }
  double number(const std::string& key, double fallback) const {
    auto v = raw(key);
    return v ? to_double(key, *v) : fallback;
  }
  std::optional<double> maybe_number(const std::string& key) const {
    auto v = raw(key);
    if (!v || v->empty()) return std::nullopt;
    return to_double(key, *v);
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (auto v = raw(key))
      for (const auto& item : split_list(*v)) out.push_back(to_double(key, item));
    return out;
  }
  std::vector<std::size_t> sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    if (auto v = raw(key))
      for (const auto& item : split_list(*v)) out.push_back(to_size(key, item));
    return out;
  }

 private:
  const KeyValueConfig& kv_;
  std::string column_;
};

template <class E>
E choose(const std::string& key, const std::string& value,
         std::initializer_list<std::pair<const char*, E>> options) {
  std::string v = lower(value);
  std::string names;
  for (const auto& [name, e] : options) {
    if (v == name) return e;
    names += names.empty() ? name : std::string("|") + name;
  }
  throw SpecError("key '" + key + "': '" + value + "' is not one of " + names);
}

BoundaryCondition boundary(const std::string& key, const std::string& value) {
  auto colon = value.find(':');
  std::string kind = lower(trim(value.substr(0, colon)));
  if (kind == "dirichlet") {
    if (colon == std::string::npos) throw SpecError("key '" + key + "': dirichlet needs a value, e.g. dirichlet:0");
    return {BoundaryKind::DirichletValue, to_double(key, trim(value.substr(colon + 1)))};
  }
  return {choose<BoundaryKind>(key, kind,
                               {{"zero_gamma", BoundaryKind::ZeroGamma},
                                {"degenerate", BoundaryKind::DegenerateExact}}),
          0.0};
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "title", "columns", "label",
      "contract.style", "contract.type", "contract.strike", "contract.maturity",
      "contract.lower_barrier", "contract.upper_barrier", "contract.rebate",
      "contract.observation_dates", "contract.observations_per_year",
      "market.rate", "market.dividend", "market.volatility",
      "stretch.kind", "stretch.min", "stretch.max", "stretch.points", "stretch.alpha",
      "stretch.chi", "stretch.lambda", "stretch.knot_rule",
      "grid.pad_cells", "grid.steps",
      "placement.mode", "placement.mid_cell", "placement.on_grid",
      "pde.time_steps", "pde.barrier_mode", "pde.lower_boundary", "pde.upper_boundary",
      "run.space_steps", "run.reference_steps", "run.spots"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw SpecError(source + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw SpecError(source + ":" + std::to_string(number) + ": empty key");
    if (kv.entries_.count(key))
      throw SpecError(source + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    kv.entries_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw SpecError("cannot read config " + path.string());
  return parse(f, path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

RunConfig run_config_from(const KeyValueConfig& kv, const std::string& column) {
  Reader r(kv, column);
  RunConfig c;
  c.label = r.text("label", column);

  auto& k = c.contract;
  k.style = choose<ExerciseStyle>("contract.style", r.text("contract.style", "european"),
                                  {{"european", ExerciseStyle::EuropeanVanilla},
                                   {"american", ExerciseStyle::AmericanVanilla},
                                   {"discrete_ko", ExerciseStyle::DiscreteKO},
                                   {"discrete_double_ko", ExerciseStyle::DiscreteDoubleKO},
                                   {"continuous_double_ko", ExerciseStyle::ContinuousDoubleKO}});
  k.type = choose<OptionType>("contract.type", r.text("contract.type", "call"),
                              {{"call", OptionType::Call}, {"put", OptionType::Put}});
  k.strike = r.number("contract.strike", k.strike);
  k.maturity = r.number("contract.maturity", k.maturity);
  k.lower_barrier = r.maybe_number("contract.lower_barrier");
  k.upper_barrier = r.maybe_number("contract.upper_barrier");
  k.rebate = r.number("contract.rebate", 0.0);
  k.observation_dates = r.numbers("contract.observation_dates");
  k.observations_per_year = r.number("contract.observations_per_year", 0.0);

  c.market.rate = r.number("market.rate", 0.0);
  c.market.dividend = r.number("market.dividend", 0.0);
  c.market.volatility = r.number("market.volatility", 0.0);

  auto& s = c.stretch;
  s.kind = choose<StretchKind>("stretch.kind", r.text("stretch.kind", "uniform"),
                               {{"uniform", StretchKind::Uniform},
                                {"sinh", StretchKind::Sinh},
                                {"cubic", StretchKind::Cubic},
                                {"piecewise_c1", StretchKind::PiecewiseCubicC1},
                                {"piecewise_c2", StretchKind::PiecewiseC2},
                                {"tavella_randall", StretchKind::TavellaRandall}});
  s.s_min = to_double("stretch.min", r.required("stretch.min"));
  s.s_max = to_double("stretch.max", r.required("stretch.max"));
  s.critical_points = r.numbers("stretch.points");
  s.alphas = r.numbers("stretch.alpha");
  s.chi = r.number("stretch.chi", s.chi);
  s.lambda = r.number("stretch.lambda", s.lambda);
  s.knot_rule = choose<KnotRule>("stretch.knot_rule", r.text("stretch.knot_rule", "direct"),
                                 {{"direct", KnotRule::Direct}, {"inverse", KnotRule::Inverse}});
  if (s.kind == StretchKind::Uniform) s.critical_points.clear();
  c.pad_cells = r.number("grid.pad_cells", 0.0);

  c.placement.mode = choose<PlacementMode>("placement.mode", r.text("placement.mode", "none"),
                                           {{"none", PlacementMode::None},
                                            {"insert", PlacementMode::Insert},
                                            {"deform", PlacementMode::Deform}});
  for (double v : r.numbers("placement.mid_cell")) c.placement.targets.push_back({v, PlacementGoal::MidCell});
  for (double v : r.numbers("placement.on_grid")) c.placement.targets.push_back({v, PlacementGoal::OnGrid});
  std::sort(c.placement.targets.begin(), c.placement.targets.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });

  std::string n = lower(r.text("pde.time_steps", "1500"));
  if (n == "match_space") {
    c.time_steps_follow_space = true;
  } else {
    c.pde.time_steps = to_size("pde.time_steps", n);
  }
  c.pde.barrier_mode = choose<BarrierMode>("pde.barrier_mode", r.text("pde.barrier_mode", "on_grid"),
                                           {{"on_grid", BarrierMode::OnGridDirichlet},
                                            {"ghost_linear", BarrierMode::GhostLinear},
                                            {"ghost_lagrange3", BarrierMode::GhostLagrange3}});
  if (auto v = r.raw("pde.lower_boundary")) c.pde.lower = boundary("pde.lower_boundary", *v);
  if (auto v = r.raw("pde.upper_boundary")) c.pde.upper = boundary("pde.upper_boundary", *v);

  c.space_steps = r.sizes("run.space_steps");
  c.reference_steps = to_size("run.reference_steps", r.text("run.reference_steps", "0"));
  c.spots = r.numbers("run.spots");
  return c;
}

TableConfig table_config_from(const KeyValueConfig& kv) {
  TableConfig t;
  t.title = kv.get("title").value_or("");
  std::vector<std::string> columns;
  if (auto v = kv.get("columns")) columns = split_list(*v);
  std::set<std::string> sections{"contract", "market", "stretch", "grid", "placement", "pde", "run"};
  for (const auto& col : columns)
    if (sections.count(col) || col == "title" || col == "columns" || col == "label")
      throw SpecError("column name '" + col + "' is reserved");

  for (const auto& [key, value] : kv.entries()) {
    std::string bare = key;
    for (const auto& col : columns)
      if (key.rfind(col + ".", 0) == 0) bare = key.substr(col.size() + 1);
    if (!known_keys().count(bare)) throw SpecError("unknown key '" + key + "'");
  }

  if (columns.empty()) {
    t.columns.push_back(run_config_from(kv));
  } else {
    for (const auto& col : columns) t.columns.push_back(run_config_from(kv, col));
  }
  return t;
}

TableConfig load_table_config(const std::filesystem::path& path) {
  return table_config_from(KeyValueConfig::load(path));
}

}  // namespace stretchfd
