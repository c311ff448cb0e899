// Command-line front end: configures a channel family, runs the witnesses,
// measures and distinguishability curves, and emits deterministic CSV or JSON
// suitable for regenerating the reference figures.

#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdmaps/qdmaps.hpp"

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int output_precision() {
  const char* env = std::getenv("OUTPUT_PRECISION");
  if (env == nullptr || *env == '\0') return 9;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 17) return 9;
  return static_cast<int>(v);
}

// Locale-independent significant-digit formatting; precision is fixed per
// process so repeated runs are byte-identical.
std::string fmt(double value) {
  static const int prec = output_precision();
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, prec);
  return std::string(buf.data(), res.ptr);
}

struct Grid {
  double start;
  double stop;
  int points;

  std::vector<double> times() const {
    std::vector<double> ts(points);
    for (int i = 0; i < points; ++i)
      ts[i] = start + (stop - start) * static_cast<double>(i) / (points - 1);
    return ts;
  }
};

Grid parse_grid(const std::string& text, double min_start) {
  Grid g{};
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("grid must be start:stop:points, got '" + text + "'");
  try {
    g.start = std::stod(text.substr(0, c1));
    g.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.points = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigError("grid must be start:stop:points, got '" + text + "'");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop))
    throw ConfigError("grid endpoints must be finite");
  if (!(g.start >= min_start))
    throw ConfigError("grid start must be >= " + fmt(min_start));
  if (!(g.stop > g.start)) throw ConfigError("grid stop must exceed start");
  if (g.points < 2) throw ConfigError("grid needs at least 2 points");
  return g;
}

std::vector<double> parse_time_list(const std::string& text) {
  std::vector<double> ts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      ts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad time list entry '" + item + "'");
    }
  }
  if (ts.empty()) throw ConfigError("empty time list");
  return ts;
}

struct Options {
  std::string channel;
  std::string config_path;
  std::map<std::string, double> flag_params;
  std::string grid;  // empty = per-command default
  double t = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double horizon = 1.0;
  std::string convention = "d-factor";
  bool upper_bound = false;
  std::string t0_grid;
  std::string format = "csv";
  std::string output;
};

qdmaps::ChannelFamily build_family(const Options& o) {
  qdmaps::ChannelSpec spec;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    try {
      spec = qdmaps::parse_key_value(text.str());
    } catch (const qdmaps::Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (!o.channel.empty()) spec.family = o.channel;
  for (const auto& [k, v] : o.flag_params) spec.params[k] = v;
  if (spec.family.empty())
    throw ConfigError("no channel specified: use --channel or --config");
  try {
    return qdmaps::make_family(spec);
  } catch (const qdmaps::Error& e) {
    throw ConfigError(e.what());
  }
}

qdmaps::MeasureConvention parse_convention(const std::string& name) {
  if (name == "d-factor") return qdmaps::MeasureConvention::d_factor;
  if (name == "unit") return qdmaps::MeasureConvention::unit;
  if (name == "rate-distance") return qdmaps::MeasureConvention::rate_distance;
  throw ConfigError("unknown convention '" + name + "'");
}

json channel_json(const qdmaps::ChannelFamily& fam) {
  const qdmaps::ChannelSpec spec = qdmaps::channel_spec(fam);
  json params = json::object();
  for (const auto& [k, v] : spec.params) {
    if (std::isfinite(v))
      params[k] = v;
    else
      params[k] = v > 0 ? "inf" : "-inf";  // JSON numbers cannot hold infinities
  }
  return json{{"family", spec.family}, {"params", params}};
}

std::string kind_name(qdmaps::ChoiKind kind) {
  switch (kind) {
    case qdmaps::ChoiKind::full_map:
      return "full-map";
    case qdmaps::ChoiKind::intermediate:
      return "intermediate";
    default:
      return "generator";
  }
}

std::string csv_document(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

json matrix_json(const qdmaps::ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<std::string>> matrix_rows(const qdmaps::ComplexMatrix& m) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      rows.push_back({std::to_string(r), std::to_string(c), fmt(m(r, c).real()),
                      fmt(m(r, c).imag())});
  return rows;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

void run_curve(const std::string& cmd, const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  const Grid grid = parse_grid(o.grid.empty() ? "0:10:200" : o.grid, 0.0);
  const std::vector<double> ts = grid.times();

  std::vector<std::pair<double, double>> data;
  data.reserve(ts.size());
  if (cmd == "holevo") {
    for (const qdmaps::HolevoPoint& pt : qdmaps::holevo_curve(fam, ts))
      data.emplace_back(pt.t, pt.bound);
  } else {
    for (double t : ts) {
      const double v =
          cmd == "p" ? qdmaps::mixing_p(fam, t) : qdmaps::scalar_decay_rate(fam, t);
      data.emplace_back(t, v);
    }
  }

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& [t, v] : data) rows.push_back(json{{"t", t}, {"value", v}});
    const json doc{{"command", cmd},
                   {"channel", channel_json(fam)},
                   {"grid", {{"start", grid.start}, {"stop", grid.stop}, {"points", grid.points}}},
                   {"data", rows}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(data.size());
  for (const auto& [t, v] : data) rows.push_back({fmt(t), fmt(v)});
  write_output(csv_document({"t", "value"}, rows), o.output);
}

void run_choi(const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  if (!(o.t >= o.t0)) throw ConfigError("choi needs --t >= --t0");
  const qdmaps::ChoiMat choi = qdmaps::involution(qdmaps::a_matrix(fam, o.t, o.t0));
  if (o.format == "json") {
    const json doc{{"command", "choi"},
                   {"channel", channel_json(fam)},
                   {"t", o.t},
                   {"t0", o.t0},
                   {"kind", kind_name(choi.kind)},
                   {"matrix", matrix_json(choi.matrix)}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"i", "j", "re", "im"}, matrix_rows(choi.matrix)), o.output);
}

void run_intermediate(const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  if (!(o.t2 >= o.t1 && o.t1 >= o.t0 && o.t0 >= 0.0))
    throw ConfigError("intermediate needs --t2 >= --t1 >= --t0 >= 0");
  const qdmaps::ChoiMat choi =
      qdmaps::involution(qdmaps::intermediate_a(fam, o.t2, o.t1, o.t0));
  if (o.format == "json") {
    const json doc{{"command", "intermediate"},
                   {"channel", channel_json(fam)},
                   {"t0", o.t0},
                   {"t1", o.t1},
                   {"t2", o.t2},
                   {"kind", kind_name(choi.kind)},
                   {"matrix", matrix_json(choi.matrix)}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"i", "j", "re", "im"}, matrix_rows(choi.matrix)), o.output);
}

void run_witness(const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  if (!(o.t2 > o.t1 && o.t1 >= o.t0 && o.t0 >= 0.0))
    throw ConfigError("witness needs --t2 > --t1 >= --t0 >= 0");
  const qdmaps::WitnessReport rep = qdmaps::cp_witness(fam, o.t1, o.t2, o.t0);
  if (o.format == "json") {
    const json doc{{"command", "witness"},
                   {"channel", channel_json(fam)},
                   {"t0", rep.t0},
                   {"t1", rep.interval.first},
                   {"t2", rep.interval.second},
                   {"min_eigenvalue", rep.min_eigenvalue},
                   {"verdict", qdmaps::verdict_name(rep.verdict)}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"t0", "t1", "t2", "min_eig", "verdict"},
                            {{fmt(rep.t0), fmt(rep.interval.first), fmt(rep.interval.second),
                              fmt(rep.min_eigenvalue), qdmaps::verdict_name(rep.verdict)}}),
               o.output);
}

void run_tss(const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  if (!(o.t2 >= o.t1 && o.t1 >= 0.0)) throw ConfigError("tss needs --t2 >= --t1 >= 0");
  std::vector<double> grid;
  if (!o.t0_grid.empty()) {
    grid = parse_time_list(o.t0_grid);
    for (double t0 : grid)
      if (!(t0 >= 0.0 && t0 <= o.t1)) throw ConfigError("every t0 must lie in [0, t1]");
  }
  const double witness = qdmaps::tss_witness(fam, o.t1, o.t2, grid);
  if (grid.empty()) grid = {0.0, 0.25 * o.t1, 0.5 * o.t1, o.t1};
  if (o.format == "json") {
    const json doc{{"command", "tss"},         {"channel", channel_json(fam)},
                   {"t1", o.t1},               {"t2", o.t2},
                   {"t0_grid", json(grid)},    {"witness", witness}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"t1", "t2", "witness"}, {{fmt(o.t1), fmt(o.t2), fmt(witness)}}),
               o.output);
}

void run_zeta(const Options& o) {
  const qdmaps::ChannelFamily fam = build_family(o);
  const qdmaps::MeasureConvention conv = parse_convention(o.convention);
  if (!(o.horizon > 0.0)) throw ConfigError("zeta needs --T > 0");
  qdmaps::MeasureResult res{0, 0, conv, 0, 0};
  if (o.upper_bound)
    res = qdmaps::zeta_upper_bound(fam, o.horizon, conv);
  else if (conv == qdmaps::MeasureConvention::rate_distance)
    res = qdmaps::rate_distance(fam, o.horizon);
  else
    res = qdmaps::zeta(fam, o.horizon, conv);
  const std::string name = qdmaps::family_name(fam);
  if (o.format == "json") {
    const json doc{{"command", "zeta"},
                   {"channel", channel_json(fam)},
                   {"T", res.horizon},
                   {"convention", qdmaps::convention_name(res.convention)},
                   {"upper_bound", o.upper_bound},
                   {"value", res.value},
                   {"optimizer_rate", res.optimizer_rate},
                   {"quadrature_error", res.quadrature_error_estimate}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(
      csv_document({"family", "T", "convention", "value", "optimizer_rate", "quadrature_error"},
                   {{name, fmt(res.horizon), qdmaps::convention_name(res.convention),
                     fmt(res.value), fmt(res.optimizer_rate),
                     fmt(res.quadrature_error_estimate)}}),
      o.output);
}

void run_figure1(const Options& o) {
  const Grid grid = parse_grid(o.grid.empty() ? "0:10:200" : o.grid, 0.0);
  const std::vector<double> ts = grid.times();
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<std::string, qdmaps::ChannelFamily>> channels = {
      {"qds", qdmaps::Oun(1.0, inf)},
      {"oun", qdmaps::Oun(1.0, 0.3)},
      {"modoun", qdmaps::ModOun(1.0, 0.3, 1.5)},
  };

  std::vector<std::vector<std::string>> rows;
  json jrows = json::array();
  for (const auto& [label, fam] : channels) {
    for (const qdmaps::HolevoPoint& pt : qdmaps::holevo_curve(fam, ts)) {
      if (o.format == "json")
        jrows.push_back(json{{"family", label}, {"t", pt.t}, {"B", pt.bound}});
      else
        rows.push_back({label, fmt(pt.t), fmt(pt.bound)});
    }
  }
  if (o.format == "json") {
    const json doc{{"command", "figure1"},
                   {"grid", {{"start", grid.start}, {"stop", grid.stop}, {"points", grid.points}}},
                   {"data", jrows}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"family", "t", "B"}, rows), o.output);
}

void run_figure3(const Options& o) {
  const Grid grid = parse_grid(o.grid.empty() ? "0.1:5:50" : o.grid,
                               std::numeric_limits<double>::min());
  const qdmaps::MeasureConvention conv = parse_convention(o.convention);
  if (!(o.horizon > 0.0)) throw ConfigError("figure3 needs --T > 0");
  const std::vector<double> xs = grid.times();

  // Family knobs: x is the inverse bandwidth for oun/nmad/rtn/modoun and the
  // inverse-bandwidth parameter g itself for pln.
  const std::vector<std::pair<std::string, std::function<qdmaps::ChannelFamily(double)>>>
      families = {
          {"oun", [](double x) { return qdmaps::Oun(0.6, 1.0 / x); }},
          {"pln", [](double x) { return qdmaps::Pln(0.6, x); }},
          {"nmad", [](double x) { return qdmaps::Nmad(0.3, 1.0 / x); }},
          {"rtn", [](double x) { return qdmaps::Rtn(0.6, 1.0 / x); }},
          {"modoun", [](double x) { return qdmaps::ModOun(0.6, 1.0 / x, 1.5); }},
      };

  std::vector<std::vector<std::string>> rows;
  json jrows = json::array();
  const std::string conv_name = qdmaps::convention_name(conv);
  for (const auto& [label, make] : families) {
    for (double x : xs) {
      const qdmaps::MeasureResult res = qdmaps::zeta_upper_bound(make(x), o.horizon, conv);
      if (o.format == "json")
        jrows.push_back(json{{"family", label},
                             {"x", x},
                             {"zeta_bound", res.value},
                             {"convention", conv_name}});
      else
        rows.push_back({label, fmt(x), fmt(res.value), conv_name});
    }
  }
  if (o.format == "json") {
    const json doc{{"command", "figure3"},
                   {"T", o.horizon},
                   {"grid", {{"start", grid.start}, {"stop", grid.stop}, {"points", grid.points}}},
                   {"data", jrows}};
    write_output(doc.dump(2) + "\n", o.output);
    return;
  }
  write_output(csv_document({"family", "x", "zeta_bound", "convention"}, rows), o.output);
}

void emit_error(const std::string& category, const std::string& command,
                const std::string& message, std::optional<double> time = std::nullopt) {
  json err{{"category", category}, {"message", message}};
  if (!command.empty()) err["command"] = command;
  if (time) err["time"] = *time;
  std::fprintf(stderr, "%s\n", json{{"error", err}}.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical-map toolkit: dephasing/damping channel families, divisibility and "
               "self-similarity witnesses, and generator-distance measures"};
  app.require_subcommand(1);
  Options o;

  const auto add_channel = [&](CLI::App* sc) {
    sc->add_option("--channel", o.channel,
                   "family name: oun | pln | modoun | rtn | ad | nmad | enm");
    sc->add_option("--config", o.config_path, "channel spec file (key=value lines)");
    static const std::map<std::string, std::string> param_help = {
        {"G", "relaxation-rate parameter (oun, pln)"},
        {"g", "bandwidth-type parameter (oun, pln, rtn, nmad)"},
        {"gamma0", "coupling strength (rtn, ad, nmad)"},
        {"a", "rate scale (modoun)"},
        {"r", "correlation parameter (modoun)"},
        {"k", "modulation depth (modoun)"},
    };
    for (const auto& [key, help] : param_help)
      sc->add_option_function<double>(
          "--" + key, [&o, key = key](double v) { o.flag_params[key] = v; }, help);
  };
  const auto add_io = [&](CLI::App* sc) {
    sc->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--output", o.output, "output file (default: stdout)");
  };
  const auto add_grid = [&](CLI::App* sc, const char* help) {
    sc->add_option("--grid", o.grid, help);
  };

  CLI::App* sc_p = app.add_subcommand("p", "mixing factor p(t) of a dephasing family");
  add_channel(sc_p);
  add_grid(sc_p, "time grid start:stop:points (default 0:10:200)");
  add_io(sc_p);

  CLI::App* sc_rates =
      app.add_subcommand("rates", "scalar canonical decay rate gamma(t)");
  add_channel(sc_rates);
  add_grid(sc_rates, "time grid start:stop:points (default 0:10:200)");
  add_io(sc_rates);

  CLI::App* sc_choi = app.add_subcommand("choi", "full-map Choi matrix at time t");
  add_channel(sc_choi);
  sc_choi->add_option("--t", o.t, "evolution time")->required();
  sc_choi->add_option("--t0", o.t0, "preparation time (default 0)");
  add_io(sc_choi);

  CLI::App* sc_int =
      app.add_subcommand("intermediate", "intermediate-map Choi matrix on [t1, t2]");
  add_channel(sc_int);
  sc_int->add_option("--t0", o.t0, "preparation time (default 0)");
  sc_int->add_option("--t1", o.t1, "interval start")->required();
  sc_int->add_option("--t2", o.t2, "interval end")->required();
  add_io(sc_int);

  CLI::App* sc_wit =
      app.add_subcommand("witness", "complete-positivity witness of an intermediate map");
  add_channel(sc_wit);
  sc_wit->add_option("--t0", o.t0, "preparation time (default 0)");
  sc_wit->add_option("--t1", o.t1, "interval start")->required();
  sc_wit->add_option("--t2", o.t2, "interval end")->required();
  add_io(sc_wit);

  CLI::App* sc_tss =
      app.add_subcommand("tss", "temporal self-similarity witness over a t0 grid");
  add_channel(sc_tss);
  sc_tss->add_option("--t1", o.t1, "interval start")->required();
  sc_tss->add_option("--t2", o.t2, "interval end")->required();
  sc_tss->add_option("--t0-grid", o.t0_grid,
                     "comma-separated preparation times (default 0,t1/4,t1/2,t1)");
  add_io(sc_tss);

  CLI::App* sc_zeta = app.add_subcommand("zeta", "generator-distance measure");
  add_channel(sc_zeta);
  sc_zeta->add_option("--T", o.horizon, "time horizon (default 1)");
  sc_zeta->add_option("--convention", o.convention, "d-factor | unit | rate-distance")
      ->check(CLI::IsMember({"d-factor", "unit", "rate-distance"}));
  sc_zeta->add_flag("--upper-bound", o.upper_bound,
                    "pin the comparison rate at the semigroup limit instead of minimizing");
  add_io(sc_zeta);

  CLI::App* sc_hol = app.add_subcommand("holevo", "Holevo-bound distinguishability curve");
  add_channel(sc_hol);
  add_grid(sc_hol, "time grid start:stop:points (default 0:10:200)");
  add_io(sc_hol);

  CLI::App* sc_f1 = app.add_subcommand(
      "figure1", "Holevo curves for the semigroup, plain and modulated dephasing channels");
  add_grid(sc_f1, "time grid start:stop:points (default 0:10:200)");
  add_io(sc_f1);

  CLI::App* sc_f3 = app.add_subcommand(
      "figure3", "semigroup-distance upper bound swept over the memory parameter x");
  add_grid(sc_f3, "x grid start:stop:points, start > 0 (default 0.1:5:50)");
  sc_f3->add_option("--T", o.horizon, "time horizon (default 1)");
  sc_f3->add_option("--convention", o.convention, "d-factor | unit | rate-distance")
      ->check(CLI::IsMember({"d-factor", "unit", "rate-distance"}));
  add_io(sc_f3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", "", e.what());
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "p" || cmd == "rates" || cmd == "holevo")
      run_curve(cmd, o);
    else if (cmd == "choi")
      run_choi(o);
    else if (cmd == "intermediate")
      run_intermediate(o);
    else if (cmd == "witness")
      run_witness(o);
    else if (cmd == "tss")
      run_tss(o);
    else if (cmd == "zeta")
      run_zeta(o);
    else if (cmd == "figure1")
      run_figure1(o);
    else
      run_figure3(o);
  } catch (const ConfigError& e) {
    emit_error("config", cmd, e.what());
    return 2;
  } catch (const qdmaps::FamilyMismatchError& e) {
    emit_error("config", cmd, e.what());
    return 2;
  } catch (const qdmaps::GeneratorSingularityError& e) {
    emit_error("computation", cmd, e.what(), e.time);
    return 3;
  } catch (const qdmaps::Error& e) {
    emit_error("computation", cmd, e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", cmd, e.what());
    return 3;
  }
  return 0;
}
