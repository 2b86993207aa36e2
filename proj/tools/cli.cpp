#include "survbound/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "survbound/cutoff_bounds.hpp"
#include "survbound/envelope.hpp"
#include "survbound/error.hpp"
#include "survbound/figures.hpp"
#include "survbound/io.hpp"
#include "survbound/oracle.hpp"

namespace survbound {

namespace {

struct RunConfig {
  std::string spec;
  std::vector<int> orders{2, 4, 6, 8};
  double t_max = 5.0;
  int grid = 512;
  std::optional<double> cutoff;
  int c_grid = 256;
  std::string out;
  std::string format = "csv";
  bool renormalize = false;
  std::string target = "p";
  std::string figure;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NonNormalizable:
    case ErrorCode::NegativeDensity:
    case ErrorCode::CutoffOutOfSupport:
    case ErrorCode::OrderTooLarge:
    case ErrorCode::NegativeSupport:
    case ErrorCode::UnknownFigure:
      return 2;
    default:
      return 3;
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidInput, message);
}

void check_orders(const RunConfig& cfg, bool even_only) {
  require(!cfg.orders.empty(), "--order needs at least one value");
  for (int n : cfg.orders) {
    check_order(n);
    if (even_only) require(n >= 2 && n % 2 == 0, "orders must be even and >= 2");
  }
}

EnergyDistribution load(const RunConfig& cfg) {
  require(!cfg.spec.empty(), "--spec is required");
  return load_distribution(cfg.spec, {cfg.renormalize});
}

std::vector<double> time_grid(const RunConfig& cfg) {
  require(cfg.t_max > 0.0, "--t-max must be positive");
  require(cfg.grid >= 2, "--grid must be at least 2");
  return default_time_grid(cfg.t_max, cfg.grid);
}

void emit(const RunConfig& cfg, const Table& table, std::ostream& out) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + cfg.out);
    sink = &file;
  }
  if (cfg.format == "json") {
    *sink << table_to_json(table).dump(1) << '\n';
  } else {
    write_csv(*sink, table);
  }
}

void append_curve(Table& table, const BoundCurve& c, bool with_cutoff) {
  for (const auto& s : c.samples) {
    std::vector<Cell> row{c.label, s.t, s.value, s.raw_value, s.valid, static_cast<long long>(c.order),
                          std::string(to_string(c.direction)), std::string(to_string(c.target))};
    if (with_cutoff) row.emplace_back(c.cutoff);
    table.rows.push_back(std::move(row));
  }
}

Table cmd_moments(const RunConfig& cfg) {
  const EnergyDistribution dist = load(cfg);
  check_orders(cfg, false);
  const int n = *std::max_element(cfg.orders.begin(), cfg.orders.end());

  std::optional<MomentVector> h;
  std::optional<EdgeMoments> b;
  if (cfg.cutoff) {
    h = truncated_moments(dist, *cfg.cutoff, n);
    b = b_from_h(*h, edge_energy(dist, *cfg.cutoff), n);
  } else {
    h = raw_moments(dist, n);
  }
  const int available = h->order();
  std::optional<CorrelationMoments> e;
  if (available >= 2) e = e_from_h(*h, available - available % 2);

  Table table;
  table.columns = {"k", "h", "h_scaled", "e", "e_scaled", "b", "b_scaled"};
  for (int k = 0; k <= n; ++k) {
    std::vector<Cell> row{static_cast<long long>(k)};
    if (k <= available) {
      const double scaled = h->about(0.0).scaled(k);
      row.emplace_back(scaled * factorial(k));
      row.emplace_back(scaled);
    } else {
      row.insert(row.end(), 2, std::monostate{});
    }
    if (e && k % 2 == 0 && k <= e->order()) {
      row.emplace_back(e->unscaled(k));
      row.emplace_back(e->scaled(k));
    } else if (k == 0) {
      row.emplace_back(1.0);
      row.emplace_back(1.0);
    } else {
      row.insert(row.end(), 2, std::monostate{});
    }
    if (b) {
      row.emplace_back(b->unscaled(k));
      row.emplace_back(b->scaled(k));
    } else {
      row.insert(row.end(), 2, std::monostate{});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table cmd_bounds(const RunConfig& cfg, std::ostream& err) {
  const EnergyDistribution dist = load(cfg);
  const auto grid = time_grid(cfg);
  Table table;
  table.columns = {"series", "t", "value", "raw_value", "valid", "order", "direction", "target"};

  if (cfg.target == "ri") {
    check_orders(cfg, false);
    const int n = *std::max_element(cfg.orders.begin(), cfg.orders.end());
    const MomentVector h = raw_moments(dist, n);
    for (int k : cfg.orders) {
      if (k < 1) continue;
      append_curve(table, ri_curve(h, k, grid, dist.lower()), false);
    }
    return table;
  }

  check_orders(cfg, true);
  if (cfg.cutoff) {
    table.columns.push_back("cutoff");
    for (int n : cfg.orders) append_curve(table, cutoff_curve(build_cutoff_spec(dist, *cfg.cutoff, n), grid), true);
    return table;
  }

  const int top = *std::max_element(cfg.orders.begin(), cfg.orders.end());
  const MomentVector h = raw_moments(dist, top);
  for (int n : cfg.orders) {
    if (h.order() < n) {
      err << "skipping order " << n << ": moments of " << dist.name() << " stop at order "
          << h.order() << '\n';
      continue;
    }
    append_curve(table, p_bound_curve(e_from_h(h, n), n, grid), false);
  }
  if (h.order() >= 2) {
    append_curve(table, cos2_curve(std::sqrt(e_from_h(h, 2).variance()), grid, Target::P), false);
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::MomentDivergent, "no series bound exists without a cut-off; try --cutoff");
  }
  return table;
}

Table cmd_exact(const RunConfig& cfg) {
  const EnergyDistribution dist = load(cfg);
  Table table;
  table.columns = {"t", "re", "im", "abs", "p"};
  for (const auto& s : exact_curve(dist, time_grid(cfg))) table.rows.push_back({s.t, s.re, s.im, s.abs, s.p});
  return table;
}

Table cmd_envelope(const RunConfig& cfg) {
  const EnergyDistribution dist = load(cfg);
  check_orders(cfg, true);
  Table table;
  table.columns = {"c", "t", "value", "order", "direction", "n_roots"};
  if (dist.is<Discrete>()) {
    for (int n : cfg.orders) {
      const DiscreteSchedule s = discrete_schedule(dist, n);
      for (const auto& seg : s.segments) {
        if (!std::isfinite(seg.t_begin)) continue;
        table.rows.push_back({seg.c_lo, seg.t_begin, amplitude_bound(seg.spec, seg.t_begin).value,
                              static_cast<long long>(n), std::string(to_string(s.direction)), 1LL});
      }
    }
    return table;
  }
  require(cfg.c_grid >= 2, "--c-grid must be at least 2");
  const auto c_grid = default_cutoff_grid(dist, cfg.c_grid);
  for (int n : cfg.orders) {
    const EnvelopeResult env = sweep_envelope(dist, n, c_grid);
    for (const auto& p : env.points) {
      table.rows.push_back({p.c, p.t, p.value, static_cast<long long>(n),
                            std::string(to_string(env.direction)), static_cast<long long>(p.n_roots)});
    }
  }
  return table;
}

Table cmd_composite(const RunConfig& cfg) {
  const EnergyDistribution dist = load(cfg);
  check_orders(cfg, true);
  const CompositeBound cb = composite_bound(dist, cfg.orders, time_grid(cfg));
  Table table;
  table.columns = {"t", "lower", "upper", "lower_source", "upper_source"};
  for (std::size_t i = 0; i < cb.t.size(); ++i) {
    table.rows.push_back({cb.t[i], cb.lower[i], cb.upper[i], cb.lower_source[i], cb.upper_source[i]});
  }
  return table;
}

void cmd_figure(const RunConfig& cfg, std::ostream& out) {
  const FigureData fig = build_figure(cfg.figure);
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  for (const auto& p : write_figure(fig, dir)) out << p.string() << '\n';
}

void apply_tolerance_override() {
  const char* text = std::getenv("SURVBOUND_TOL");
  if (!text || !*text) return;
  char* end = nullptr;
  const double tol = std::strtod(text, &end);
  require(end != text && *end == '\0' && tol > 0.0, std::string("SURVBOUND_TOL='") + text + "' is not a positive number");
  quad::set_default_abs_tolerance(tol);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigorous bounds on quantum survival amplitudes from energy moments"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool with_grid) {
    sub->add_option("--spec", cfg.spec, "distribution spec (JSON)");
    sub->add_option("--order", cfg.orders, "orders, comma separated")->delimiter(',');
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--renormalize", cfg.renormalize, "rescale input weights of any size to 1");
    if (with_grid) {
      sub->add_option("--t-max", cfg.t_max, "time horizon T");
      sub->add_option("--grid", cfg.grid, "number of time points");
    }
  };

  auto* moments = app.add_subcommand("moments", "energy, correlation and edge moments");
  common(moments, false);
  moments->add_option("--cutoff", cfg.cutoff, "cut-off c (truncated and edge moments)");
  auto* bounds = app.add_subcommand("bounds", "series bounds, or fixed cut-off bounds with --cutoff");
  common(bounds, true);
  bounds->add_option("--cutoff", cfg.cutoff, "cut-off c");
  bounds->add_option("--target", cfg.target, "p (probability) or ri (real/imaginary parts)")
      ->check(CLI::IsMember({"p", "ri"}));
  auto* exact = app.add_subcommand("exact", "exact survival amplitude");
  common(exact, true);
  auto* envelope = app.add_subcommand("envelope", "envelope points over a cut-off grid");
  common(envelope, false);
  envelope->add_option("--c-grid", cfg.c_grid, "number of cut-offs");
  auto* composite = app.add_subcommand("composite", "best lower and upper bound on |A(t)|");
  common(composite, true);
  auto* figure = app.add_subcommand("figure", "write a figure dataset into --out (a directory)");
  figure->add_option("name", cfg.figure, "fig1 .. fig7")->required();
  figure->add_option("--out", cfg.out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "survbound: " << e.what() << '\n';
    return 1;
  }

  try {
    apply_tolerance_override();
    if (*figure) {
      cmd_figure(cfg, out);
    } else if (*moments) {
      emit(cfg, cmd_moments(cfg), out);
    } else if (*bounds) {
      emit(cfg, cmd_bounds(cfg, err), out);
    } else if (*exact) {
      emit(cfg, cmd_exact(cfg), out);
    } else if (*envelope) {
      emit(cfg, cmd_envelope(cfg), out);
    } else if (*composite) {
      emit(cfg, cmd_composite(cfg), out);
    }
  } catch (const Error& e) {
    err << "survbound: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "survbound: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace survbound
