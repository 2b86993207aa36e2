#include "survbound/figures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "survbound/cutoff_bounds.hpp"
#include "survbound/envelope.hpp"
#include "survbound/error.hpp"
#include "survbound/oracle.hpp"

namespace survbound {

namespace {

// 600 intervals divide every horizon used below, so integer times are on the grid.
constexpr int kFigurePoints = 601;

FigureSeries from_curve(const BoundCurve& c, std::string kind) {
  return {c.label, std::move(kind), c.target, c.order, to_string(c.direction),
          c.cutoff_mode, c.cutoff, c.samples};
}

FigureSeries exact_series(const std::vector<SurvivalSample>& exact, Target target) {
  FigureSeries s;
  s.kind = "exact";
  s.target = target;
  s.direction = "exact";
  s.name = std::string("exact_") + to_string(target);
  for (const auto& e : exact) {
    double v = e.abs;
    if (target == Target::P) v = e.p;
    if (target == Target::Re) v = e.re;
    if (target == Target::Im) v = e.im;
    s.samples.push_back({e.t, v, v, true});
  }
  return s;
}

void add_envelopes(FigureData& fig, const EnergyDistribution& dist, const std::vector<double>& grid,
                   const std::vector<int>& orders) {
  fig.envelope_points.columns = {"series", "c", "t", "value", "order", "direction", "n_roots"};
  const std::vector<double> c_grid = default_cutoff_grid(dist);
  for (int n : orders) {
    const EnvelopeResult env = sweep_envelope(dist, n, c_grid);
    const BoundCurve curve = envelope_curve(env, grid);
    fig.series.push_back(from_curve(curve, "envelope"));
    for (const auto& p : env.points) {
      fig.envelope_points.rows.push_back({curve.label, p.c, p.t, p.value, static_cast<long long>(n),
                                          std::string(to_string(env.direction)),
                                          static_cast<long long>(p.n_roots)});
    }
  }
}

FigureData gamma_half_probability() {
  FigureData fig{"fig1", "series bounds on P(t)", "gamma_half gamma=1", "hbar/gamma", 3.0, {}, {}};
  const auto dist = EnergyDistribution::gamma_half(1.0);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::P));
  const MomentVector h = raw_moments(dist, 8);
  for (int n : {2, 4, 6, 8}) fig.series.push_back(from_curve(p_bound_curve(e_from_h(h, n), n, grid), "bound"));
  return fig;
}

FigureData power_law_probability() {
  FigureData fig{"fig2", "quadratic and cos^2 bounds on P(t)", "power_law gamma=1 exponent=3.5",
                 "hbar/gamma", 3.0, {}, {}};
  const auto dist = EnergyDistribution::power_law(1.0, 3.5);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::P));
  const CorrelationMoments e = e_from_h(raw_moments(dist, 2), 2);
  fig.series.push_back(from_curve(p_bound_curve(e, 2, grid), "bound"));
  fig.series.push_back(from_curve(cos2_curve(std::sqrt(e.variance()), grid, Target::P), "bound"));
  return fig;
}

FigureData power_law_fixed_cutoffs() {
  FigureData fig{"fig3", "fixed cut-off bounds on |A(t)|", "power_law gamma=1 exponent=3.5",
                 "hbar/gamma", 3.0, {}, {}};
  const auto dist = EnergyDistribution::power_law(1.0, 3.5);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::AbsA));
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    for (int n : {2, 4}) fig.series.push_back(from_curve(cutoff_curve(build_cutoff_spec(dist, c, n), grid), "bound"));
  }
  fig.series.push_back(from_curve(cutoff_curve(build_cutoff_spec(dist, kInf, 2), grid), "bound"));
  return fig;
}

FigureData power_law_envelopes() {
  FigureData fig{"fig4", "envelopes of the cut-off bounds", "power_law gamma=1 exponent=3.5",
                 "hbar/gamma", 4.0, {}, {}};
  const auto dist = EnergyDistribution::power_law(1.0, 3.5);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::AbsA));
  add_envelopes(fig, dist, grid, {2, 4, 6, 8});
  return fig;
}

FigureData breit_wigner_envelopes() {
  FigureData fig{"fig5", "envelopes for a symmetric window", "breit_wigner gamma=1 e0=0",
                 "hbar/gamma", 4.0, {}, {}};
  const auto dist = EnergyDistribution::breit_wigner(1.0, 0.0);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::AbsA));
  add_envelopes(fig, dist, grid, {2, 4, 6, 8});
  return fig;
}

FigureData gamma_half_real_imaginary() {
  FigureData fig{"fig6", "bounds on R(t) and I(t)", "gamma_half gamma=1", "hbar/gamma", 4.0, {}, {}};
  const auto dist = EnergyDistribution::gamma_half(1.0);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  const auto exact = exact_curve(dist, grid);
  fig.series.push_back(exact_series(exact, Target::Re));
  fig.series.push_back(exact_series(exact, Target::Im));
  const MomentVector h = raw_moments(dist, 4);
  for (int n = 1; n <= 4; ++n) fig.series.push_back(from_curve(ri_curve(h, n, grid), "bound"));
  return fig;
}

FigureData square_bounds() {
  FigureData fig{"fig7", "bounds and envelopes for a flat spectrum", "square m=1", "hbar/M", 10.0, {}, {}};
  const auto dist = EnergyDistribution::square(1.0);
  const auto grid = linear_time_grid(fig.horizon, kFigurePoints);
  fig.series.push_back(exact_series(exact_curve(dist, grid), Target::AbsA));
  const MomentVector h = raw_moments(dist, 8);
  for (int n : {2, 4, 6, 8}) fig.series.push_back(from_curve(abs_series_curve(e_from_h(h, n), n, grid), "bound"));
  add_envelopes(fig, dist, grid, {2, 4, 6, 8});

  FigureSeries limit;
  limit.name = "envelope_ninf";
  limit.kind = "envelope";
  limit.target = Target::AbsA;
  limit.order = -1;
  limit.direction = "upper";
  limit.cutoff_mode = CutoffMode::Envelope;
  for (double t : grid) {
    const bool valid = t > 2.0 * std::numbers::pi;
    const double raw = valid ? square_envelope_value(kInfiniteOrder, 1.0, t) : 1.0;
    limit.samples.push_back({t, clamp_for(Target::AbsA, raw), raw, valid});
  }
  fig.series.push_back(std::move(limit));
  return fig;
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return names;
}

FigureData build_figure(const std::string& name) {
  if (name == "fig1") return gamma_half_probability();
  if (name == "fig2") return power_law_probability();
  if (name == "fig3") return power_law_fixed_cutoffs();
  if (name == "fig4") return power_law_envelopes();
  if (name == "fig5") return breit_wigner_envelopes();
  if (name == "fig6") return gamma_half_real_imaginary();
  if (name == "fig7") return square_bounds();
  throw Error(ErrorCode::UnknownFigure, "unknown figure '" + name + "' (expected fig1..fig7)");
}

Table figure_table(const FigureData& figure) {
  Table table;
  table.columns = {"series", "t", "value", "raw_value", "valid"};
  for (const auto& s : figure.series) {
    for (const auto& p : s.samples) table.rows.push_back({s.name, p.t, p.value, p.raw_value, p.valid});
  }
  return table;
}

std::vector<std::filesystem::path> write_figure(const FigureData& figure,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& file) {
    const auto path = dir / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    written.push_back(path);
    return out;
  };

  {
    auto out = open(figure.name + ".csv");
    write_csv(out, figure_table(figure));
  }
  if (!figure.envelope_points.rows.empty()) {
    auto out = open(figure.name + "_envelope_points.csv");
    write_csv(out, figure.envelope_points);
  }

  nlohmann::json manifest;
  manifest["figure"] = figure.name;
  manifest["title"] = figure.title;
  manifest["distribution"] = figure.distribution;
  manifest["time_unit"] = figure.time_unit;
  manifest["horizon"] = figure.horizon;
  manifest["columns"] = {"series", "t", "value", "raw_value", "valid"};
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : written) files.push_back(p.filename().string());
  manifest["files"] = files;
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : figure.series) {
    nlohmann::json entry;
    entry["name"] = s.name;
    entry["kind"] = s.kind;
    entry["target"] = to_string(s.target);
    entry["order"] = s.order < 0 ? nlohmann::json("inf") : nlohmann::json(s.order);
    entry["direction"] = s.direction;
    entry["cutoff_mode"] = to_string(s.cutoff_mode);
    if (s.cutoff_mode == CutoffMode::Fixed || (s.kind == "bound" && std::isinf(s.cutoff))) {
      entry["cutoff"] = std::isinf(s.cutoff) ? nlohmann::json("inf") : nlohmann::json(s.cutoff);
    }
    series.push_back(std::move(entry));
  }
  manifest["series"] = series;
  {
    auto out = open(figure.name + "_manifest.json");
    out << manifest.dump(2) << '\n';
  }
  return written;
}

}  // namespace survbound
