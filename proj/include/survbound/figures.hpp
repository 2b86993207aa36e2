#pragma once

// Datasets for re-plotting the seven standard figures: the exact curve and
// every bound or envelope drawn on them, in long CSV form plus a manifest.

#include <filesystem>
#include <string>
#include <vector>

#include "survbound/io.hpp"
#include "survbound/series_bounds.hpp"

namespace survbound {

struct FigureSeries {
  std::string name;
  std::string kind;  // exact | bound | envelope
  Target target = Target::AbsA;
  int order = 0;
  std::string direction;  // upper | lower | exact
  CutoffMode cutoff_mode = CutoffMode::None;
  double cutoff = std::numeric_limits<double>::quiet_NaN();
  std::vector<BoundSample> samples;
};

struct FigureData {
  std::string name;
  std::string title;
  std::string distribution;
  std::string time_unit;
  double horizon = 0.0;
  std::vector<FigureSeries> series;
  Table envelope_points;  // empty unless the figure has envelopes
};

const std::vector<std::string>& figure_names();

/// Throws UnknownFigure for names outside fig1..fig7.
FigureData build_figure(const std::string& name);

/// Writes <name>.csv, <name>_manifest.json and, with envelopes,
/// <name>_envelope_points.csv into `dir`. Returns the paths written.
std::vector<std::filesystem::path> write_figure(const FigureData& figure,
                                                const std::filesystem::path& dir);

/// The long-form table: series,t,value,raw_value,valid.
Table figure_table(const FigureData& figure);

}  // namespace survbound
