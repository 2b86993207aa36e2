#pragma once

// Distribution spec files and tabular output.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "survbound/distribution.hpp"

namespace survbound {

struct LoadOptions {
  /// Rescale discrete or tabulated input of any positive total weight.
  /// Without it, weights more than 50% away from 1 are rejected.
  bool renormalize = false;
};

/// {"kind": "gamma_half", "gamma": g}, {"kind": "power_law", "gamma": g,
/// "exponent": p}, {"kind": "breit_wigner", "gamma": g, "e0": e0},
/// {"kind": "square", "m": M}, {"kind": "discrete", "atoms": [[E, a], ...]},
/// {"kind": "tabulated", "file": "rho.csv"} with a relative path resolved
/// against `base_dir`.
EnergyDistribution distribution_from_json(const nlohmann::json& spec,
                                          const std::filesystem::path& base_dir = {},
                                          LoadOptions options = {});

EnergyDistribution load_distribution(const std::filesystem::path& path, LoadOptions options = {});

/// CSV with header `E,rho` and strictly increasing E.
std::vector<Sample> read_density_csv(const std::filesystem::path& path);

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Doubles as %.17g, booleans as 0/1, missing cells empty.
std::string format_double(double v);
void write_csv(std::ostream& out, const Table& table);
/// Array of records keyed by column name; NaN becomes null.
nlohmann::json table_to_json(const Table& table);

}  // namespace survbound
