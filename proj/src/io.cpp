#include "survbound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "survbound/error.hpp"

namespace survbound {

namespace {

using nlohmann::json;

const json& field(const json& spec, const char* name) {
  if (!spec.is_object() || !spec.contains(name)) {
    throw Error(ErrorCode::InvalidInput, std::string("distribution spec is missing field '") + name + "'");
  }
  return spec.at(name);
}

double number(const json& spec, const char* name) {
  const json& v = field(spec, name);
  if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

double number_or(const json& spec, const char* name, double fallback) {
  return spec.contains(name) ? number(spec, name) : fallback;
}

EnergyDistribution accept_weight(const RawDensity& raw, LoadOptions options) {
  const Normalized n = normalize(raw);
  if (!options.renormalize && std::abs(n.total_weight - 1.0) > 0.5) {
    throw Error(ErrorCode::InvalidInput,
                "total weight " + format_double(n.total_weight) +
                    " is more than 50% away from 1; pass --renormalize to rescale it");
  }
  return n.distribution;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw Error(ErrorCode::InvalidInput, "line " + std::to_string(line) + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<Sample> read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::string line;
  int number_of_line = 1;
  if (!std::getline(in, line) || trim(line) != "E,rho") {
    throw Error(ErrorCode::InvalidInput, path.string() + ": header must be 'E,rho'");
  }
  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++number_of_line;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "line " + std::to_string(number_of_line) + ": expected E,rho");
    }
    samples.push_back({parse_double(trim(line.substr(0, comma)), number_of_line),
                       parse_double(trim(line.substr(comma + 1)), number_of_line)});
  }
  return samples;
}

EnergyDistribution distribution_from_json(const json& spec, const std::filesystem::path& base_dir,
                                          LoadOptions options) {
  const json& kind_field = field(spec, "kind");
  if (!kind_field.is_string()) throw Error(ErrorCode::InvalidInput, "field 'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();

  if (kind == "gamma_half") return EnergyDistribution::gamma_half(number(spec, "gamma"));
  if (kind == "power_law") {
    return EnergyDistribution::power_law(number(spec, "gamma"), number(spec, "exponent"));
  }
  if (kind == "breit_wigner") {
    return EnergyDistribution::breit_wigner(number(spec, "gamma"), number_or(spec, "e0", 0.0));
  }
  if (kind == "square") return EnergyDistribution::square(number(spec, "m"));
  if (kind == "discrete") {
    const json& list = field(spec, "atoms");
    if (!list.is_array() || list.empty()) throw Error(ErrorCode::InvalidInput, "field 'atoms' must be a non-empty array");
    Discrete d;
    for (const json& a : list) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        throw Error(ErrorCode::InvalidInput, "each atom must be [energy, weight]");
      }
      d.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    return accept_weight(d, options);
  }
  if (kind == "tabulated") {
    const json& file = field(spec, "file");
    if (!file.is_string()) throw Error(ErrorCode::InvalidInput, "field 'file' must be a string");
    std::filesystem::path p = file.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    auto samples = std::make_shared<const std::vector<Sample>>(read_density_csv(p));
    return accept_weight(Tabulated{samples}, options);
  }
  throw Error(ErrorCode::InvalidInput, "unknown distribution kind '" + kind + "'");
}

EnergyDistribution load_distribution(const std::filesystem::path& path, LoadOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json spec = json::object();
  if (!trim(text).empty()) {
    try {
      spec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
    }
  }
  return distribution_from_json(spec, path.parent_path(), options);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              out << format_double(v);
            } else if constexpr (std::is_same_v<V, long long> || std::is_same_v<V, std::string>) {
              out << v;
            } else if constexpr (std::is_same_v<V, bool>) {
              out << (v ? 1 : 0);
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

json table_to_json(const Table& table) {
  json out = json::array();
  for (const auto& row : table.rows) {
    json record = json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      json& slot = record[table.columns[i]];
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
              slot = nullptr;
            } else if constexpr (std::is_same_v<V, double>) {
              slot = std::isfinite(v) ? json(v) : json(nullptr);
            } else {
              slot = v;
            }
          },
          row[i]);
    }
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace survbound
