#pragma once

#include <cdl/energies.hpp>
#include <cdl/model.hpp>

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cdl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cdl-1";

enum class Verdict { confirmed, refuted, inconclusive };

std::string to_string(Verdict v);

struct Claim {
  std::string id;
  std::string anchor;
  std::string statement;
  Verdict expected = Verdict::confirmed;
  Verdict observed = Verdict::inconclusive;
  Json evidence = Json::object();

  bool matched() const { return expected == observed; }
};

/// Column of per-cell values for the plotting CSV.
struct Column {
  std::string name;
  std::vector<double> values;
};

struct ScenarioReport {
  std::string name;
  Json parameters = Json::object();
  std::vector<Claim> claims;
  std::vector<std::pair<std::string, EnergyReport>> energies;
  Json tables = Json::object();
  std::vector<std::string> notes;

  std::optional<Grid> grid;
  std::vector<Column> columns;

  bool all_matched() const;
  const Claim* find(const std::string& id) const;
};

Json to_json(const MaterialParams& p);
Json to_json(const DualValue& d);
Json to_json(const EnergyReport& r);
Json to_json(const Claim& c);
Json to_json(const ScenarioReport& r);

/// RFC-4180 CSV: header "x,<columns...>", CRLF line endings.
void write_csv(std::ostream& os, const Grid& grid, const std::vector<Column>& columns);

/// Least-squares fit y = slope * ln(n) + intercept with coefficient of
/// determination.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LogFit fit_log_growth(const std::vector<double>& n, const std::vector<double>& y);

}  // namespace cdl
