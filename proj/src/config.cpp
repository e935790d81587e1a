#include <cdl/config.hpp>

#include <cdl/report.hpp>

#include <fstream>
#include <sstream>

namespace cdl {

namespace {

LoadSpec parse_load(const Json& j) {
  const std::string kind = j.value("kind", std::string("poly"));
  const double sigma1 = j.value("sigma1", 0.0);
  if (kind == "poly")
    return LoadSpec::polynomial(j.value("coeffs", std::vector<double>{}), sigma1);
  if (kind == "piecewise")
    return LoadSpec::piecewise(j.at("breaks").get<std::vector<double>>(),
                               j.at("coeffs").get<std::vector<std::vector<double>>>(), sigma1);
  if (kind == "samples")
    return LoadSpec::sampled(j.at("x").get<std::vector<double>>(),
                             j.at("f").get<std::vector<double>>(), sigma1);
  throw ConfigError("unknown load kind '" + kind + "' (expected poly, piecewise or samples)");
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ConfigFile c;
  try {
    if (j.contains("mu")) c.mu = j.at("mu").get<double>();
    if (j.contains("nu")) c.nu = j.at("nu").get<double>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("n_cells")) c.n_cells = j.at("n_cells").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("load")) c.load = parse_load(j.at("load"));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid load: ") + e.what());
  }
  return c;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cdl
