#include "tobit/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tobit/errors.hpp"

namespace tobit {

using nlohmann::json;

std::string ModelFile::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["family"] = family;
  j["lambda"] = lambda;
  j["a"] = a;
  j["beta0"] = beta0;
  j["beta"] = beta;
  j["sigma"] = sigma;
  j["censor_shift"] = censor_shift;
  j["standardization"] = {{"mean", standardization.mean}, {"scale", standardization.scale}};
  j["column_names"] = column_names;
  j["diagnostics"] = {{"objective", objective},
                      {"kkt_residual", kkt_residual},
                      {"cycles", cycles},
                      {"converged", converged}};
  return j.dump(2) + "\n";
}

ModelFile ModelFile::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    ModelFile m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1) {
      throw input_error("unsupported model schema version " + std::to_string(m.schema_version));
    }
    m.family = j.at("family").get<std::string>();
    m.lambda = j.at("lambda").get<double>();
    m.a = j.at("a").get<double>();
    m.beta0 = j.at("beta0").get<double>();
    m.beta = j.at("beta").get<std::vector<double>>();
    m.sigma = j.at("sigma").get<double>();
    m.censor_shift = j.at("censor_shift").get<double>();
    m.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    m.standardization.scale = j.at("standardization").at("scale").get<std::vector<double>>();
    m.column_names = j.at("column_names").get<std::vector<std::string>>();
    const json& d = j.at("diagnostics");
    m.objective = d.at("objective").get<double>();
    m.kkt_residual = d.at("kkt_residual").get<double>();
    m.cycles = d.at("cycles").get<int>();
    m.converged = d.at("converged").get<bool>();
    return m;
  } catch (const json::exception& e) {
    throw input_error(std::string("model file missing fields: ") + e.what());
  }
}

void ModelFile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write model file: " + path);
  out << to_json();
}

ModelFile ModelFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace tobit
