#include "proxyzoo/serialization.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proxyzoo/error.hpp"

namespace proxyzoo {
namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m, const std::vector<std::string>& row_labels,
                 const std::vector<std::string>& col_labels) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    data.push_back(std::move(row));
  }
  return json{{"rows", row_labels}, {"cols", col_labels}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto& data = j.at("data");
  const auto rows = static_cast<Eigen::Index>(data.size());
  const auto cols = rows == 0 ? static_cast<Eigen::Index>(j.at("cols").size())
                              : static_cast<Eigen::Index>(data.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = data.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ValidationError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

std::string reduced_form_to_json(const ReducedForm& rf, std::string_view config_hash) {
  const int n = rf.dim();
  json j;
  j["format"] = "proxyzoo.reduced_form";
  j["version"] = 1;
  j["config_hash"] = std::string(config_hash);
  j["n"] = n;
  j["p"] = rf.lag_order;
  j["k"] = rf.proxies();
  j["horizon"] = rf.horizon();
  j["include_constant"] = rf.include_constant;
  j["names"] = rf.names;
  j["stable"] = rf.stable;
  j["max_companion_modulus"] = rf.max_companion_modulus;
  json coefs = json::array();
  for (const auto& A : rf.coefficients) coefs.push_back(matrix_json(A, rf.names, rf.names));
  j["coefficients"] = std::move(coefs);
  j["intercept"] = vector_json(rf.intercept);
  j["sigma"] = matrix_json(rf.sigma, rf.names, rf.names);
  j["chol"] = matrix_json(rf.chol, rf.names, rf.names);
  json irf = json::array();
  for (const auto& C : rf.irf) irf.push_back(matrix_json(C, rf.names, rf.names));
  j["irf"] = std::move(irf);
  std::vector<std::string> dates;
  for (const auto& d : rf.residual_dates) dates.push_back(d.text());
  j["residuals"] = matrix_json(rf.residuals, dates, rf.names);
  json moments = json::array();
  for (std::size_t l = 0; l < rf.proxy_moments.size(); ++l) {
    json m;
    m["label"] = rf.proxy_labels[l];
    m["moment"] = vector_json(rf.proxy_moments[l]);
    m["effective_obs"] = l < rf.proxy_effective_obs.size() ? rf.proxy_effective_obs[l] : 0;
    moments.push_back(std::move(m));
  }
  j["proxies"] = std::move(moments);
  return j.dump(2) + "\n";
}

ReducedForm reduced_form_from_json(std::string_view text, std::string* config_hash) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("reduced form JSON: ") + e.what());
  }
  try {
    if (j.value("format", std::string{}) != "proxyzoo.reduced_form") {
      throw ValidationError("not a reduced form document");
    }
    ReducedForm rf;
    rf.names = j.at("names").get<std::vector<std::string>>();
    rf.lag_order = j.at("p").get<int>();
    rf.include_constant = j.at("include_constant").get<bool>();
    for (const auto& A : j.at("coefficients")) rf.coefficients.push_back(matrix_from(A));
    rf.intercept = vector_from(j.at("intercept"));
    rf.sigma = matrix_from(j.at("sigma"));
    rf.chol = matrix_from(j.at("chol"));
    for (const auto& C : j.at("irf")) rf.irf.push_back(matrix_from(C));
    rf.residuals = matrix_from(j.at("residuals"));
    for (const auto& d : j.at("residuals").at("rows")) rf.residual_dates.push_back(DateKey::parse(d.get<std::string>()));
    for (const auto& m : j.at("proxies")) {
      rf.proxy_labels.push_back(m.at("label").get<std::string>());
      rf.proxy_moments.push_back(vector_from(m.at("moment")));
      rf.proxy_effective_obs.push_back(m.value("effective_obs", Eigen::Index{0}));
    }
    rf.stable = j.at("stable").get<bool>();
    rf.max_companion_modulus = j.at("max_companion_modulus").get<double>();
    if (config_hash) *config_hash = j.value("config_hash", std::string{});
    return rf;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("reduced form JSON: ") + e.what());
  }
}

ReducedForm load_reduced_form(const std::filesystem::path& path, std::string* config_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return reduced_form_from_json(buf.str(), config_hash);
}

}  // namespace proxyzoo
