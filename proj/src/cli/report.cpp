#include "whichway/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace whichway::cli {

namespace {

std::string at(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }

std::vector<double> numbers(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(at(pointer, std::to_string(k)), "expected a number");
    out.push_back(j[k].get<double>());
  }
  return out;
}

}  // namespace

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

Json number(double v) { return round_significant(v); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(number(m(r, c).real()));
      im_row.push_back(number(m(r, c).imag()));
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("re")) throw ConfigError(pointer, "expected {\"re\": [[...]], \"im\": [[...]]}");
  const auto& re = j["re"];
  if (!re.is_array() || re.empty()) throw ConfigError(at(pointer, "re"), "expected a non-empty square matrix");
  const auto n = static_cast<Eigen::Index>(re.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part)) continue;
    const auto& rows = j[part];
    const auto where = at(pointer, part);
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) throw ConfigError(where, "row count mismatch");
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto row_ptr = at(where, std::to_string(r));
      const auto row = numbers(rows[static_cast<std::size_t>(r)], row_ptr);
      if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError(row_ptr, "matrix must be square");
      for (Eigen::Index c = 0; c < n; ++c) {
        if (part[0] == 'r') m(r, c) += row[static_cast<std::size_t>(c)];
        else m(r, c) += Complex(0.0, row[static_cast<std::size_t>(c)]);
      }
    }
  }
  return m;
}

Json measurement_to_json(const Measurement& m) {
  Json elements = Json::array();
  const auto rank_one = m.as_rank_one();
  for (std::size_t mu = 0; mu < m.size(); ++mu) {
    Json el;
    if (rank_one) {
      const auto& r = (*rank_one)[mu];
      el["weight"] = number(r.weight);
      el["direction"] = {number(r.direction.x()), number(r.direction.y()), number(r.direction.z())};
    }
    el["matrix"] = matrix_to_json(m[mu]);
    elements.push_back(std::move(el));
  }
  return {{"outcomes", m.size()}, {"dim", m.dim()}, {"elements", elements}};
}

Measurement measurement_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("elements")) throw ConfigError(pointer, "expected an object with elements");
  const auto& list = j["elements"];
  const auto where = at(pointer, "elements");
  if (!list.is_array() || list.empty()) throw ConfigError(where, "expected a non-empty array");

  bool rank_one = true;
  for (const auto& el : list) rank_one = rank_one && el.is_object() && el.contains("weight") && el.contains("direction");
  try {
    if (rank_one) {
      std::vector<RankOneElement> elements;
      for (std::size_t k = 0; k < list.size(); ++k) {
        const auto el_ptr = at(where, std::to_string(k));
        if (!list[k]["weight"].is_number()) throw ConfigError(at(el_ptr, "weight"), "expected a number");
        const auto d = numbers(list[k]["direction"], at(el_ptr, "direction"));
        if (d.size() != 3) throw ConfigError(at(el_ptr, "direction"), "a direction has three components");
        const BlochVector v(d[0], d[1], d[2]);
        if (std::abs(v.norm() - 1.0) > 1e-6) throw ConfigError(at(el_ptr, "direction"), "direction must have unit length");
        elements.push_back({list[k]["weight"].get<double>(), v.normalized()});
      }
      return Measurement::from_rank_one(std::move(elements));
    }
    std::vector<ComplexMatrix> matrices;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto el_ptr = at(where, std::to_string(k));
      if (!list[k].is_object() || !list[k].contains("matrix")) {
        throw ConfigError(el_ptr, "element needs weight and direction, or matrix");
      }
      matrices.push_back(matrix_from_json(list[k]["matrix"], at(el_ptr, "matrix")));
    }
    return Measurement::from_matrices(std::move(matrices));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

Json ensemble_to_json(const DetectorEnsemble& e) {
  Json out;
  Json pops = Json::array();
  for (double z : e.populations()) pops.push_back(number(z));
  if (e.is_qubit()) {
    Json bloch = Json::array();
    for (const auto& b : e.bloch_vectors()) bloch.push_back({number(b.x()), number(b.y()), number(b.z())});
    out["bloch"] = bloch;
  }
  out["populations"] = pops;
  return out;
}

Json validity_to_json(const ValidityReport& r) {
  Json out{{"valid", r.valid},
           {"is_pvm", r.is_pvm},
           {"psd_defect", number(r.psd_defect)},
           {"completeness_defect", number(r.completeness_defect)}};
  if (r.weight_sum_defect) out["weight_sum_defect"] = number(*r.weight_sum_defect);
  if (r.balance_defect) out["balance_defect"] = number(*r.balance_defect);
  return out;
}

}  // namespace whichway::cli
