#pragma once

// JSON helpers shared by the file-format code. Not installed.

#include <string>
#include <string_view>

#include "json.hpp"
#include "morgreed/error.hpp"
#include "morgreed/linalg.hpp"
#include "morgreed/system.hpp"

namespace morgreed::detail {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidModel, "complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Row-major nested arrays of [re, im].
inline Json dense_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix dense_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(ErrorCode::InvalidModel, std::string(what) + " must be a non-empty nested array");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::InvalidModel, std::string(what) + " has ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

// Plain real row-major nested arrays (used for V).
inline Json real_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RealMatrix real_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw Error(ErrorCode::InvalidModel, "V has the wrong row count");
  RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw Error(ErrorCode::InvalidModel, "V has ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

inline Json sparse_to_json(const SparseTriplets& m) {
  Json triplets = Json::array();
  for (const auto& e : m.entries()) {
    triplets.push_back(Json::array({e.row, e.col, e.value.real(), e.value.imag()}));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"triplets", std::move(triplets)}};
}

inline SparseTriplets sparse_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("triplets")) {
    throw Error(ErrorCode::InvalidModel, "sparse matrices need rows, cols and triplets");
  }
  SparseTriplets m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  for (const Json& t : j.at("triplets")) {
    if (!t.is_array() || t.size() != 4) throw Error(ErrorCode::InvalidModel, "triplets are [i, j, re, im]");
    m.add(t[0].get<std::size_t>(), t[1].get<std::size_t>(), {t[2].get<double>(), t[3].get<double>()});
  }
  return m;
}

inline std::string_view kind_name(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::Constant: return "constant";
    case CoefficientKind::S: return "s";
    case CoefficientKind::SExpDelay: return "s_exp_delay";
    case CoefficientKind::ExpDelay: return "exp_delay";
  }
  return "constant";
}

inline CoefficientKind kind_from_name(std::string_view name) {
  if (name == "constant") return CoefficientKind::Constant;
  if (name == "s") return CoefficientKind::S;
  if (name == "s_exp_delay") return CoefficientKind::SExpDelay;
  if (name == "exp_delay") return CoefficientKind::ExpDelay;
  throw Error(ErrorCode::InvalidModel, "unknown coefficient kind '" + std::string(name) + "'");
}

inline Json coefficient_to_json(const Coefficient& c) {
  return Json{{"kind", kind_name(c.kind)}, {"tau", c.tau}, {"scale", c.scale}};
}

inline Coefficient coefficient_from_json(const Json& j) {
  Coefficient c;
  c.kind = kind_from_name(j.at("kind").get<std::string>());
  c.tau = j.value("tau", 0.0);
  c.scale = j.value("scale", 1.0);
  return c;
}

}  // namespace morgreed::detail
