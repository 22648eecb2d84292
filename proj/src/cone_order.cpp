#include "nvrcg/cone_order.hpp"

#include <stdexcept>
#include <string_view>

#include <fmt/format.h>

namespace nvrcg {
namespace {

void check_dim(const ConeSpec& cone, const Vector& y, std::string_view what) {
  if (y.size() != cone.dim()) {
    throw std::invalid_argument(fmt::format(
        "{}: vector has dimension {}, cone expects {}", what, y.size(), cone.dim()));
  }
}

}  // namespace

ConeSpec::ConeSpec(Matrix generators, Vector e)
    : generators_(std::move(generators)), e_(std::move(e)) {
  if (generators_.rows() == 0 || generators_.cols() == 0) {
    throw std::invalid_argument("cone needs at least one generator of positive dimension");
  }
  if (e_.size() != generators_.cols()) {
    throw std::invalid_argument(fmt::format("e has dimension {}, generators have {}",
                                            e_.size(), generators_.cols()));
  }
  for (Eigen::Index j = 0; j < generators_.rows(); ++j) {
    if (generators_.row(j).isZero(0.0)) {
      throw std::invalid_argument(fmt::format("generator {} is zero", j));
    }
    const double we = generators_.row(j).dot(e_);
    if (!(we > 0.0) || we > 1.0 + 1e-15) {
      throw std::invalid_argument(
          fmt::format("generator {} violates 0 < <w, e> <= 1 (got {})", j, we));
    }
  }
  const auto m = generators_.cols();
  multiobjective_ = generators_.rows() == m &&
                    generators_.isApprox(Matrix::Identity(m, m), 0.0) &&
                    (e_.array() == 1.0).all();
}

ConeSpec ConeSpec::multiobjective(int m) {
  if (m < 1) throw std::invalid_argument("multiobjective preset needs m >= 1");
  return ConeSpec(Matrix::Identity(m, m), Vector::Ones(m));
}

ConeSpec ConeSpec::from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    constexpr std::string_view prefix = "multiobjective:";
    if (s.rfind(prefix, 0) != 0) {
      throw std::invalid_argument("unknown cone preset '" + s + "'");
    }
    int m = 0;
    try {
      m = std::stoi(s.substr(prefix.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad cone preset '" + s + "'");
    }
    return multiobjective(m);
  }
  if (!j.is_object() || !j.contains("generators") || !j.contains("e")) {
    throw std::invalid_argument("cone JSON needs 'generators' and 'e'");
  }
  const auto rows = j.at("generators").get<std::vector<std::vector<double>>>();
  const auto e = j.at("e").get<std::vector<double>>();
  if (rows.empty()) throw std::invalid_argument("cone JSON has no generators");
  Matrix g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(e.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != e.size()) {
      throw std::invalid_argument(fmt::format("generator {} has wrong dimension", r));
    }
    for (std::size_t c = 0; c < e.size(); ++c) g(r, c) = rows[r][c];
  }
  return ConeSpec(std::move(g), Eigen::Map<const Vector>(e.data(), e.size()));
}

nlohmann::json ConeSpec::to_json() const {
  if (multiobjective_) return fmt::format("multiobjective:{}", dim());
  nlohmann::json gens = nlohmann::json::array();
  for (Eigen::Index j = 0; j < generators_.rows(); ++j) {
    gens.push_back(std::vector<double>(generators_.row(j).begin(), generators_.row(j).end()));
  }
  return {{"generators", gens}, {"e", std::vector<double>(e_.begin(), e_.end())}};
}

double phi(const ConeSpec& cone, const Vector& y) {
  check_dim(cone, y, "phi");
  return (cone.generators() * y).maxCoeff();
}

bool leq_k(const ConeSpec& cone, const Vector& u, const Vector& v) {
  check_dim(cone, u, "leq_k");
  check_dim(cone, v, "leq_k");
  return ((cone.generators() * (v - u)).array() >= 0.0).all();
}

bool is_k_descent(const ConeSpec& cone, const Vector& jacobian_action) {
  return phi(cone, jacobian_action) < 0.0;
}

}  // namespace nvrcg
