#include "nvrcg/objective.hpp"

#include <fstream>

#include <fmt/format.h>

#include "nvrcg/random.hpp"

namespace nvrcg {
namespace {

constexpr double kSymmetryTol = 1e-14;

void check_symmetric(const Matrix& a, int n, std::size_t index) {
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument(
        fmt::format("matrix {} is {}x{}, expected {}x{}", index, a.rows(), a.cols(), n, n));
  }
  if ((a - a.transpose()).lpNorm<Eigen::Infinity>() > kSymmetryTol) {
    throw std::invalid_argument(fmt::format("matrix {} is not symmetric", index));
  }
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw std::invalid_argument("ragged matrix");
    for (std::size_t c = 0; c < rows[r].size(); ++c) a(r, c) = rows[r][c];
  }
  return a;
}

}  // namespace

QuadraticObjective::QuadraticObjective(Manifold manifold, std::vector<Matrix> quadratic,
                                       std::vector<Vector> linear)
    : manifold_(std::move(manifold)), quadratic_(std::move(quadratic)), linear_(std::move(linear)) {
  const int n = manifold_.ambient_dim();
  if (quadratic_.empty()) throw std::invalid_argument("objective needs at least one component");
  if (linear_.size() != quadratic_.size()) {
    throw std::invalid_argument("quadratic and linear term counts differ");
  }
  for (std::size_t i = 0; i < quadratic_.size(); ++i) {
    check_symmetric(quadratic_[i], n, i);
    if (linear_[i].size() != n) {
      throw std::invalid_argument(fmt::format("linear term {} has wrong dimension", i));
    }
  }
}

Vector QuadraticObjective::eval(const ManifoldPoint& x) const {
  Vector out(num_objectives());
  for (int i = 0; i < num_objectives(); ++i) {
    out(i) = x.coords.dot(quadratic_[i] * x.coords) + linear_[i].dot(x.coords);
  }
  return out;
}

Vector QuadraticObjective::jacobian_action(const ManifoldPoint& x, const TangentVector& d) const {
  Vector out(num_objectives());
  for (int i = 0; i < num_objectives(); ++i) {
    out(i) = 2.0 * x.coords.dot(quadratic_[i] * d.components) + linear_[i].dot(d.components);
  }
  return out;
}

std::vector<TangentVector> QuadraticObjective::riemannian_gradients(const ManifoldPoint& x) const {
  std::vector<TangentVector> grads;
  grads.reserve(quadratic_.size());
  for (int i = 0; i < num_objectives(); ++i) {
    grads.push_back(
        manifold_.project_tangent(x, 2.0 * (quadratic_[i] * x.coords) + linear_[i]));
  }
  return grads;
}

QuadLinearProblem QuadLinearProblem::benchmark(int index) {
  Matrix a(2, 2);
  switch (index) {
    case 1: a << 1, 0, 0, 1; break;
    case 2: a << 1, 1, 1, 1; break;
    case 3: a << 1, 2, 2, 2; break;
    default: throw std::invalid_argument(fmt::format("no benchmark matrix A{}", index));
  }
  return {a, Vector::Ones(2)};
}

QuadQuadProblem QuadQuadProblem::random(int n, int m, std::uint64_t seed) {
  if (n < 2 || m < 1) throw std::invalid_argument("quad_quad needs n >= 2 and m >= 1");
  Rng rng(seed);
  QuadQuadProblem p;
  // One shared eigenbasis; conflict comes from independently drawn spectra.
  Rng basis = rng.split(0);
  const Matrix q = random_orthogonal(basis, n);
  for (int i = 0; i < m; ++i) {
    Rng stream = rng.split(static_cast<std::uint64_t>(i) + 1);
    Vector diag(n);
    for (int k = 0; k < n; ++k) diag(k) = stream.uniform(i, i + 1.0);
    Matrix a = q.transpose() * diag.asDiagonal() * q;
    a = 0.5 * (a + a.transpose()).eval();
    p.A_list.push_back(std::move(a));
  }
  return p;
}

std::shared_ptr<const VectorObjective> make_objective(const QuadLinearProblem& p,
                                                      const Manifold& manifold) {
  const int n = manifold.ambient_dim();
  if (p.c.size() != n) throw std::invalid_argument("c has wrong dimension");
  return std::make_shared<QuadraticObjective>(
      manifold, std::vector<Matrix>{p.A, Matrix::Zero(n, n)},
      std::vector<Vector>{Vector::Zero(n), p.c});
}

std::shared_ptr<const VectorObjective> make_objective(const QuadQuadProblem& p,
                                                      const Manifold& manifold) {
  std::vector<Vector> linear(p.A_list.size(), Vector::Zero(manifold.ambient_dim()));
  return std::make_shared<QuadraticObjective>(manifold, p.A_list, std::move(linear));
}

ProblemSpec ProblemSpec::parse(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw std::invalid_argument("problem spec needs a 'family' field");
  }
  ProblemSpec spec{j};
  const auto fam = spec.family();
  if (fam == "quad_linear") {
    if (j.contains("preset")) {
      const auto preset = j.at("preset").get<std::string>();
      if (preset.size() != 2 || preset[0] != 'A') {
        throw std::invalid_argument("quad_linear preset must be A1, A2 or A3");
      }
      QuadLinearProblem::benchmark(preset[1] - '0');
    } else if (!j.contains("A") || !j.contains("c")) {
      throw std::invalid_argument("quad_linear needs 'A' and 'c' (or 'preset')");
    }
  } else if (fam == "quad_quad") {
    for (const char* key : {"n", "m", "seed"}) {
      if (!j.contains(key)) throw std::invalid_argument(fmt::format("quad_quad needs '{}'", key));
    }
  } else {
    throw std::invalid_argument(fmt::format("unknown problem family '{}'", fam));
  }
  spec.build();  // surface dimension / symmetry errors at parse time
  return spec;
}

ProblemSpec ProblemSpec::from_string(const std::string& text) {
  if (text.rfind("table1:", 0) == 0) {
    return parse({{"family", "quad_linear"}, {"preset", text.substr(7)}});
  }
  if (text.rfind("table2:", 0) == 0) {
    const auto rest = text.substr(7);
    const auto colon = rest.find(':');
    const int n = std::stoi(rest.substr(0, colon));
    const std::uint64_t seed =
        colon == std::string::npos ? 42 : std::stoull(rest.substr(colon + 1));
    return parse({{"family", "quad_quad"}, {"n", n}, {"m", 2}, {"seed", seed}});
  }
  if (!text.empty() && text.front() == '{') return parse(nlohmann::json::parse(text));
  std::ifstream in(text);
  if (!in) throw std::invalid_argument(fmt::format("cannot read problem spec '{}'", text));
  return parse(nlohmann::json::parse(in));
}

std::string ProblemSpec::family() const { return json.at("family").get<std::string>(); }

Manifold ProblemSpec::manifold() const {
  if (json.contains("manifold")) return Manifold::parse(json.at("manifold").get<std::string>());
  if (family() == "quad_quad") return Manifold::sphere(json.at("n").get<int>());
  if (json.contains("preset")) return Manifold::sphere(2);
  return Manifold::sphere(static_cast<int>(json.at("c").size()));
}

std::shared_ptr<const VectorObjective> ProblemSpec::build() const {
  const Manifold mf = manifold();
  if (family() == "quad_linear") {
    QuadLinearProblem p;
    if (json.contains("preset")) {
      p = QuadLinearProblem::benchmark(json.at("preset").get<std::string>()[1] - '0');
    } else {
      p.A = matrix_from_json(json.at("A"));
      const auto c = json.at("c").get<std::vector<double>>();
      p.c = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
    }
    return make_objective(p, mf);
  }
  const int n = json.at("n").get<int>();
  if (n != mf.ambient_dim()) throw std::invalid_argument("quad_quad n disagrees with manifold");
  return make_objective(
      QuadQuadProblem::random(n, json.at("m").get<int>(), json.at("seed").get<std::uint64_t>()),
      mf);
}

}  // namespace nvrcg
