#include "torsion/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "torsion/closed_forms.hpp"
#include "torsion/errors.hpp"
#include "torsion/format.hpp"

namespace torsion {

namespace {

const std::array<std::array<int, 2>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// h^2 times the negative discrete Laplacian, stored per unknown as a diagonal
// and up to four unit off-diagonal couplings.
struct Operator {
  std::vector<double> diag;
  std::vector<std::array<int, 4>> nbr;

  explicit Operator(const GridMask& m) {
    const std::size_t n = m.unknowns();
    diag.assign(n, 0.0);
    nbr.assign(n, {-1, -1, -1, -1});
    for (std::size_t k = 0; k < n; ++k) {
      const int node = m.node_of[k];
      const int i = m.col(node);
      const int j = m.row(node);
      for (int d = 0; d < 4; ++d) {
        const int ni = i + kSteps[d][0];
        const int nj = j + kSteps[d][1];
        if (m.inside(ni, nj)) {
          nbr[k][d] = m.unknown_of[m.index(ni, nj)];
          diag[k] += 1.0;
        } else {
          diag[k] += 1.0 / m.arms[node][d];
        }
      }
    }
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = diag.size();
    for (std::size_t k = 0; k < n; ++k) {
      double s = diag[k] * x[k];
      for (int q : nbr[k]) {
        if (q >= 0) s -= x[static_cast<std::size_t>(q)];
      }
      y[k] = s;
    }
  }
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> unknown_values(const GridField& v) {
  const GridMask& m = v.mask();
  std::vector<double> x(m.unknowns());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = v.at(m.node_of[k]);
  return x;
}

}  // namespace

GridField::GridField(std::shared_ptr<const GridMask> mask, std::vector<double> values, double residual,
                     int iterations)
    : mask_(std::move(mask)), values_(std::move(values)), residual_(residual), iterations_(iterations) {
  if (!mask_) throw InvalidArgument("grid field needs a mask");
  if (values_.size() != mask_->kind.size()) throw InvalidArgument("grid field size does not match its mask");
}

GridField sample_on_grid(std::shared_ptr<const GridMask> mask, const SmoothField& field) {
  std::vector<double> values(mask->kind.size(), 0.0);
  for (int node : mask->node_of) values[static_cast<std::size_t>(node)] = field.value(mask->position(node));
  return GridField(std::move(mask), std::move(values));
}

SolveResult solve_torsion(std::shared_ptr<const GridMask> mask, const SolverOptions& options) {
  if (!mask) throw InvalidArgument("solve_torsion needs a mask");
  if (!(options.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  const GridMask& m = *mask;
  const std::size_t n = m.unknowns();
  if (n == 0 || m.interior_count() == 0) throw SingularSystem("grid has no interior nodes");

  const Operator A(m);
  const double h2 = m.h * m.h;
  std::vector<double> x(n, 0.0);
  std::vector<double> r(n, h2);
  std::vector<double> z(n);
  std::vector<double> p(n);
  std::vector<double> Ap(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / A.diag[k];
  p = z;
  double rz = 0.0;
  for (std::size_t k = 0; k < n; ++k) rz += r[k] * z[k];

  // The recursively updated residual drifts from the true one; confirm
  // against b - A x before accepting convergence.
  auto true_residual = [&]() {
    A.apply(x, Ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = h2 - Ap[k];
    return inf_norm(r) / h2;
  };

  int it = 0;
  double res = 1.0;
  while (true) {
    if (inf_norm(r) / h2 < options.tol) {
      res = true_residual();
      if (res < options.tol) break;
      for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / A.diag[k];
      p = z;
      rz = 0.0;
      for (std::size_t k = 0; k < n; ++k) rz += r[k] * z[k];
    }
    if (it >= options.max_iterations) {
      throw NonConvergence("conjugate gradients did not reach the residual tolerance");
    }
    A.apply(p, Ap);
    double pAp = 0.0;
    for (std::size_t k = 0; k < n; ++k) pAp += p[k] * Ap[k];
    if (!(pAp > 0.0)) throw SingularSystem("operator is not positive definite");
    const double alpha = rz / pAp;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    double rz_new = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = r[k] / A.diag[k];
      rz_new += r[k] * z[k];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    ++it;
  }

  std::vector<double> values(m.kind.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) values[static_cast<std::size_t>(m.node_of[k])] = x[k];
  GridField field(std::move(mask), std::move(values), res, it);
  const RefinedMax peak = refine_argmax(field);
  const double tau = integrate(field);
  return SolveResult{std::move(field), peak.value, peak.point, tau, res};
}

SolveResult solve_torsion(const GridMask& mask, const SolverOptions& options) {
  return solve_torsion(std::make_shared<const GridMask>(mask), options);
}

double discrete_residual(const GridField& v) {
  const GridMask& m = v.mask();
  const Operator A(m);
  const std::vector<double> x = unknown_values(v);
  std::vector<double> y(x.size());
  A.apply(x, y);
  const double h2 = m.h * m.h;
  double res = 0.0;
  for (double yk : y) res = std::max(res, std::abs(1.0 - yk / h2));
  return res;
}

double integrate(const GridField& v) {
  const GridMask& m = v.mask();
  double s = 0.0;
  for (int node : m.node_of) s += v.at(node) * m.area_fraction[static_cast<std::size_t>(node)];
  return s * m.h * m.h;
}

double torsional_rigidity(const SolveResult& result) { return integrate(result.field); }

double rayleigh_quotient(const GridField& v) {
  const GridMask& m = v.mask();
  double energy = 0.0;
  double sum = 0.0;
  for (int node : m.node_of) {
    const int i = m.col(node);
    const int j = m.row(node);
    const double vp = v.at(node);
    sum += vp;
    for (int d = 0; d < 4; ++d) {
      const int ni = i + kSteps[d][0];
      const int nj = j + kSteps[d][1];
      if (m.inside(ni, nj)) {
        // Each interior edge once: only East and North.
        if (d == East || d == North) {
          const double dv = vp - v.at(ni, nj);
          energy += dv * dv;
        }
      } else {
        energy += vp * vp / m.arms[static_cast<std::size_t>(node)][d];
      }
    }
  }
  const double integral = sum * m.h * m.h;
  if (integral == 0.0) throw ZeroDenominator("field integrates to zero");
  return energy / (integral * integral);
}

RefinedMax refine_argmax(const GridField& v) {
  const GridMask& m = v.mask();
  if (m.node_of.empty()) throw SingularSystem("grid has no unknowns");
  int best = m.node_of.front();
  for (int node : m.node_of) {
    if (v.at(node) > v.at(best)) best = node;
  }
  const int i = m.col(best);
  const int j = m.row(best);
  RefinedMax out{m.position(best), v.at(best), best};
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      if (!m.inside(i + di, j + dj)) return out;
    }
  }
  // f(s, t) = c0 + c1 s + c2 t + c3 s^2 + c4 s t + c5 t^2 in units of h.
  Eigen::Matrix<double, 9, 6> X;
  Eigen::Matrix<double, 9, 1> f;
  int row = 0;
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      X.row(row) << 1.0, di, dj, di * di, di * dj, dj * dj;
      f(row) = v.at(i + di, j + dj);
      ++row;
    }
  }
  const Eigen::Matrix<double, 6, 1> c = X.colPivHouseholderQr().solve(f);
  Eigen::Matrix2d H;
  H << 2.0 * c(3), c(4), c(4), 2.0 * c(5);
  if (H.determinant() <= 0.0 || H.trace() >= 0.0) return out;
  const Eigen::Vector2d st = H.lu().solve(-Eigen::Vector2d(c(1), c(2)));
  if (st.cwiseAbs().maxCoeff() > 1.0) return out;
  out.point = m.position(best) + m.h * Point(st.x(), st.y());
  out.value = c(0) + c(1) * st.x() + c(2) * st.y() + c(3) * st.x() * st.x() + c(4) * st.x() * st.y() +
              c(5) * st.y() * st.y();
  // Least squares need not pass through the best node.
  out.value = std::max(out.value, v.at(best));
  return out;
}

void write_field_csv(std::ostream& out, const GridField& v) {
  const GridMask& m = v.mask();
  out << "x,y,value\n";
  for (int node : m.node_of) {
    const Point p = m.position(node);
    out << format12(p.x()) << ',' << format12(p.y()) << ',' << format12(v.at(node)) << '\n';
  }
}

nlohmann::json summary_json(const SolveResult& result) {
  const GridMask& m = result.field.mask();
  return nlohmann::json{
      {"M", round12(result.M)},
      {"argmax", {round12(result.argmax.x()), round12(result.argmax.y())}},
      {"tau", round12(result.tau)},
      {"residual", round12(result.residual)},
      {"h", round12(m.h)},
      {"iterations", result.field.iterations()},
      {"unknowns", m.unknowns()},
  };
}

}  // namespace torsion
