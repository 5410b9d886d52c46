#include "fhd/refelem.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fhd {

namespace {

// Symmetric rules stored as orbits; weights normalized to unit area.
struct Orbit {
  int kind;  // 1: centroid, 3: (a, a, 1-2a), 6: all permutations of (a, b, 1-a-b)
  double a;
  double b;
  double w;
};

QuadratureRule expand(int degree, std::initializer_list<Orbit> orbits) {
  QuadratureRule rule;
  rule.degree = degree;
  auto add = [&](double l0, double l1, double l2, double w) {
    rule.points.push_back({l0, l1, l2});
    rule.weights.push_back(0.5 * w);
  };
  for (const auto& o : orbits) {
    if (o.kind == 1) {
      add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, o.w);
    } else if (o.kind == 3) {
      const double c = 1.0 - 2.0 * o.a;
      add(o.a, o.a, c, o.w);
      add(o.a, c, o.a, o.w);
      add(c, o.a, o.a, o.w);
    } else {
      const double c = 1.0 - o.a - o.b;
      add(o.a, o.b, c, o.w);
      add(o.a, c, o.b, o.w);
      add(o.b, o.a, c, o.w);
      add(o.b, c, o.a, o.w);
      add(c, o.a, o.b, o.w);
      add(c, o.b, o.a, o.w);
    }
  }
  return rule;
}

const std::vector<QuadratureRule>& stocked_rules() {
  static const std::vector<QuadratureRule> rules = [] {
    std::vector<QuadratureRule> r;
    r.push_back(expand(1, {{1, 0, 0, 1.0}}));
    // Edge midpoints.
    {
      QuadratureRule mid;
      mid.degree = 2;
      mid.points = {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}};
      mid.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      r.push_back(mid);
    }
    r.push_back(expand(4, {{3, 0.44594849091596488632, 0, 0.2233815896780114657},
                           {3, 0.09157621350977074346, 0, 0.10995174365532186764}}));
    r.push_back(expand(5, {{1, 0, 0, 0.225},
                           {3, 0.47014206410511508977, 0, 0.13239415278850618074},
                           {3, 0.1012865073234563388, 0, 0.1259391805448271526}}));
    r.push_back(expand(6, {{3, 0.24928674517091042129, 0, 0.11678627572637936603},
                           {3, 0.06308901449150222834, 0, 0.050844906370206816921},
                           {6, 0.053145049844816947353, 0.31035245103378440542,
                            0.082851075618373575194}}));
    r.push_back(expand(8, {{1, 0, 0, 0.14431560767778716825},
                           {3, 0.45929258829272315603, 0, 0.095091634267284624794},
                           {3, 0.17056930775176020662, 0, 0.10321737053471825028},
                           {3, 0.050547228317030975458, 0, 0.032458497623198080311},
                           {6, 0.0083947774099576053372, 0.26311282963463811342,
                            0.027230314174434994265}}));
    return r;
  }();
  return rules;
}

const std::array<Vec2, 3>& lambda_grads() {
  static const std::array<Vec2, 3> g = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  return g;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// NE1 basis as coefficients over the monomials
// (1,0), (x,0), (y,0), (0,1), (0,x), (0,y); column l holds basis function l.
const Eigen::Matrix<double, 6, 6>& ne1_coefficients() {
  static const Eigen::Matrix<double, 6, 6> coeffs = [] {
    const std::array<Vec2, 3> ref = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    auto monomial = [](int j, const Vec2& p) -> Vec2 {
      switch (j) {
        case 0: return {1.0, 0.0};
        case 1: return {p.x(), 0.0};
        case 2: return {p.y(), 0.0};
        case 3: return {0.0, 1.0};
        case 4: return {0.0, p.x()};
        default: return {0.0, p.y()};
      }
    };
    const LineRule& g = gauss_line(2);
    Eigen::Matrix<double, 6, 6> dofs = Eigen::Matrix<double, 6, 6>::Zero();
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = ref[(k + 1) % 3];
      const Vec2& b = ref[(k + 2) % 3];
      for (int q = 0; q < 2; ++q) {
        for (int j = 0; j < 6; ++j) {
          double s = 0.0;
          for (std::size_t i = 0; i < g.points.size(); ++i) {
            const double t = g.points[i];
            const double leg = q == 0 ? 1.0 : 2.0 * t - 1.0;
            s += g.weights[i] * monomial(j, a + t * (b - a)).dot(b - a) * leg;
          }
          dofs(2 * k + q, j) = s;
        }
      }
    }
    return Eigen::Matrix<double, 6, 6>(dofs.inverse());
  }();
  return coeffs;
}

}  // namespace

FamilyInfo family_info(ElementFamily family) {
  switch (family) {
    case ElementFamily::P0: return {1, false, 0};
    case ElementFamily::P1: return {3, false, 1};
    case ElementFamily::P2: return {6, false, 2};
    case ElementFamily::CR: return {3, false, 1};
    case ElementFamily::NE0: return {3, true, 1};
    case ElementFamily::NE1: return {6, true, 1};
  }
  throw std::invalid_argument("unknown element family");
}

std::string_view family_name(ElementFamily family) {
  switch (family) {
    case ElementFamily::P0: return "P0";
    case ElementFamily::P1: return "P1";
    case ElementFamily::P2: return "P2";
    case ElementFamily::CR: return "CR";
    case ElementFamily::NE0: return "NE0";
    case ElementFamily::NE1: return "NE1";
  }
  return "?";
}

LocalDofPlacement local_dof_placement(ElementFamily family, int local) {
  switch (family) {
    case ElementFamily::P0: return {DofCarrier::Cell, 0, 0};
    case ElementFamily::P1: return {DofCarrier::Vertex, local, 0};
    case ElementFamily::P2:
      return local < 3 ? LocalDofPlacement{DofCarrier::Vertex, local, 0}
                       : LocalDofPlacement{DofCarrier::Edge, local - 3, 0};
    case ElementFamily::CR:
    case ElementFamily::NE0: return {DofCarrier::Edge, local, 0};
    case ElementFamily::NE1: return {DofCarrier::Edge, local / 2, local % 2};
  }
  throw std::invalid_argument("unknown element family");
}

const QuadratureRule& quadrature(int degree) {
  if (degree < 1 || degree > 8) {
    throw std::invalid_argument("quadrature: degree must lie in [1, 8], got " +
                                std::to_string(degree));
  }
  for (const auto& rule : stocked_rules()) {
    if (rule.degree >= degree) return rule;
  }
  throw std::logic_error("quadrature: no stocked rule");
}

const LineRule& gauss_line(int n_points) {
  static const std::map<int, LineRule> rules = [] {
    std::map<int, LineRule> r;
    auto add = [&](int n, std::vector<double> x, std::vector<double> w) {
      LineRule rule;
      for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.push_back(0.5 * (x[i] + 1.0));
        rule.weights.push_back(0.5 * w[i]);
      }
      r.emplace(n, std::move(rule));
    };
    add(1, {0.0}, {2.0});
    const double s3 = 1.0 / std::sqrt(3.0);
    add(2, {-s3, s3}, {1.0, 1.0});
    const double s35 = std::sqrt(0.6);
    add(3, {-s35, 0.0, s35}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0});
    add(5,
        {-0.90617984593866399280, -0.53846931010568309104, 0.0, 0.53846931010568309104,
         0.90617984593866399280},
        {0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
         0.47862867049936646804, 0.23692688505618908751});
    return r;
  }();
  auto it = rules.find(n_points);
  if (it == rules.end()) {
    throw std::invalid_argument("gauss_line: unsupported point count " + std::to_string(n_points));
  }
  return it->second;
}

ReferenceBasis eval_basis(ElementFamily family, const Barycentric& l) {
  ReferenceBasis out;
  const auto& dl = lambda_grads();
  out.n = family_info(family).local_dofs;
  switch (family) {
    case ElementFamily::P0:
      out.value[0] = 1.0;
      out.grad[0] = Vec2::Zero();
      break;
    case ElementFamily::P1:
      for (int i = 0; i < 3; ++i) {
        out.value[i] = l[i];
        out.grad[i] = dl[i];
      }
      break;
    case ElementFamily::P2:
      for (int i = 0; i < 3; ++i) {
        out.value[i] = l[i] * (2.0 * l[i] - 1.0);
        out.grad[i] = (4.0 * l[i] - 1.0) * dl[i];
      }
      for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3;
        const int b = (k + 2) % 3;
        out.value[3 + k] = 4.0 * l[a] * l[b];
        out.grad[3 + k] = 4.0 * (l[a] * dl[b] + l[b] * dl[a]);
      }
      break;
    case ElementFamily::CR:
      for (int k = 0; k < 3; ++k) {
        out.value[k] = 1.0 - 2.0 * l[k];
        out.grad[k] = -2.0 * dl[k];
      }
      break;
    case ElementFamily::NE0:
      for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3;
        const int b = (k + 2) % 3;
        out.vvalue[k] = l[a] * dl[b] - l[b] * dl[a];
        out.curl[k] = 2.0 * cross(dl[a], dl[b]);
      }
      break;
    case ElementFamily::NE1: {
      const auto& c = ne1_coefficients();
      const double x = l[1];
      const double y = l[2];
      for (int i = 0; i < 6; ++i) {
        out.vvalue[i] = Vec2(c(0, i) + c(1, i) * x + c(2, i) * y, c(3, i) + c(4, i) * x + c(5, i) * y);
        out.curl[i] = c(4, i) - c(2, i);
      }
      break;
    }
  }
  return out;
}

const BasisTable& tabulate(ElementFamily family, int quad_degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, BasisTable> cache;
  const QuadratureRule& rule = quadrature(quad_degree);
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(static_cast<int>(family), rule.degree);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BasisTable table{family, &rule, {}};
    table.at.reserve(rule.points.size());
    for (const auto& p : rule.points) table.at.push_back(eval_basis(family, p));
    it = cache.emplace(key, std::move(table)).first;
  }
  return it->second;
}

ElementGeometry::ElementGeometry(const Mesh2D& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  for (int k = 0; k < 3; ++k) v[k] = mesh.vertex(tri[k]);
  jac.col(0) = v[1] - v[0];
  jac.col(1) = v[2] - v[0];
  det = jac.determinant();
  jac_inv_t = jac.inverse().transpose();
}

}  // namespace fhd
