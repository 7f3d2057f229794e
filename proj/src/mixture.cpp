#include "polaron/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "polaron/quadrature.hpp"

namespace polaron {

double MixtureDecomposition::totalWeight() const {
  double total = 0;
  for (const auto& c : components) total += c.weight;
  return total;
}

void MixtureDecomposition::validate(double tol) const {
  if (components.empty())
    throw std::invalid_argument("MixtureDecomposition: no components");
  for (const auto& c : components)
    if (c.weight < -tol)
      throw std::invalid_argument("MixtureDecomposition: negative weight");
  if (std::abs(totalWeight() - 1.0) > tol)
    throw std::invalid_argument("MixtureDecomposition: weights must sum to 1");
}

MixtureDecomposition mixture_reweight(const MixtureDecomposition& d,
                                      const Functional& f,
                                      const ComponentEstimator& estimator) {
  d.validate();
  std::vector<double> e(d.components.size());
  double total = 0;
  for (std::size_t j = 0; j < d.components.size(); ++j) {
    e[j] = estimator(d.components[j], f);
    if (e[j] < 0)
      throw std::invalid_argument(
          "mixture_reweight: negative component expectation (f must be >= 0)");
    total += d.components[j].weight * e[j];
  }
  if (!(total > 0))
    throw std::invalid_argument("mixture_reweight: total expectation vanishes");
  MixtureDecomposition out;
  for (std::size_t j = 0; j < d.components.size(); ++j) {
    const auto& c = d.components[j];
    if (c.weight * e[j] == 0.0) continue;  // component killed by f
    double ej = e[j];
    Functional rho = c.density;
    out.components.push_back(
        {c.weight * ej / total, c.id,
         [rho, f, ej](const Eigen::VectorXd& x) { return rho(x) * f(x) / ej; }});
  }
  return out;
}

MixtureDecomposition coarsen(const MixtureDecomposition& d,
                             const std::vector<std::vector<int>>& partition) {
  d.validate();
  std::vector<int> seen(d.components.size(), 0);
  MixtureDecomposition out;
  for (const auto& group : partition) {
    if (group.empty()) throw std::invalid_argument("coarsen: empty group");
    double w = 0;
    std::string id;
    std::vector<std::pair<double, Functional>> members;
    for (int j : group) {
      if (j < 0 || j >= static_cast<int>(d.components.size()) || seen[j]++)
        throw std::invalid_argument("coarsen: partition must cover each index once");
      const auto& c = d.components[j];
      w += c.weight;
      id += (id.empty() ? "" : "+") + c.id;
      members.emplace_back(c.weight, c.density);
    }
    if (!(w > 0))
      throw std::invalid_argument("coarsen: merged weight must be positive");
    out.components.push_back(
        {w, id, [members, w](const Eigen::VectorXd& x) {
           double acc = 0;
           for (const auto& [wj, rho] : members) acc += wj * rho(x);
           return acc / w;
         }});
  }
  for (int s : seen)
    if (!s) throw std::invalid_argument("coarsen: partition misses an index");
  return out;
}

MixtureDecomposition product_mixture(
    const std::vector<MixtureDecomposition>& factors,
    const std::vector<int>& dims) {
  if (factors.empty() || factors.size() != dims.size())
    throw std::invalid_argument("product_mixture: factors/dims mismatch");
  for (const auto& f : factors) f.validate();
  std::vector<int> offsets(dims.size());
  int total = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    offsets[i] = total;
    total += dims[i];
  }
  MixtureDecomposition out;
  std::vector<std::size_t> state(factors.size(), 0);
  while (true) {
    double w = 1;
    std::string id;
    std::vector<std::tuple<int, int, Functional>> slices;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& c = factors[i].components[state[i]];
      w *= c.weight;
      id += (id.empty() ? "" : "|") + c.id;
      slices.emplace_back(offsets[i], dims[i], c.density);
    }
    out.components.push_back(
        {w, id, [slices](const Eigen::VectorXd& x) {
           double acc = 1;
           for (const auto& [off, len, rho] : slices)
             acc *= rho(x.segment(off, len));
           return acc;
         }});
    // Odometer increment, last factor fastest.
    int i = static_cast<int>(factors.size()) - 1;
    for (; i >= 0; --i) {
      if (++state[i] < factors[i].components.size()) break;
      state[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

namespace {

// Iterate a tensor grid of `dim` axes with `nodes` points each, calling
// visit(x, weight) at every node.
template <typename Visit>
void tensor_sweep(const QuadRule& rule, const std::vector<double>& sds,
                  Visit&& visit) {
  const int dim = static_cast<int>(sds.size());
  const int nodes = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(dim, 0);
  Eigen::VectorXd x(dim);
  for (int a = 0; a < dim; ++a) x(a) = sds[a] * rule.nodes(0);
  while (true) {
    double w = 1;
    for (int a = 0; a < dim; ++a) w *= rule.weights(idx[a]);
    visit(x, w);
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++idx[a] < nodes) {
        x(a) = sds[a] * rule.nodes(idx[a]);
        break;
      }
      idx[a] = 0;
      x(a) = sds[a] * rule.nodes(0);
    }
    if (a < 0) break;
  }
}

}  // namespace

ComponentEstimator gauss_hermite_estimator(const std::vector<double>& sds,
                                           int nodesPerDim, double refScale) {
  if (!(refScale >= 1.0))
    throw std::invalid_argument("gauss_hermite_estimator: refScale must be >= 1");
  QuadRule rule = gauss_hermite(nodesPerDim);
  // Quadrature runs against N(0, (refScale * s_a)^2) per axis; the factor
  // ratio(x) = dN(0,s^2)/dN(0,(r s)^2)(x) restores the base measure.
  std::vector<double> wide(sds);
  for (double& s : wide) s *= refScale;
  return [rule, sds, wide, refScale](const MixtureComponent& c,
                                     const Functional& f) {
    double acc = 0;
    tensor_sweep(rule, wide, [&](const Eigen::VectorXd& x, double w) {
      double ratio = 1.0;
      for (std::size_t a = 0; a < sds.size(); ++a) {
        double z2 = x(a) * x(a) / (2.0 * sds[a] * sds[a]);
        ratio *= refScale * std::exp(-z2 * (1.0 - 1.0 / (refScale * refScale)));
      }
      acc += w * ratio * c.density(x) * f(x);
    });
    return acc;
  };
}

ProductExpectations product_expectations(
    const std::vector<MixtureDecomposition>& factors,
    const std::vector<int>& dims, const std::vector<double>& sds,
    int nodesPerDim, const Functional& f) {
  if (factors.size() != dims.size())
    throw std::invalid_argument("product_expectations: factors/dims mismatch");
  int total = 0;
  std::size_t nComp = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    total += dims[i];
    nComp *= factors[i].components.size();
  }
  if (total != static_cast<int>(sds.size()))
    throw std::invalid_argument("product_expectations: sds length mismatch");
  QuadRule rule = gauss_hermite(nodesPerDim);

  ProductExpectations out;
  out.component.assign(nComp, 0.0);
  out.base = 0.0;
  std::vector<double> prod;  // densities of all product components at a node
  prod.reserve(nComp);
  tensor_sweep(rule, sds, [&](const Eigen::VectorXd& x, double w) {
    double fx = f(x);
    // Expand per-factor component densities into product densities by
    // iterative doubling, odometer order (last factor fastest).
    prod.assign(1, 1.0);
    int off = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& comps = factors[i].components;
      std::vector<double> vals(comps.size());
      for (std::size_t s = 0; s < comps.size(); ++s)
        vals[s] = comps[s].density(x.segment(off, dims[i]));
      std::vector<double> next;
      next.reserve(prod.size() * vals.size());
      for (double p : prod)
        for (double v : vals) next.push_back(p * v);
      prod.swap(next);
      off += dims[i];
    }
    double wf = w * fx;
    for (std::size_t g = 0; g < nComp; ++g) out.component[g] += wf * prod[g];
    out.base += wf;
  });
  return out;
}

}  // namespace polaron
