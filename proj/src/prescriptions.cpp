#include "qudit/prescriptions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qudit {

namespace {

constexpr double kDrop = 1e-9;
constexpr double kPsdTol = -1e-9;

std::vector<std::size_t> uniform_dims(int d, std::size_t n) {
  return std::vector<std::size_t>(n, static_cast<std::size_t>(d));
}

std::vector<std::size_t> sizes(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::size_t space_of(int d, std::size_t n) { return space_size(uniform_dims(d, n)); }

// Real Hilbert-Schmidt inner product Re tr(A^dagger B).
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (std::conj(a[k]) * b[k]).real();
  return sum;
}

// Orthonormalizes in place; drops members whose residual norm falls below kDrop.
std::vector<ComplexMatrix> gram_schmidt(const std::vector<ComplexMatrix>& in) {
  std::vector<ComplexMatrix> out;
  for (ComplexMatrix v : in) {
    for (const auto& u : out) v -= hs_inner(u, v) * u;
    for (const auto& u : out) v -= hs_inner(u, v) * u;
    const double n = v.norm();
    if (n < kDrop) continue;
    v *= 1.0 / n;
    out.push_back(v);
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eig(hermitian_part(m)).eigenvalues.front(); }

// Scales to unit maximal entry modulus with the first significant entry
// having positive real part, or positive imaginary part when purely imaginary.
ComplexMatrix canonical_direction(ComplexMatrix a) {
  a *= 1.0 / a.max_abs();
  for (const Complex& z : a.entries()) {
    if (std::abs(z) < 1e-9) continue;
    const bool flip = std::abs(z.real()) > 1e-12 ? z.real() < 0.0 : z.imag() < 0.0;
    if (flip) a *= -1.0;
    break;
  }
  return a;
}

// Composite state over all circuit systems from a CR state and a CV state.
ComplexMatrix joint(const CtcCircuit& c, const ComplexMatrix& rho, const ComplexMatrix& tau) {
  const auto respecting = sorted(c.respecting);
  const auto violating = sorted(c.violating);
  std::vector<int> order(respecting);
  order.insert(order.end(), violating.begin(), violating.end());
  std::vector<std::size_t> perm(order.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    perm[k] = static_cast<std::size_t>(std::find(order.begin(), order.end(), static_cast<int>(k)) - order.begin());
  }
  return permute_systems(kron(rho, tau), uniform_dims(c.base.dim, order.size()), perm);
}

ComplexMatrix reduce(const CtcCircuit& c, const ComplexMatrix& m, const std::vector<int>& keep) {
  return partial_trace_raw(m, uniform_dims(c.base.dim, static_cast<std::size_t>(c.base.num_systems)),
                           sizes(sorted(keep)));
}

ComplexMatrix evolve(const ComplexMatrix& u, const ComplexMatrix& rho) { return u * rho * u.adjoint(); }

QuantumState as_state(const ComplexMatrix& rho, int dim, const PrescriptionOptions& options,
                      const std::string& fallback_label) {
  QuantumState s = matrix_state(hermitian_part(rho), dim, Kind::mixed, options.label.empty() ? fallback_label : options.label);
  if (options.norm) s = normalize(s, *options.norm);
  return s;
}

ComplexMatrix cesaro_fixed_point(const ComplexMatrix& map, std::size_t side) {
  ComplexMatrix tau = (1.0 / static_cast<double>(side)) * ComplexMatrix::identity(side);
  ComplexMatrix sum(side, side);
  const int iterations = 4096;
  for (int k = 0; k < iterations; ++k) {
    sum += tau;
    tau = apply_map(map, tau);
  }
  sum *= 1.0 / iterations;
  return sum;
}

}  // namespace

void validate(const CtcCircuit& c) {
  validate(c.base);
  if (c.respecting.empty() || c.violating.empty()) {
    throw GateSpecError("both respecting and violating systems must be nonempty");
  }
  std::set<int> all;
  for (const auto* v : {&c.respecting, &c.violating})
    for (int k : *v) {
      if (k < 0 || k >= c.base.num_systems) throw IndexError("CTC system index out of range");
      if (!all.insert(k).second) throw GateSpecError("system " + std::to_string(k) + " listed twice");
    }
  if (static_cast<int>(all.size()) != c.base.num_systems) {
    throw GateSpecError("respecting and violating systems must cover the circuit");
  }
  for (const auto& in : c.base.inputs)
    for (int k = in.start; k < in.start + in.state.num_systems; ++k) {
      if (std::find(c.violating.begin(), c.violating.end(), k) != c.violating.end()) {
        throw GateSpecError("inputs may not be declared on violating system " + std::to_string(k));
      }
    }
}

QuantumState respecting_input(const CtcCircuit& c) {
  validate(c);
  const auto respecting = sorted(c.respecting);
  std::optional<QuantumState> acc;
  auto append = [&](const QuantumState& s) { acc = acc ? tensor(*acc, s) : s; };
  for (std::size_t k = 0; k < respecting.size();) {
    const int system = respecting[k];
    const auto it = std::find_if(c.base.inputs.begin(), c.base.inputs.end(),
                                 [system](const CircuitInput& in) { return in.start == system; });
    if (it == c.base.inputs.end()) {
      append(maximally_mixed(c.base.dim, 1));
      ++k;
      continue;
    }
    for (int j = 0; j < it->state.num_systems; ++j) {
      if (k + static_cast<std::size_t>(j) >= respecting.size() || respecting[k + static_cast<std::size_t>(j)] != system + j) {
        throw GateSpecError("input spans systems outside the respecting block");
      }
    }
    QuantumState s = it->state;
    if (s.is_vector() && s.conjugated) s = dagger(s);
    append(s);
    k += static_cast<std::size_t>(it->state.num_systems);
  }
  return *acc;
}

ComplexMatrix apply_map(const ComplexMatrix& map, const ComplexMatrix& tau) {
  const std::size_t side = tau.rows();
  ComplexMatrix vec(side * side, 1, tau.entries());
  ComplexMatrix image = map * vec;
  return ComplexMatrix(side, side, image.entries());
}

ComplexMatrix deutsch_map(const CtcCircuit& c) {
  const QuantumState rho_state = respecting_input(c);
  const ComplexMatrix u = total_gate(c.base).core;
  const ComplexMatrix rho = rho_state.density();
  const std::size_t side = space_of(c.base.dim, c.violating.size());
  ComplexMatrix map(side * side, side * side);
  for (std::size_t a = 0; a < side; ++a)
    for (std::size_t b = 0; b < side; ++b) {
      ComplexMatrix e(side, side);
      e(a, b) = 1.0;
      const ComplexMatrix image = reduce(c, evolve(u, joint(c, rho, e)), c.violating);
      for (std::size_t k = 0; k < image.size(); ++k) map(k, a * side + b) = image[k];
    }
  return map;
}

std::string DctcSolutionFamily::symbol(std::size_t k) const {
  return k == 0 ? free_symbol : free_symbol + std::to_string(k + 1);
}

DctcSolutionFamily dctc_fixed_points(const CtcCircuit& c) {
  DctcSolutionFamily family;
  family.map_matrix = deutsch_map(c);
  const std::size_t side = space_of(c.base.dim, c.violating.size());
  const auto kernel = null_space(family.map_matrix - ComplexMatrix::identity(side * side));
  if (kernel.empty()) throw FixedPointError("the Deutsch map has no fixed points");

  std::vector<ComplexMatrix> hermitian;
  const Complex i(0.0, 1.0);
  for (const auto& v : kernel) {
    const ComplexMatrix t(side, side, v.entries());
    hermitian.push_back(0.5 * (t + t.adjoint()));
    hermitian.push_back((0.5 / i) * (t - t.adjoint()));
  }
  const auto basis = gram_schmidt(hermitian);
  if (basis.empty()) throw FixedPointError("the fixed space has no Hermitian members");

  const ComplexMatrix mixed = (1.0 / static_cast<double>(side)) * ComplexMatrix::identity(side);
  ComplexMatrix tau(side, side);
  for (const auto& h : basis) tau += hs_inner(h, mixed) * h;
  const double tr = tau.trace().real();
  if (std::abs(tr) > 1e-9) tau *= 1.0 / tr;
  if (std::abs(tr) <= 1e-9 || min_eigenvalue(tau) < kPsdTol) tau = cesaro_fixed_point(family.map_matrix, side);
  family.tau_star = hermitian_part(tau);

  std::vector<ComplexMatrix> shifted;
  for (const auto& h : basis) shifted.push_back(h - h.trace().real() * family.tau_star);
  for (const auto& a : gram_schmidt(shifted)) family.directions.push_back(canonical_direction(a));
  return family;
}

ComplexMatrix evaluate(const DctcSolutionFamily& family, const std::vector<double>& weights) {
  if (weights.size() != family.directions.size()) {
    throw DimensionError("expected " + std::to_string(family.directions.size()) + " weights, got " +
                         std::to_string(weights.size()));
  }
  ComplexMatrix tau = family.tau_star;
  for (std::size_t k = 0; k < weights.size(); ++k) tau += weights[k] * family.directions[k];
  return tau;
}

bool is_physical(const DctcSolutionFamily& family, const std::vector<double>& weights) {
  return min_eigenvalue(evaluate(family, weights)) >= kPsdTol;
}

QuantumState dctc_state_respecting(const CtcCircuit& c, const std::vector<double>& weights,
                                   const PrescriptionOptions& options) {
  const auto family = dctc_fixed_points(c);
  if (!is_physical(family, weights)) throw UnphysicalWeightsError("weights give a non-positive CV state");
  const ComplexMatrix tau = evaluate(family, weights);
  const ComplexMatrix rho = respecting_input(c).density();
  const ComplexMatrix u = total_gate(c.base).core;
  return as_state(reduce(c, evolve(u, joint(c, rho, tau)), c.respecting), c.base.dim, options, "ρ_D");
}

QuantumState dctc_state_violating(const CtcCircuit& c, const std::vector<double>& weights,
                                  const PrescriptionOptions& options) {
  const auto family = dctc_fixed_points(c);
  if (!is_physical(family, weights)) throw UnphysicalWeightsError("weights give a non-positive CV state");
  return as_state(evaluate(family, weights), c.base.dim, options, "τ_D");
}

ComplexMatrix pctc_reduced_operator(const CtcCircuit& c) {
  validate(c);
  return reduce(c, total_gate(c.base).core, c.respecting);
}

QuantumState pctc_state_respecting(const CtcCircuit& c, const PrescriptionOptions& options) {
  const ComplexMatrix p = pctc_reduced_operator(c);
  const QuantumState in = respecting_input(c);
  const std::string label = options.label.empty() ? (in.is_vector() ? "ψ_P" : "ρ_P") : options.label;
  if (in.is_vector()) {
    const ComplexMatrix psi = p * in.ket();
    const double n = psi.norm();
    if (n < 1e-12) throw AnnihilatedStateError("P annihilates the respecting input");
    QuantumState out = in;
    out.payload = (std::sqrt(options.norm.value_or(1.0)) / n) * psi;
    out.label = label;
    return out;
  }
  const ComplexMatrix rho = p * in.payload * p.adjoint();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-12) throw AnnihilatedStateError("P annihilates the respecting input");
  PrescriptionOptions o = options;
  o.norm = options.norm.value_or(1.0);
  o.label = label;
  return as_state(rho, c.base.dim, o, label);
}

QuantumState pctc_state_violating(const CtcCircuit& c, const PrescriptionOptions& options) {
  const ComplexMatrix rho = respecting_input(c).density();
  const std::size_t side = space_of(c.base.dim, c.violating.size());
  const ComplexMatrix mixed = (1.0 / static_cast<double>(side)) * ComplexMatrix::identity(side);
  const ComplexMatrix u = total_gate(c.base).core;
  return as_state(reduce(c, evolve(u, joint(c, rho, mixed)), c.violating), c.base.dim, options, "τ_P");
}

}  // namespace qudit
