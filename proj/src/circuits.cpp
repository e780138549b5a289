#include "qudit/circuits.hpp"

#include <algorithm>
#include <set>

namespace qudit {

namespace {

std::vector<std::size_t> uniform_dims(int d, int n) {
  return std::vector<std::size_t>(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
}

std::vector<std::size_t> complement(const std::vector<int>& systems, int n) {
  std::vector<std::size_t> out;
  for (int k = 0; k < n; ++k) {
    if (std::find(systems.begin(), systems.end(), k) == systems.end()) out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

// Operator on the listed systems tensored with the identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, const std::vector<int>& targets, int d, int n) {
  const auto dims = uniform_dims(d, n);
  const auto toff = subsystem_offsets(dims, std::vector<std::size_t>(targets.begin(), targets.end()));
  const auto roff = subsystem_offsets(dims, complement(targets, n));
  ComplexMatrix full(space_size(dims), space_size(dims));
  for (std::size_t r : roff)
    for (std::size_t a = 0; a < toff.size(); ++a)
      for (std::size_t b = 0; b < toff.size(); ++b) full(r + toff[a], r + toff[b]) = op(a, b);
  return full;
}

ComplexMatrix promote(const ComplexMatrix& op) { return op.is_vector() ? op * op.adjoint() : op; }

// U rho U^dagger, multiplying with U on the left twice so its zeros are skipped.
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& rho) {
  return (u * (u * rho).adjoint()).adjoint();
}

QuantumState apply_measurement(const MeasurementGate& m, const QuantumState& s) {
  validate(m);
  const QuantumState in = densify(s);
  const ComplexMatrix& rho = in.payload;
  ComplexMatrix out(rho.rows(), rho.cols());
  if (!m.observable) {
    for (const auto& raw : m.operators) out += conjugate_by(embed(raw.is_vector() ? promote(raw) : raw, m.targets, m.dim, m.num_systems), rho);
  } else {
    const auto dims = uniform_dims(m.dim, m.num_systems);
    const auto rest = complement(m.targets, m.num_systems);
    const auto toff = subsystem_offsets(dims, std::vector<std::size_t>(m.targets.begin(), m.targets.end()));
    const auto roff = subsystem_offsets(dims, rest);
    for (const auto& raw : m.operators) {
      const ComplexMatrix o = promote(raw);
      const ComplexMatrix reduced = partial_trace_raw(embed(o, m.targets, m.dim, m.num_systems) * rho, dims, rest);
      for (std::size_t r = 0; r < roff.size(); ++r)
        for (std::size_t q = 0; q < roff.size(); ++q) {
          const Complex w = reduced(r, q);
          if (w == Complex(0.0)) continue;
          for (std::size_t a = 0; a < toff.size(); ++a)
            for (std::size_t b = 0; b < toff.size(); ++b) out(roff[r] + toff[a], roff[q] + toff[b]) += w * o(a, b);
        }
    }
  }
  QuantumState result = in;
  result.payload = out;
  result.kind = Kind::mixed;
  return result;
}

}  // namespace

Circuit make_circuit(int dim, int num_systems, const std::vector<QuantumState>& inputs,
                     std::vector<CircuitElement> gates, std::vector<int> traces,
                     std::vector<PostselectionSpec> postselections) {
  Circuit c;
  c.dim = dim;
  c.num_systems = num_systems;
  int start = 0;
  for (const auto& s : inputs) {
    c.inputs.push_back({s, start});
    start += s.num_systems;
  }
  c.gates = std::move(gates);
  c.traces = std::move(traces);
  c.postselections = std::move(postselections);
  return c;
}

void validate(const Circuit& c) {
  if (c.dim < 2) throw DimensionError("circuit dimension must be at least 2");
  if (c.num_systems < 1) throw DimensionError("circuit must have at least one system");
  std::vector<bool> covered(static_cast<std::size_t>(c.num_systems), false);
  for (const auto& in : c.inputs) {
    if (in.state.dim != c.dim) throw DimensionError("input dimension differs from the circuit");
    if (in.start < 0 || in.start + in.state.num_systems > c.num_systems) throw IndexError("input out of range");
    for (int k = in.start; k < in.start + in.state.num_systems; ++k) {
      if (covered[static_cast<std::size_t>(k)]) throw IndexError("inputs overlap at system " + std::to_string(k));
      covered[static_cast<std::size_t>(k)] = true;
    }
  }
  for (const auto& element : c.gates) {
    std::visit(
        [&](const auto& g) {
          if (g.dim != c.dim || g.num_systems != c.num_systems) {
            throw DimensionError("gate '" + g.label + "' does not match the circuit space");
          }
          validate(g);
        },
        element);
  }
  std::set<int> post;
  for (int t : c.traces) {
    if (t < 0 || t >= c.num_systems) throw IndexError("trace index out of range");
    if (!post.insert(t).second) throw IndexError("duplicate trace index");
  }
  for (const auto& p : c.postselections) {
    if (p.state.dim != c.dim) throw DimensionError("postselection dimension differs from the circuit");
    if (p.start < 0 || p.start + p.state.num_systems > c.num_systems) throw IndexError("postselection out of range");
    for (int k = p.start; k < p.start + p.state.num_systems; ++k) {
      if (!post.insert(k).second) throw IndexError("postprocessing overlaps at system " + std::to_string(k));
    }
  }
}

QuantumState input_state(const Circuit& c) {
  validate(c);
  std::vector<const CircuitInput*> ordered;
  for (const auto& in : c.inputs) ordered.push_back(&in);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->start < b->start; });
  std::optional<QuantumState> acc;
  auto append = [&](const QuantumState& s) { acc = acc ? tensor(*acc, s) : s; };
  int next = 0;
  for (const auto* in : ordered) {
    for (; next < in->start; ++next) append(maximally_mixed(c.dim, 1));
    QuantumState s = in->state;
    if (s.is_vector() && s.conjugated) s = dagger(s);
    append(s);
    next = in->start + in->state.num_systems;
  }
  for (; next < c.num_systems; ++next) append(maximally_mixed(c.dim, 1));
  return *acc;
}

QuantumGate total_gate(const Circuit& c) {
  validate(c);
  QuantumGate out;
  out.dim = c.dim;
  out.num_systems = c.num_systems;
  out.targets.clear();
  for (int k = 0; k < c.num_systems; ++k) out.targets.push_back(k);
  const std::size_t size = space_size(uniform_dims(c.dim, c.num_systems));
  ComplexMatrix total = ComplexMatrix::identity(size);
  for (const auto& element : c.gates) {
    const auto* g = std::get_if<QuantumGate>(&element);
    if (!g) throw NonLinearError("circuit contains a measurement");
    total = full_matrix(*g) * total;
  }
  out.core = total;
  out.label = "U";
  return out;
}

QuantumState apply_element(const CircuitElement& element, const QuantumState& s) {
  if (const auto* m = std::get_if<MeasurementGate>(&element)) return apply_measurement(*m, s);
  const auto& g = std::get<QuantumGate>(element);
  const ComplexMatrix u = full_matrix(g);
  if (u.rows() != s.space()) throw DimensionError("gate does not match the state space");
  QuantumState out = s;
  if (s.is_vector()) {
    out.payload = u * s.ket();
    out.conjugated = false;
  } else {
    out.payload = conjugate_by(u, s.payload);
  }
  return out;
}

QuantumState output_state(const Circuit& c, const OutputOptions& options) {
  QuantumState s = input_state(c);
  for (const auto& element : c.gates) s = apply_element(element, s);
  if (options.postprocessing) {
    std::vector<Postselection> rules;
    std::vector<int> removed;
    for (const auto& p : c.postselections) {
      rules.push_back({p.state.is_vector() ? p.state.ket() : p.state.payload, p.start});
      for (int k = p.start; k < p.start + p.state.num_systems; ++k) removed.push_back(k);
    }
    if (!rules.empty()) s = postselect(s, rules);
    if (!c.traces.empty()) {
      std::vector<int> shifted;
      for (int t : c.traces) {
        shifted.push_back(t - static_cast<int>(std::count_if(removed.begin(), removed.end(), [t](int r) { return r < t; })));
      }
      s = partial_trace(s, shifted);
    }
  }
  if (!options.extra_traces.empty()) s = partial_trace(s, options.extra_traces);
  if (options.norm) s = normalize(s, *options.norm);
  if (!options.label.empty()) {
    s.label = options.label;
  } else {
    s.label = s.is_vector() || s.kind == Kind::pure ? "ψ′" : "ρ′";
  }
  return s;
}

std::variant<std::vector<double>, QuantumState> circuit_measure(const Circuit& c,
                                                                const std::vector<ComplexMatrix>& operators,
                                                                const std::vector<int>& targets, bool observable,
                                                                bool statistics) {
  return measure(output_state(c), operators, targets, observable, statistics);
}

}  // namespace qudit
