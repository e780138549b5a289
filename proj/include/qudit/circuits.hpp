#ifndef QUDIT_CIRCUITS_HPP
#define QUDIT_CIRCUITS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qudit/gates.hpp"
#include "qudit/states.hpp"

namespace qudit {

struct CircuitInput {
  QuantumState state;
  int start = 0;  // first system covered by the state
};

struct PostselectionSpec {
  QuantumState state;  // vector or matrix spanning consecutive systems
  int start = 0;
};

struct Circuit {
  int dim = 2;
  int num_systems = 1;
  std::vector<CircuitInput> inputs;
  std::vector<CircuitElement> gates;
  std::vector<int> traces;
  std::vector<PostselectionSpec> postselections;
};

// Appends inputs in order, each starting where the previous one ends.
Circuit make_circuit(int dim, int num_systems, const std::vector<QuantumState>& inputs,
                     std::vector<CircuitElement> gates, std::vector<int> traces = {},
                     std::vector<PostselectionSpec> postselections = {});

// Throws on inconsistent dimensions, spans, or overlapping postprocessing.
void validate(const Circuit& c);

// Tensor product of the inputs with maximally mixed fill on uncovered systems.
QuantumState input_state(const Circuit& c);

// G_n ... G_1 as a gate spanning every system.
QuantumGate total_gate(const Circuit& c);

struct OutputOptions {
  std::vector<int> extra_traces;  // indices relative to the postprocessed state
  bool postprocessing = true;
  std::optional<double> norm;
  std::string label;
};

QuantumState output_state(const Circuit& c, const OutputOptions& options = {});

std::variant<std::vector<double>, QuantumState> circuit_measure(const Circuit& c,
                                                                const std::vector<ComplexMatrix>& operators,
                                                                const std::vector<int>& targets, bool observable,
                                                                bool statistics);

// Applies a circuit element to a state spanning the circuit's systems.
QuantumState apply_element(const CircuitElement& element, const QuantumState& s);

}  // namespace qudit

#endif  // QUDIT_CIRCUITS_HPP
