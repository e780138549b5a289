#ifndef QUDIT_GATES_HPP
#define QUDIT_GATES_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qudit/tensor.hpp"

namespace qudit {

// Diagram box category of a gate.
inline constexpr const char* kFamilyGate = "GATE";
inline constexpr const char* kFamilySwap = "SWAP";
inline constexpr const char* kFamilyMeasurement = "MEASUREMENT";

struct QuantumGate {
  int dim = 2;
  int num_systems = 1;
  std::vector<int> targets{0};
  std::vector<int> controls;
  std::vector<int> anticontrols;
  ComplexMatrix core;  // side d^|targets|
  Complex coefficient = 1.0;
  double exponent = 1.0;
  bool conjugated = false;
  std::string label;
  std::string family = kFamilyGate;
  // Constituents of a composition drawn separately unless merged.
  std::vector<QuantumGate> parts;
  bool merged = true;
};

struct MeasurementGate {
  std::vector<ComplexMatrix> operators;  // square d^|targets| matrices or vectors
  bool observable = false;
  std::vector<int> targets{0};
  int num_systems = 1;
  int dim = 2;
  std::string label = "M";
};

using CircuitElement = std::variant<QuantumGate, MeasurementGate>;

// Core after exponent, coefficient and dagger, in that order.
ComplexMatrix modified_core(const QuantumGate& g);

// Throws GateSpecError when targets, nodes or the core are inconsistent.
void validate(const QuantumGate& g);
void validate(const MeasurementGate& m);

// Matrix on the full d^N space. A control at level k applies the modified
// core to the power k and an anticontrol at level k to the power d - 1 - k,
// with powers multiplying across nodes; power zero is the identity.
ComplexMatrix full_matrix(const QuantumGate& g);

// Every system index touched by the gate, ascending.
std::vector<int> support(const QuantumGate& g);

enum class GateKind {
  not_gate,
  pauli,
  gell_mann,
  hadamard,
  rotation,
  phase,
  diagonal,
  summation,
  swap,
  fourier,
  custom,
};

struct CatalogParams {
  std::optional<int> dim;  // fixed-dimension kinds reject other values
  int num_systems = 0;  // 0 spans up to the last touched system
  std::vector<int> targets{0};
  std::vector<int> controls;
  std::vector<int> anticontrols;
  int index = 0;
  int axis = 1;
  double angle = 0.0;
  std::optional<Complex> phase;  // defaults to exp(2 pi i / d)
  int shift = 1;
  std::map<int, Complex> entries;
  bool exponentiation = false;
  bool composite = true;
  bool reverse = false;
  Complex coefficient = 1.0;
  double exponent = 1.0;
  bool conjugate = false;
  std::string label;
  std::optional<std::string> family;
  ComplexMatrix matrix;  // elementary matrix of a custom gate
};

QuantumGate catalog(GateKind kind, const CatalogParams& params = {});

// Elementary single-system matrices.
ComplexMatrix pauli_matrix(int index);
ComplexMatrix gell_mann_matrix(int index);
ComplexMatrix hadamard_matrix(int dim);
ComplexMatrix fourier_matrix(int dim);
// Multipartite Fourier operator on n systems; reverse flips the digit order.
ComplexMatrix composite_fourier_matrix(int dim, int n, bool reverse = false);
ComplexMatrix swap_matrix(int dim);

// Gate whose core is full_matrix of the single gate spanning all systems.
QuantumGate as_spanning(const QuantumGate& g);

struct CompositionModifiers {
  Complex coefficient = 1.0;
  double exponent = 1.0;
  bool conjugate = false;
  std::string label;
  bool merge = false;
};

// Matrix product G_n ... G_1 of gates on disjoint systems of one space.
QuantumGate interleave(const std::vector<QuantumGate>& gates, const CompositionModifiers& modifiers = {});
// Tensor product of the gates' full matrices in order.
QuantumGate stack(const std::vector<QuantumGate>& gates, const CompositionModifiers& modifiers = {});

// Default box label of a catalog kind.
std::string default_label(GateKind kind, const CatalogParams& params);

}  // namespace qudit

#endif  // QUDIT_GATES_HPP
