#ifndef QUDIT_PRESCRIPTIONS_HPP
#define QUDIT_PRESCRIPTIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qudit/circuits.hpp"

namespace qudit {

struct CtcCircuit {
  Circuit base;
  std::vector<int> respecting;  // chronology-respecting systems
  std::vector<int> violating;   // chronology-violating systems
};

// Throws GateSpecError unless the systems are partitioned into two nonempty
// sets and every input lies on respecting systems.
void validate(const CtcCircuit& c);

// Input state restricted to the respecting systems, in ascending order.
QuantumState respecting_input(const CtcCircuit& c);

// Vectorized Deutsch map tau -> Tr_CR[U (rho x tau) U^dagger] with row-major
// vectorization: column a*D + b holds the image of |a><b|.
ComplexMatrix deutsch_map(const CtcCircuit& c);

// Applies a vectorized map to a D x D matrix.
ComplexMatrix apply_map(const ComplexMatrix& map, const ComplexMatrix& tau);

struct DctcSolutionFamily {
  ComplexMatrix map_matrix;
  ComplexMatrix tau_star;                 // canonical unit-trace fixed point
  std::vector<ComplexMatrix> directions;  // traceless Hermitian, max entry modulus 1
  std::string free_symbol = "g";

  std::size_t dimension() const { return directions.size(); }
  // Parameter name of direction k: g, g2, g3, ...
  std::string symbol(std::size_t k) const;
};

DctcSolutionFamily dctc_fixed_points(const CtcCircuit& c);

// tau_star + sum_k weights[k] * directions[k].
ComplexMatrix evaluate(const DctcSolutionFamily& family, const std::vector<double>& weights);
bool is_physical(const DctcSolutionFamily& family, const std::vector<double>& weights);

struct PrescriptionOptions {
  std::optional<double> norm;
  std::string label;
};

QuantumState dctc_state_respecting(const CtcCircuit& c, const std::vector<double>& weights,
                                   const PrescriptionOptions& options = {});
QuantumState dctc_state_violating(const CtcCircuit& c, const std::vector<double>& weights,
                                  const PrescriptionOptions& options = {});

// P = Tr_CV[U] acting on the respecting space.
ComplexMatrix pctc_reduced_operator(const CtcCircuit& c);
// P psi / |P psi| for vector inputs, P rho P^dagger / tr otherwise.
QuantumState pctc_state_respecting(const CtcCircuit& c, const PrescriptionOptions& options = {});
// Tr_CR[U (rho x I/D) U^dagger].
QuantumState pctc_state_violating(const CtcCircuit& c, const PrescriptionOptions& options = {});

}  // namespace qudit

#endif  // QUDIT_PRESCRIPTIONS_HPP
