#ifndef QUDIT_STATES_HPP
#define QUDIT_STATES_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qudit/tensor.hpp"

namespace qudit {

enum class Form { vector, matrix };
enum class Kind { pure, mixed };

struct WeightedKet {
  Complex coefficient;
  std::vector<int> levels;  // one level per system
};

using WeightedKets = std::vector<WeightedKet>;
using StateSpec = std::variant<WeightedKets, ComplexMatrix>;

// Snapshot of the post-construction state, restored by reset().
struct StateSnapshot {
  int num_systems = 1;
  Form form = Form::vector;
  Kind kind = Kind::pure;
  bool conjugated = false;
  ComplexMatrix payload;
};

struct QuantumState {
  int dim = 2;
  int num_systems = 1;
  Form form = Form::vector;
  Kind kind = Kind::pure;
  ComplexMatrix payload;  // d^N x 1 for vectors, d^N x d^N for matrices
  bool conjugated = false;
  std::string label;
  StateSnapshot initial;

  // Vectors are stored as columns; for bras the column holds the row entries.
  std::size_t space() const { return payload.rows(); }
  bool is_vector() const { return form == Form::vector; }
  // Vector payload as a column regardless of the bra/ket flag.
  ComplexMatrix ket() const;
  // Density matrix of the state (outer product for vectors).
  ComplexMatrix density() const;
};

struct BuildOptions {
  Form form = Form::vector;
  Kind kind = Kind::pure;
  int dim = 2;
  int num_systems = 0;  // 0 infers from the spec
  std::optional<double> norm;
  bool conjugate = false;
  std::string label;
};

QuantumState build_state(const StateSpec& spec, const BuildOptions& options = {});

// Convenience: normalized ket from weighted kets.
QuantumState ket_state(const WeightedKets& kets, int dim = 2, const std::string& label = "",
                       std::optional<double> norm = 1.0);
// Mixed or pure density state from a raw matrix.
QuantumState matrix_state(const ComplexMatrix& rho, int dim = 2, Kind kind = Kind::mixed,
                          const std::string& label = "");
// Maximally mixed state I/d^N.
QuantumState maximally_mixed(int dim, int num_systems);

QuantumState densify(const QuantumState& s);
QuantumState dagger(const QuantumState& s);
QuantumState normalize(const QuantumState& s, double norm = 1.0);
QuantumState coefficient(const QuantumState& s, Complex scalar);
QuantumState partial_trace(const QuantumState& s, const std::vector<int>& targets, bool discard = true);
QuantumState reset(const QuantumState& s);
// Tensor product of states with equal dimension; vector only if both are.
QuantumState tensor(const QuantumState& a, const QuantumState& b);

// Operators are square matrices of side d^|targets| or vectors of that length.
std::vector<double> measure_statistics(const QuantumState& s, const std::vector<ComplexMatrix>& operators,
                                       const std::vector<int>& targets = {}, bool observable = false);
QuantumState measure_state(const QuantumState& s, const std::vector<ComplexMatrix>& operators,
                           const std::vector<int>& targets = {}, bool observable = false);
std::variant<std::vector<double>, QuantumState> measure(const QuantumState& s,
                                                        const std::vector<ComplexMatrix>& operators,
                                                        const std::vector<int>& targets, bool observable,
                                                        bool statistics);

struct Postselection {
  ComplexMatrix op;  // vector or square matrix spanning consecutive systems
  int start = 0;
};

QuantumState postselect(const QuantumState& s, const std::vector<Postselection>& postselections);

Complex trace(const QuantumState& s);
double purity(const QuantumState& s);
double distance(const QuantumState& s, const QuantumState& t);
double fidelity(const QuantumState& s, const QuantumState& t);

// Logarithm base: a positive real or the state dimension.
struct LogBase {
  bool use_dim = false;
  double value = 2.0;
  static LogBase dim() { return {true, 0.0}; }
  static LogBase of(double b) { return {false, b}; }
};

double entropy(const QuantumState& s, const std::optional<QuantumState>& t = std::nullopt,
               LogBase base = LogBase::of(2.0));
double mutual(const QuantumState& s, const std::vector<int>& systems_a, const std::vector<int>& systems_b,
              LogBase base = LogBase::dim());

struct BraketOptions {
  std::string delimiter = ",";
  bool product = false;
};

std::string render_braket(const QuantumState& s, const BraketOptions& options = {});

// Six significant digits, trailing zeros trimmed.
std::string format_coefficient(Complex c);

}  // namespace qudit

#endif  // QUDIT_STATES_HPP
