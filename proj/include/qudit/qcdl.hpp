#ifndef QUDIT_QCDL_HPP
#define QUDIT_QCDL_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qudit/prescriptions.hpp"

namespace qudit::qcdl {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

// A literal or a product of literals and bound parameters. The expression
// text is kept when any factor is a name so formatting preserves it.
struct Scalar {
  Complex value = 0.0;
  std::string expression;
  bool operator==(const Scalar&) const = default;
};

struct Span {
  int first = 0;
  int last = 0;
  bool operator==(const Span&) const = default;
};

struct Term {
  Scalar coefficient;
  std::vector<int> levels;
  bool operator==(const Term&) const = default;
};

enum class SpecForm { vector, density, mixed, matrix };

struct StateLiteral {
  SpecForm form = SpecForm::vector;
  std::vector<Term> terms;                 // all forms but matrix
  std::vector<std::vector<Scalar>> rows;   // matrix form
  bool operator==(const StateLiteral&) const = default;
};

struct DimDecl {
  int dim = 2;
  bool operator==(const DimDecl&) const = default;
};

struct SystemsDecl {
  int count = 1;
  bool operator==(const SystemsDecl&) const = default;
};

struct ParamDecl {
  std::string name;
  Scalar value;
  bool operator==(const ParamDecl&) const = default;
};

struct InputDecl {
  Span span;
  StateLiteral state;
  std::optional<Scalar> norm;
  std::optional<std::string> label;
  bool operator==(const InputDecl&) const = default;
};

struct GateDecl {
  std::string kind;  // upper case
  std::optional<std::vector<int>> targets, controls, anticontrols;
  std::optional<int> index, axis, shift;
  std::optional<Scalar> angle, phase, exponent, coefficient;
  std::optional<std::vector<std::pair<int, Scalar>>> entries;
  std::optional<std::vector<StateLiteral>> operators;
  std::optional<std::vector<std::vector<Scalar>>> matrix;
  std::optional<bool> observable, conjugate, exponentiation, composite, reverse;
  std::optional<std::string> label, family;
  bool operator==(const GateDecl&) const = default;
};

struct TraceDecl {
  std::vector<int> indices;
  bool operator==(const TraceDecl&) const = default;
};

struct PostselectDecl {
  Span span;
  StateLiteral state;
  std::optional<std::string> label;
  bool operator==(const PostselectDecl&) const = default;
};

struct CtcDecl {
  std::vector<int> respecting;
  std::vector<int> violating;
  bool operator==(const CtcDecl&) const = default;
};

using Statement = std::variant<DimDecl, SystemsDecl, ParamDecl, InputDecl, GateDecl, TraceDecl, PostselectDecl, CtcDecl>;

struct Document {
  std::vector<Statement> statements;
  bool operator==(const Document&) const = default;

  int dim() const;
  int num_systems() const;
  std::optional<CtcDecl> ctc() const;
};

Document parse(const std::string& source);
// Canonical text; parse(format(d)) == d for every parsed document.
std::string format(const Document& doc);

Circuit build_circuit(const Document& doc);
// Throws GateSpecError when the document has no ctc line.
CtcCircuit build_ctc(const Document& doc);

QuantumState build_literal(const StateLiteral& literal, int dim, std::optional<double> norm,
                           const std::string& label);

enum class OutputFormat { braket, matrix, csv };

// Matrix format prints one row per line of space-separated "a+bi" values;
// csv prints `row,col,real,imag` then one row-major line per entry.
std::string format_matrix(const ComplexMatrix& m, OutputFormat format);
// Output text of the simulate, dctc and pctc commands, newline terminated.
std::string format_state(const QuantumState& s, OutputFormat format);

}  // namespace qudit::qcdl

#endif  // QUDIT_QCDL_HPP
