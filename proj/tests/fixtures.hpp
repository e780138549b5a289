// Random circuits and small builders shared by the unit and acceptance tests.
#ifndef QUDIT_TESTS_FIXTURES_HPP
#define QUDIT_TESTS_FIXTURES_HPP

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qudit/circuits.hpp"
#include "qudit/diagram.hpp"
#include "qudit/gates.hpp"
#include "qudit/prescriptions.hpp"
#include "qudit/qcdl.hpp"
#include "qudit/states.hpp"

namespace fixture {

using namespace qudit;

inline QuantumGate custom(const oracle::CMat& core, int dim, int num_systems, std::vector<int> targets,
                          std::vector<int> controls = {}, std::vector<int> anticontrols = {}) {
  QuantumGate g;
  g.dim = dim;
  g.num_systems = num_systems;
  g.targets = std::move(targets);
  g.controls = std::move(controls);
  g.anticontrols = std::move(anticontrols);
  g.core = oracle::from_eigen(core);
  return g;
}

// Random unitary gate on one or two consecutive targets with an optional
// control or anticontrol elsewhere.
inline QuantumGate random_gate(int dim, int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 2);
  const int span = n >= 2 && coin(rng) == 0 ? 2 : 1;
  const int first = std::uniform_int_distribution<int>(0, n - span)(rng);
  std::vector<int> targets;
  for (int k = 0; k < span; ++k) targets.push_back(first + k);
  std::vector<int> controls, anticontrols;
  const int node = pick(rng);
  if (node < first || node >= first + span) {
    const int kind = coin(rng);
    if (kind == 1) controls.push_back(node);
    if (kind == 2) anticontrols.push_back(node);
  }
  const auto side = oracle::ipow(dim, span);
  return custom(oracle::random_unitary(side, rng), dim, n, targets, controls, anticontrols);
}

inline std::vector<CircuitElement> random_gates(int dim, int n, int count, std::mt19937& rng) {
  std::vector<CircuitElement> out;
  for (int k = 0; k < count; ++k) out.emplace_back(random_gate(dim, n, rng));
  return out;
}

inline QuantumState random_pure(int dim, int n, std::mt19937& rng) {
  BuildOptions o;
  o.dim = dim;
  o.num_systems = n;
  return build_state(oracle::from_eigen(oracle::random_ket(oracle::ipow(dim, n), rng)), o);
}

inline QuantumState random_mixed(int dim, int n, std::mt19937& rng) {
  BuildOptions o;
  o.dim = dim;
  o.num_systems = n;
  o.form = Form::matrix;
  o.kind = Kind::mixed;
  return build_state(oracle::from_eigen(oracle::random_density(oracle::ipow(dim, n), rng)), o);
}

// Complete set of count Kraus operators on one system from a random isometry.
inline std::vector<ComplexMatrix> random_kraus(int dim, int count, std::mt19937& rng) {
  const oracle::CMat v = oracle::random_unitary(static_cast<Eigen::Index>(dim) * count, rng).leftCols(dim);
  std::vector<ComplexMatrix> out;
  for (int k = 0; k < count; ++k) out.push_back(oracle::from_eigen(v.middleRows(k * dim, dim)));
  return out;
}

inline QuantumGate cnot(int control, int target, int n) {
  CatalogParams p;
  p.targets = {target};
  p.controls = {control};
  p.num_systems = n;
  return catalog(GateKind::not_gate, p);
}

inline CtcCircuit ctc(int dim, int n, std::vector<QuantumState> inputs, std::vector<CircuitElement> gates,
                      std::vector<int> respecting, std::vector<int> violating) {
  CtcCircuit c;
  c.base = make_circuit(dim, n, inputs, std::move(gates));
  c.respecting = std::move(respecting);
  c.violating = std::move(violating);
  return c;
}

inline CatalogParams on(std::vector<int> targets, std::vector<int> controls, int n, int dim = 2) {
  CatalogParams p;
  p.dim = dim;
  p.targets = std::move(targets);
  p.controls = std::move(controls);
  p.num_systems = n;
  return p;
}

// Respecting input rho on system 0 swapped with the violating system 1.
inline CtcCircuit ctc_swap(const QuantumState& rho) {
  return ctc(2, 2, {rho}, {catalog(GateKind::swap, on({0, 1}, {}, 2))}, {0}, {1});
}

// Violating system 0 as the target of a CNOT controlled by respecting system 1.
inline CtcCircuit ctc_cnot(const QuantumState& rho) {
  CtcCircuit c = ctc(2, 2, {}, {cnot(1, 0, 2)}, {1}, {0});
  c.base.inputs.push_back({rho, 1});
  return c;
}

inline CtcCircuit grandfather(const QuantumState& rho) {
  return ctc(2, 2, {rho}, {cnot(1, 0, 2), catalog(GateKind::swap, on({0, 1}, {}, 2))}, {0}, {1});
}

inline CtcCircuit unproven() {
  const QuantumState zero = ket_state({{1.0, {0}}});
  return ctc(2, 3, {zero, zero}, {cnot(2, 0, 3), cnot(0, 1, 3), catalog(GateKind::swap, on({1, 2}, {}, 3))},
             {0, 1}, {2});
}

// Qutrit clock swap that leaves the vacuum level 0 of either system alone,
// followed by a phase of exp(-i pi t) on level 2 of the violating system.
inline CtcCircuit billiard(double t) {
  ComplexMatrix s = ComplexMatrix::identity(9);
  s(5, 5) = 0.0;
  s(7, 7) = 0.0;
  s(5, 7) = 1.0;
  s(7, 5) = 1.0;
  CatalogParams sp = on({0, 1}, {}, 2, 3);
  sp.matrix = s;
  CatalogParams rp = on({1}, {}, 2, 3);
  rp.entries = {{2, -std::numbers::pi * t}};
  rp.exponentiation = true;
  return ctc(3, 2, {ket_state({{1.0, {1}}, {1.0, {2}}}, 3)},
             {catalog(GateKind::custom, sp), catalog(GateKind::diagonal, rp)}, {0}, {1});
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Stems of the corpus files in sorted order.
inline std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(QUDIT_CORPUS_DIR)) {
    if (entry.path().extension() == ".qcdl") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::filesystem::path corpus_path(const std::string& name) {
  return std::filesystem::path(QUDIT_CORPUS_DIR) / (name + ".qcdl");
}

inline qcdl::Document corpus_document(const std::string& name) { return qcdl::parse(read_file(corpus_path(name))); }

inline Circuit corpus_circuit(const std::string& name) { return qcdl::build_circuit(corpus_document(name)); }

struct CommandResult {
  int status = -1;
  std::string output;
};

// Runs the command line tool with the given arguments, capturing standard
// output and discarding standard error.
inline CommandResult run_cli(const std::string& arguments) {
  const std::string command = std::string("\"") + QUDIT_CLI_PATH + "\" " + arguments + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot start " + command);
  CommandResult out;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  out.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Style, pad, sep and spacing-flag combinations exercised by the renderer checks.
inline std::vector<RenderOptions> render_option_sets() {
  std::vector<RenderOptions> out;
  for (Style style : {Style::unicode, Style::unicode_alt, Style::ascii}) {
    for (Spacing pad : {Spacing{0, 0}, Spacing{1, 1}}) {
      for (Spacing sep : {Spacing{1, 1}, Spacing{3, 0}}) {
        for (int flags = 0; flags < 3; ++flags) {
          RenderOptions o;
          o.style = style;
          o.pad = pad;
          o.sep = sep;
          o.force_separation = flags == 1;
          o.uniform_spacing = flags == 2;
          out.push_back(o);
        }
      }
    }
  }
  return out;
}

inline bool equal_widths(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) return false;
  return std::all_of(lines.begin(), lines.end(),
                     [&](const std::string& l) { return display_width(l) == display_width(lines[0]); });
}

// Columns on a wire row that are neither a wire glyph, a node, a crossing nor
// part of a box, between the input labels and the terminus.
inline std::vector<int> wire_gaps(const std::string& text, const Layout& layout, const RenderOptions& options) {
  const GlyphTable& g = glyphs(options.style);
  const std::set<std::string> allowed = {g.wire, g.control, g.anticontrol, g.crossing, g.swap};
  const auto lines = lines_of(text);
  std::vector<int> gaps;
  for (int row : layout.wire_rows) {
    const auto cells = code_points(lines[static_cast<std::size_t>(row)]);
    bool in_box = false;
    for (int x = layout.wires_begin; x < layout.terminus_begin; ++x) {
      const std::string& cell = cells[static_cast<std::size_t>(x)];
      if (in_box) {
        if (cell == g.edge_right) in_box = false;
        continue;
      }
      if (cell == g.edge_left) {
        in_box = true;
        continue;
      }
      if (!allowed.contains(cell)) gaps.push_back(x);
    }
  }
  return gaps;
}

// Line count and per-line display widths.
inline std::vector<std::size_t> grid_shape(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& line : lines_of(text)) out.push_back(display_width(line));
  return out;
}

struct Golden {
  std::string file;
  Circuit circuit;
  RenderOptions options;
};

inline Circuit single_not() {
  return make_circuit(2, 1, {ket_state({{1.0, {0}}}, 2, "0")}, {catalog(GateKind::not_gate)});
}

inline Circuit cnot_circuit() { return make_circuit(2, 2, {ket_state({{1.0, {0, 0}}}, 2, "0,0")}, {cnot(0, 1, 2)}); }

// Frozen renderings in the golden directory and the circuits they depict.
inline std::vector<Golden> goldens() {
  RenderOptions ascii;
  ascii.style = Style::ascii;
  RenderOptions forced;
  forced.force_separation = true;
  RenderOptions alt;
  alt.style = Style::unicode_alt;
  alt.pad = {1, 0};
  return {
      {"not_ascii.txt", single_not(), ascii},
      {"cnot_unicode.txt", cnot_circuit(), {}},
      {"teleportation_forced.txt", corpus_circuit("teleportation"), forced},
      {"grandfather_unicode.txt", corpus_circuit("grandfather"), {}},
      {"bell_postselect_ascii.txt", corpus_circuit("bell_postselect"), ascii},
      {"catalog_qutrit_alt.txt", corpus_circuit("catalog_qutrit"), alt},
  };
}

inline std::string golden_text(const std::string& file) {
  return read_file(std::filesystem::path(QUDIT_GOLDEN_DIR) / file);
}

}  // namespace fixture

#endif  // QUDIT_TESTS_FIXTURES_HPP
