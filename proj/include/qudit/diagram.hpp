#ifndef QUDIT_DIAGRAM_HPP
#define QUDIT_DIAGRAM_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qudit/circuits.hpp"

namespace qudit {

enum class Style { unicode, unicode_alt, ascii };

struct Spacing {
  int h = 0;
  int v = 0;
};

struct RenderOptions {
  Spacing pad{0, 0};
  Spacing sep{1, 1};
  bool uniform_spacing = false;
  bool force_separation = false;
  Style style = Style::unicode;
};

struct GlyphTable {
  std::string wire;
  std::string vertical;
  std::string top_left, top_right, bottom_left, bottom_right;
  std::string edge_left, edge_right;  // box edges where a wire enters
  std::string control, anticontrol;
  std::string crossing;     // link over a foreign wire
  std::string link_top;     // link meeting a box top border
  std::string link_bottom;  // link meeting a box bottom border
  std::string swap;
  std::string trace;
  std::string bra_open, bra_close;  // postselection bracket
  std::string measurement;          // default measurement label
};

const GlyphTable& glyphs(Style style);

// Column placement of every drawn element, exposed for structural tests.
struct Layout {
  int num_systems = 0;
  int height = 0;
  int width = 0;
  std::vector<int> wire_rows;      // row of each system's wire
  int label_width = 0;             // input label area
  int wires_begin = 0;             // first column after the input labels
  std::vector<int> column_starts;  // first column of each gate column
  std::vector<int> column_widths;
  std::vector<int> element_columns;  // gate column of each circuit element
  int terminus_begin = 0;          // first column of the trace/postselection area
  int terminus_width = 0;
};

Layout compute_layout(const Circuit& c, const RenderOptions& options = {});

std::string render(const Circuit& c, const RenderOptions& options = {});
std::string render(const QuantumGate& g, const RenderOptions& options = {});
std::string render(const QuantumState& s, const RenderOptions& options = {});

// Writes exactly the bytes returned by render.
void print(std::ostream& out, const Circuit& c, const RenderOptions& options = {});
void print(std::ostream& out, const QuantumGate& g, const RenderOptions& options = {});
void print(std::ostream& out, const QuantumState& s, const RenderOptions& options = {});

// Number of code points of UTF-8 text.
std::size_t display_width(const std::string& text);
// Splits UTF-8 text into code points.
std::vector<std::string> code_points(const std::string& text);

}  // namespace qudit

#endif  // QUDIT_DIAGRAM_HPP
