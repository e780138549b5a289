#include "qudit/diagram.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace qudit {

namespace {

struct Piece {
  enum class Kind { box, swap } kind = Kind::box;
  int first = 0;  // first system of the box or first swap wire
  int last = 0;   // last system of the box or second swap wire
  std::string label;
  std::vector<int> controls;
  std::vector<int> anticontrols;
};

struct Element {
  std::vector<Piece> pieces;
  int first = 0;
  int last = 0;
  int width = 1;
};

std::string ascii_of(const std::string& text) {
  static const std::map<std::string, std::string> table = {
      {"⟩", ">"}, {"⟨", "<"}, {"†", "+"}, {"⊗", "x"}, {"√", "v"}, {"′", "'"}, {"·", "."}};
  std::string out;
  for (const auto& cp : code_points(text)) {
    if (cp.size() == 1) {
      out += cp;
    } else if (auto it = table.find(cp); it != table.end()) {
      out += it->second;
    } else {
      out += '?';
    }
  }
  return out;
}

std::string styled(const std::string& text, Style style) { return style == Style::ascii ? ascii_of(text) : text; }

int text_width(const std::string& text) { return static_cast<int>(display_width(text)); }

void collect(const QuantumGate& g, std::vector<Piece>& out) {
  if (!g.parts.empty() && !g.merged) {
    for (const auto& p : g.parts) collect(p, out);
    return;
  }
  Piece p;
  p.controls = g.controls;
  p.anticontrols = g.anticontrols;
  p.first = g.targets.front();
  p.last = g.targets.back();
  p.label = g.label;
  if (g.family == kFamilySwap && g.targets.size() == 2) p.kind = Piece::Kind::swap;
  out.push_back(p);
}

int box_width(const Piece& p, const RenderOptions& o) {
  return p.kind == Piece::Kind::swap ? 1 : text_width(p.label) + 2 * o.pad.h + 2;
}

Element element_of(const CircuitElement& e, const RenderOptions& o) {
  Element el;
  if (const auto* g = std::get_if<QuantumGate>(&e)) {
    collect(*g, el.pieces);
  } else {
    const auto& m = std::get<MeasurementGate>(e);
    Piece p;
    p.first = *std::min_element(m.targets.begin(), m.targets.end());
    p.last = *std::max_element(m.targets.begin(), m.targets.end());
    p.label = m.label.empty() ? glyphs(o.style).measurement : m.label;
    el.pieces.push_back(p);
  }
  el.first = el.pieces.front().first;
  el.last = el.pieces.front().last;
  el.width = 1;
  for (const auto& p : el.pieces) {
    el.first = std::min(el.first, p.first);
    el.last = std::max(el.last, p.last);
    for (int s : p.controls) el.first = std::min(el.first, s), el.last = std::max(el.last, s);
    for (int s : p.anticontrols) el.first = std::min(el.first, s), el.last = std::max(el.last, s);
    el.width = std::max(el.width, box_width(p, o));
  }
  return el;
}

std::string input_label(const QuantumState& s) {
  if (s.is_vector()) {
    const std::string label = s.label.empty() ? "ψ" : s.label;
    return s.conjugated ? "⟨" + label + "|" : "|" + label + "⟩";
  }
  return s.label.empty() ? "ρ" : s.label;
}

std::vector<std::string> terminus_texts(const Circuit& c, const GlyphTable& gt) {
  std::vector<std::string> out(static_cast<std::size_t>(c.num_systems));
  for (int t : c.traces) out[static_cast<std::size_t>(t)] = gt.trace;
  for (const auto& p : c.postselections) {
    const std::string label = p.state.label.empty() ? "φ" : p.state.label;
    for (int k = p.start; k < p.start + p.state.num_systems; ++k) {
      out[static_cast<std::size_t>(k)] = gt.bra_open + label + gt.bra_close;
    }
  }
  return out;
}

std::vector<std::string> input_labels(const Circuit& c) {
  std::vector<std::string> out(static_cast<std::size_t>(c.num_systems));
  for (const auto& in : c.inputs)
    for (int k = in.start; k < in.start + in.state.num_systems && k < c.num_systems; ++k) {
      out[static_cast<std::size_t>(k)] = input_label(in.state);
    }
  return out;
}

struct Plan {
  Layout layout;
  std::vector<Element> elements;
  std::vector<std::string> labels;
  std::vector<std::string> termini;
};

Plan plan(const Circuit& c, const RenderOptions& o) {
  Plan plan;
  Layout& L = plan.layout;
  const GlyphTable& gt = glyphs(o.style);
  const int pv = std::max(0, o.pad.v);
  const int sv = std::max(0, o.sep.v);
  const int sh = std::max(0, o.sep.h);
  const int block = 3 + 2 * pv;
  L.num_systems = c.num_systems;
  L.height = c.num_systems * block + (c.num_systems - 1) * sv;
  for (int s = 0; s < c.num_systems; ++s) L.wire_rows.push_back(s * (block + sv) + 1 + pv);

  for (const auto& raw : input_labels(c)) plan.labels.push_back(styled(raw, o.style));
  for (const auto& l : plan.labels) L.label_width = std::max(L.label_width, text_width(l));
  for (const auto& raw : terminus_texts(c, gt)) plan.termini.push_back(styled(raw, o.style));
  for (const auto& t : plan.termini) L.terminus_width = std::max(L.terminus_width, text_width(t));
  for (const auto& e : c.gates) plan.elements.push_back(element_of(e, o));

  std::vector<int> widths;
  if (o.force_separation) {
    for (std::size_t k = 0; k < plan.elements.size(); ++k) {
      L.element_columns.push_back(static_cast<int>(k));
      widths.push_back(plan.elements[k].width);
    }
  } else {
    std::vector<int> last(static_cast<std::size_t>(c.num_systems), -1);
    for (const auto& el : plan.elements) {
      int col = 0;
      for (int s = el.first; s <= el.last; ++s) col = std::max(col, last[static_cast<std::size_t>(s)] + 1);
      for (int s = el.first; s <= el.last; ++s) last[static_cast<std::size_t>(s)] = col;
      if (col >= static_cast<int>(widths.size())) widths.push_back(1);
      widths[static_cast<std::size_t>(col)] = std::max(widths[static_cast<std::size_t>(col)], el.width);
      L.element_columns.push_back(col);
    }
    if (o.uniform_spacing && !widths.empty()) {
      const int w = *std::max_element(widths.begin(), widths.end());
      std::fill(widths.begin(), widths.end(), w);
    }
  }
  L.wires_begin = L.label_width;
  int x = L.wires_begin + 1;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (k) x += sh;
    L.column_starts.push_back(x);
    L.column_widths.push_back(widths[k]);
    x += widths[k];
  }
  L.terminus_begin = x + 1;
  L.width = L.terminus_begin + L.terminus_width;
  return plan;
}

class Canvas {
 public:
  Canvas(int height, int width)
      : width_(width), cells_(static_cast<std::size_t>(height), std::vector<std::string>(static_cast<std::size_t>(width), " ")) {}

  void set(int row, int col, const std::string& glyph) {
    if (row < 0 || col < 0 || row >= static_cast<int>(cells_.size()) || col >= width_) return;
    cells_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = glyph;
  }

  void write(int row, int col, const std::string& text) {
    for (const auto& cp : code_points(text)) set(row, col++, cp);
  }

  std::string str() const {
    std::string out;
    for (const auto& row : cells_) {
      for (const auto& cell : row) out += cell;
      out += '\n';
    }
    return out;
  }

 private:
  int width_;
  std::vector<std::vector<std::string>> cells_;
};

void draw_piece(Canvas& canvas, const Piece& p, int center, const Layout& L, const RenderOptions& o) {
  const GlyphTable& gt = glyphs(o.style);
  const int pv = std::max(0, o.pad.v);
  auto wire_row = [&](int s) { return L.wire_rows[static_cast<std::size_t>(s)]; };
  const bool boxed = p.kind == Piece::Kind::box;
  const int box_top = boxed ? wire_row(p.first) - 1 - pv : wire_row(p.first);
  const int box_bottom = boxed ? wire_row(p.last) + 1 + pv : wire_row(p.last);

  std::vector<int> marks;
  for (int s : p.controls) marks.push_back(s);
  for (int s : p.anticontrols) marks.push_back(s);
  int top = box_top;
  int bottom = box_bottom;
  for (int s : marks) {
    top = std::min(top, wire_row(s));
    bottom = std::max(bottom, wire_row(s));
  }
  for (int r = top; r <= bottom; ++r) {
    const bool on_wire = std::find(L.wire_rows.begin(), L.wire_rows.end(), r) != L.wire_rows.end();
    canvas.set(r, center, on_wire ? gt.crossing : gt.vertical);
  }

  if (boxed) {
    const int bw = box_width(p, o);
    const int x0 = center - bw / 2;
    const int x1 = x0 + bw - 1;
    for (int r = box_top; r <= box_bottom; ++r) {
      const bool on_wire = std::find(L.wire_rows.begin(), L.wire_rows.end(), r) != L.wire_rows.end();
      for (int x = x0 + 1; x < x1; ++x) canvas.set(r, x, r == box_top || r == box_bottom ? gt.wire : " ");
      if (r == box_top) {
        canvas.set(r, x0, gt.top_left);
        canvas.set(r, x1, gt.top_right);
      } else if (r == box_bottom) {
        canvas.set(r, x0, gt.bottom_left);
        canvas.set(r, x1, gt.bottom_right);
      } else {
        canvas.set(r, x0, on_wire ? gt.edge_left : gt.vertical);
        canvas.set(r, x1, on_wire ? gt.edge_right : gt.vertical);
      }
    }
    const std::string label = styled(p.label, o.style);
    const int inner = bw - 2;
    canvas.write((box_top + box_bottom) / 2, x0 + 1 + (inner - text_width(label)) / 2, label);
    if (top < box_top) canvas.set(box_top, center, gt.link_top);
    if (bottom > box_bottom) canvas.set(box_bottom, center, gt.link_bottom);
  } else {
    canvas.set(wire_row(p.first), center, gt.swap);
    canvas.set(wire_row(p.last), center, gt.swap);
  }
  for (int s : p.controls) canvas.set(wire_row(s), center, gt.control);
  for (int s : p.anticontrols) canvas.set(wire_row(s), center, gt.anticontrol);
}

}  // namespace

const GlyphTable& glyphs(Style style) {
  static const GlyphTable unicode{"─", "│", "┌", "┐", "└", "┘", "┤", "├", "●", "○", "┼", "┴", "┬", "×", "╳", "⟨", "|", "M"};
  static const GlyphTable alt{"━", "┃", "┏", "┓", "┗", "┛", "┫", "┣", "◆", "◇", "╋", "┻", "┳", "✕", "╳", "⟨", "|", "M"};
  static const GlyphTable ascii{"-", "|", "+", "+", "+", "+", "|", "|", "*", "o", "+", "+", "+", "x", "#", "<", "|", "M"};
  switch (style) {
    case Style::unicode: return unicode;
    case Style::unicode_alt: return alt;
    case Style::ascii: return ascii;
  }
  return unicode;
}

std::vector<std::string> code_points(const std::string& text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const unsigned char lead = static_cast<unsigned char>(text[i]);
    std::size_t n = 1;
    if (lead >= 0xF0) {
      n = 4;
    } else if (lead >= 0xE0) {
      n = 3;
    } else if (lead >= 0xC0) {
      n = 2;
    }
    n = std::min(n, text.size() - i);
    out.push_back(text.substr(i, n));
    i += n;
  }
  return out;
}

std::size_t display_width(const std::string& text) { return code_points(text).size(); }

Layout compute_layout(const Circuit& c, const RenderOptions& options) { return plan(c, options).layout; }

std::string render(const Circuit& c, const RenderOptions& options) {
  const Plan p = plan(c, options);
  const Layout& L = p.layout;
  const GlyphTable& gt = glyphs(options.style);
  Canvas canvas(L.height, L.width);
  for (int s = 0; s < c.num_systems; ++s) {
    const int row = L.wire_rows[static_cast<std::size_t>(s)];
    const std::string& label = p.labels[static_cast<std::size_t>(s)];
    canvas.write(row, L.label_width - text_width(label), label);
    const std::string& end = p.termini[static_cast<std::size_t>(s)];
    const int stop = end.empty() ? L.width : L.terminus_begin;
    for (int x = L.wires_begin; x < stop; ++x) canvas.set(row, x, gt.wire);
    if (!end.empty()) canvas.write(row, L.terminus_begin, end);
  }
  for (std::size_t k = 0; k < p.elements.size(); ++k) {
    const auto col = static_cast<std::size_t>(L.element_columns[k]);
    const int center = L.column_starts[col] + L.column_widths[col] / 2;
    for (const auto& piece : p.elements[k].pieces) draw_piece(canvas, piece, center, L, options);
  }
  return canvas.str();
}

std::string render(const QuantumGate& g, const RenderOptions& options) {
  Circuit c;
  c.dim = g.dim;
  c.num_systems = g.num_systems;
  c.gates.push_back(g);
  return render(c, options);
}

std::string render(const QuantumState& s, const RenderOptions& options) {
  Circuit c;
  c.dim = s.dim;
  c.num_systems = std::max(1, s.num_systems);
  c.inputs.push_back({s, 0});
  return render(c, options);
}

void print(std::ostream& out, const Circuit& c, const RenderOptions& options) { out << render(c, options); }
void print(std::ostream& out, const QuantumGate& g, const RenderOptions& options) { out << render(g, options); }
void print(std::ostream& out, const QuantumState& s, const RenderOptions& options) { out << render(s, options); }

}  // namespace qudit
