#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "qudit/diagram.hpp"

using namespace qudit;

using fixture::lines_of;

TEST_CASE("every line has the same display width") {
  for (const auto& name : fixture::corpus_names()) {
    const Circuit c = fixture::corpus_circuit(name);
    for (const auto& o : fixture::render_option_sets()) {
      const auto lines = lines_of(render(c, o));
      REQUIRE(!lines.empty());
      for (const auto& line : lines) CHECK_MESSAGE(display_width(line) == display_width(lines[0]), name);
    }
  }
}

TEST_CASE("wires are continuous between the labels and the terminus") {
  for (const auto& name : fixture::corpus_names()) {
    const Circuit c = fixture::corpus_circuit(name);
    for (const auto& o : fixture::render_option_sets()) {
      const auto gaps = fixture::wire_gaps(render(c, o), compute_layout(c, o), o);
      CHECK_MESSAGE(gaps.empty(), name);
    }
  }
}

TEST_CASE("style changes glyphs but never the grid") {
  for (const auto& name : fixture::corpus_names()) {
    const Circuit c = fixture::corpus_circuit(name);
    RenderOptions o;
    const auto base = lines_of(render(c, o));
    for (Style style : {Style::unicode_alt, Style::ascii}) {
      o.style = style;
      const auto other = lines_of(render(c, o));
      REQUIRE(other.size() == base.size());
      for (std::size_t k = 0; k < base.size(); ++k) CHECK(display_width(other[k]) == display_width(base[k]));
    }
  }
}

TEST_CASE("ascii style is 7-bit clean") {
  RenderOptions o;
  o.style = Style::ascii;
  for (const auto& name : fixture::corpus_names()) {
    for (unsigned char ch : render(fixture::corpus_circuit(name), o)) CHECK(ch < 0x80);
  }
}

TEST_CASE("forced separation widens by sep.h per gap") {
  for (const auto& name : fixture::corpus_names()) {
    const Circuit c = fixture::corpus_circuit(name);
    RenderOptions o;
    o.force_separation = true;
    const Layout base = compute_layout(c, o);
    const int gaps = std::max(0, static_cast<int>(base.column_starts.size()) - 1);
    for (int k : {1, 2, 5}) {
      RenderOptions wider = o;
      wider.sep.h = o.sep.h + k;
      CHECK_MESSAGE(compute_layout(c, wider).width - base.width == k * gaps, name);
    }
    for (std::size_t j = 1; j < base.column_starts.size(); ++j) {
      CHECK(base.column_starts[j] - (base.column_starts[j - 1] + base.column_widths[j - 1]) == o.sep.h);
    }
  }
}

TEST_CASE("uniform spacing makes column midpoints equidistant") {
  for (const auto& name : fixture::corpus_names()) {
    RenderOptions o;
    o.uniform_spacing = true;
    const Layout l = compute_layout(fixture::corpus_circuit(name), o);
    std::vector<int> twice_mid;
    for (std::size_t j = 0; j < l.column_starts.size(); ++j) twice_mid.push_back(2 * l.column_starts[j] + l.column_widths[j]);
    for (std::size_t j = 2; j < twice_mid.size(); ++j) {
      CHECK_MESSAGE(twice_mid[j] - twice_mid[j - 1] == twice_mid[1] - twice_mid[0], name);
    }
  }
}

TEST_CASE("print writes exactly the rendered bytes") {
  const Circuit c = fixture::corpus_circuit("teleportation");
  std::vector<RenderOptions> sets(3);
  sets[1].style = Style::ascii;
  sets[1].force_separation = true;
  sets[2].style = Style::unicode_alt;
  sets[2].pad = {1, 1};
  sets[2].uniform_spacing = true;
  for (const auto& o : sets) {
    std::ostringstream a, b, s;
    print(a, c, o);
    CHECK(a.str() == render(c, o));
    print(b, std::get<QuantumGate>(c.gates[0]), o);
    CHECK(b.str() == render(std::get<QuantumGate>(c.gates[0]), o));
    print(s, c.inputs[0].state, o);
    CHECK(s.str() == render(c.inputs[0].state, o));
  }
}

TEST_CASE("single NOT in ascii is three lines with the label in the middle") {
  RenderOptions o;
  o.style = Style::ascii;
  const auto lines = lines_of(render(fixture::single_not(), o));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].find("|N|") != std::string::npos);
  CHECK(lines[0].size() == lines[2].size());
  CHECK(lines[1].size() == lines[0].size());
}

TEST_CASE("CNOT draws a control dot linked to the target box") {
  const Circuit c = fixture::cnot_circuit();
  const Layout l = compute_layout(c);
  const auto lines = lines_of(render(c));
  const GlyphTable& g = glyphs(Style::unicode);
  const auto control_row = code_points(lines[static_cast<std::size_t>(l.wire_rows[0])]);
  int dot = -1;
  for (std::size_t x = 0; x < control_row.size(); ++x) {
    if (control_row[x] == g.control) dot = static_cast<int>(x);
  }
  REQUIRE(dot >= 0);
  const auto target_row = code_points(lines[static_cast<std::size_t>(l.wire_rows[1])]);
  CHECK(target_row[static_cast<std::size_t>(dot)] == "N");
  int links = 0;
  for (int r = l.wire_rows[0] + 1; r < l.wire_rows[1]; ++r) {
    const auto cells = code_points(lines[static_cast<std::size_t>(r)]);
    for (std::size_t x = 0; x < cells.size(); ++x) {
      if (cells[x] == g.vertical || cells[x] == g.link_top) {
        CHECK(static_cast<int>(x) == dot);
        ++links;
      }
    }
  }
  CHECK(links >= 1);
}

TEST_CASE("empty circuit draws parallel wires only") {
  const Circuit c = make_circuit(2, 2, {ket_state({{1.0, {0, 0}}})}, {});
  const Layout l = compute_layout(c);
  CHECK(l.column_starts.empty());
  const auto lines = lines_of(render(c));
  const GlyphTable& g = glyphs(Style::unicode);
  for (const auto& line : lines) CHECK(line.find(g.top_left) == std::string::npos);
  for (int row : l.wire_rows) CHECK(lines[static_cast<std::size_t>(row)].find(g.wire) != std::string::npos);
}

TEST_CASE("frozen goldens") {
  for (const auto& g : fixture::goldens()) {
    CHECK_MESSAGE(render(g.circuit, g.options) == fixture::golden_text(g.file), g.file);
  }
}
