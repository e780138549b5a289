#include "qudit/qcdl.hpp"

#include <fmt/format.h>
#include <fmt/printf.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace qudit::qcdl {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(fmt::format("line {}, column {}: {}", line, column, message)),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

const std::set<std::string> kGateKinds = {"NOT",   "PAULI",     "GELLMANN", "HADAMARD", "ROTATION",    "PHASE",
                                          "DIAGONAL", "SUMMATION", "SWAP",     "FOURIER",  "MEASUREMENT", "CUSTOM"};

std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::string format_real(double x) { return fmt::sprintf("%.17g", x); }

std::string format_number(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  if (z.real() == 0.0) return format_real(z.imag()) + "i";
  return format_real(z.real()) + fmt::sprintf("%+.17g", z.imag()) + "i";
}

std::string format_scalar(const Scalar& s) { return s.expression.empty() ? format_number(s.value) : s.expression; }

struct State {
  int dim = 2;
  std::optional<int> systems;
  std::map<std::string, Complex> params;
};

class LineParser {
 public:
  LineParser(const std::string& text, int line, State& state) : text_(text), line_(line), state_(state) {}

  Statement statement() {
    const std::string keyword = word("a declaration keyword");
    Statement out;
    if (keyword == "dim") {
      const int col = column();
      const int d = integer();
      if (d < 2) fail(col, "dimension must be at least 2");
      state_.dim = d;
      out = DimDecl{d};
    } else if (keyword == "systems") {
      const int col = column();
      const int n = integer();
      if (n < 1) fail(col, "system count must be positive");
      state_.systems = n;
      out = SystemsDecl{n};
    } else if (keyword == "param") {
      const int col = column();
      ParamDecl p;
      p.name = word("a parameter name");
      if (p.name == "pi" || p.name == "i") fail(col, "'" + p.name + "' is reserved");
      if (state_.params.count(p.name)) fail(col, "parameter '" + p.name + "' already bound");
      expect('=');
      p.value = scalar();
      state_.params[p.name] = p.value.value;
      out = p;
    } else if (keyword == "input") {
      InputDecl in;
      in.span = span();
      in.state = state_literal(in.span);
      while (!at_end()) {
        const int col = column();
        const std::string key = word("'norm' or 'label'");
        if (key == "norm" && !in.norm) {
          in.norm = scalar();
        } else if (key == "label" && !in.label) {
          in.label = string_literal();
        } else {
          fail(col, "unexpected '" + key + "'");
        }
      }
      out = in;
    } else if (keyword == "gate") {
      out = gate();
    } else if (keyword == "trace") {
      TraceDecl t;
      t.indices = index_list(true);
      out = t;
    } else if (keyword == "postselect") {
      PostselectDecl p;
      p.span = span();
      p.state = state_literal(p.span);
      if (!at_end()) {
        const int col = column();
        if (word("'label'") != "label") fail(col, "expected 'label'");
        p.label = string_literal();
      }
      out = p;
    } else if (keyword == "ctc") {
      CtcDecl c;
      keyword_expect("respecting");
      c.respecting = index_list(true);
      keyword_expect("violating");
      c.violating = index_list(true);
      out = c;
    } else {
      fail(1, "unknown declaration '" + keyword + "'");
    }
    skip_ws();
    if (!at_end()) fail(column(), "unexpected trailing text");
    return out;
  }

 private:
  [[noreturn]] void fail(int col, const std::string& message) const { throw ParseError(line_, col, message); }

  int column() {
    skip_ws();
    return static_cast<int>(pos_) + 1;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char ch) {
    if (peek() != ch) return false;
    ++pos_;
    return true;
  }

  void expect(char ch) {
    const int col = column();
    if (!accept(ch)) fail(col, fmt::format("expected '{}'", ch));
  }

  bool accept_range() {
    skip_ws();
    if (text_.compare(pos_, 2, "..") != 0) return false;
    pos_ += 2;
    return true;
  }

  std::string word(const std::string& what) {
    const int col = column();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      pos_ = start;
      fail(col, "expected " + what);
    }
    return text_.substr(start, pos_ - start);
  }

  void keyword_expect(const std::string& kw) {
    const int col = column();
    if (at_end()) fail(col, "expected '" + kw + "'");
    const std::size_t save = pos_;
    std::string got;
    try {
      got = word("'" + kw + "'");
    } catch (const ParseError&) {
      pos_ = save;
      fail(col, "expected '" + kw + "'");
    }
    if (got != kw) fail(col, "expected '" + kw + "', found '" + got + "'");
  }

  int integer() {
    const int col = column();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || pos_ == start) {
      pos_ = start;
      fail(col, "expected an integer");
    }
    return value;
  }

  int index(bool check_range) {
    const int col = column();
    const int k = integer();
    if (check_range) {
      if (!state_.systems) fail(col, "'systems' must be declared before system indices");
      if (k < 0 || k >= *state_.systems) fail(col, "system index " + std::to_string(k) + " out of range");
    }
    return k;
  }

  std::vector<int> index_list(bool systems) {
    expect('[');
    std::vector<int> out;
    if (accept(']')) return out;
    do {
      out.push_back(systems ? index(true) : integer());
    } while (accept(','));
    expect(']');
    return out;
  }

  Span span() {
    expect('[');
    Span s;
    s.first = index(true);
    s.last = s.first;
    if (accept_range()) {
      const int col = column();
      s.last = index(true);
      if (s.last < s.first) fail(col, "span end precedes its start");
    }
    expect(']');
    return s;
  }

  // Unsigned real literal at the cursor, or nullopt without consuming input.
  std::optional<double> real_literal() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
    }
    if (p == start || (p == start + 1 && text_[start] == '.')) return std::nullopt;
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      const std::size_t digits = q;
      while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
      if (q > digits) p = q;
    }
    double value = 0.0;
    std::from_chars(text_.data() + start, text_.data() + p, value);
    pos_ = p;
    return value;
  }

  bool imaginary_suffix() {
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Number literal with optional imaginary suffix or "a+bi" tail.
  std::optional<Complex> number() {
    const auto re = real_literal();
    if (!re) return std::nullopt;
    if (imaginary_suffix()) return Complex(0.0, *re);
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const std::size_t save = pos_;
      const double sign = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        const auto im = real_literal();
        if (im && imaginary_suffix()) return Complex(*re, sign * *im);
      }
      pos_ = save;
    }
    return Complex(*re, 0.0);
  }

  // scalar := ["-"] factor (("*" | "/") factor)*
  Scalar scalar() {
    const int col = column();
    bool negative = false;
    if (accept('-')) negative = true;
    Complex value = 1.0;
    std::string text = negative ? "-" : "";
    bool named = false;
    char op = '*';
    while (true) {
      const int fcol = column();
      Complex factor;
      std::string piece;
      if (auto n = number()) {
        factor = *n;
        piece = format_number(*n);
        if (factor.real() != 0.0 && factor.imag() != 0.0) piece = "(" + piece + ")";
      } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        const std::string name = word("a number or parameter");
        named = true;
        piece = name;
        if (name == "pi") {
          factor = std::numbers::pi;
        } else if (name == "i") {
          factor = Complex(0.0, 1.0);
        } else if (auto it = state_.params.find(name); it != state_.params.end()) {
          factor = it->second;
        } else {
          fail(fcol, "unbound parameter '" + name + "'");
        }
      } else if (accept('(')) {
        const auto n = number();
        if (!n) fail(fcol, "expected a number");
        expect(')');
        factor = *n;
        piece = "(" + format_number(*n) + ")";
      } else {
        fail(fcol, "expected a number or parameter");
      }
      if (op == '*') {
        value *= factor;
      } else {
        if (factor == Complex(0.0)) fail(fcol, "division by zero");
        value /= factor;
      }
      text += piece;
      if (accept('*')) {
        op = '*';
        text += "*";
      } else if (accept('/')) {
        op = '/';
        text += "/";
      } else {
        break;
      }
    }
    (void)col;
    Scalar s;
    s.value = negative ? -value : value;
    if (named || text.find_first_of("*/") != std::string::npos) s.expression = text;
    return s;
  }

  std::string string_literal() {
    const int col = column();
    if (!accept('"')) fail(col, "expected a quoted string");
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail(col, "unterminated string");
    ++pos_;
    return out;
  }

  std::vector<std::vector<Scalar>> matrix_literal() {
    expect('[');
    std::vector<std::vector<Scalar>> rows;
    do {
      const int col = column();
      expect('[');
      std::vector<Scalar> row;
      do {
        row.push_back(scalar());
      } while (accept(','));
      expect(']');
      if (!rows.empty() && row.size() != rows.front().size()) fail(col, "matrix rows differ in length");
      rows.push_back(std::move(row));
    } while (accept(','));
    expect(']');
    return rows;
  }

  std::vector<Term> terms(std::size_t levels) {
    expect('{');
    std::vector<Term> out;
    do {
      Term t;
      t.coefficient = scalar();
      expect(':');
      const int col = column();
      t.levels = index_list(false);
      if (levels != 0 && t.levels.size() != levels) {
        fail(col, fmt::format("expected {} levels, found {}", levels, t.levels.size()));
      }
      for (int l : t.levels) {
        if (l < 0 || l >= state_.dim) fail(col, "level " + std::to_string(l) + " outside the dimension");
      }
      out.push_back(std::move(t));
    } while (accept(','));
    expect('}');
    return out;
  }

  std::size_t power(std::size_t n) const {
    std::size_t p = 1;
    for (std::size_t k = 0; k < n; ++k) p *= static_cast<std::size_t>(state_.dim);
    return p;
  }

  // [form] literal; span size 0 skips level-count checks.
  StateLiteral state_literal(std::optional<Span> span) {
    StateLiteral lit;
    const std::size_t count = span ? static_cast<std::size_t>(span->last - span->first + 1) : 0;
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      const int col = column();
      const std::string form = word("a state form");
      if (form == "vector") {
        lit.form = SpecForm::vector;
      } else if (form == "density") {
        lit.form = SpecForm::density;
      } else if (form == "mixed") {
        lit.form = SpecForm::mixed;
      } else if (form == "matrix") {
        lit.form = SpecForm::matrix;
      } else {
        fail(col, "unknown state form '" + form + "'");
      }
    }
    if (lit.form == SpecForm::matrix || (lit.form == SpecForm::vector && peek() == '[')) {
      const int col = column();
      const bool was_vector = lit.form == SpecForm::vector;
      lit.rows = matrix_literal();
      if (was_vector) fail(col, "a matrix literal needs the 'matrix' form");
      const std::size_t side = lit.rows.size();
      const bool square = lit.rows.front().size() == side;
      const bool column_vector = lit.rows.front().size() == 1;
      if (!square && !column_vector) fail(col, "state matrix must be square or a column");
      if (count != 0 && side != power(count)) fail(col, "matrix side does not match the span");
      return lit;
    }
    lit.terms = terms(count);
    return lit;
  }

  std::vector<std::pair<int, Scalar>> entries() {
    expect('{');
    std::vector<std::pair<int, Scalar>> out;
    do {
      const int col = column();
      const int level = integer();
      if (level < 0 || level >= state_.dim) fail(col, "level outside the dimension");
      expect(':');
      out.emplace_back(level, scalar());
    } while (accept(','));
    expect('}');
    return out;
  }

  bool boolean() {
    const int col = column();
    const std::string w = word("true or false");
    if (w == "true") return true;
    if (w == "false") return false;
    fail(col, "expected true or false");
  }

  int small_int() { return integer(); }

  GateDecl gate() {
    const int col = column();
    GateDecl g;
    g.kind = upper(word("a gate kind"));
    if (!kGateKinds.count(g.kind)) fail(col, "unknown gate kind '" + g.kind + "'");
    std::set<std::string> seen;
    while (!at_end()) {
      const int kcol = column();
      const std::string key = word("an argument name");
      if (!seen.insert(key).second) fail(kcol, "duplicate argument '" + key + "'");
      expect('=');
      if (key == "targets") {
        g.targets = index_list(true);
      } else if (key == "controls") {
        g.controls = index_list(true);
      } else if (key == "anticontrols") {
        g.anticontrols = index_list(true);
      } else if (key == "index") {
        g.index = small_int();
      } else if (key == "axis") {
        g.axis = small_int();
      } else if (key == "shift") {
        g.shift = small_int();
      } else if (key == "angle") {
        g.angle = scalar();
      } else if (key == "phase") {
        g.phase = scalar();
      } else if (key == "exponent") {
        g.exponent = scalar();
      } else if (key == "coefficient") {
        g.coefficient = scalar();
      } else if (key == "entries") {
        g.entries = entries();
      } else if (key == "operators") {
        expect('[');
        std::vector<StateLiteral> ops;
        do {
          ops.push_back(state_literal(std::nullopt));
        } while (accept(','));
        expect(']');
        g.operators = ops;
      } else if (key == "matrix") {
        g.matrix = matrix_literal();
      } else if (key == "observable") {
        g.observable = boolean();
      } else if (key == "conjugate") {
        g.conjugate = boolean();
      } else if (key == "exponentiation") {
        g.exponentiation = boolean();
      } else if (key == "composite") {
        g.composite = boolean();
      } else if (key == "reverse") {
        g.reverse = boolean();
      } else if (key == "label") {
        g.label = string_literal();
      } else if (key == "family") {
        g.family = string_literal();
      } else {
        fail(kcol, "unknown argument '" + key + "'");
      }
    }
    if (g.kind == "MEASUREMENT" && !g.operators) fail(col, "MEASUREMENT requires operators");
    if (g.kind == "CUSTOM" && !g.matrix) fail(col, "CUSTOM requires a matrix");
    if (!state_.systems) fail(col, "'systems' must be declared before gates");
    return g;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_;
  State& state_;
};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string join_ints(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + std::to_string(v[k]);
  return out + "]";
}

std::string format_span(const Span& s) {
  return s.first == s.last ? fmt::format("[{}]", s.first) : fmt::format("[{}..{}]", s.first, s.last);
}

std::string format_rows(const std::vector<std::vector<Scalar>>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < rows[r].size(); ++c) out += (c ? ", " : "") + format_scalar(rows[r][c]);
    out += "]";
  }
  return out + "]";
}

std::string format_literal(const StateLiteral& lit) {
  std::string prefix;
  switch (lit.form) {
    case SpecForm::vector: break;
    case SpecForm::density: prefix = "density "; break;
    case SpecForm::mixed: prefix = "mixed "; break;
    case SpecForm::matrix: return "matrix " + format_rows(lit.rows);
  }
  std::string out = prefix + "{";
  for (std::size_t k = 0; k < lit.terms.size(); ++k) {
    out += (k ? ", " : "") + format_scalar(lit.terms[k].coefficient) + ":" + join_ints(lit.terms[k].levels);
  }
  return out + "}";
}

struct Formatter {
  std::string operator()(const DimDecl& d) const { return fmt::format("dim {}", d.dim); }
  std::string operator()(const SystemsDecl& s) const { return fmt::format("systems {}", s.count); }
  std::string operator()(const ParamDecl& p) const { return "param " + p.name + " = " + format_scalar(p.value); }
  std::string operator()(const InputDecl& in) const {
    std::string out = "input " + format_span(in.span) + " " + format_literal(in.state);
    if (in.norm) out += " norm " + format_scalar(*in.norm);
    if (in.label) out += " label " + quoted(*in.label);
    return out;
  }
  std::string operator()(const GateDecl& g) const {
    std::string out = "gate " + g.kind;
    auto ints = [&](const char* key, const std::optional<std::vector<int>>& v) {
      if (v) out += std::string(" ") + key + "=" + join_ints(*v);
    };
    auto integer = [&](const char* key, const std::optional<int>& v) {
      if (v) out += fmt::format(" {}={}", key, *v);
    };
    auto scalar = [&](const char* key, const std::optional<Scalar>& v) {
      if (v) out += std::string(" ") + key + "=" + format_scalar(*v);
    };
    auto boolean = [&](const char* key, const std::optional<bool>& v) {
      if (v) out += std::string(" ") + key + "=" + (*v ? "true" : "false");
    };
    auto text = [&](const char* key, const std::optional<std::string>& v) {
      if (v) out += std::string(" ") + key + "=" + quoted(*v);
    };
    ints("targets", g.targets);
    ints("controls", g.controls);
    ints("anticontrols", g.anticontrols);
    integer("index", g.index);
    integer("axis", g.axis);
    integer("shift", g.shift);
    scalar("angle", g.angle);
    scalar("phase", g.phase);
    scalar("exponent", g.exponent);
    scalar("coefficient", g.coefficient);
    if (g.entries) {
      out += " entries={";
      for (std::size_t k = 0; k < g.entries->size(); ++k) {
        out += (k ? ", " : "") + std::to_string((*g.entries)[k].first) + ":" + format_scalar((*g.entries)[k].second);
      }
      out += "}";
    }
    if (g.operators) {
      out += " operators=[";
      for (std::size_t k = 0; k < g.operators->size(); ++k) out += (k ? ", " : "") + format_literal((*g.operators)[k]);
      out += "]";
    }
    if (g.matrix) out += " matrix=" + format_rows(*g.matrix);
    boolean("observable", g.observable);
    boolean("conjugate", g.conjugate);
    boolean("exponentiation", g.exponentiation);
    boolean("composite", g.composite);
    boolean("reverse", g.reverse);
    text("label", g.label);
    text("family", g.family);
    return out;
  }
  std::string operator()(const TraceDecl& t) const { return "trace " + join_ints(t.indices); }
  std::string operator()(const PostselectDecl& p) const {
    std::string out = "postselect " + format_span(p.span) + " " + format_literal(p.state);
    if (p.label) out += " label " + quoted(*p.label);
    return out;
  }
  std::string operator()(const CtcDecl& c) const {
    return "ctc respecting " + join_ints(c.respecting) + " violating " + join_ints(c.violating);
  }
};

double real_of(const Scalar& s, const char* what) {
  if (std::abs(s.value.imag()) > 1e-12) throw GateSpecError(std::string(what) + " must be real");
  return s.value.real();
}

ComplexMatrix matrix_of(const std::vector<std::vector<Scalar>>& rows) {
  ComplexMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c].value;
  return m;
}

WeightedKets kets_of(const std::vector<Term>& terms) {
  WeightedKets out;
  for (const auto& t : terms) out.push_back({t.coefficient.value, t.levels});
  return out;
}

// Unnormalized operator of a measurement literal.
ComplexMatrix operator_of(const StateLiteral& lit, int dim) {
  if (lit.form == SpecForm::matrix) return matrix_of(lit.rows);
  BuildOptions o;
  o.dim = dim;
  if (lit.form == SpecForm::vector) return build_state(kets_of(lit.terms), o).payload;
  o.form = Form::matrix;
  o.kind = lit.form == SpecForm::mixed ? Kind::mixed : Kind::pure;
  return build_state(kets_of(lit.terms), o).payload;
}

GateKind kind_of(const std::string& kind) {
  static const std::map<std::string, GateKind> table = {
      {"NOT", GateKind::not_gate},   {"PAULI", GateKind::pauli},     {"GELLMANN", GateKind::gell_mann},
      {"HADAMARD", GateKind::hadamard}, {"ROTATION", GateKind::rotation}, {"PHASE", GateKind::phase},
      {"DIAGONAL", GateKind::diagonal}, {"SUMMATION", GateKind::summation}, {"SWAP", GateKind::swap},
      {"FOURIER", GateKind::fourier}, {"CUSTOM", GateKind::custom}};
  return table.at(kind);
}

CircuitElement element_of(const GateDecl& g, int dim, int n) {
  if (g.kind == "MEASUREMENT") {
    MeasurementGate m;
    m.dim = dim;
    m.num_systems = n;
    m.targets = g.targets.value_or(std::vector<int>{0});
    m.observable = g.observable.value_or(false);
    if (g.label) m.label = *g.label;
    for (const auto& op : *g.operators) m.operators.push_back(operator_of(op, dim));
    validate(m);
    return m;
  }
  const GateKind kind = kind_of(g.kind);
  CatalogParams p;
  const bool fixed = kind == GateKind::not_gate || kind == GateKind::pauli || kind == GateKind::rotation;
  if (!fixed || dim != 2) p.dim = dim;
  p.num_systems = n;
  if (g.targets) p.targets = *g.targets;
  if (g.controls) p.controls = *g.controls;
  if (g.anticontrols) p.anticontrols = *g.anticontrols;
  if (g.index) p.index = *g.index;
  if (g.axis) p.axis = *g.axis;
  if (g.shift) p.shift = *g.shift;
  if (g.angle) p.angle = real_of(*g.angle, "angle");
  if (g.phase) p.phase = g.phase->value;
  if (g.exponent) p.exponent = real_of(*g.exponent, "exponent");
  if (g.coefficient) p.coefficient = g.coefficient->value;
  if (g.entries)
    for (const auto& [level, value] : *g.entries) p.entries[level] = value.value;
  if (g.matrix) p.matrix = matrix_of(*g.matrix);
  if (g.conjugate) p.conjugate = *g.conjugate;
  if (g.exponentiation) p.exponentiation = *g.exponentiation;
  if (g.composite) p.composite = *g.composite;
  if (g.reverse) p.reverse = *g.reverse;
  if (g.label) p.label = *g.label;
  if (g.family) p.family = *g.family;
  return catalog(kind, p);
}

}  // namespace

int Document::dim() const {
  int d = 2;
  for (const auto& s : statements)
    if (const auto* x = std::get_if<DimDecl>(&s)) d = x->dim;
  return d;
}

int Document::num_systems() const {
  int n = 0;
  for (const auto& s : statements)
    if (const auto* x = std::get_if<SystemsDecl>(&s)) n = x->count;
  return n;
}

std::optional<CtcDecl> Document::ctc() const {
  std::optional<CtcDecl> out;
  for (const auto& s : statements)
    if (const auto* x = std::get_if<CtcDecl>(&s)) out = *x;
  return out;
}

Document parse(const std::string& source) {
  Document doc;
  State state;
  std::istringstream in(source);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool quoted_text = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') quoted_text = !quoted_text;
      if (line[k] == '#' && !quoted_text) {
        line.erase(k);
        break;
      }
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineParser parser(line, number, state);
    doc.statements.push_back(parser.statement());
  }
  return doc;
}

std::string format(const Document& doc) {
  std::string out;
  for (const auto& s : doc.statements) out += std::visit(Formatter{}, s) + "\n";
  return out;
}

QuantumState build_literal(const StateLiteral& literal, int dim, std::optional<double> norm,
                           const std::string& label) {
  BuildOptions o;
  o.dim = dim;
  o.norm = norm;
  o.label = label;
  switch (literal.form) {
    case SpecForm::vector: break;
    case SpecForm::density: o.form = Form::matrix; o.kind = Kind::pure; break;
    case SpecForm::mixed: o.form = Form::matrix; o.kind = Kind::mixed; break;
    case SpecForm::matrix: {
      const ComplexMatrix m = matrix_of(literal.rows);
      o.form = m.is_vector() ? Form::vector : Form::matrix;
      o.kind = m.is_vector() ? Kind::pure : Kind::mixed;
      return build_state(m, o);
    }
  }
  return build_state(kets_of(literal.terms), o);
}

std::string format_matrix(const ComplexMatrix& m, OutputFormat format) {
  const auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
  std::string out;
  if (format == OutputFormat::csv) {
    out = "row,col,real,imag\n";
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        out += fmt::sprintf("%zu,%zu,%.12g,%.12g\n", r, c, clean(m(r, c).real()), clean(m(r, c).imag()));
      }
    return out;
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out += (c ? " " : "") + fmt::sprintf("%.12g%+.12gi", clean(m(r, c).real()), clean(m(r, c).imag()));
    }
    out += "\n";
  }
  return out;
}

std::string format_state(const QuantumState& s, OutputFormat format) {
  if (format == OutputFormat::braket) return render_braket(s) + "\n";
  return format_matrix(s.is_vector() ? s.ket() : s.payload, format);
}

Circuit build_circuit(const Document& doc) {
  Circuit c;
  c.dim = doc.dim();
  c.num_systems = doc.num_systems();
  if (c.num_systems < 1) throw GateSpecError("document declares no systems");
  for (const auto& s : doc.statements) {
    if (const auto* in = std::get_if<InputDecl>(&s)) {
      const double norm = in->norm ? real_of(*in->norm, "norm") : 1.0;
      QuantumState state = build_literal(in->state, c.dim, norm, in->label.value_or(""));
      if (state.num_systems != in->span.last - in->span.first + 1) {
        throw DimensionError("input state does not match its span");
      }
      c.inputs.push_back({state, in->span.first});
    } else if (const auto* g = std::get_if<GateDecl>(&s)) {
      c.gates.push_back(element_of(*g, c.dim, c.num_systems));
    } else if (const auto* t = std::get_if<TraceDecl>(&s)) {
      c.traces.insert(c.traces.end(), t->indices.begin(), t->indices.end());
    } else if (const auto* p = std::get_if<PostselectDecl>(&s)) {
      QuantumState state = build_literal(p->state, c.dim, std::nullopt, p->label.value_or(""));
      if (state.num_systems != p->span.last - p->span.first + 1) {
        throw DimensionError("postselection does not match its span");
      }
      c.postselections.push_back({state, p->span.first});
    }
  }
  validate(c);
  return c;
}

CtcCircuit build_ctc(const Document& doc) {
  const auto decl = doc.ctc();
  if (!decl) throw GateSpecError("document has no ctc declaration");
  CtcCircuit c;
  c.base = build_circuit(doc);
  c.respecting = decl->respecting;
  c.violating = decl->violating;
  validate(c);
  return c;
}

}  // namespace qudit::qcdl
