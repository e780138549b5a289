#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qudit/bench.hpp"
#include "qudit/diagram.hpp"
#include "qudit/qcdl.hpp"

namespace {

using namespace qudit;

constexpr int kUsageError = 1;
constexpr int kEngineError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

qcdl::Document load(const std::string& path) { return qcdl::parse(read_file(path)); }

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": expected comma-separated numbers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (double x : parse_reals(text, flag)) {
    if (x != static_cast<int>(x)) throw UsageError(flag + ": expected integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

Spacing parse_pair(const std::string& text, const std::string& flag) {
  const auto v = parse_ints(text, flag);
  if (v.size() != 2 || v[0] < 0 || v[1] < 0) throw UsageError(flag + ": expected two non-negative integers H,V");
  return {v[0], v[1]};
}

const std::map<std::string, qcdl::OutputFormat> kFormats = {
    {"braket", qcdl::OutputFormat::braket}, {"matrix", qcdl::OutputFormat::matrix}, {"csv", qcdl::OutputFormat::csv}};
const std::map<std::string, Style> kStyles = {
    {"unicode", Style::unicode}, {"unicode_alt", Style::unicode_alt}, {"ascii", Style::ascii}};
const std::map<std::string, Model> kModels = {
    {"exp", Model::exponential}, {"lin", Model::linear}, {"comb", Model::combination}};

std::string model_name(Model m) {
  switch (m) {
    case Model::exponential: return "exponential";
    case Model::linear: return "linear";
    case Model::combination: return "combination";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qudit circuit simulator with closed timelike curve prescriptions"};
  app.require_subcommand(1);

  std::string file;
  std::string format_name = "braket";
  std::string traces;
  std::optional<double> norm;

  auto* simulate = app.add_subcommand("simulate", "Print the output state of a circuit");
  simulate->add_option("file", file, "Circuit description (.qcdl)")->required();
  simulate->add_option("--traces", traces, "Extra systems to trace out, I,J");
  simulate->add_option("--norm", norm, "Renormalize the output");
  simulate->add_option("--format", format_name, "braket, matrix or csv")->check(CLI::IsMember(kFormats));

  std::string pad = "0,0";
  std::string sep = "1,1";
  std::string style_name = "unicode";
  bool force_separation = false;
  bool uniform_spacing = false;
  auto* diagram = app.add_subcommand("diagram", "Render a circuit diagram");
  diagram->add_option("file", file, "Circuit description (.qcdl)")->required();
  diagram->add_option("--pad", pad, "Gate padding H,V");
  diagram->add_option("--sep", sep, "Gate separation H,V");
  diagram->add_option("--style", style_name, "unicode, unicode_alt or ascii")->check(CLI::IsMember(kStyles));
  diagram->add_flag("--force-separation", force_separation, "Exact horizontal separation");
  diagram->add_flag("--uniform-spacing", uniform_spacing, "Equidistant gate columns");

  std::string gate_format = "matrix";
  auto* gate = app.add_subcommand("gate", "Print the total gate matrix of a circuit");
  gate->add_option("file", file, "Circuit description (.qcdl)")->required();
  gate->add_option("--format", gate_format, "matrix or csv")->check(CLI::IsMember({"matrix", "csv"}));

  std::string weights;
  auto* dctc = app.add_subcommand("dctc", "Deutsch prescription states of a CTC circuit");
  dctc->add_option("file", file, "Circuit description with a ctc line")->required();
  dctc->add_option("--g", weights, "Free parameter values, one per family direction");
  dctc->add_option("--format", format_name, "braket, matrix or csv")->check(CLI::IsMember(kFormats));

  auto* pctc = app.add_subcommand("pctc", "Postselected teleportation states of a CTC circuit");
  pctc->add_option("file", file, "Circuit description with a ctc line")->required();
  pctc->add_option("--format", format_name, "braket, matrix or csv")->check(CLI::IsMember(kFormats));

  BenchConfig config;
  config.max_systems = 8;
  int max_depth = 4;
  config.samples = 5;
  std::string out_path;
  auto* bench = app.add_subcommand("bench", "Time identity-gate circuits and write CSV");
  bench->add_option("--min-systems", config.min_systems, "Smallest circuit width")->check(CLI::PositiveNumber);
  bench->add_option("--max-systems", config.max_systems, "Largest circuit width")->check(CLI::Range(2, 14));
  bench->add_option("--max-depth", max_depth, "Depths 1..D")->check(CLI::PositiveNumber);
  bench->add_option("--samples", config.samples, "Repetitions per point")->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "CSV path (stdout when absent)");

  std::string csv_path;
  std::string model = "comb";
  std::optional<int> depth;
  auto* fit = app.add_subcommand("fit", "Fit a regression model to mean time against width");
  fit->add_option("csv", csv_path, "Benchmark CSV")->required();
  fit->add_option("--model", model, "exp, lin or comb")->check(CLI::IsMember(kModels));
  fit->add_option("--depth", depth, "Depth whose records are fitted (default: smallest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    const auto out_format = kFormats.at(format_name);
    if (simulate->parsed()) {
      const Circuit c = qcdl::build_circuit(load(file));
      OutputOptions options;
      if (!traces.empty()) options.extra_traces = parse_ints(traces, "--traces");
      options.norm = norm;
      std::cout << qcdl::format_state(output_state(c, options), out_format);
    } else if (diagram->parsed()) {
      RenderOptions options;
      options.pad = parse_pair(pad, "--pad");
      options.sep = parse_pair(sep, "--sep");
      options.style = kStyles.at(style_name);
      options.force_separation = force_separation;
      options.uniform_spacing = uniform_spacing;
      print(std::cout, qcdl::build_circuit(load(file)), options);
    } else if (gate->parsed()) {
      const auto f = gate_format == "csv" ? qcdl::OutputFormat::csv : qcdl::OutputFormat::matrix;
      std::cout << qcdl::format_matrix(full_matrix(total_gate(qcdl::build_circuit(load(file)))), f);
    } else if (dctc->parsed()) {
      const CtcCircuit c = qcdl::build_ctc(load(file));
      const DctcSolutionFamily family = dctc_fixed_points(c);
      std::vector<double> g(family.dimension(), 0.0);
      if (!weights.empty()) g = parse_reals(weights, "--g");
      std::cout << "family dimension: " << family.dimension() << "\n";
      for (std::size_t k = 0; k < g.size() && k < family.dimension(); ++k) {
        std::cout << family.symbol(k) << " = " << fmt::format("{}", g[k]) << "\n";
      }
      std::cout << "CR:\n" << qcdl::format_state(dctc_state_respecting(c, g), out_format);
      std::cout << "CV:\n" << qcdl::format_state(dctc_state_violating(c, g), out_format);
    } else if (pctc->parsed()) {
      const CtcCircuit c = qcdl::build_ctc(load(file));
      std::cout << "CR:\n" << qcdl::format_state(pctc_state_respecting(c), out_format);
      std::cout << "CV:\n" << qcdl::format_state(pctc_state_violating(c), out_format);
    } else if (bench->parsed()) {
      config.depths.clear();
      for (int d = 1; d <= max_depth; ++d) config.depths.push_back(d);
      const auto records = run_benchmark(config);
      if (out_path.empty()) {
        write_csv(std::cout, records);
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write " + out_path);
        write_csv(out, records);
      }
    } else if (fit->parsed()) {
      std::istringstream in(read_file(csv_path));
      const auto records = read_csv(in);
      if (records.empty()) throw DegenerateFitError("benchmark CSV has no records");
      int chosen = records.front().depth;
      for (const auto& r : records) chosen = std::min(chosen, r.depth);
      if (depth) chosen = *depth;
      const auto points = mean_by_systems(records, chosen);
      const FitResult result = qudit::fit(points, kModels.at(model));
      std::cout << "model: " << model_name(result.model) << "\n";
      std::cout << "depth: " << chosen << "\n";
      const auto names = result.names();
      for (std::size_t k = 0; k < names.size(); ++k) std::cout << fmt::format("{} = {:.12g}\n", names[k], result.params[k]);
      std::cout << fmt::format("rss = {:.12g}\n", result.rss);
      std::cout << fmt::format("r2 = {:.12g}\n", r_squared(points, result));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEngineError;
  }
  return 0;
}
