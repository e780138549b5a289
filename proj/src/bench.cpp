#include "qudit/bench.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace qudit {

namespace {

constexpr double kScanLow = 1.0;
constexpr double kScanHigh = 8.0;
constexpr double kScanStep = 1e-3;

void require_spread(const std::vector<Point>& points, std::size_t minimum) {
  if (points.size() < minimum) {
    throw DegenerateFitError(fmt::format("fit needs at least {} points, got {}", minimum, points.size()));
  }
  const auto [ylo, yhi] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point& a, const Point& b) { return a.y < b.y; });
  if (ylo->y == yhi->y) throw DegenerateFitError("constant data");
  const auto [xlo, xhi] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point& a, const Point& b) { return a.x < b.x; });
  if (xlo->x == xhi->x) throw DegenerateFitError("all abscissae coincide");
}

// Linear coefficients and rss of the separable model at a fixed base b.
struct Separable {
  std::vector<double> coefficients;
  double rss = 0.0;
};

Separable solve_at(const std::vector<Point>& points, double b, bool with_linear_term) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  const Eigen::Index m = with_linear_term ? 3 : 2;
  Eigen::MatrixXd design(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point& p = points[static_cast<std::size_t>(k)];
    design(k, 0) = std::pow(b, p.x);
    if (with_linear_term) design(k, 1) = p.x;
    design(k, m - 1) = 1.0;
    y(k) = p.y;
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  Separable out;
  out.coefficients.assign(beta.data(), beta.data() + beta.size());
  out.rss = (design * beta - y).squaredNorm();
  return out;
}

// Grid scan over b then golden-section refinement around each seed.
FitResult fit_separable(const std::vector<Point>& points, bool with_linear_term, Model model,
                        std::vector<double> seeds) {
  double best_b = kScanLow + kScanStep;
  double best_rss = INFINITY;
  for (int k = 1; kScanLow + k * kScanStep <= kScanHigh + 1e-12; ++k) {
    const double b = kScanLow + k * kScanStep;
    const double rss = solve_at(points, b, with_linear_term).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_b = b;
    }
  }
  seeds.insert(seeds.begin(), best_b);

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double result_b = best_b;
  for (double seed : seeds) {
    double lo = std::max(seed - kScanStep, kScanLow + 1e-12);
    double hi = std::min(seed + kScanStep, kScanHigh);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = solve_at(points, x1, with_linear_term).rss;
    double f2 = solve_at(points, x2, with_linear_term).rss;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = solve_at(points, x1, with_linear_term).rss;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = solve_at(points, x2, with_linear_term).rss;
      }
    }
    for (double candidate : {seed, x1, x2}) {
      const double rss = solve_at(points, candidate, with_linear_term).rss;
      if (rss < best_rss) {
        best_rss = rss;
        result_b = candidate;
      }
    }
  }

  const Separable s = solve_at(points, result_b, with_linear_term);
  FitResult out;
  out.model = model;
  out.params = {s.coefficients[0], result_b};
  out.params.insert(out.params.end(), s.coefficients.begin() + 1, s.coefficients.end());
  out.rss = s.rss;
  return out;
}

std::vector<Point> means(const std::vector<BenchRecord>& records, bool by_systems, int fixed) {
  std::map<int, std::pair<double, int>> acc;
  for (const auto& r : records) {
    if ((by_systems ? r.depth : r.systems) != fixed) continue;
    auto& [sum, count] = acc[by_systems ? r.systems : r.depth];
    for (double s : r.seconds) {
      sum += s;
      ++count;
    }
  }
  std::vector<Point> out;
  for (const auto& [x, sc] : acc) {
    if (sc.second > 0) out.push_back({static_cast<double>(x), sc.first / sc.second});
  }
  return out;
}

}  // namespace

Circuit benchmark_circuit(int systems, int depth) {
  const double h = 1.0 / std::sqrt(2.0);
  const QuantumState plus = ket_state({{h, {0}}, {h, {1}}});
  std::vector<QuantumState> inputs(static_cast<std::size_t>(systems), plus);
  std::vector<CircuitElement> gates;
  for (int g = 0; g < depth; ++g) {
    CatalogParams p;
    p.num_systems = systems;
    p.targets = {g % systems};
    p.index = 0;
    gates.push_back(catalog(GateKind::pauli, p));
  }
  return make_circuit(2, systems, inputs, std::move(gates));
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  if (config.max_systems < 2 || config.min_systems < 1 || config.min_systems > config.max_systems) {
    throw DimensionError("benchmark needs 1 <= min_systems <= max_systems and max_systems >= 2");
  }
  if (config.samples < 1) throw DimensionError("benchmark needs at least one sample");
  std::vector<BenchRecord> out;
  std::vector<Circuit> circuits;
  for (int n = config.min_systems; n <= config.max_systems; ++n) {
    for (int depth : config.depths) {
      circuits.push_back(benchmark_circuit(n, depth));
      out.push_back({n, depth, {}});
      if (output_state(circuits.back()).payload.empty()) throw DimensionError("benchmark produced an empty state");
    }
  }
  // Samples sweep all circuits in turn so transient load spreads evenly.
  for (int s = 0; s < config.samples; ++s) {
    for (std::size_t k = 0; k < circuits.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const QuantumState result = output_state(circuits[k]);
      const auto stop = std::chrono::steady_clock::now();
      if (result.payload.empty()) throw DimensionError("benchmark produced an empty state");
      out[k].seconds.push_back(std::max(std::chrono::duration<double>(stop - start).count(), 1e-12));
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "systems,depth,sample,seconds\n";
  for (const auto& r : records) {
    for (std::size_t s = 0; s < r.seconds.size(); ++s) {
      out << fmt::format("{},{},{},{:.9e}\n", r.systems, r.depth, s, r.seconds[s]);
    }
  }
}

std::vector<BenchRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DimensionError("empty benchmark CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "systems,depth,sample,seconds") throw DimensionError("unexpected benchmark CSV header");
  std::map<std::pair<int, int>, std::size_t> index;
  std::vector<BenchRecord> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    int systems = 0;
    int depth = 0;
    int sample = 0;
    double seconds = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> systems >> c1 >> depth >> c2 >> sample >> c3 >> seconds) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw DimensionError(fmt::format("malformed benchmark CSV row {}", number));
    }
    if (!(seconds > 0.0)) throw DimensionError(fmt::format("non-positive timing on row {}", number));
    const auto key = std::make_pair(systems, depth);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({systems, depth, {}});
    }
    out[it->second].seconds.push_back(seconds);
  }
  return out;
}

std::vector<Point> mean_by_systems(const std::vector<BenchRecord>& records, int depth) {
  return means(records, true, depth);
}

std::vector<Point> mean_by_depth(const std::vector<BenchRecord>& records, int systems) {
  return means(records, false, systems);
}

double FitResult::predict(double x) const {
  switch (model) {
    case Model::linear: return params[0] * x + params[1];
    case Model::exponential: return params[0] * std::pow(params[1], x) + params[2];
    case Model::combination: return params[0] * std::pow(params[1], x) + params[2] * x + params[3];
  }
  return 0.0;
}

std::vector<std::string> FitResult::names() const {
  switch (model) {
    case Model::linear: return {"c", "v"};
    case Model::exponential: return {"a", "b", "u"};
    case Model::combination: return {"a", "b", "c", "d"};
  }
  return {};
}

FitResult fit_linear(const std::vector<Point>& points) {
  require_spread(points, 2);
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += p.x;
    sy += p.y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  FitResult out;
  out.model = Model::linear;
  const double c = sxy / sxx;
  out.params = {c, my - c * mx};
  for (const auto& p : points) out.rss += std::pow(out.predict(p.x) - p.y, 2);
  return out;
}

FitResult fit_exponential(const std::vector<Point>& points) {
  require_spread(points, 3);
  return fit_separable(points, false, Model::exponential, {});
}

FitResult fit_combination(const std::vector<Point>& points) {
  require_spread(points, 4);
  const FitResult nested = fit_separable(points, false, Model::exponential, {});
  return fit_separable(points, true, Model::combination, {nested.params[1]});
}

FitResult fit(const std::vector<Point>& points, Model model) {
  switch (model) {
    case Model::linear: return fit_linear(points);
    case Model::exponential: return fit_exponential(points);
    case Model::combination: return fit_combination(points);
  }
  throw DegenerateFitError("unknown model");
}

double r_squared(const std::vector<Point>& points, const FitResult& result) {
  double mean = 0.0;
  for (const auto& p : points) mean += p.y;
  mean /= static_cast<double>(points.size());
  double tss = 0.0, rss = 0.0;
  for (const auto& p : points) {
    tss += (p.y - mean) * (p.y - mean);
    rss += std::pow(result.predict(p.x) - p.y, 2);
  }
  if (tss == 0.0) throw DegenerateFitError("constant data");
  return 1.0 - rss / tss;
}

}  // namespace qudit
