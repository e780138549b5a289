#ifndef QUDIT_BENCH_HPP
#define QUDIT_BENCH_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qudit/circuits.hpp"

namespace qudit {

struct BenchRecord {
  int systems = 0;
  int depth = 0;
  std::vector<double> seconds;  // one entry per sample
};

struct BenchConfig {
  int min_systems = 2;
  int max_systems = 2;
  std::vector<int> depths{1};
  int samples = 1;
};

// Circuit of `systems` equal superposition qubits followed by `depth`
// single-target identity gates cycling over the wires.
Circuit benchmark_circuit(int systems, int depth);

// Times only the output_state call of each benchmark circuit.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

// Header `systems,depth,sample,seconds` then one row per sample.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_csv(std::istream& in);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Mean seconds per system count for records of the given depth.
std::vector<Point> mean_by_systems(const std::vector<BenchRecord>& records, int depth);
// Mean seconds per depth for records of the given system count.
std::vector<Point> mean_by_depth(const std::vector<BenchRecord>& records, int systems);

enum class Model { exponential, linear, combination };

// Parameter order: exponential (a, b, u) for a b^x + u; linear (c, v) for
// c x + v; combination (a, b, c, d) for a b^x + c x + d.
struct FitResult {
  Model model = Model::linear;
  std::vector<double> params;
  double rss = 0.0;

  double predict(double x) const;
  std::vector<std::string> names() const;
};

FitResult fit_linear(const std::vector<Point>& points);
FitResult fit_exponential(const std::vector<Point>& points);
FitResult fit_combination(const std::vector<Point>& points);
FitResult fit(const std::vector<Point>& points, Model model);

double r_squared(const std::vector<Point>& points, const FitResult& result);

}  // namespace qudit

#endif  // QUDIT_BENCH_HPP
