#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "poisonlab/tensor.hpp"

namespace poisonlab {

struct AggregatorSpec {
  enum class Kind { Averaging, MultiKrum } kind{Kind::Averaging};
  double f{0.1};  // MultiKrum tolerated contamination fraction, in (0, 0.5)

  static AggregatorSpec averaging() { return {Kind::Averaging, 0.0}; }
  static AggregatorSpec multikrum(double f);
};

// Selection count m = n - ceil(f * n) - 2. The paper writes n(1-f)-2, which
// is non-integer in general; rounding the tolerated attacker count up is the
// conservative reading.
int64_t multikrum_m(int64_t n, double f);

struct AggregationResult {
  GradientVector aggregate;
  std::vector<size_t> selected;  // ascending input indices
};

// Averaging: mean of all inputs, all selected. MultiKrum: for each i, the
// score s(i) sums squared L2 distances to its m nearest other vectors; the
// output is the mean of the m vectors with smallest scores. Ties in both
// neighbor choice and final selection break toward the lowest index.
AggregationResult aggregate(const AggregatorSpec& spec, std::span<const GradientVector> vectors);

struct StepSelection {
  std::vector<size_t> selected;
  size_t poison_begin{0};
  size_t poison_count{0};
};

// Mean over steps of (#selected poison messages) / (#submitted poison
// messages). Steps that submitted no poisons are skipped.
double selection_rate(std::span<const StepSelection> steps);

}  // namespace poisonlab
