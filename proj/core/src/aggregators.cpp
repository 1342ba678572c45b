#include "poisonlab/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poisonlab {

AggregatorSpec AggregatorSpec::multikrum(double f) {
  if (!(f > 0.0 && f < 0.5)) {
    throw std::invalid_argument("MultiKrum: f must be in (0, 0.5), got " + std::to_string(f));
  }
  return {Kind::MultiKrum, f};
}

int64_t multikrum_m(int64_t n, double f) {
  return n - static_cast<int64_t>(std::ceil(f * static_cast<double>(n))) - 2;
}

namespace {

GradientVector mean_at(std::span<const GradientVector> vectors, std::span<const size_t> indices) {
  GradientVector acc = GradientVector::zeros(vectors[indices[0]].dim());
  for (size_t i : indices) {
    const GradientVector& v = vectors[i];
    for (size_t j = 0; j < acc.values.size(); ++j) acc.values[j] += v.values[j];
  }
  const double inv = 1.0 / static_cast<double>(indices.size());
  for (double& x : acc.values) x *= inv;
  return acc;
}

double sq_distance(const GradientVector& a, const GradientVector& b) {
  double s = 0.0;
  for (size_t j = 0; j < a.values.size(); ++j) {
    const double d = a.values[j] - b.values[j];
    s += d * d;
  }
  return s;
}

}  // namespace

AggregationResult aggregate(const AggregatorSpec& spec, std::span<const GradientVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("aggregate: needs at least one vector");
  const int64_t dim = vectors[0].dim();
  for (size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i].dim() != dim) {
      throw std::invalid_argument("aggregate: dim mismatch, vector 0 has " + std::to_string(dim) +
                                  ", vector " + std::to_string(i) + " has " +
                                  std::to_string(vectors[i].dim()));
    }
  }
  const int64_t n = static_cast<int64_t>(vectors.size());

  AggregationResult result;
  if (spec.kind == AggregatorSpec::Kind::Averaging) {
    result.selected.resize(vectors.size());
    for (size_t i = 0; i < vectors.size(); ++i) result.selected[i] = i;
    result.aggregate = mean_at(vectors, result.selected);
    return result;
  }

  const int64_t m = multikrum_m(n, spec.f);
  if (m < 1) {
    throw std::invalid_argument("MultiKrum: selection count m = n - ceil(f*n) - 2 = " +
                                std::to_string(m) + " < 1 for n = " + std::to_string(n) +
                                ", f = " + std::to_string(spec.f));
  }

  // pairwise squared distances, accumulated over sorted index pairs
  std::vector<double> dist(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i + 1; j < n; ++j) {
      const double d = sq_distance(vectors[static_cast<size_t>(i)], vectors[static_cast<size_t>(j)]);
      dist[static_cast<size_t>(i * n + j)] = d;
      dist[static_cast<size_t>(j * n + i)] = d;
    }
  }

  // s(i) = sum of the m smallest distances to other vectors; neighbor ties
  // break toward the lower index via the (distance, index) sort key
  std::vector<double> score(static_cast<size_t>(n), 0.0);
  std::vector<std::pair<double, int64_t>> neigh;
  neigh.reserve(static_cast<size_t>(n - 1));
  for (int64_t i = 0; i < n; ++i) {
    neigh.clear();
    for (int64_t j = 0; j < n; ++j) {
      if (j != i) neigh.emplace_back(dist[static_cast<size_t>(i * n + j)], j);
    }
    std::sort(neigh.begin(), neigh.end());
    double s = 0.0;
    for (int64_t k = 0; k < m; ++k) s += neigh[static_cast<size_t>(k)].first;
    score[static_cast<size_t>(i)] = s;
  }

  std::vector<std::pair<double, int64_t>> ranked;
  ranked.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) ranked.emplace_back(score[static_cast<size_t>(i)], i);
  std::sort(ranked.begin(), ranked.end());

  result.selected.reserve(static_cast<size_t>(m));
  for (int64_t k = 0; k < m; ++k) result.selected.push_back(static_cast<size_t>(ranked[static_cast<size_t>(k)].second));
  std::sort(result.selected.begin(), result.selected.end());
  result.aggregate = mean_at(vectors, result.selected);
  return result;
}

double selection_rate(std::span<const StepSelection> steps) {
  double sum = 0.0;
  size_t counted = 0;
  for (const StepSelection& step : steps) {
    if (step.poison_count == 0) continue;
    size_t hit = 0;
    for (size_t idx : step.selected) {
      if (idx >= step.poison_begin && idx < step.poison_begin + step.poison_count) ++hit;
    }
    sum += static_cast<double>(hit) / static_cast<double>(step.poison_count);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

}  // namespace poisonlab
