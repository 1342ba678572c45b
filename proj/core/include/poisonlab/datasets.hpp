#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poisonlab/tensor.hpp"

namespace poisonlab {

struct LabeledExample {
  Tensor input;
  int label{0};
};

struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<int64_t> input_shape;
  int classes{0};

  size_t size() const { return examples.size(); }
};

struct Cifar10Data {
  Dataset train;
  Dataset test;
};

// Standard CIFAR-10 binary batches: 3073-byte records, 1 label byte then
// 3072 pixel bytes (1024 R, 1024 G, 1024 B, each 32x32 row-major). Pixels
// are mapped to [0,1] by v/255. Expects data_batch_{1..5}.bin and
// test_batch.bin under `dir`.
Cifar10Data load_cifar10(const std::string& dir);

// Parse / serialize a single record; the round trip is bit-exact.
LabeledExample parse_cifar_record(std::span<const unsigned char> record);
std::vector<unsigned char> serialize_cifar_record(const LabeledExample& ex);

// Internal workhorse of load_cifar10, exposed for tests: parses one batch
// file of `3073 * k` bytes. Errors name the offending byte offset.
std::vector<LabeledExample> parse_cifar_file(const std::string& path);

// Synthetic Gaussian blobs: class c is an isotropic Gaussian (sigma=1)
// centered at separation * u_c with u_c = e_{c mod dim}. Deterministic given
// the seed.
Dataset synth_blobs(int classes, int per_class, int dim, double separation, uint64_t seed);

struct SplitSpec {
  double train{0.8};
  double val{0.1};
  double test{0.0};
  double aux{0.1};
  std::optional<uint64_t> seed;  // derived from the master seed when absent
};

struct Splits {
  std::vector<size_t> train;
  std::vector<size_t> val;
  std::vector<size_t> test;
  std::vector<size_t> aux;
};

// Disjoint index sets via a seeded shuffle. Sizes are floor(fraction * N)
// with the remainder assigned to train.
Splits partition(size_t n, const SplitSpec& spec, uint64_t seed);

// One epoch of batches over a split: seeded permutation, chunked, last short
// chunk kept. Returned indices point into the parent dataset.
std::vector<std::vector<size_t>> epoch_batches(const std::vector<size_t>& split, int batch_size,
                                               uint64_t stream_seed, int64_t epoch);

std::vector<LabeledExample> gather_examples(const Dataset& data, std::span<const size_t> indices);

// Flat little-endian dataset file: header (magic "PFDS", u32 count, u32 dim,
// u32 classes), then per-record (u32 label, dim x f64).
void dump_pfds(const std::string& path, const Dataset& data);
Dataset load_pfds(const std::string& path);

}  // namespace poisonlab
