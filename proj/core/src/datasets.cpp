#include "poisonlab/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "poisonlab/rng.hpp"

namespace poisonlab {

namespace {

constexpr size_t kCifarRecordBytes = 3073;
constexpr size_t kCifarPixels = 3072;

[[noreturn]] void io_fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<size_t>(len));
  if (len > 0) in.read(reinterpret_cast<char*>(bytes.data()), len);
  if (!in) io_fail("failed reading file: " + path);
  return bytes;
}

void append_u32(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

void append_f64(std::vector<unsigned char>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
}

double read_f64(const unsigned char* p) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

LabeledExample parse_cifar_record(std::span<const unsigned char> record) {
  if (record.size() != kCifarRecordBytes) {
    io_fail("cifar record must be 3073 bytes, got " + std::to_string(record.size()));
  }
  const int label = record[0];
  if (label > 9) io_fail("cifar label byte " + std::to_string(label) + " > 9 at record offset 0");
  Tensor input = Tensor::zeros({3, 32, 32});
  for (size_t i = 0; i < kCifarPixels; ++i) {
    input.data[i] = static_cast<double>(record[1 + i]) / 255.0;
  }
  return LabeledExample{std::move(input), label};
}

std::vector<unsigned char> serialize_cifar_record(const LabeledExample& ex) {
  if (ex.input.size() != static_cast<int64_t>(kCifarPixels)) {
    io_fail("cifar record serialization expects 3x32x32 input, got " + shape_str(ex.input.shape));
  }
  std::vector<unsigned char> out;
  out.reserve(kCifarRecordBytes);
  out.push_back(static_cast<unsigned char>(ex.label));
  for (double v : ex.input.data) {
    out.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  return out;
}

std::vector<LabeledExample> parse_cifar_file(const std::string& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
    io_fail("truncated cifar batch file " + path + ": " + std::to_string(bytes.size()) +
            " bytes is not a positive multiple of 3073 (trailing record at offset " +
            std::to_string(bytes.size() - bytes.size() % kCifarRecordBytes) + ")");
  }
  std::vector<LabeledExample> out;
  out.reserve(bytes.size() / kCifarRecordBytes);
  for (size_t off = 0; off < bytes.size(); off += kCifarRecordBytes) {
    const int label = bytes[off];
    if (label > 9) {
      io_fail("cifar label byte " + std::to_string(label) + " > 9 at byte offset " +
              std::to_string(off) + " in " + path);
    }
    out.push_back(parse_cifar_record(std::span<const unsigned char>(bytes).subspan(off, kCifarRecordBytes)));
  }
  return out;
}

Cifar10Data load_cifar10(const std::string& dir) {
  Cifar10Data data;
  data.train.input_shape = {3, 32, 32};
  data.train.classes = 10;
  data.test.input_shape = {3, 32, 32};
  data.test.classes = 10;
  for (int i = 1; i <= 5; ++i) {
    auto batch = parse_cifar_file(dir + "/data_batch_" + std::to_string(i) + ".bin");
    std::move(batch.begin(), batch.end(), std::back_inserter(data.train.examples));
  }
  data.test.examples = parse_cifar_file(dir + "/test_batch.bin");
  return data;
}

Dataset synth_blobs(int classes, int per_class, int dim, double separation, uint64_t seed) {
  if (classes < 2) throw std::invalid_argument("synth_blobs: classes must be >= 2");
  if (per_class < 1) throw std::invalid_argument("synth_blobs: per_class must be >= 1");
  if (dim < 1) throw std::invalid_argument("synth_blobs: dim must be >= 1");
  if (separation < 0.0) throw std::invalid_argument("synth_blobs: separation must be >= 0");
  Dataset data;
  data.input_shape = {dim};
  data.classes = classes;
  data.examples.reserve(static_cast<size_t>(classes) * static_cast<size_t>(per_class));
  Rng rng(seed);
  for (int c = 0; c < classes; ++c) {
    const int center_axis = c % dim;
    for (int k = 0; k < per_class; ++k) {
      Tensor x = Tensor::zeros({dim});
      for (int j = 0; j < dim; ++j) x.data[static_cast<size_t>(j)] = rng.normal();
      x.data[static_cast<size_t>(center_axis)] += separation;
      data.examples.push_back(LabeledExample{std::move(x), c});
    }
  }
  return data;
}

Splits partition(size_t n, const SplitSpec& spec, uint64_t seed) {
  const double fractions[] = {spec.train, spec.val, spec.test, spec.aux};
  double total = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("partition: negative split fraction");
    total += f;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("partition: split fractions sum to > 1");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(spec.seed.value_or(seed));
  rng.shuffle(order);

  const size_t n_val = static_cast<size_t>(std::floor(spec.val * static_cast<double>(n)));
  const size_t n_test = static_cast<size_t>(std::floor(spec.test * static_cast<double>(n)));
  const size_t n_aux = static_cast<size_t>(std::floor(spec.aux * static_cast<double>(n)));
  size_t n_train = static_cast<size_t>(std::floor(spec.train * static_cast<double>(n)));
  // remainder of the covered pool goes to train
  const size_t covered = static_cast<size_t>(std::floor(total * static_cast<double>(n)));
  n_train = covered - n_val - n_test - n_aux;

  Splits s;
  auto take = [&](size_t count, size_t& off) {
    std::vector<size_t> idx(order.begin() + static_cast<ptrdiff_t>(off),
                            order.begin() + static_cast<ptrdiff_t>(off + count));
    off += count;
    return idx;
  };
  size_t off = 0;
  s.train = take(n_train, off);
  s.val = take(n_val, off);
  s.test = take(n_test, off);
  s.aux = take(n_aux, off);
  return s;
}

std::vector<std::vector<size_t>> epoch_batches(const std::vector<size_t>& split, int batch_size,
                                               uint64_t stream_seed, int64_t epoch) {
  if (batch_size < 1) throw std::invalid_argument("epoch_batches: batch size must be >= 1");
  std::vector<size_t> order = split;
  Rng rng(derive_seed(stream_seed, "epoch", static_cast<uint64_t>(epoch)));
  rng.shuffle(order);
  std::vector<std::vector<size_t>> batches;
  for (size_t off = 0; off < order.size(); off += static_cast<size_t>(batch_size)) {
    const size_t end = std::min(order.size(), off + static_cast<size_t>(batch_size));
    batches.emplace_back(order.begin() + static_cast<ptrdiff_t>(off),
                         order.begin() + static_cast<ptrdiff_t>(end));
  }
  return batches;
}

std::vector<LabeledExample> gather_examples(const Dataset& data, std::span<const size_t> indices) {
  std::vector<LabeledExample> out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(data.examples.at(i));
  return out;
}

void dump_pfds(const std::string& path, const Dataset& data) {
  const int64_t dim = shape_numel(data.input_shape);
  std::vector<unsigned char> bytes;
  bytes.reserve(16 + data.examples.size() * (4 + 8 * static_cast<size_t>(dim)));
  bytes.push_back('P');
  bytes.push_back('F');
  bytes.push_back('D');
  bytes.push_back('S');
  append_u32(bytes, static_cast<uint32_t>(data.examples.size()));
  append_u32(bytes, static_cast<uint32_t>(dim));
  append_u32(bytes, static_cast<uint32_t>(data.classes));
  for (const LabeledExample& ex : data.examples) {
    if (ex.input.size() != dim) io_fail("dump_pfds: inconsistent example dimension");
    append_u32(bytes, static_cast<uint32_t>(ex.label));
    for (double v : ex.input.data) append_f64(bytes, v);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_fail("failed writing: " + path);
}

Dataset load_pfds(const std::string& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "PFDS", 4) != 0) {
    io_fail("not a PFDS file: " + path);
  }
  const uint32_t count = read_u32(bytes.data() + 4);
  const uint32_t dim = read_u32(bytes.data() + 8);
  const uint32_t classes = read_u32(bytes.data() + 12);
  const size_t record = 4 + 8 * static_cast<size_t>(dim);
  if (bytes.size() != 16 + static_cast<size_t>(count) * record) {
    io_fail("PFDS size mismatch in " + path + ": expected " +
            std::to_string(16 + static_cast<size_t>(count) * record) + " bytes, got " +
            std::to_string(bytes.size()));
  }
  Dataset data;
  data.input_shape = {static_cast<int64_t>(dim)};
  data.classes = static_cast<int>(classes);
  data.examples.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    const unsigned char* p = bytes.data() + 16 + static_cast<size_t>(i) * record;
    const uint32_t label = read_u32(p);
    if (label >= classes) {
      io_fail("PFDS label " + std::to_string(label) + " out of range at record " + std::to_string(i));
    }
    Tensor x = Tensor::zeros({static_cast<int64_t>(dim)});
    for (uint32_t j = 0; j < dim; ++j) x.data[j] = read_f64(p + 4 + 8 * static_cast<size_t>(j));
    data.examples.push_back(LabeledExample{std::move(x), static_cast<int>(label)});
  }
  return data;
}

}  // namespace poisonlab
