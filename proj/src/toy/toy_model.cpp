// SPDX-License-Identifier: Apache-2.0
#include "semevo/toy/toy_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace semevo::toy {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'E', 'M', 'T', 'O', 'Y', '0', '1'};
constexpr std::uint32_t kVersion = 1;

Matrix scaled_gaussian(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw Error(ErrorCode::kTruncated, path.string() + " ends before offset " +
                                           std::to_string(static_cast<long long>(in.tellg())));
  }
  return value;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) write_pod<double>(out, m(i, j));
  }
}

Matrix read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols,
                   const std::filesystem::path& path) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = read_pod<double>(in, path);
  }
  return m;
}

}  // namespace

ToyModel ToyModel::random(Eigen::Index in_dim, Eigen::Index hidden, Eigen::Index feature_dim,
                          std::mt19937_64& rng) {
  ToyModel m;
  m.w1 = scaled_gaussian(in_dim, hidden, 1.0 / std::sqrt(static_cast<double>(in_dim)), rng);
  m.b1 = RowVector::Zero(hidden);
  m.w2 = scaled_gaussian(hidden, feature_dim, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  m.b2 = RowVector::Zero(feature_dim);
  m.head = Matrix(feature_dim, 0);
  return m;
}

void ToyModel::add_classes(const std::vector<ClassId>& ids, std::mt19937_64& rng) {
  for (ClassId id : ids) {
    if (std::find(classes.begin(), classes.end(), id) != classes.end()) {
      throw Error(ErrorCode::kInconsistent, "class " + std::to_string(id) + " already in head");
    }
  }
  const Eigen::Index old_cols = head.cols();
  const auto added = static_cast<Eigen::Index>(ids.size());
  Matrix grown(feature_dim(), old_cols + added);
  grown.leftCols(old_cols) = head;
  grown.rightCols(added) =
      scaled_gaussian(feature_dim(), added, 0.1 / std::sqrt(static_cast<double>(feature_dim())), rng);
  head = std::move(grown);
  classes.insert(classes.end(), ids.begin(), ids.end());
}

Eigen::Index ToyModel::column_of(ClassId id) const {
  auto it = std::find(classes.begin(), classes.end(), id);
  if (it == classes.end()) {
    throw Error(ErrorCode::kMissingClass, "class " + std::to_string(id) + " not in head");
  }
  return static_cast<Eigen::Index>(it - classes.begin());
}

Matrix ToyModel::features(const Eigen::Ref<const Matrix>& inputs) const {
  if (inputs.cols() != in_dim()) {
    throw Error(ErrorCode::kStructural, "toy model expects inputs of dimension " +
                                            std::to_string(in_dim()));
  }
  const Matrix h = ((inputs * w1).rowwise() + b1).array().tanh().matrix();
  return (h * w2).rowwise() + b2;
}

Matrix ToyModel::logits(const Eigen::Ref<const Matrix>& inputs) const {
  return features(inputs) * head;
}

ToyModel ToyModel::zeros_like() const {
  ToyModel z;
  z.w1 = Matrix::Zero(w1.rows(), w1.cols());
  z.b1 = RowVector::Zero(b1.size());
  z.w2 = Matrix::Zero(w2.rows(), w2.cols());
  z.b2 = RowVector::Zero(b2.size());
  z.head = Matrix::Zero(head.rows(), head.cols());
  z.classes = classes;
  return z;
}

void ToyModel::axpy(double alpha, const ToyModel& other) {
  w1 += alpha * other.w1;
  b1 += alpha * other.b1;
  w2 += alpha * other.w2;
  b2 += alpha * other.b2;
  head += alpha * other.head;
}

double ToyModel::squared_norm() const {
  return w1.squaredNorm() + b1.squaredNorm() + w2.squaredNorm() + b2.squaredNorm() +
         head.squaredNorm();
}

bool ToyModel::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite() && head.allFinite();
}

double extractor_distance(const ToyModel& a, const ToyModel& b) {
  return std::sqrt((a.w1 - b.w1).squaredNorm() + (a.b1 - b.b1).squaredNorm() +
                   (a.w2 - b.w2).squaredNorm() + (a.b2 - b.b2).squaredNorm());
}

void save_model(const ToyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  write_pod<std::uint32_t>(out, kVersion);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.in_dim()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.hidden()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.feature_dim()));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(model.classes.size()));
  for (ClassId c : model.classes) write_pod<std::uint32_t>(out, c);
  write_matrix(out, model.w1);
  write_matrix(out, model.b1);
  write_matrix(out, model.w2);
  write_matrix(out, model.b2);
  write_matrix(out, model.head);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

ToyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::kBadMagic, path.string());
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw Error(ErrorCode::kBadVersion, path.string() + " has version " + std::to_string(version));
  }
  const auto in_dim = read_pod<std::uint32_t>(in, path);
  const auto hidden = read_pod<std::uint32_t>(in, path);
  const auto feature_dim = read_pod<std::uint32_t>(in, path);
  const auto num_classes = read_pod<std::uint32_t>(in, path);
  ToyModel m;
  for (std::uint32_t k = 0; k < num_classes; ++k) m.classes.push_back(read_pod<std::uint32_t>(in, path));
  m.w1 = read_matrix(in, in_dim, hidden, path);
  m.b1 = read_matrix(in, 1, hidden, path);
  m.w2 = read_matrix(in, hidden, feature_dim, path);
  m.b2 = read_matrix(in, 1, feature_dim, path);
  m.head = read_matrix(in, feature_dim, num_classes, path);
  return m;
}

}  // namespace semevo::toy
