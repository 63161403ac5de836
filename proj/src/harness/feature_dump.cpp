// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/feature_dump.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace semevo {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'S', 'E', 'F', 'D', 'M', 'P', '1'};

template <typename T>
void put_le(char* dst, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    dst[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
}

template <typename T>
T get_le(const char* src) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(src[i])) << (8 * i);
  }
  return value;
}

std::size_t record_bytes(std::uint32_t d) { return 9 + 4 * static_cast<std::size_t>(d); }

}  // namespace

DumpWriter::DumpWriter(const std::filesystem::path& path, std::uint32_t dimension,
                       std::uint64_t count)
    : path_(path), out_(path, std::ios::binary), dimension_(dimension), count_(count) {
  if (!out_) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  if (dimension == 0) throw Error(ErrorCode::kDimensionMismatch, "dump dimension must be positive");
  std::array<char, kDumpHeaderBytes> head{};
  std::memcpy(head.data(), kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(head.data() + 8, kDumpVersion);
  put_le<std::uint32_t>(head.data() + 12, dimension);
  put_le<std::uint64_t>(head.data() + 16, count);
  out_.write(head.data(), head.size());
}

void DumpWriter::write(const SampleInfo& info, const Eigen::Ref<const RowVector>& features) {
  if (written_ == count_) throw Error(ErrorCode::kStructural, "more records than announced");
  if (features.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "record of dimension " +
                                                   std::to_string(features.size()) +
                                                   " in a dump of dimension " +
                                                   std::to_string(dimension_));
  }
  std::vector<char> rec(record_bytes(dimension_));
  put_le<std::uint32_t>(rec.data(), info.class_id);
  put_le<std::uint32_t>(rec.data() + 4, info.task_id);
  rec[8] = static_cast<char>(info.split);
  for (std::uint32_t j = 0; j < dimension_; ++j) {
    const auto f = static_cast<float>(features(j));
    if (!std::isfinite(f)) throw Error(ErrorCode::kNonFinite, "non-finite feature in dump");
    put_le<std::uint32_t>(rec.data() + 9 + 4 * j, std::bit_cast<std::uint32_t>(f));
  }
  out_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  ++written_;
}

void DumpWriter::close() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIo, "failed writing " + path_.string());
  if (written_ != count_) {
    throw Error(ErrorCode::kStructural, path_.string() + ": wrote " + std::to_string(written_) +
                                            " of " + std::to_string(count_) + " records");
  }
  out_.close();
}

DumpReader::DumpReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::array<char, kDumpHeaderBytes> head{};
  read_exact(head.data(), 8, "magic");
  if (std::memcmp(head.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a feature dump");
  }
  read_exact(head.data() + 8, kDumpHeaderBytes - 8, "header");
  header_.version = get_le<std::uint32_t>(head.data() + 8);
  header_.dimension = get_le<std::uint32_t>(head.data() + 12);
  header_.count = get_le<std::uint64_t>(head.data() + 16);
  if (header_.version != kDumpVersion) {
    throw Error(ErrorCode::kBadVersion, path.string() + " has version " +
                                            std::to_string(header_.version) + ", expected " +
                                            std::to_string(kDumpVersion));
  }
  if (header_.dimension == 0) {
    throw Error(ErrorCode::kDimensionMismatch, path.string() + " declares dimension 0");
  }
  buffer_.resize(record_bytes(header_.dimension));
}

void DumpReader::read_exact(char* dst, std::size_t n, const char* what) {
  in_.read(dst, static_cast<std::streamsize>(n));
  const auto got = static_cast<std::uint64_t>(in_.gcount());
  if (got != n) {
    throw Error(ErrorCode::kTruncated, path_.string() + ": truncated " + what + " starting at byte offset " +
                                           std::to_string(offset_) + ", data ends at " +
                                           std::to_string(offset_ + got));
  }
  offset_ += n;
}

bool DumpReader::next(SampleInfo& info, RowVector& features) {
  if (read_ == header_.count) {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw Error(ErrorCode::kInconsistent, path_.string() + ": trailing bytes after record " +
                                                std::to_string(read_) + " at byte offset " +
                                                std::to_string(offset_));
    }
    return false;
  }
  const std::uint64_t record_start = offset_;
  read_exact(buffer_.data(), buffer_.size(), "record");
  info.class_id = get_le<std::uint32_t>(buffer_.data());
  info.task_id = get_le<std::uint32_t>(buffer_.data() + 4);
  const auto split = static_cast<unsigned char>(buffer_[8]);
  if (split > 1) {
    throw Error(ErrorCode::kInconsistent, path_.string() + ": invalid split byte at offset " +
                                              std::to_string(record_start + 8));
  }
  info.split = static_cast<Split>(split);
  features.resize(header_.dimension);
  for (std::uint32_t j = 0; j < header_.dimension; ++j) {
    const float f = std::bit_cast<float>(get_le<std::uint32_t>(buffer_.data() + 9 + 4 * j));
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::kNonFinite, path_.string() + ": non-finite value in record " +
                                             std::to_string(read_) + " at byte offset " +
                                             std::to_string(record_start + 9 + 4 * j));
    }
    features(j) = f;
  }
  ++read_;
  return true;
}

std::vector<std::filesystem::path> write_stage_dumps(const FeatureBank& bank,
                                                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (TaskId t = 1; t <= bank.num_stages(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "stage_%03u.fdump", t);
    const auto path = dir / name;
    DumpWriter writer(path, static_cast<std::uint32_t>(bank.dimension()), bank.num_samples());
    const Matrix& stage = bank.stage(t);
    for (std::size_t i = 0; i < bank.num_samples(); ++i) {
      writer.write(bank.samples()[i], stage.row(static_cast<Eigen::Index>(i)));
    }
    writer.close();
    paths.push_back(path);
  }
  return paths;
}

FeatureBank read_stage_dumps(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw Error(ErrorCode::kConfig, "no dump files given");
  std::vector<SampleInfo> samples;
  std::vector<Matrix> stages;
  std::uint32_t dimension = 0;
  for (std::size_t s = 0; s < paths.size(); ++s) {
    DumpReader reader(paths[s]);
    if (s == 0) {
      dimension = reader.header().dimension;
    } else if (reader.header().dimension != dimension) {
      throw Error(ErrorCode::kDimensionMismatch,
                  paths[s].string() + " has dimension " + std::to_string(reader.header().dimension) +
                      " but " + paths[0].string() + " has " + std::to_string(dimension));
    }
    if (s > 0 && reader.header().count != samples.size()) {
      throw Error(ErrorCode::kInconsistent, paths[s].string() + " lists " +
                                                std::to_string(reader.header().count) +
                                                " records, expected " +
                                                std::to_string(samples.size()));
    }
    Matrix stage(static_cast<Eigen::Index>(reader.header().count), dimension);
    SampleInfo info;
    RowVector row;
    for (std::size_t i = 0; reader.next(info, row); ++i) {
      if (s == 0) {
        samples.push_back(info);
      } else if (!(samples[i] == info)) {
        throw Error(ErrorCode::kInconsistent, paths[s].string() + ": record " + std::to_string(i) +
                                                  " does not pair with " + paths[0].string());
      }
      stage.row(static_cast<Eigen::Index>(i)) = row;
    }
    stages.push_back(std::move(stage));
  }
  return FeatureBank(std::move(samples), std::move(stages));
}

DumpSummary check_dump(const std::filesystem::path& path) {
  DumpReader reader(path);
  DumpSummary out;
  out.header = reader.header();
  std::map<ClassId, TaskId> owner;
  SampleInfo info;
  RowVector row;
  while (reader.next(info, row)) {
    if (info.task_id == 0) {
      throw Error(ErrorCode::kInconsistent, path.string() + ": task id 0 before byte offset " +
                                                std::to_string(reader.offset()));
    }
    const auto [it, inserted] = owner.emplace(info.class_id, info.task_id);
    if (!inserted && it->second != info.task_id) {
      throw Error(ErrorCode::kInconsistent, path.string() + ": class " +
                                                std::to_string(info.class_id) +
                                                " appears in tasks " + std::to_string(it->second) +
                                                " and " + std::to_string(info.task_id));
    }
    ++(info.split == Split::kTrain ? out.train_per_task : out.test_per_task)[info.task_id];
  }
  out.classes = owner.size();
  return out;
}

}  // namespace semevo
