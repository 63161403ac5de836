// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "semevo/core/feature_bank.hpp"

namespace semevo {

// Little-endian layout:
//   header  "RSEFDMP1" | u32 version | u32 d | u64 count
//   record  u32 class_id | u32 task_id | u8 split | d x f32
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr std::size_t kDumpHeaderBytes = 24;

struct DumpHeader {
  std::uint32_t version = kDumpVersion;
  std::uint32_t dimension = 0;
  std::uint64_t count = 0;
};

class DumpWriter {
 public:
  DumpWriter(const std::filesystem::path& path, std::uint32_t dimension, std::uint64_t count);
  void write(const SampleInfo& info, const Eigen::Ref<const RowVector>& features);
  // Throws if fewer records than announced were written.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::uint32_t dimension_;
  std::uint64_t count_;
  std::uint64_t written_ = 0;
};

/// Streaming reader; validates the header on construction and each record
/// as it is read.
class DumpReader {
 public:
  explicit DumpReader(const std::filesystem::path& path);
  const DumpHeader& header() const { return header_; }
  // False once `count` records were read. Throws on malformed records.
  bool next(SampleInfo& info, RowVector& features);
  std::uint64_t offset() const { return offset_; }

 private:
  void read_exact(char* dst, std::size_t n, const char* what);

  std::filesystem::path path_;
  std::ifstream in_;
  DumpHeader header_;
  std::uint64_t read_ = 0;
  std::uint64_t offset_ = 0;
  std::vector<char> buffer_;
};

// One file per encoder stage, named stage_001.fdump and so on.
std::vector<std::filesystem::path> write_stage_dumps(const FeatureBank& bank,
                                                     const std::filesystem::path& dir);
// Stages are paired by record index; every file must list the same samples.
FeatureBank read_stage_dumps(const std::vector<std::filesystem::path>& paths);

struct DumpSummary {
  DumpHeader header;
  std::map<TaskId, std::size_t> train_per_task;
  std::map<TaskId, std::size_t> test_per_task;
  std::size_t classes = 0;
};

// Reads a whole file and checks class/task consistency.
DumpSummary check_dump(const std::filesystem::path& path);

}  // namespace semevo
