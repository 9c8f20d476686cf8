#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "pairflow/errors.hpp"

namespace pairflow {

// Minimal CSV emitter; every file starts with a "# schema:" line naming the
// columns. Doubles are written with full round-trip precision so reruns can
// be compared byte-wise.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : file_(std::fopen(path.c_str(), "w")), columns_(columns.size()) {
    if (file_ == nullptr)
      throw ConfigError("cannot open CSV for writing: " + path);
    std::string header = "# schema:";
    for (std::size_t i = 0; i < columns.size(); ++i)
      header += (i == 0 ? " " : ",") + columns[i];
    std::fprintf(file_, "%s\n", header.c_str());
    std::fflush(file_);
  }
  ~CsvWriter() {
    if (file_ != nullptr) std::fclose(file_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(&w) {}
    Row& cell(double v) {
      sep();
      std::fprintf(w_->file_, "%.17g", v);
      ++cells_;
      return *this;
    }
    Row& cell(long long v) {
      sep();
      std::fprintf(w_->file_, "%lld", v);
      ++cells_;
      return *this;
    }
    Row& cell(int v) { return cell(static_cast<long long>(v)); }
    Row& cell(const std::string& v) {
      sep();
      std::fprintf(w_->file_, "%s", v.c_str());
      ++cells_;
      return *this;
    }
    Row& cell(bool v) { return cell(std::string(v ? "pass" : "fail")); }
    ~Row() {
      std::fprintf(w_->file_, "\n");
      std::fflush(w_->file_);
    }

   private:
    void sep() {
      if (cells_ > 0) std::fprintf(w_->file_, ",");
    }
    CsvWriter* w_;
    std::size_t cells_ = 0;
  };

  Row row() { return Row(*this); }

 private:
  std::FILE* file_;
  std::size_t columns_;
};

}  // namespace pairflow
