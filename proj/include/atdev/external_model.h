#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "atdev/predictor.h"

namespace atdev {

// Scores rows by running an external command once per batch.
//
// Wire protocol: the child's stdin receives a header line "N p" followed by N
// lines of p space-separated decimal numbers. The child must write exactly N
// lines with one decimal number each to stdout and exit with status 0.
// Anything else is a ModelError naming the offending row where possible.
//
// Calls are serialized internally, so a shared instance is safe to use from
// several threads.
class ExternalModel final : public Predictor {
 public:
  ExternalModel(std::string command, std::size_t arity, std::size_t batch_size = 50000);

  const std::string& command() const { return command_; }
  std::size_t arity() const override { return arity_; }

 protected:
  std::vector<double> do_predict(const Matrix& x) const override;

 private:
  std::string command_;
  std::size_t arity_;
  std::size_t batch_size_;
  mutable std::mutex mutex_;
};

std::unique_ptr<Predictor> wrap_external(std::string command, std::size_t arity,
                                         std::size_t batch_size = 50000);

// Protocol codec, exposed for tests and for scorer implementations.
std::string encode_request(const Matrix& x, std::size_t first_row, std::size_t count);
std::vector<double> decode_response(std::string_view text, std::size_t expected_rows,
                                    std::size_t row_offset = 0);

// Runs `command` through /bin/sh with `input` on stdin; returns stdout.
// Throws ModelError on spawn failure or non-zero exit.
std::string run_command(const std::string& command, const std::string& input);

}  // namespace atdev
