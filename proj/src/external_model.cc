#include "atdev/external_model.h"

#include <fcntl.h>
#include <pthread.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <thread>

#include "atdev/dataset.h"
#include "atdev/error.h"

extern char** environ;

namespace atdev {

ExternalModel::ExternalModel(std::string command, std::size_t arity, std::size_t batch_size)
    : command_(std::move(command)), arity_(arity), batch_size_(batch_size) {
  if (command_.empty()) throw UsageError("external model: empty command");
  if (arity_ == 0) throw UsageError("external model: arity must be positive");
  if (batch_size_ == 0) throw UsageError("external model: batch size must be positive");
}

std::unique_ptr<Predictor> wrap_external(std::string command, std::size_t arity,
                                         std::size_t batch_size) {
  return std::make_unique<ExternalModel>(std::move(command), arity, batch_size);
}

std::string encode_request(const Matrix& x, std::size_t first_row, std::size_t count) {
  std::string out = std::to_string(count) + ' ' + std::to_string(x.cols()) + '\n';
  out.reserve(count * x.cols() * 24);
  for (std::size_t r = first_row; r < first_row + count; ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> decode_response(std::string_view text, std::size_t expected_rows,
                                    std::size_t row_offset) {
  std::vector<double> values;
  values.reserve(expected_rows);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (!line.empty() && line.front() == '+') line.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (line.empty() || ec != std::errc() || ptr != line.data() + line.size() || !std::isfinite(v))
      throw ModelError("external model: cannot parse output for row " +
                       std::to_string(row_offset + values.size()) + " ('" + std::string(line) + "')");
    values.push_back(v);
    start = nl + 1;
  }
  if (values.size() != expected_rows)
    throw ModelError("external model: expected " + std::to_string(expected_rows) +
                     " output lines for rows " + std::to_string(row_offset) + ".." +
                     std::to_string(row_offset + expected_rows - 1) + ", got " +
                     std::to_string(values.size()));
  return values;
}

namespace {

void write_all(int fd, const std::string& data) {
  sigset_t block;
  sigemptyset(&block);
  sigaddset(&block, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &block, nullptr);
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // EPIPE: the child stopped reading; its exit status tells the story
    }
    off += static_cast<std::size_t>(n);
  }
  ::close(fd);
  // Drop a SIGPIPE raised for this thread before it could be delivered.
  struct timespec zero {};
  while (sigtimedwait(&block, nullptr, &zero) > 0) {
  }
}

}  // namespace

std::string run_command(const std::string& command, const std::string& input) {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw ModelError("external model: pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ModelError("external model: pipe failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv),
                             environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw ModelError("external model: cannot spawn '" + command + "': " + std::strerror(rc));
  }

  std::thread writer(write_all, in_pipe[1], std::cref(input));
  std::string output;
  char buf[1 << 16];
  while (true) {
    const ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  writer.join();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!WIFEXITED(status))
    throw ModelError("external model: '" + command + "' terminated abnormally");
  if (WEXITSTATUS(status) == 127)
    throw ModelError("external model: cannot spawn '" + command + "' (command not found)");
  if (WEXITSTATUS(status) != 0)
    throw ModelError("external model: '" + command + "' exited with status " +
                     std::to_string(WEXITSTATUS(status)));
  return output;
}

std::vector<double> ExternalModel::do_predict(const Matrix& x) const {
  std::lock_guard lock(mutex_);
  std::vector<double> y;
  y.reserve(x.rows());
  for (std::size_t first = 0; first < x.rows(); first += batch_size_) {
    const std::size_t count = std::min(batch_size_, x.rows() - first);
    const std::string out = run_command(command_, encode_request(x, first, count));
    const std::vector<double> part = decode_response(out, count, first);
    y.insert(y.end(), part.begin(), part.end());
  }
  return y;
}

}  // namespace atdev
