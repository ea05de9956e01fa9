#include "proc.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace leanevo::detail {

CommandResult run_command(const std::string& command, double timeout_seconds) {
  int pipefd[2];
  if (pipe(pipefd) != 0) {
    return CommandResult{-1, std::string("pipe failed: ") + std::strerror(errno), false};
  }

  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    return CommandResult{-1, std::string("fork failed: ") + std::strerror(errno), false};
  }
  if (pid == 0) {
    setpgid(0, 0);  // own process group so a timeout can kill the whole tree
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(pipefd[1]);
  CommandResult result;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_seconds));

  char buf[4096];
  for (;;) {
    int wait_ms = -1;
    if (timeout_seconds > 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      wait_ms = static_cast<int>(left.count());
      if (wait_ms <= 0) {
        result.timed_out = true;
        kill(-pid, SIGKILL);
      }
    }
    if (result.timed_out) {
      // drain whatever is buffered, then stop
      ssize_t n;
      while ((n = read(pipefd[0], buf, sizeof buf)) > 0) result.output.append(buf, static_cast<std::size_t>(n));
      break;
    }
    struct pollfd pfd {pipefd[0], POLLIN, 0};
    int rc = poll(&pfd, 1, wait_ms);
    if (rc == 0) continue;  // re-check the deadline
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n > 0) {
      result.output.append(buf, static_cast<std::size_t>(n));
    } else {
      break;  // EOF
    }
  }
  close(pipefd[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (result.timed_out) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace leanevo::detail
