#include "lmicert/solver.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace lmicert {

namespace fs = std::filesystem;

SolverRun run_solver(const std::string& binary, const std::string& input, double timeout_s) {
  SolverRun run;
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  std::string tmpl = (fs::temp_directory_path() / "lmicert-solver-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) {
    run.message = std::string("cannot create a temporary directory: ") + std::strerror(errno);
    return run;
  }
  fs::path dir(tmpl);
  fs::path in = dir / "input.ms", out = dir / "output.ms", log = dir / "solver.log";
  std::ofstream(in) << input;

  pid_t pid = fork();
  if (pid < 0) {
    run.message = std::string("fork failed: ") + std::strerror(errno);
    fs::remove_all(dir);
    return run;
  }
  if (pid == 0) {
    int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fd >= 0) {
      dup2(fd, STDOUT_FILENO);
      dup2(fd, STDERR_FILENO);
      close(fd);
    }
    setpgid(0, 0);
    execl(binary.c_str(), binary.c_str(), "-f", in.c_str(), "-o", out.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  int status = 0;
  bool timed_out = false;
  while (true) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) {
      run.message = std::string("waitpid failed: ") + std::strerror(errno);
      break;
    }
    if (elapsed() > timeout_s) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  run.seconds = elapsed();

  if (timed_out) {
    run.status = SolverStatus::Timeout;
    run.message = "solver exceeded " + std::to_string(timeout_s) + " s";
  } else if (run.message.empty()) {
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
      std::ifstream f(out);
      if (f) {
        std::ostringstream ss;
        ss << f.rdbuf();
        run.output = ss.str();
        run.status = SolverStatus::Ok;
      } else {
        run.message = "solver produced no output file";
      }
    } else if (WIFEXITED(status)) {
      run.message = WEXITSTATUS(status) == 127 ? "cannot execute " + binary
                                               : "solver exited with status " + std::to_string(WEXITSTATUS(status));
    } else {
      run.message = "solver terminated by a signal";
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return run;
}

}  // namespace lmicert
