// Runs the command-line tool from tests.
#ifndef ITEMDEV_TESTS_PROCESS_HPP
#define ITEMDEV_TESTS_PROCESS_HPP

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace testing_process {

/// Exit status of `command` run through the shell, or -1 if it died.
inline int run(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace testing_process

#endif  // ITEMDEV_TESTS_PROCESS_HPP
