#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "qelect/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto parsed = qelect::harness::parse_args(args);
  if (!parsed.message.empty()) {
    std::fputs(parsed.message.c_str(), parsed.exit_code == 0 ? stdout : stderr);
    std::fputc('\n', parsed.exit_code == 0 ? stdout : stderr);
  }
  if (!parsed.config) return parsed.exit_code;
  try {
    return qelect::harness::run_subcommand(*parsed.config);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return qelect::harness::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return qelect::harness::kExitProtocolAbort;
  }
}
