// Command-line front-end for the hypcmc shared library. Usage:
//
//   hypcmc_cli <command> [config=FILE] [key=value ...]
//
// Commands: mesh, solve, verify-exact, barrier-check, rearrange, asymptotic,
// oracle, convergence. Settings come from an optional flat key=value config
// file plus key=value arguments; arguments override the file. Exit status:
// 0 success, 1 failed check, 2 usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hypcmc.h"

namespace {

void usage(std::ostream& os) {
  os << "usage: hypcmc_cli <command> [config=FILE] [key=value ...]\n"
     << "commands:\n"
     << "  mesh           build and export a domain mesh\n"
     << "  solve          minimize the energy for Dirichlet data\n"
     << "  verify-exact   curvature check of a closed-form solution\n"
     << "  barrier-check  cone solvability, barrier construction, sandwich\n"
     << "  rearrange      randomized rearrangement property battery\n"
     << "  asymptotic     cap exhaustion toward the equator\n"
     << "  oracle         rotationally symmetric 1-D reference solve\n"
     << "  convergence    refinement study against the closed form\n"
     << "common keys: domain=cap:EPS|ball:RHO level=N H=VALUE out=DIR\n"
     << "             data=constant:C|exact-trace[:C]|samples:PATH seed=N\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 2;
  }
  const std::string command = argv[1];
  if (command == "-h" || command == "--help" || command == "help") {
    usage(std::cout);
    return 0;
  }

  std::map<std::string, std::string> kv;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    const size_t eq = arg.find('=');
    if (eq == std::string::npos) {
      std::cerr << "argument is not key=value: " << arg << "\n";
      return 2;
    }
    const std::string key = arg.substr(0, eq);
    const std::string val = arg.substr(eq + 1);
    if (key == "config") {
      std::ifstream f(val);
      if (!f) {
        std::cerr << "cannot read config file " << val << "\n";
        return 2;
      }
      std::string line;
      while (std::getline(f, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const size_t feq = line.find('=');
        if (feq == std::string::npos) {
          std::cerr << "config line lacks '=': " << line << "\n";
          return 2;
        }
        // Command-line values override the file: only fill missing keys later.
        const std::string fkey = line.substr(0, feq);
        if (!kv.count(fkey)) kv[fkey] = line.substr(feq + 1);
      }
    } else {
      kv[key] = val;  // later duplicates override earlier ones
    }
  }

  std::ostringstream cfg;
  cfg << "command=" << command << "\n";
  for (const auto& [k, v] : kv) cfg << k << "=" << v << "\n";

  char msg[4096];
  const int status = hypcmc_run(cfg.str().c_str(), msg, sizeof(msg));
  if (status == 0)
    std::cout << msg << "\n";
  else
    std::cerr << "error (" << status << "): " << msg << "\n";
  return status;
}
