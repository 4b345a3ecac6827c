/*
 Copyright 2026 The hovi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hovi::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes of hovic.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,          ///< bad arguments or an internal error
  kExpectedFailure = 2,  ///< SingularKkt or a divergence flag
  kCheckFailed = 3,    ///< a gated check reported FAIL
};

/// Everything a subcommand can be told. Unused fields keep their defaults.
struct ExperimentConfig {
  std::string subcommand;
  std::string model = "harmonic";
  std::string scheme = "sg";
  std::string family = "lobatto";
  int stages = 3;
  int N = 16;
  std::string N_list = "8,16,32,64";
  std::string h_list = "0.2,0.1,0.05,0.025";
  double T = 1.0;
  std::string variant = "c3t3";
  int r = 0, t = 0;
  std::string q0, p0;
  double wq = 0.0, wp = 1.0, wu = 1.0, kq = 0.0, kp = 0.0;
  std::string init = "forward";
  int samples = 100;
  unsigned long long seed = 1;
  std::string out;
  std::string config;
  int jobs = 1;
  bool timing = false;
};

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Throws UsageError on a malformed line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Splits "a,b,c" (whitespace tolerated). Throws UsageError on bad numbers.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Inserts --key value pairs from the file named by --config right after
/// the subcommand, so flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hovi::cli
