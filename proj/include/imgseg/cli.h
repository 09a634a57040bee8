// Copyright 2026 The imgseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IMGSEG_CLI_H_
#define IMGSEG_CLI_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imgseg/eval.h"
#include "imgseg/html_ingest.h"

namespace imgseg {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitError = 2;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string out;  // Empty: standard output (segment, eval).
  std::string truth_path;
  std::string predictions_dir;
  std::optional<std::vector<long long>> counts;  // correct, extracted, actual
  EvalConfig eval;
  IngestOptions ingest;
  std::size_t window_n = 32;
  unsigned workers = 1;
};

int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_baseline_window(const RunConfig& config, std::ostream& out,
                        std::ostream& err);

// Parses arguments and dispatches to one of the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// Runs fn(0) .. fn(n - 1) on up to `workers` threads. Each index is handled
// exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace imgseg

#endif  // IMGSEG_CLI_H_
