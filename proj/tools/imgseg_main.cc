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

// Usage:
//   imgseg segment page.html [--out result.json]
//   imgseg batch pages/ --out results/ [--workers 4]
//   imgseg eval pages/ --truth truth.json [--match jaccard]
//   imgseg eval --predictions results/ --truth truth.json
//   imgseg eval --counts 628,864,869
//   imgseg baseline-window page.html --window-n 32

#include <iostream>

#include "imgseg/cli.h"

int main(int argc, char** argv) {
  return imgseg::run_cli(argc, argv, std::cout, std::cerr);
}
