// Copyright 2026 The sgnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace sgnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Environment variable that overrides every output directory.
inline constexpr const char* kOutputDirEnv = "SGNET_OUTPUT_DIR";

/// Entry point behind the `sgnet` executable. `args` excludes the program
/// name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_train(const std::filesystem::path& config, bool dry_run, std::ostream& out, std::ostream& err);
int cmd_eval(const std::filesystem::path& checkpoint, const std::string& dataset, const std::string& mode,
             std::ostream& out, std::ostream& err);
int cmd_analyze(const std::filesystem::path& checkpoint, const std::string& dataset, std::ostream& out,
                std::ostream& err);
int cmd_gradcheck(int cases, unsigned long long seed, std::ostream& out, std::ostream& err);
int cmd_taxonomy_export(const std::string& name, std::ostream& out, std::ostream& err);
int cmd_taxonomy_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

}  // namespace sgnet::cli
