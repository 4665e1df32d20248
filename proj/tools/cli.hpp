// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cutthumb::cli {

/// Entry point shared by the `cutthumb` binary and in-process tests.
/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cutthumb::cli
