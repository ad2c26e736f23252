#pragma once

#include <string>
#include <vector>

namespace dyadcert::cli {

// Runs one command. `argv` excludes the program name; `stdin_doc` backs "-"
// file arguments and may be null. Returns the exit code.
int Run(const std::vector<std::string>& argv, const std::string* stdin_doc, std::string& out,
        std::string& err);

// Program version written into every run manifest.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace dyadcert::cli
