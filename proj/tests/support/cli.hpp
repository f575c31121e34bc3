#ifndef CACWB_TESTS_CLI_HPP
#define CACWB_TESTS_CLI_HPP

// Helpers for driving the built cacwb binary from tests. The binary path
// arrives via the CACWB_BIN compile definition.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace cli {

struct Result {
    int exit_code = -1;
    std::string out;
};

inline Result run(const std::string& args, const std::string& env = "") {
    const std::string command =
        env + (env.empty() ? "" : " ") + CACWB_BIN + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    Result result;
    std::array<char, 4096> buffer;
    std::size_t n = 0;
    while ((n = ::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.out.append(buffer.data(), n);
    }
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline std::filesystem::path write_config(const std::string& name,
                                          const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "cacwb_cli_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace cli

#endif
