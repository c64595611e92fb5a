#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <utility>

#include "gridssq/domain.hpp"
#include "gridssq/errors.hpp"

namespace testutil {

template <typename Fn>
gridssq::ErrorKind error_kind_of(Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const gridssq::Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected a gridssq::Error, none was thrown");
}

inline gridssq::NetworkInventory single_host_inventory(double hi = 1.0, double degradation = 0.0,
                                                       double si = 1.0) {
    gridssq::NetworkInventory inv;
    gridssq::HostSpec host;
    host.host_id = "h1";
    host.hi = hi;
    host.perf_degradation = degradation;
    host.services.push_back({"s1", si});
    inv.hosts.push_back(std::move(host));
    return inv;
}

// Unique scratch directory under the system temp root, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("gridssq-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& sub) const { return (path_ / sub).string(); }

private:
    std::filesystem::path path_;
};

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

inline std::string cli_binary() {
    if (const char* env = std::getenv("GRIDSSQ_CLI")) return env;
    return "./gridssq";
}

// Runs the CLI with stdout captured to a file and stderr discarded into it
// as well (tests only assert on exit codes and stdout content).
inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto capture = std::filesystem::temp_directory_path() /
                         ("gridssq-cli-out-" + std::to_string(::getpid()) + "-" +
                          std::to_string(counter++));
    const std::string cmd = cli_binary() + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult result;
    if (status == -1)
        result.exit_code = -1;
    else if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = std::move(buf).str();
    std::error_code ec;
    std::filesystem::remove(capture, ec);
    return result;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

}  // namespace testutil
