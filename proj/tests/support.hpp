#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "psdsketch/psdsketch.hpp"

namespace testsupport {

using namespace psdsketch;

// Deterministic random Hermitian matrix (not necessarily psd).
inline HermitianMatrix random_hermitian(int dim, std::uint64_t stream) {
    Matrix g = rng::complex_gaussian(dim, dim, stream);
    return HermitianMatrix::unchecked(0.5 * (g + g.adjoint()));
}

inline HermitianMatrix random_psd(int dim, int rank, std::uint64_t stream) {
    Matrix v = rng::complex_gaussian(dim, rank, stream);
    Matrix w = v * v.adjoint();
    return HermitianMatrix::unchecked(0.5 * (w + w.adjoint()).eval());
}

// Normalized random data table.
inline DataTable random_normalized_table(int X, int Y, int Z, std::uint64_t stream) {
    RealMatrix e(X, Y * Z);
    std::uint64_t idx = 0;
    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y) {
            double sum = 0.0;
            for (int z = 0; z < Z; ++z) {
                const double v = rng::uniform_at(stream, idx++) + 1e-3;
                e(x, y * Z + z) = v;
                sum += v;
            }
            for (int z = 0; z < Z; ++z) e(x, y * Z + z) /= sum;
        }
    return DataTable(X, Y, Z, std::move(e), true);
}

// Runs fn(i) for i in [0, n) across hardware threads; results must be stored
// by index so aggregation order stays deterministic.
inline void parallel_for_indices(int n, const std::function<void(int)>& fn) {
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

inline std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_string(const std::string& s) { return fnv1a(s.data(), s.size()); }

inline std::uint64_t hash_matrix(const Matrix& m, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a(m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size()), h);
}

inline std::uint64_t hash_model(const QuantumModel& m) {
    std::uint64_t h = fnv1a(&m.dim, sizeof m.dim);
    for (const auto& s : m.states) h = hash_matrix(s.matrix(), h);
    for (const auto& povm : m.povms)
        for (const auto& e : povm) h = hash_matrix(e.matrix(), h);
    return h;
}

struct CliResult {
    int exit_code = -1;
    std::string output;
};

// Runs the built CLI with the given argument string; stderr folds into stdout.
inline CliResult run_cli(const std::string& args) {
#ifdef PSDSKETCH_CLI_PATH
    const std::string cmd = std::string(PSDSKETCH_CLI_PATH) + " " + args + " 2>&1";
#else
    const std::string cmd = "psdsketch " + args + " 2>&1";
#endif
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Extracts the value following "<key> = " on its own line of CLI output.
inline double parse_cli_value(const std::string& output, const std::string& key) {
    const std::string needle = key + " = ";
    const auto pos = output.find(needle);
    if (pos == std::string::npos) throw std::runtime_error("missing '" + key + "' in output");
    return std::stod(output.substr(pos + needle.size()));
}

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("psdsketch_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace testsupport
