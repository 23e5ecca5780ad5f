#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "psdsketch/detail/format.hpp"
#include "psdsketch/model.hpp"
#include "psdsketch/projection.hpp"
#include "psdsketch/report.hpp"

namespace psdsketch {

// JSON archive, format_version 1. Complex entries are two-element [re, im]
// arrays in row-major order; numbers use the shortest representation that
// parses back exactly, so write -> read -> write is byte-stable. The writer
// streams (archives can hold millions of numbers); the reader uses a DOM.

inline constexpr int kArchiveFormatVersion = 1;

enum class ArchiveKind { quantum_model, psd_factorization, data_table, projection };

inline const char* archive_kind_name(ArchiveKind k) {
    switch (k) {
        case ArchiveKind::quantum_model: return "quantum_model";
        case ArchiveKind::psd_factorization: return "psd_factorization";
        case ArchiveKind::data_table: return "data_table";
        case ArchiveKind::projection: return "projection";
    }
    return "?";
}

namespace detail {

inline void write_complex_matrix(std::ostream& os, const Matrix& m) {
    os << "{\"rows\":" << m.rows() << ",\"cols\":" << m.cols() << ",\"entries\":[";
    bool first = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!first) os << ',';
            first = false;
            os << '[' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag())
               << ']';
        }
    os << "]}";
}

inline Matrix read_complex_matrix(const nlohmann::json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != static_cast<Eigen::Index>(rows) * cols)
        throw IoError("archive: matrix entry count mismatch");
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jj = 0; jj < cols; ++jj, ++k)
            m(i, jj) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
    return m;
}

inline nlohmann::json parse_stream(std::istream& is, const std::string& what) {
    nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
    if (j.is_discarded()) throw IoError("archive: failed to parse " + what);
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

struct SeedProvenance {
    std::uint64_t seed = 0;
    std::string generator;
};

inline void write_archive(std::ostream& os, const QuantumModel& m,
                          std::optional<SeedProvenance> prov = std::nullopt) {
    os << "{\"format_version\":" << kArchiveFormatVersion << ",\"kind\":\"quantum_model\""
       << ",\"dim\":" << m.dim << ",\"X\":" << m.num_states() << ",\"Y\":" << m.num_measurements()
       << ",\"Z\":" << m.num_outcomes();
    if (prov) os << ",\"seed\":" << prov->seed << ",\"generator\":\"" << prov->generator << "\"";
    os << ",\"states\":[";
    for (int x = 0; x < m.num_states(); ++x) {
        if (x) os << ',';
        detail::write_complex_matrix(os, m.states[x].matrix());
    }
    os << "],\"povms\":[";
    for (int y = 0; y < m.num_measurements(); ++y) {
        if (y) os << ',';
        os << '[';
        for (int z = 0; z < m.num_outcomes(); ++z) {
            if (z) os << ',';
            detail::write_complex_matrix(os, m.povms[y][z].matrix());
        }
        os << ']';
    }
    os << "]}";
}

inline void write_archive(std::ostream& os, const PsdFactorization& f,
                          std::optional<SeedProvenance> prov = std::nullopt) {
    os << "{\"format_version\":" << kArchiveFormatVersion << ",\"kind\":\"psd_factorization\""
       << ",\"dim\":" << f.dim << ",\"N\":" << f.left.size() << ",\"M\":" << f.right.size();
    if (prov) os << ",\"seed\":" << prov->seed << ",\"generator\":\"" << prov->generator << "\"";
    os << ",\"left\":[";
    for (std::size_t i = 0; i < f.left.size(); ++i) {
        if (i) os << ',';
        detail::write_complex_matrix(os, f.left[i].matrix());
    }
    os << "],\"right\":[";
    for (std::size_t i = 0; i < f.right.size(); ++i) {
        if (i) os << ',';
        detail::write_complex_matrix(os, f.right[i].matrix());
    }
    os << "]}";
}

inline void write_archive(std::ostream& os, const DataTable& t,
                          std::optional<SeedProvenance> prov = std::nullopt) {
    os << "{\"format_version\":" << kArchiveFormatVersion << ",\"kind\":\"data_table\""
       << ",\"X\":" << t.X() << ",\"Y\":" << t.Y() << ",\"Z\":" << t.Z()
       << ",\"normalized\":" << (t.normalized() ? "true" : "false");
    if (prov) os << ",\"seed\":" << prov->seed << ",\"generator\":\"" << prov->generator << "\"";
    os << ",\"entries\":[";
    bool first = true;
    for (int x = 0; x < t.X(); ++x)
        for (int c = 0; c < t.Y() * t.Z(); ++c) {
            if (!first) os << ',';
            first = false;
            os << detail::format_double(t.entries()(x, c));
        }
    os << "]}";
}

inline void write_archive(std::ostream& os, const ProjectionMatrix& p) {
    os << "{\"format_version\":" << kArchiveFormatVersion << ",\"kind\":\"projection\""
       << ",\"d\":" << p.d << ",\"D\":" << p.D << ",\"seed\":" << p.seed << ",\"matrix\":";
    detail::write_complex_matrix(os, p.entries);
    os << '}';
}

template <typename T>
std::string archive_string(const T& value, std::optional<SeedProvenance> prov = std::nullopt) {
    std::ostringstream os;
    write_archive(os, value, prov);
    return os.str();
}

inline std::string archive_string(const ProjectionMatrix& p) {
    std::ostringstream os;
    write_archive(os, p);
    return os.str();
}

template <typename T>
void write_archive_file(const std::string& path, const T& value,
                        std::optional<SeedProvenance> prov = std::nullopt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("archive: cannot open " + path + " for writing");
    write_archive(os, value, prov);
    os << '\n';
    if (!os) throw IoError("archive: write failed for " + path);
}

inline void write_archive_file(const std::string& path, const ProjectionMatrix& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("archive: cannot open " + path + " for writing");
    write_archive(os, p);
    os << '\n';
    if (!os) throw IoError("archive: write failed for " + path);
}

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

inline ArchiveKind peek_archive_kind(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != kArchiveFormatVersion)
        throw IoError("archive: unsupported format_version");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quantum_model") return ArchiveKind::quantum_model;
    if (kind == "psd_factorization") return ArchiveKind::psd_factorization;
    if (kind == "data_table") return ArchiveKind::data_table;
    if (kind == "projection") return ArchiveKind::projection;
    throw IoError("archive: unknown kind '" + kind + "'");
}

inline ArchiveKind peek_archive_kind_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("archive: cannot open " + path);
    return peek_archive_kind(detail::parse_stream(is, path));
}

// Structural invariants (shapes, hermiticity, nonnegativity) are re-validated
// on load; semantic model validity stays with validate_model so that corrupt
// models can be loaded for diagnosis.
inline QuantumModel read_quantum_model(const nlohmann::json& j) {
    if (peek_archive_kind(j) != ArchiveKind::quantum_model)
        throw IoError("archive: expected kind quantum_model");
    QuantumModel m;
    m.dim = j.at("dim").get<int>();
    const int X = j.at("X").get<int>(), Y = j.at("Y").get<int>(), Z = j.at("Z").get<int>();
    for (const auto& s : j.at("states")) m.states.emplace_back(detail::read_complex_matrix(s));
    m.povms.resize(Y);
    int y = 0;
    for (const auto& povm : j.at("povms")) {
        for (const auto& e : povm) m.povms[y].emplace_back(detail::read_complex_matrix(e));
        ++y;
    }
    if (m.num_states() != X || m.num_measurements() != Y ||
        (Y > 0 && m.num_outcomes() != Z))
        throw IoError("archive: quantum_model shape metadata mismatch");
    for (const auto& s : m.states)
        if (s.dim() != m.dim) throw IoError("archive: state dimension mismatch");
    for (const auto& povm : m.povms)
        for (const auto& e : povm)
            if (e.dim() != m.dim) throw IoError("archive: POVM element dimension mismatch");
    return m;
}

inline PsdFactorization read_psd_factorization(const nlohmann::json& j) {
    if (peek_archive_kind(j) != ArchiveKind::psd_factorization)
        throw IoError("archive: expected kind psd_factorization");
    PsdFactorization f;
    f.dim = j.at("dim").get<int>();
    for (const auto& a : j.at("left")) f.left.emplace_back(detail::read_complex_matrix(a));
    for (const auto& b : j.at("right")) f.right.emplace_back(detail::read_complex_matrix(b));
    if (f.left.size() != j.at("N").get<std::size_t>() ||
        f.right.size() != j.at("M").get<std::size_t>())
        throw IoError("archive: psd_factorization shape metadata mismatch");
    for (const auto& a : f.left)
        if (a.dim() != f.dim) throw IoError("archive: left factor dimension mismatch");
    for (const auto& b : f.right)
        if (b.dim() != f.dim) throw IoError("archive: right factor dimension mismatch");
    return f;
}

inline DataTable read_data_table(const nlohmann::json& j) {
    if (peek_archive_kind(j) != ArchiveKind::data_table)
        throw IoError("archive: expected kind data_table");
    const int X = j.at("X").get<int>(), Y = j.at("Y").get<int>(), Z = j.at("Z").get<int>();
    const bool normalized = j.at("normalized").get<bool>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != X * Y * Z)
        throw IoError("archive: data_table entry count mismatch");
    RealMatrix e(X, Y * Z);
    int k = 0;
    for (int x = 0; x < X; ++x)
        for (int c = 0; c < Y * Z; ++c, ++k) e(x, c) = entries[k].get<double>();
    return DataTable(X, Y, Z, std::move(e), normalized);
}

inline ProjectionMatrix read_projection(const nlohmann::json& j) {
    if (peek_archive_kind(j) != ArchiveKind::projection)
        throw IoError("archive: expected kind projection");
    ProjectionMatrix p;
    p.d = j.at("d").get<int>();
    p.D = j.at("D").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.entries = detail::read_complex_matrix(j.at("matrix"));
    if (p.entries.rows() != p.d || p.entries.cols() != p.D)
        throw IoError("archive: projection shape mismatch");
    return p;
}

inline nlohmann::json load_archive_json(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("archive: cannot open " + path);
    return detail::parse_stream(is, path);
}

// ---------------------------------------------------------------------------
// Machine-readable compression reports
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json certificate_json(const CompressionCertificate& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["projection_seed"] = c.projection_seed;
    j["attempts"] = c.attempts;
    j["jl_event_held"] = c.jl_event_held;
    j["norm_events"] = c.norm_events;
    j["promised_bound_constant"] = c.promised_bound_constant;
    j["max_violation_ratio"] = c.max_violation_ratio;
    j["formula_satisfied"] = c.formula_satisfied;
    j["epsilon_requested"] = c.epsilon_requested;
    j["epsilon_used"] = c.epsilon_used;
    j["d"] = c.d;
    j["D"] = c.D;
    j["regime"] = c.regime;
    return j;
}

inline nlohmann::ordered_json report_json(const CompressionReport& r) {
    nlohmann::ordered_json j;
    j["epsilon_used"] = r.epsilon_used;
    j["bound_constant"] = r.bound_constant;
    j["all_pass"] = r.all_pass;
    j["max_violation_ratio"] = r.max_violation_ratio;
    j["max_abs_error"] = {{"state_state", r.max_abs_error_state_state},
                          {"state_meas", r.max_abs_error_state_meas},
                          {"meas_meas", r.max_abs_error_meas_meas}};
    auto rows = [](const std::vector<PairErrorRow>& v) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : v) {
            nlohmann::ordered_json o;
            if (row.x >= 0) o["x"] = row.x;
            if (row.x2 >= 0) o["x2"] = row.x2;
            if (row.y >= 0) o["y"] = row.y;
            if (row.z >= 0) o["z"] = row.z;
            if (row.y2 >= 0) o["y2"] = row.y2;
            if (row.z2 >= 0) o["z2"] = row.z2;
            o["original"] = row.original_ip;
            o["compressed"] = row.compressed_ip;
            o["abs_error"] = row.abs_error;
            o["bound"] = row.bound;
            o["ratio"] = row.ratio;
            o["pass"] = row.pass;
            arr.push_back(std::move(o));
        }
        return arr;
    };
    j["state_state"] = rows(r.state_state);
    j["state_meas"] = rows(r.state_meas);
    j["meas_meas"] = rows(r.meas_meas);
    return j;
}

}  // namespace psdsketch
