// psdsketch CLI: generation, compression, verification, lower bounds, sweeps.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 retries exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psdsketch/psdsketch.hpp"

namespace {

using namespace psdsketch;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitRetriesExhausted = 3;

std::vector<std::int64_t> parse_grid(const std::string& grid) {
    std::vector<std::int64_t> out;
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw PreconditionError("empty --grid");
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("write failed for " + path);
}

struct GenOptions {
    std::string kind;
    std::string variant = "random";
    int X = 2, Y = 1, Z = 2, D = 4, N = 1, M = 1;
    int state_rank = 0, povm_rank = 0, rank = 0;
    int d = 2;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenOptions& o) {
    const SeedProvenance prov{o.seed, "psdsketch gen " + o.kind + "/" + o.variant};
    if (o.kind == "quantum_model") {
        QuantumModel m = o.variant == "basis-id"
                             ? basis_identification_model(o.X, o.Y, o.D)
                             : random_model(o.X, o.Y, o.Z, o.D, o.state_rank, o.povm_rank, o.seed);
        write_archive_file(o.out, m, prov);
    } else if (o.kind == "psd_factorization") {
        write_archive_file(o.out, random_psd_factorization(o.N, o.M, o.D, o.rank, o.seed), prov);
    } else if (o.kind == "data_table") {
        if (o.variant == "identity") {
            write_archive_file(o.out, identity_table(o.D), prov);
        } else if (o.variant == "constant") {
            write_archive_file(o.out, constant_table(o.X, o.Y, o.Z), prov);
        } else {
            throw PreconditionError("gen data_table: variant must be identity or constant");
        }
    } else if (o.kind == "projection") {
        write_archive_file(o.out, sample_projection(o.d, o.D, o.seed));
    } else {
        throw PreconditionError("gen: unknown kind '" + o.kind + "'");
    }
    return kExitOk;
}

struct CompressOptions {
    std::string in, out, report;
    std::string mode = "model";
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    std::int64_t d = 0;  // 0 = use the theorem formula
    int max_retries = 64;
};

void write_report_file(const std::string& path, const CompressionCertificate& cert,
                       const CompressionReport& report) {
    if (path.empty()) return;
    nlohmann::ordered_json j;
    j["certificate"] = certificate_json(cert);
    j["report"] = report_json(report);
    write_text_file(path, j.dump(2) + "\n");
}

int cmd_compress(const CompressOptions& o) {
    const auto j = load_archive_json(o.in);
    const ArchiveKind kind = peek_archive_kind(j);
    const CompressionConfig cfg(o.epsilon, o.seed, o.max_retries);

    if (o.mode == "psd") {
        if (kind != ArchiveKind::psd_factorization)
            throw PreconditionError("compress --mode psd expects a psd_factorization archive");
        PsdFactorization f = read_psd_factorization(j);
        const std::int64_t d = o.d > 0 ? o.d : dim_for_psd(o.epsilon, f.joint_count(), f.dim);
        PsdCompressionResult res = compress_psd(f, cfg, d);
        write_archive_file(o.out, res.compressed);
        if (!o.report.empty()) {
            nlohmann::ordered_json rj;
            rj["certificate"] = certificate_json(res.certificate);
            write_text_file(o.report, rj.dump(2) + "\n");
        }
        std::cout << "accepted after " << res.certificate.attempts
                  << " attempt(s), max violation ratio "
                  << detail::format_double(res.certificate.max_violation_ratio) << "\n";
        return kExitOk;
    }

    if (kind != ArchiveKind::quantum_model)
        throw PreconditionError("compress --mode " + o.mode + " expects a quantum_model archive");
    QuantumModel m = read_quantum_model(j);
    ModelCompressor compressor(m);

    std::vector<TailProfile> profiles;
    Regime regime = Regime::model;
    std::int64_t d = o.d;
    if (o.mode == "model") {
        if (d <= 0) d = dim_for_model(o.epsilon, compressor.J(), compressor.D(),
                                      compressor.max_sum_rank());
    } else if (o.mode == "tail") {
        regime = Regime::tail;
        profiles = compressor.fit_profiles();
        if (d <= 0)
            for (const auto& p : profiles)
                d = std::max(d, dim_for_tail(o.epsilon, compressor.J(), compressor.D(), p.j_star,
                                             p.b));
    } else {
        throw PreconditionError("compress: --mode must be psd, model, or tail");
    }

    try {
        ModelCompressionResult res =
            compressor.run(cfg, d, regime, regime == Regime::tail ? &profiles : nullptr);
        write_archive_file(o.out, res.model);
        write_report_file(o.report, res.certificate, res.report);
        std::cout << "accepted after " << res.certificate.attempts
                  << " attempt(s), max violation ratio "
                  << detail::format_double(res.certificate.max_violation_ratio) << "\n";
        return kExitOk;
    } catch (const RetriesExhaustedError& e) {
        // Report the failure; the best attempt's ratio is the diagnostic.
        if (!o.report.empty()) {
            nlohmann::ordered_json rj;
            rj["error"] = "retries_exhausted";
            rj["attempts"] = e.attempts;
            rj["best_max_violation_ratio"] = e.best_max_violation_ratio;
            rj["epsilon"] = o.epsilon;
            rj["d"] = d;
            write_text_file(o.report, rj.dump(2) + "\n");
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitRetriesExhausted;
    }
}

int cmd_lower_bound(const std::string& in, double eps_noise) {
    const auto j = load_archive_json(in);
    if (peek_archive_kind(j) != ArchiveKind::data_table)
        throw PreconditionError("lower-bound expects a data_table archive");
    const DataTable t = read_data_table(j);
    const LowerBoundReport r = lower_bound(t);
    std::cout << "l = " << detail::format_double(r.l) << "\n";
    std::cout << "argmax_y = " << r.argmax_y << "\n";
    for (int y = 0; y < r.Y; ++y)
        std::cout << "l_y[" << y << "] = " << detail::format_double(r.l_y(y)) << "\n";
    std::cout << "noisy(eps_noise=" << detail::format_double(eps_noise)
              << ") = " << detail::format_double(r.noisy(eps_noise)) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& original_path, const std::string& compressed_path,
               double epsilon) {
    const auto jo = load_archive_json(original_path);
    const auto jc = load_archive_json(compressed_path);
    const ArchiveKind ko = peek_archive_kind(jo);
    const ArchiveKind kc = peek_archive_kind(jc);
    if (ko != kc) throw PreconditionError("verify: archive kinds differ");

    if (ko == ArchiveKind::psd_factorization) {
        const PsdFactorization orig = read_psd_factorization(jo);
        const PsdFactorization comp = read_psd_factorization(jc);
        if (orig.joint_count() != comp.joint_count())
            throw PreconditionError("verify: factorization sizes differ");
        std::vector<const HermitianMatrix*> a, b;
        for (const auto& mtx : orig.left) a.push_back(&mtx);
        for (const auto& mtx : orig.right) a.push_back(&mtx);
        for (const auto& mtx : comp.left) b.push_back(&mtx);
        for (const auto& mtx : comp.right) b.push_back(&mtx);
        double worst = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t jdx = i; jdx < a.size(); ++jdx) {
                const double err =
                    std::abs(trace_inner(*b[i], *b[jdx]) - trace_inner(*a[i], *a[jdx]));
                const double bound = 192.0 * epsilon * a[i]->trace() * a[jdx]->trace();
                if (bound > 0.0) {
                    worst = std::max(worst, err / bound);
                    ok = ok && err <= bound;
                } else {
                    ok = ok && err <= tol::zero_bound_slack;
                }
            }
        std::cout << "gram check: max violation ratio " << detail::format_double(worst) << " -> "
                  << (ok ? "pass" : "FAIL") << "\n";
        return ok ? kExitOk : kExitVerificationFailure;
    }

    if (ko != ArchiveKind::quantum_model)
        throw PreconditionError("verify expects quantum_model or psd_factorization archives");
    const QuantumModel orig = read_quantum_model(jo);
    const QuantumModel comp = read_quantum_model(jc);
    const auto violations = validate_model(comp);
    for (const auto& v : violations) std::cout << "violation: " << v.describe() << "\n";
    const CompressionReport rep = error_report(orig, comp, epsilon);
    std::cout << "max violation ratio = " << detail::format_double(rep.max_violation_ratio)
              << "\n";
    std::cout << "max abs error (state_meas) = "
              << detail::format_double(rep.max_abs_error_state_meas) << "\n";
    const bool ok = violations.empty() && rep.all_pass;
    std::cout << (ok ? "pass" : "FAIL") << "\n";
    return ok ? kExitOk : kExitVerificationFailure;
}

struct SweepOptions {
    std::string in, out;
    std::string grid = "16,32,64";
    int seeds = 10;
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    int max_retries = 64;
};

int cmd_sweep(const SweepOptions& o) {
    const auto j = load_archive_json(o.in);
    if (peek_archive_kind(j) != ArchiveKind::quantum_model)
        throw PreconditionError("sweep expects a quantum_model archive");
    const QuantumModel m = read_quantum_model(j);
    const SweepResult res =
        run_sweep(m, parse_grid(o.grid), o.epsilon, o.seed, o.seeds, o.max_retries);
    write_text_file(o.out, sweep_csv(res));
    std::cout << "wrote " << res.rows.size() << " rows to " << o.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compression of psd factorizations and quantum models via random projections"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* cgen = app.add_subcommand("gen", "Generate a deterministic instance archive");
    cgen->add_option("--kind", gen.kind,
                     "quantum_model | psd_factorization | data_table | projection")
        ->required();
    cgen->add_option("--variant", gen.variant, "random | basis-id | identity | constant");
    cgen->add_option("--X", gen.X);
    cgen->add_option("--Y", gen.Y);
    cgen->add_option("--Z", gen.Z);
    cgen->add_option("--D", gen.D);
    cgen->add_option("--N", gen.N);
    cgen->add_option("--M", gen.M);
    cgen->add_option("--state-rank", gen.state_rank, "0 = full rank");
    cgen->add_option("--povm-rank", gen.povm_rank, "0 = full rank");
    cgen->add_option("--rank", gen.rank, "factor rank for psd_factorization (0 = full)");
    cgen->add_option("--d", gen.d, "sketch rows for kind projection");
    cgen->add_option("--seed", gen.seed);
    cgen->add_option("--out", gen.out)->required();

    CompressOptions comp;
    auto* ccomp = app.add_subcommand("compress", "Compress an archive and certify the errors");
    ccomp->add_option("--in", comp.in)->required();
    ccomp->add_option("--out", comp.out)->required();
    ccomp->add_option("--report", comp.report, "machine-readable JSON report path");
    ccomp->add_option("--mode", comp.mode, "psd | model | tail");
    ccomp->add_option("--epsilon", comp.epsilon);
    ccomp->add_option("--seed", comp.seed);
    ccomp->add_option("--d", comp.d, "target dimension override (0 = theorem formula)");
    ccomp->add_option("--max-retries", comp.max_retries);

    std::string lb_in;
    double eps_noise = 0.0;
    auto* clb = app.add_subcommand("lower-bound", "Dimension lower bound of a data table");
    clb->add_option("--in", lb_in)->required();
    clb->add_option("--eps-noise", eps_noise);

    std::string v_orig, v_comp;
    double v_eps = 0.5;
    auto* cver = app.add_subcommand("verify", "Re-check a compressed archive against bounds");
    cver->add_option("--original", v_orig)->required();
    cver->add_option("--compressed", v_comp)->required();
    cver->add_option("--epsilon", v_eps)->required();

    SweepOptions sw;
    auto* csw = app.add_subcommand("sweep", "Error-vs-d grid over seeds, CSV output");
    csw->add_option("--in", sw.in)->required();
    csw->add_option("--out", sw.out)->required();
    csw->add_option("--grid", sw.grid, "comma-separated d values");
    csw->add_option("--seeds", sw.seeds);
    csw->add_option("--epsilon", sw.epsilon);
    csw->add_option("--seed", sw.seed);
    csw->add_option("--max-retries", sw.max_retries);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (cgen->parsed()) return cmd_gen(gen);
        if (ccomp->parsed()) return cmd_compress(comp);
        if (clb->parsed()) return cmd_lower_bound(lb_in, eps_noise);
        if (cver->parsed()) return cmd_verify(v_orig, v_comp, v_eps);
        if (csw->parsed()) return cmd_sweep(sw);
    } catch (const RetriesExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRetriesExhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
