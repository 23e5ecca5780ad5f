#pragma once

#include <string>
#include <vector>

#include "psdsketch/hermitian.hpp"

namespace psdsketch {

/// X states on C^D plus Y POVMs with Z outcomes each. Invariants (unit state
/// traces, POVM completeness, psd-ness) are checked by validate_model, not at
/// construction, so invalid models can be loaded and diagnosed.
struct QuantumModel {
    int dim = 0;
    std::vector<HermitianMatrix> states;
    std::vector<std::vector<HermitianMatrix>> povms;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_measurements() const { return static_cast<int>(povms.size()); }
    int num_outcomes() const { return povms.empty() ? 0 : static_cast<int>(povms[0].size()); }
    // J = X + YZ, the size of the joint operator list.
    int joint_count() const { return num_states() + num_measurements() * num_outcomes(); }
};

/// Two lists of psd matrices realizing a nonnegative matrix as trace inner
/// products M_{nm} = tr(A_n B_m).
struct PsdFactorization {
    int dim = 0;
    std::vector<HermitianMatrix> left;
    std::vector<HermitianMatrix> right;

    int joint_count() const { return static_cast<int>(left.size() + right.size()); }
};

/// Nonnegative X x (Y*Z) table indexed (x; y,z). The `normalized` flag is
/// explicit: a table of general psd-factorization values must not be silently
/// treated as probabilities.
class DataTable {
public:
    DataTable(int X, int Y, int Z, RealMatrix entries, bool normalized)
        : X_(X), Y_(Y), Z_(Z), normalized_(normalized), entries_(std::move(entries)) {
        if (X < 1 || Y < 1 || Z < 1) throw PreconditionError("DataTable: empty shape");
        if (entries_.rows() != X || entries_.cols() != static_cast<Eigen::Index>(Y) * Z)
            throw DimensionMismatchError("DataTable: entries shape mismatch");
        for (int x = 0; x < X; ++x)
            for (int c = 0; c < Y * Z; ++c) {
                const double v = entries_(x, c);
                if (!(v >= 0.0)) throw PreconditionError("DataTable: negative entry");
                if (normalized_ && v > 1.0 + tol::norm)
                    throw PreconditionError("DataTable: entry above 1 in normalized mode");
            }
        if (normalized_) {
            for (int x = 0; x < X; ++x)
                for (int y = 0; y < Y; ++y) {
                    double s = 0.0;
                    for (int z = 0; z < Z; ++z) s += entries_(x, y * Z + z);
                    if (std::abs(s - 1.0) > tol::norm)
                        throw PreconditionError("DataTable: row (x=" + std::to_string(x) +
                                                ",y=" + std::to_string(y) + ") sums to " +
                                                std::to_string(s));
                }
        }
    }

    int X() const { return X_; }
    int Y() const { return Y_; }
    int Z() const { return Z_; }
    bool normalized() const { return normalized_; }
    double at(int x, int y, int z) const { return entries_(x, y * Z_ + z); }
    const RealMatrix& entries() const { return entries_; }

private:
    int X_, Y_, Z_;
    bool normalized_;
    RealMatrix entries_;  // X rows, Y*Z columns, column (y,z) at y*Z + z
};

using GramMatrix = RealMatrix;

struct Violation {
    enum class Kind {
        Shape,            // ragged POVMs or dimension mismatch
        StateNotPsd,
        StateTrace,
        PovmElementNotPsd,
        PovmNotComplete,  // sum_z E_yz != I
    };
    Kind kind;
    int x = -1;
    int y = -1;
    int z = -1;
    double deviation = 0.0;

    std::string describe() const {
        switch (kind) {
            case Kind::Shape:
                return "shape mismatch at (x=" + std::to_string(x) + ",y=" + std::to_string(y) +
                       ",z=" + std::to_string(z) + ")";
            case Kind::StateNotPsd:
                return "state x=" + std::to_string(x) + " not psd (min eigenvalue " +
                       std::to_string(-deviation) + ")";
            case Kind::StateTrace:
                return "state x=" + std::to_string(x) + " trace deviates from 1 by " +
                       std::to_string(deviation);
            case Kind::PovmElementNotPsd:
                return "POVM element (y=" + std::to_string(y) + ",z=" + std::to_string(z) +
                       ") not psd (min eigenvalue " + std::to_string(-deviation) + ")";
            case Kind::PovmNotComplete:
                return "POVM y=" + std::to_string(y) + " deviates from completeness by " +
                       std::to_string(deviation);
        }
        return "unknown violation";
    }
};

namespace detail {

inline double min_eigenvalue(const HermitianMatrix& h) {
    if (h.dim() == 0) return 0.0;
    const RealVector w = eigh_values(h);
    return w(w.size() - 1);
}

inline double psd_threshold(const HermitianMatrix& h) {
    return tol::psd * std::max(1.0, std::abs(h.trace()));
}

}  // namespace detail

/// Empty result iff all QuantumModel invariants hold. Violations are data,
/// not errors; each names the offending index and the measured deviation.
inline std::vector<Violation> validate_model(const QuantumModel& m) {
    std::vector<Violation> out;
    const int Z = m.num_outcomes();
    for (int x = 0; x < m.num_states(); ++x) {
        if (m.states[x].dim() != m.dim) {
            out.push_back({Violation::Kind::Shape, x, -1, -1,
                           static_cast<double>(m.states[x].dim())});
            continue;
        }
        const double min_ev = detail::min_eigenvalue(m.states[x]);
        if (min_ev < -detail::psd_threshold(m.states[x]))
            out.push_back({Violation::Kind::StateNotPsd, x, -1, -1, -min_ev});
        const double tr_dev = std::abs(m.states[x].trace() - 1.0);
        if (tr_dev > tol::norm)
            out.push_back({Violation::Kind::StateTrace, x, -1, -1, tr_dev});
    }
    for (int y = 0; y < m.num_measurements(); ++y) {
        if (static_cast<int>(m.povms[y].size()) != Z) {
            out.push_back({Violation::Kind::Shape, -1, y, -1,
                           static_cast<double>(m.povms[y].size())});
            continue;
        }
        bool shapes_ok = true;
        for (int z = 0; z < Z; ++z) {
            if (m.povms[y][z].dim() != m.dim) {
                out.push_back({Violation::Kind::Shape, -1, y, z,
                               static_cast<double>(m.povms[y][z].dim())});
                shapes_ok = false;
                continue;
            }
            const double min_ev = detail::min_eigenvalue(m.povms[y][z]);
            if (min_ev < -detail::psd_threshold(m.povms[y][z]))
                out.push_back({Violation::Kind::PovmElementNotPsd, -1, y, z, -min_ev});
        }
        if (!shapes_ok) continue;
        Matrix sum = Matrix::Zero(m.dim, m.dim);
        for (int z = 0; z < Z; ++z) sum += m.povms[y][z].matrix();
        const double dev = (sum - Matrix::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff();
        if (dev > tol::norm)
            out.push_back({Violation::Kind::PovmNotComplete, -1, y, -1, dev});
    }
    return out;
}

/// D[x; y,z] = Re tr(rho_x E_yz), clamped to [0,1] after the normalization
/// check so that clamping cannot mask an invalid model.
inline DataTable data_table(const QuantumModel& m) {
    const auto violations = validate_model(m);
    if (!violations.empty())
        throw InvalidModelError("data_table: invalid model: " + violations.front().describe());
    const int X = m.num_states(), Y = m.num_measurements(), Z = m.num_outcomes();
    if (Y == 0) throw PreconditionError("data_table: model has no measurements");
    RealMatrix entries(X, Y * Z);
    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y)
            for (int z = 0; z < Z; ++z)
                entries(x, y * Z + z) = trace_inner(m.states[x], m.povms[y][z]);
    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y) {
            double s = 0.0;
            for (int z = 0; z < Z; ++z) s += entries(x, y * Z + z);
            if (std::abs(s - 1.0) > tol::norm)
                throw InvalidModelError("data_table: row (x,y)=(" + std::to_string(x) + "," +
                                        std::to_string(y) + ") sums to " + std::to_string(s));
        }
    entries = entries.cwiseMax(0.0).cwiseMin(1.0);
    return DataTable(X, Y, Z, std::move(entries), true);
}

/// The X-dimensional diagonal model reproducing a normalized table exactly:
/// rho_x = |x><x| and (E_yz)_{ii} = t[i; y,z].
inline QuantumModel trivial_model(const DataTable& t) {
    if (!t.normalized())
        throw PreconditionError("trivial_model: table must be normalized");
    const int X = t.X(), Y = t.Y(), Z = t.Z();
    QuantumModel m;
    m.dim = X;
    m.states.reserve(X);
    for (int x = 0; x < X; ++x) {
        Matrix s = Matrix::Zero(X, X);
        s(x, x) = 1.0;
        m.states.push_back(HermitianMatrix::unchecked(std::move(s)));
    }
    m.povms.resize(Y);
    for (int y = 0; y < Y; ++y) {
        m.povms[y].reserve(Z);
        for (int z = 0; z < Z; ++z) {
            Matrix e = Matrix::Zero(X, X);
            for (int i = 0; i < X; ++i) e(i, i) = t.at(i, y, z);
            m.povms[y].push_back(HermitianMatrix::unchecked(std::move(e)));
        }
    }
    return m;
}

/// G[n][m] = Re tr(M_n M_m).
inline GramMatrix gram(const std::vector<HermitianMatrix>& mats) {
    const int J = static_cast<int>(mats.size());
    GramMatrix g(J, J);
    for (int n = 0; n < J; ++n)
        for (int mIdx = n; mIdx < J; ++mIdx) {
            const double v = trace_inner(mats[n], mats[mIdx]);
            g(n, mIdx) = v;
            g(mIdx, n) = v;
        }
    return g;
}

/// Basis states |x><x| with binary basis-projector measurements
/// (|y><y|, I - |y><y|): the identification-style instance where every
/// measurement is rank-1 plus a high-rank remainder.
inline QuantumModel basis_identification_model(int X, int Y, int D) {
    if (X < 1 || Y < 1 || D < 1 || X > D || Y > D)
        throw PreconditionError("basis_identification_model: need 1 <= X,Y <= D");
    QuantumModel m;
    m.dim = D;
    for (int x = 0; x < X; ++x) {
        Matrix s = Matrix::Zero(D, D);
        s(x, x) = 1.0;
        m.states.push_back(HermitianMatrix::unchecked(std::move(s)));
    }
    m.povms.resize(Y);
    for (int y = 0; y < Y; ++y) {
        Matrix e = Matrix::Zero(D, D);
        e(y, y) = 1.0;
        Matrix rest = Matrix::Identity(D, D) - e;
        m.povms[y].push_back(HermitianMatrix::unchecked(std::move(e)));
        m.povms[y].push_back(HermitianMatrix::unchecked(std::move(rest)));
    }
    return m;
}

/// The incompressible instance: D basis states against one D-outcome basis
/// measurement; its table is the identity matrix of size D.
inline DataTable identity_table(int D) {
    if (D < 1) throw PreconditionError("identity_table: D must be positive");
    return DataTable(D, 1, D, RealMatrix::Identity(D, D), true);
}

inline DataTable constant_table(int X, int Y, int Z) {
    if (X < 1 || Y < 1 || Z < 1) throw PreconditionError("constant_table: empty shape");
    return DataTable(X, Y, Z, RealMatrix::Constant(X, Y * Z, 1.0 / Z), true);
}

}  // namespace psdsketch
