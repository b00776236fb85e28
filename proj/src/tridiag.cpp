#include "skewspec/tridiag.hpp"

#include "skewspec/dd.hpp"
#include "skewspec/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace skewspec {

namespace {

constexpr double PIVMIN = DBL_MIN / DBL_EPSILON; // smallest pivot magnitude kept

double bracket_tol(const TridiagonalOperator& op) {
    return 1e-12 * std::max(1.0, op.scale());
}

} // namespace

double TridiagonalOperator::scale() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::fabs(d));
    return m + 2.0;
}

double TridiagonalOperator::gershgorin_lo() const {
    double m = diag.empty() ? 0.0 : diag[0];
    for (double d : diag) m = std::min(m, d);
    return m - 2.0;
}

double TridiagonalOperator::gershgorin_hi() const {
    double m = diag.empty() ? 0.0 : diag[0];
    for (double d : diag) m = std::max(m, d);
    return m + 2.0;
}

TridiagonalOperator build_restriction(const PotentialSpec& spec, int64_t n0, int64_t N) {
    if (N < 1) throw ConfigError("build_restriction requires N >= 1");
    validate_spec(spec);
    TridiagonalOperator op;
    op.n0 = n0;
    op.diag = potential_window(spec, n0, N);
    return op;
}

int64_t sturm_count(const double* diag, int64_t N, double E) {
    // Pivots of the LDL^T factorization of T - E. A zero pivot is replaced by
    // +PIVMIN, which keeps the count at "strictly below E" when E hits an
    // eigenvalue of a leading principal submatrix.
    int64_t count = 0;
    double q = diag[0] - E;
    if (std::fabs(q) < PIVMIN) q = (q < 0.0) ? -PIVMIN : PIVMIN;
    if (q < 0.0) ++count;
    for (int64_t i = 1; i < N; ++i) {
        q = diag[i] - E - 1.0 / q;
        if (std::fabs(q) < PIVMIN) q = (q < 0.0) ? -PIVMIN : PIVMIN;
        if (q < 0.0) ++count;
    }
    return count;
}

int64_t sturm_count(const TridiagonalOperator& op, double E) {
    if (!std::isfinite(E)) throw ConfigError("sturm_count requires finite E");
    if (op.size() == 0) return 0;
    return sturm_count(op.diag.data(), op.size(), E);
}

std::vector<EigenBracket> all_eigenvalue_brackets(const TridiagonalOperator& op) {
    const int64_t N = op.size();
    std::vector<EigenBracket> out(static_cast<size_t>(N));
    if (N == 0) return out;
    const double tol = bracket_tol(op);

    struct Seg {
        double lo, hi;
        int64_t clo, chi;
    };
    std::vector<Seg> stack;
    stack.push_back({op.gershgorin_lo() - tol, op.gershgorin_hi() + tol, 0, N});
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double mid = 0.5 * (s.lo + s.hi);
        if (s.hi - s.lo <= tol || mid <= s.lo || mid >= s.hi) {
            for (int64_t j = s.clo; j < s.chi; ++j) out[static_cast<size_t>(j)] = {s.lo, s.hi};
            continue;
        }
        int64_t cm = sturm_count(op.diag.data(), N, mid);
        cm = std::clamp(cm, s.clo, s.chi);
        if (cm > s.clo) stack.push_back({s.lo, mid, s.clo, cm});
        if (cm < s.chi) stack.push_back({mid, s.hi, cm, s.chi});
    }
    return out;
}

std::vector<double> all_eigenvalues(const TridiagonalOperator& op) {
    auto brackets = all_eigenvalue_brackets(op);
    std::vector<double> out(brackets.size());
    for (size_t i = 0; i < brackets.size(); ++i) out[i] = brackets[i].mid();
    return out;
}

EigenBracket eigenvalue_bracket(const TridiagonalOperator& op, int64_t j) {
    const int64_t N = op.size();
    if (j < 1 || j > N) throw ConfigError("eigenvalue index out of range: " + std::to_string(j));
    const double tol = bracket_tol(op);
    double lo = op.gershgorin_lo() - tol;
    double hi = op.gershgorin_hi() + tol;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(op.diag.data(), N, mid) >= j)
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

std::pair<EigenBracket, EigenBracket> extreme_eigenvalue_brackets(const TridiagonalOperator& op) {
    return {eigenvalue_bracket(op, 1), eigenvalue_bracket(op, op.size())};
}

std::pair<double, double> extreme_eigenvalues(const TridiagonalOperator& op) {
    auto [lo, hi] = extreme_eigenvalue_brackets(op);
    return {lo.mid(), hi.mid()};
}

namespace {

// One inverse-iteration solve (T - sigma) z = b, Gaussian elimination with
// partial pivoting. d/du hold the shifted diagonal and superdiagonal, du2 the
// fill-in band created by row swaps; sub/super entries start out as 1.
void shifted_solve(const std::vector<double>& diag, double sigma, std::vector<double>& z,
                   std::vector<double>& d, std::vector<double>& du, std::vector<double>& du2) {
    const int64_t N = static_cast<int64_t>(diag.size());
    for (int64_t i = 0; i < N; ++i) d[i] = diag[i] - sigma;
    std::fill(du.begin(), du.end(), 1.0);
    std::fill(du2.begin(), du2.end(), 0.0);

    for (int64_t i = 0; i + 1 < N; ++i) {
        if (std::fabs(d[i]) >= 1.0) {
            double m = 1.0 / d[i];
            d[i + 1] -= m * du[i];
            z[i + 1] -= m * z[i];
        } else {
            // swap rows i and i+1; the unit subdiagonal becomes the pivot
            double m = d[i];
            double tmp = d[i + 1];
            d[i] = 1.0;
            d[i + 1] = du[i] - m * tmp;
            if (i + 2 < N) {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du2[i];
            }
            du[i] = tmp;
            std::swap(z[i], z[i + 1]);
            z[i + 1] -= m * z[i];
        }
    }
    if (std::fabs(d[N - 1]) < PIVMIN) d[N - 1] = (d[N - 1] < 0.0) ? -PIVMIN : PIVMIN;

    z[N - 1] /= d[N - 1];
    if (N >= 2) {
        int64_t i = N - 2;
        z[i] = (z[i] - du[i] * z[i + 1]) / d[i];
        for (i = N - 3; i >= 0; --i)
            z[i] = (z[i] - du[i] * z[i + 1] - du2[i] * z[i + 2]) / d[i];
    }
}

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
    double n = vec_norm(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

double residual_norm(const std::vector<double>& diag, const std::vector<double>& v, double lambda) {
    const int64_t N = static_cast<int64_t>(diag.size());
    double s = 0.0;
    for (int64_t i = 0; i < N; ++i) {
        double r = (diag[i] - lambda) * v[i];
        if (i > 0) r += v[i - 1];
        if (i + 1 < N) r += v[i + 1];
        s += r * r;
    }
    return std::sqrt(s);
}

// Inverse iteration for the eigenvalues in brackets[first..last] (a cluster),
// with Gram-Schmidt against the cluster members already computed.
std::vector<EigenPair> solve_cluster(const TridiagonalOperator& op,
                                     const std::vector<EigenBracket>& brackets, int64_t first,
                                     int64_t last) {
    const int64_t N = op.size();
    const double scale = op.scale();
    std::vector<EigenPair> result;
    std::vector<std::vector<double>> done;

    std::vector<double> d(N), du(N), du2(N), z(N);

    for (int64_t j = first; j <= last; ++j) {
        const EigenBracket& br = brackets[static_cast<size_t>(j)];
        double lambda = br.mid();
        EigenPair best;
        double best_res = HUGE_VAL;
        for (int attempt = 0; attempt < 4; ++attempt) {
            double sigma = lambda;
            if (attempt == 1) sigma += 1e-11 * scale;
            if (attempt == 2) sigma -= 1e-11 * scale;
            if (attempt == 3) sigma += 3e-11 * scale;
            for (int64_t i = 0; i < N; ++i)
                z[i] = uniform01(0x5eedull + static_cast<uint64_t>(attempt),
                                 static_cast<uint64_t>(j * N + i)) -
                       0.5;
            for (const auto& w : done) {
                double dot = 0.0;
                for (int64_t i = 0; i < N; ++i) dot += z[i] * w[i];
                for (int64_t i = 0; i < N; ++i) z[i] -= dot * w[i];
            }
            normalize(z);
            bool ok = true;
            for (int sweep = 0; sweep < 3; ++sweep) {
                shifted_solve(op.diag, sigma, z, d, du, du2);
                for (const auto& w : done) {
                    double dot = 0.0;
                    for (int64_t i = 0; i < N; ++i) dot += z[i] * w[i];
                    for (int64_t i = 0; i < N; ++i) z[i] -= dot * w[i];
                }
                double n = vec_norm(z);
                if (!(n > 0.0) || !std::isfinite(n)) {
                    ok = false;
                    break;
                }
                for (double& x : z) x /= n;
                if (sweep >= 1 && residual_norm(op.diag, z, lambda) <= 1e-11 * scale) break;
            }
            if (!ok) continue;
            double res = residual_norm(op.diag, z, lambda);
            if (res < best_res) {
                best_res = res;
                best.value = lambda;
                best.vector = z;
                best.residual = res;
            }
            if (res <= 1e-11 * scale) break;
        }
        if (!(best_res <= 1e-10 * scale))
            throw NumericalError("inverse iteration stagnated at eigenvalue index " +
                                 std::to_string(j + 1));
        best.bracket_width = br.width();
        best.boundary_weight = std::fabs(best.vector.front()) + std::fabs(best.vector.back());
        best.index = j + 1;
        done.push_back(best.vector);
        result.push_back(std::move(best));
    }
    return result;
}

// [first, last] extent of the near-degenerate cluster containing index j.
std::pair<int64_t, int64_t> cluster_extent(const std::vector<EigenBracket>& brackets, int64_t j,
                                           double cluster_tol) {
    int64_t first = j, last = j;
    while (first > 0 &&
           brackets[static_cast<size_t>(first)].lo - brackets[static_cast<size_t>(first - 1)].hi <=
               cluster_tol)
        --first;
    int64_t n = static_cast<int64_t>(brackets.size());
    while (last + 1 < n &&
           brackets[static_cast<size_t>(last + 1)].lo - brackets[static_cast<size_t>(last)].hi <=
               cluster_tol)
        ++last;
    return {first, last};
}

} // namespace

EigenPair eigenpair(const TridiagonalOperator& op, int64_t j) {
    const int64_t N = op.size();
    if (j < 1 || j > N) throw ConfigError("eigenpair index out of range: " + std::to_string(j));
    auto brackets = all_eigenvalue_brackets(op);
    auto [first, last] = cluster_extent(brackets, j - 1, 1e-8 * op.scale());
    auto cluster = solve_cluster(op, brackets, first, last);
    return cluster[static_cast<size_t>(j - 1 - first)];
}

std::vector<EigenPair> all_eigenpairs(const TridiagonalOperator& op) {
    const int64_t N = op.size();
    auto brackets = all_eigenvalue_brackets(op);
    const double cluster_tol = 1e-8 * op.scale();
    std::vector<EigenPair> out;
    out.reserve(static_cast<size_t>(N));
    int64_t j = 0;
    while (j < N) {
        auto [first, last] = cluster_extent(brackets, j, cluster_tol);
        auto cluster = solve_cluster(op, brackets, first, last);
        for (auto& p : cluster) out.push_back(std::move(p));
        j = last + 1;
    }
    return out;
}

} // namespace skewspec
