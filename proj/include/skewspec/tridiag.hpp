#ifndef SKEWSPEC_TRIDIAG_HPP
#define SKEWSPEC_TRIDIAG_HPP

#include "skewspec/potentials.hpp"

#include <cstdint>
#include <vector>

namespace skewspec {

// Finite Dirichlet restriction of H = V + Delta to a window of N sites:
// symmetric tridiagonal with the sampled potential on the diagonal and unit
// off-diagonals.
struct TridiagonalOperator {
    std::vector<double> diag;
    int64_t n0 = 0;

    int64_t size() const { return static_cast<int64_t>(diag.size()); }
    // All eigenvalues lie in [min diag - 2, max diag + 2] (Gershgorin).
    double scale() const; // ||diag||_inf + 2, the tolerance unit
    double gershgorin_lo() const;
    double gershgorin_hi() const;
};

TridiagonalOperator build_restriction(const PotentialSpec& spec, int64_t n0, int64_t N);

// Number of eigenvalues strictly below E (Sturm pivot sign count, guarded
// against zero pivots).
int64_t sturm_count(const TridiagonalOperator& op, double E);
int64_t sturm_count(const double* diag, int64_t N, double E);

// Certified bisection bracket around one eigenvalue: count(lo) < j <= count(hi).
struct EigenBracket {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

// All N eigenvalues, ascending, each bracketed to width <= 1e-12 * max(1, scale).
std::vector<double> all_eigenvalues(const TridiagonalOperator& op);
std::vector<EigenBracket> all_eigenvalue_brackets(const TridiagonalOperator& op);

// j-th eigenvalue bracket, 1-based ascending, without a full decomposition.
EigenBracket eigenvalue_bracket(const TridiagonalOperator& op, int64_t j);

// (lambda_min, lambda_max) by direct bisection on the 0<->1 and N-1<->N counts.
std::pair<double, double> extreme_eigenvalues(const TridiagonalOperator& op);
std::pair<EigenBracket, EigenBracket> extreme_eigenvalue_brackets(const TridiagonalOperator& op);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;   // unit Euclidean norm
    double boundary_weight = 0.0; // |xi_0| + |xi_{N-1}|
    double residual = 0.0;        // ||H_I xi - value xi||_2
    double bracket_width = 0.0;   // certified eigenvalue bracket width
    int64_t index = 0;            // 1-based ascending position
};

// j-th eigenpair (1-based ascending): inverse iteration at the bisected
// eigenvalue, Gram-Schmidt within near-degenerate clusters, deterministic
// retry policy. Throws NumericalError if iteration stagnates.
EigenPair eigenpair(const TridiagonalOperator& op, int64_t j);

// All eigenpairs; clusters are orthogonalized jointly.
std::vector<EigenPair> all_eigenpairs(const TridiagonalOperator& op);

} // namespace skewspec

#endif
