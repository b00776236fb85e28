#ifndef SKEWSPEC_LYAPUNOV_HPP
#define SKEWSPEC_LYAPUNOV_HPP

#include "skewspec/dd.hpp"
#include "skewspec/potentials.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace skewspec {

// Running transfer-matrix product, renormalized whenever the Frobenius norm
// exceeds 2^50; log_scale accumulates the extracted log norms so
// log_scale + log||matrix|| equals the log norm of the exact product.
//
// The determinant of the exact product is 1 at every step. The drift of the
// floating-point product is tracked through a companion window: the recent
// steps multiplied in double-double, whose determinant is folded into
// log_det whenever the window grows past 2^24 (cancellation in the 2x2
// determinant stays below the drift being measured only while the window
// entries are small, which is why the monitor cannot simply take the
// determinant of the renormalized matrix).
struct TransferState {
    std::array<std::array<double, 2>, 2> matrix{{{1.0, 0.0}, {0.0, 1.0}}};
    double log_scale = 0.0;

    std::array<std::array<dd, 2>, 2> window{
        {{dd{1.0, 0.0}, dd{0.0, 0.0}}, {dd{0.0, 0.0}, dd{1.0, 0.0}}}};
    int64_t window_steps = 0;
    dd log_det{0.0, 0.0};

    // exp(accumulated drift): 1 exactly for the exact recurrence
    double determinant() const;
    // Frobenius norm of the stored (renormalized) matrix
    double frobenius() const;
};

// Left-multiplies by [[v - E, -1], [1, 0]] and renormalizes past the cap.
TransferState transfer_step(const TransferState& state, double v, double E);

// (log_scale + log||M_N||) / N over the window [0, N) of the potential.
// cap_exponent selects the renormalization threshold 2^cap_exponent; the
// result is independent of it to rounding (default matches transfer_step).
double finite_lyapunov(const PotentialSpec& spec, double E, int64_t N, int cap_exponent = 50);

struct LyapunovCurve {
    std::vector<double> energies;
    std::vector<double> values;
    int64_t N = 0;
    int64_t num_phases = 0; // phases actually averaged
    uint64_t seed = 0;
};

// Averages finite_lyapunov over num_phases phase points per energy: the
// spec's own phase first, then seeded pseudo-random points. num_phases = 1 is
// the single-orbit quantity. Families without a phase orbit collapse to one
// evaluation. Reduction order is fixed, so results are bit-identical for any
// worker count.
LyapunovCurve lyapunov_curve(const PotentialSpec& spec, const std::vector<double>& E_grid,
                             int64_t N, int64_t num_phases, uint64_t seed);

} // namespace skewspec

#endif
