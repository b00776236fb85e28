#ifndef SKEWSPEC_GAPS_HPP
#define SKEWSPEC_GAPS_HPP

#include "skewspec/potentials.hpp"

#include <cstdint>
#include <vector>

namespace skewspec {

struct ProfileWitness {
    PhasePoint phase;
    int64_t j = 0; // 1-based eigenvalue index; 0 when no cone reached this t
};

// Certified upper bound d(t) >= dist(t, Spec H) on a t grid:
//   d(t) = min over phases and j of |t - lambda_j| + bracket width + residual
//          + boundary weight,
// evaluated exactly at every grid point through a two-pass min-plus sweep.
struct DistanceProfile {
    std::vector<double> t_grid;
    std::vector<double> d_values;
    int64_t N = 0;
    std::vector<PhasePoint> phase_set;
    std::vector<ProfileWitness> per_t_witness;
    // the [-r, r] enclosure the grid was built to span; gap_upper_bound
    // refuses profiles whose grid does not reach these endpoints
    double enclosure_radius = 0.0;
};

struct GapBound {
    double gamma_upper = 0.0;  // 2 * (max d + step/2)
    double t_star = 0.0;       // grid argmax of d
    double t_grid_step = 0.0;
    double rigor_slack = 0.0;  // the step/2 Lipschitz completion term
};

struct GapCertificate {
    double t_lo = 0.0, t_hi = 0.0;
    int64_t N = 0;
    // min over t samples and phases of dist(t, window eigenvalue brackets)
    // minus sqrt(2/N) minus the t sub-grid completion term
    double margin = 0.0;
    // phase-coverage term: the certificate extends from the sampled phases to
    // the whole torus only when margin > phase_slack
    double phase_slack = 0.0;
    bool torus_rigorous = false;
};

// Uniform grid of num_points over [-radius, radius], endpoints included.
std::vector<double> uniform_t_grid(double radius, int64_t num_points);

// The {i/nx} x {j/ny} product grid, row-major with x fastest.
std::vector<PhasePoint> product_phase_grid(int64_t nx, int64_t ny);

// Phase pool for distance profiles: a base product grid, the zero and
// half-shifted phases, and dense sweeps around the endpoint argmax where the
// extreme eigenvalues peel away from the bulk. Closed under x -> x + 1/2 so
// profiles inherit the sign-flip symmetry.
struct ProfilePoolParams {
    int64_t base = 48;
    int64_t sweep_points = 1024;
    double sweep_halfwidth = 0.12;
};
std::vector<PhasePoint> default_profile_phases(const PotentialSpec& spec, int64_t N,
                                               PhasePoint argmax, ProfilePoolParams params = {});

DistanceProfile distance_profile(const PotentialSpec& spec, int64_t N,
                                 const std::vector<PhasePoint>& phase_set,
                                 const std::vector<double>& t_grid);

// 2 * (grid max of d + step/2): the 1-Lipschitz completion turns the grid max
// into a bound over the whole covered t range.
GapBound gap_upper_bound(const DistanceProfile& profile);

// Interval certification: every length-N window spectrum must stay farther
// than sqrt(2/N) from every point of (t_lo, t_hi). margin <= 0 means the
// certificate fails (not an error). Intervals fully outside the potential's
// Gershgorin enclosure certify directly with zero phase slack.
GapCertificate certify_gap(const PotentialSpec& spec, int64_t N, double t_lo, double t_hi,
                           const std::vector<PhasePoint>& phase_set, int64_t num_t_samples = 129);

} // namespace skewspec

#endif
