#pragma once

// Named members of the splitting family. Every constructor returns parameters
// that pass validate_params.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsplit/graph.hpp"
#include "fsplit/params.hpp"

namespace fsplit {

enum class MethodName { DY, DRS, GraphDRS, GFB, RFB, SDY, AGFB, SFBPlus };

/// Stable CLI identifiers: dy, drs, graph-drs, gfb, rfb, sdy, agfb, sfb+.
std::string_view method_id(MethodName name);
MethodName parse_method(std::string_view id);

struct MethodDescriptor {
  MethodName name;
  SplittingParams params;
  bool lifted = false;  ///< prefer run_lifted (coupling given as a laplacian)
  std::string notes;
};

/// n = 2 with gamma_1 = gamma_2 = gamma and M M^T = (theta_bar / gamma) [1 -1; -1 1].
/// Requires (4 - beta_hat gamma) / 2 >= theta_bar with beta_hat = sum(beta);
/// an empty beta gives Douglas-Rachford. Throws StepSizeViolation.
MethodDescriptor davis_yin_params(double gamma, double theta_bar,
                                  const Eigen::VectorXd& beta,
                                  double theta = kDefaultTheta);
/// Single forward operator with constant beta_total.
MethodDescriptor davis_yin_params(double gamma, double theta_bar, double beta_total,
                                  double theta = kDefaultTheta);
MethodDescriptor drs_params(double gamma, double theta_bar,
                            double theta = kDefaultTheta);

/// m = 0; M M^T = laplacian(G), P P^T = laplacian(G' \ G), so S = laplacian(G').
MethodDescriptor graph_drs_params(const GraphSpec& G, const GraphSpec& G_prime,
                                  double theta = kDefaultTheta);

/// m = n - 1 with forward j feeding resolvent j + 1 and reading the unique
/// predecessor of j + 1 in G_f; S = (1 + beta/2) laplacian(G').
/// G_prime defaults to G.
MethodDescriptor gfb_params(const GraphSpec& G, const GraphSpec& G_f, double beta,
                            double theta = kDefaultTheta,
                            const GraphSpec* G_prime = nullptr);
/// GFB on a ring with the path as forward graph.
MethodDescriptor rfb_params(int n, double beta, double theta = kDefaultTheta);
/// GFB on the path with the path as forward graph (P = 0).
MethodDescriptor sdy_params(int n, double beta, double theta = kDefaultTheta);

/// Forward operator attached to an edge (h, i): evaluated at x_h, fed to
/// resolvent i.
struct EdgeForward {
  GraphSpec::Edge edge;
  double beta = 0.0;
};

/// Lifted parameters with laplacian(G), P = 0 and one forward per listed
/// edge. Forwards must be ordered by nondecreasing target node.
MethodDescriptor agfb_params(const GraphSpec& G,
                             const std::vector<EdgeForward>& forwards,
                             double theta = kDefaultTheta);

/// Step size 2 / gamma_hat_i with gamma_hat_i = d_i + ½ (sum of incident
/// forward betas).
Eigen::VectorXd agfb_step_sizes(const GraphSpec& G,
                                const std::vector<EdgeForward>& forwards);

/// Random spanning "forward tree": node i >= 1 reads one uniformly chosen h < i.
GraphSpec random_forward_tree(int n, std::uint64_t seed);

/// m distinct edges of G sorted by (target, source), chosen uniformly.
std::vector<GraphSpec::Edge> random_edge_assignment(const GraphSpec& G, int m,
                                                    std::uint64_t seed);

/// Same coupling and causal pair with P replaced by a random centered P scaled
/// so that ||P P^T||_2 = target_norm.
SplittingParams with_random_P(const SplittingParams& params, double target_norm,
                              std::uint64_t seed);

}  // namespace fsplit
