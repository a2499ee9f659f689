#include "fsplit/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"

namespace fsplit {

namespace {

struct MethodEntry {
  MethodName name;
  std::string_view id;
};

constexpr MethodEntry kMethods[] = {
    {MethodName::DY, "dy"},       {MethodName::DRS, "drs"},
    {MethodName::GraphDRS, "graph-drs"}, {MethodName::GFB, "gfb"},
    {MethodName::RFB, "rfb"},     {MethodName::SDY, "sdy"},
    {MethodName::AGFB, "agfb"},   {MethodName::SFBPlus, "sfb+"},
};

Eigen::MatrixXd two_node_gram(double scale) {
  Eigen::MatrixXd G(2, 2);
  G << scale, -scale, -scale, scale;
  return G;
}

void require_connected(const GraphSpec& G, const char* what) {
  G.check_ordering();
  if (G.n < 2) throw Error(ErrorKind::InvalidGraph, std::string(what) + " needs n >= 2");
  if (!G.connected()) throw Error(ErrorKind::InvalidGraph, std::string(what) + " is not connected");
}

}  // namespace

std::string_view method_id(MethodName name) {
  for (const auto& e : kMethods)
    if (e.name == name) return e.id;
  return "unknown";
}

MethodName parse_method(std::string_view id) {
  for (const auto& e : kMethods)
    if (e.id == id) return e.name;
  throw Error(ErrorKind::InvalidParameters, "unknown method '" + std::string(id) + "'");
}

MethodDescriptor davis_yin_params(double gamma, double theta_bar,
                                  const Eigen::VectorXd& beta, double theta) {
  if (!(gamma > 0.0) || !(theta_bar > 0.0))
    throw Error(ErrorKind::InvalidParameters, "gamma and theta_bar must be positive");
  if ((beta.array() < 0.0).any())
    throw Error(ErrorKind::InvalidParameters, "beta must be nonnegative");
  const double beta_hat = beta.sum();
  if ((4.0 - beta_hat * gamma) / 2.0 < theta_bar)
    throw Error(ErrorKind::StepSizeViolation,
                "(4 - beta*gamma)/2 < theta_bar: step size too large");

  const double lambda2 = theta_bar / gamma;
  const double p2 = std::max(0.0, (4.0 - 2.0 * theta_bar - beta_hat * gamma) / (2.0 * gamma));
  Eigen::MatrixXd M(2, 1);
  M << std::sqrt(lambda2), -std::sqrt(lambda2);
  Eigen::MatrixXd P(2, 1);
  P << std::sqrt(p2), -std::sqrt(p2);

  std::optional<CausalPair> causal;
  const int m = static_cast<int>(beta.size());
  if (m > 0) {
    CausalPair c;
    c.H = Eigen::MatrixXd::Zero(2, m);
    c.H.row(1).setOnes();
    c.K = Eigen::MatrixXd::Zero(m, 2);
    c.K.col(0).setOnes();
    c.F = NondecreasingVector({0, m}, m);
    causal = std::move(c);
  }
  MethodDescriptor out{m > 0 ? MethodName::DY : MethodName::DRS,
                       assemble_with_grams(M, two_node_gram(lambda2), P,
                                           two_node_gram(p2), causal, beta, theta),
                       false, "two resolvents, forwards evaluated at x1 and fed to x2"};
  return out;
}

MethodDescriptor davis_yin_params(double gamma, double theta_bar, double beta_total,
                                  double theta) {
  return davis_yin_params(gamma, theta_bar, Eigen::VectorXd::Constant(1, beta_total), theta);
}

MethodDescriptor drs_params(double gamma, double theta_bar, double theta) {
  return davis_yin_params(gamma, theta_bar, Eigen::VectorXd(0), theta);
}

MethodDescriptor graph_drs_params(const GraphSpec& G, const GraphSpec& G_prime,
                                  double theta) {
  require_connected(G, "G");
  G_prime.check_ordering();
  if (G_prime.n != G.n || !is_subgraph(G, G_prime))
    throw Error(ErrorKind::InvalidGraph, "edges of G must be a subset of G'");

  const Eigen::MatrixXd lap = graph_laplacian(G);
  const Eigen::MatrixXd extra = graph_laplacian(edge_difference(G_prime, G));
  const Eigen::MatrixXd P =
      extra.isZero(0.0) ? Eigen::MatrixXd(G.n, 0) : psd_factor(extra);
  return {MethodName::GraphDRS,
          assemble_with_grams(laplacian_factor(lap), lap, P, extra, std::nullopt,
                              Eigen::VectorXd(0), theta),
          true, "no forward operators"};
}

MethodDescriptor gfb_params(const GraphSpec& G, const GraphSpec& G_f, double beta,
                            double theta, const GraphSpec* G_prime) {
  require_connected(G, "G");
  const GraphSpec& Gp = G_prime ? *G_prime : G;
  G_f.check_ordering();
  Gp.check_ordering();
  const int n = G.n;
  if (G_f.n != n || Gp.n != n)
    throw Error(ErrorKind::InvalidGraph, "graphs must share the node count");
  if (!is_subgraph(G, Gp) || !is_subgraph(G_f, Gp))
    throw Error(ErrorKind::InvalidGraph, "G and G_f must be subgraphs of G'");
  if (!(beta >= 0.0)) throw Error(ErrorKind::InvalidParameters, "beta must be nonnegative");

  const int m = n - 1;
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (const auto& [h, i] : G_f.edges) {
    if (parent[static_cast<std::size_t>(i)] != -1)
      throw Error(ErrorKind::InvalidGraph, "node has more than one incoming forward edge");
    parent[static_cast<std::size_t>(i)] = h;
  }
  CausalPair c;
  c.H = Eigen::MatrixXd::Zero(n, m);
  c.K = Eigen::MatrixXd::Zero(m, n);
  std::vector<int> F(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) F[static_cast<std::size_t>(i)] = i;
  for (int f = 0; f < m; ++f) {
    const int h = parent[static_cast<std::size_t>(f + 1)];
    if (h < 0) throw Error(ErrorKind::InvalidGraph, "node without incoming forward edge");
    c.H(f + 1, f) = 1.0;
    c.K(f, h) = 1.0;
  }
  c.F = NondecreasingVector(F, m);

  const Eigen::MatrixXd lap = graph_laplacian(G);
  const Eigen::MatrixXd lap_p = graph_laplacian(Gp);
  const Eigen::MatrixXd lap_f = graph_laplacian(G_f);
  const Eigen::MatrixXd extra = graph_laplacian(edge_difference(Gp, G));
  const Eigen::VectorXd betas = Eigen::VectorXd::Constant(m, beta);
  const Eigen::MatrixXd p_gram = extra + 0.5 * beta * (lap_p - lap_f);
  const Eigen::MatrixXd M = laplacian_factor(lap);
  Eigen::MatrixXd P(n, 0);
  if (!p_gram.isZero(0.0)) {
    const Eigen::MatrixXd W = forward_coupling(c, betas, n);
    P = factor_P((1.0 + 0.5 * beta) * lap_p, M, W);
  }
  return {MethodName::GFB, assemble_with_grams(M, lap, P, p_gram, c, betas, theta), true,
          "forward j feeds resolvent j+1"};
}

MethodDescriptor rfb_params(int n, double beta, double theta) {
  const GraphSpec ring = graph_builders(GraphKind::Ring, n);
  auto d = gfb_params(ring, graph_builders(GraphKind::Path, n), beta, theta);
  d.name = MethodName::RFB;
  return d;
}

MethodDescriptor sdy_params(int n, double beta, double theta) {
  const GraphSpec path = graph_builders(GraphKind::Path, n);
  auto d = gfb_params(path, path, beta, theta);
  d.name = MethodName::SDY;
  return d;
}

MethodDescriptor agfb_params(const GraphSpec& G, const std::vector<EdgeForward>& forwards,
                             double theta) {
  require_connected(G, "G");
  const int n = G.n;
  const int m = static_cast<int>(forwards.size());
  std::set<GraphSpec::Edge> seen;
  int last_target = 0;
  for (const auto& f : forwards) {
    if (!G.has_edge(f.edge.first, f.edge.second))
      throw Error(ErrorKind::InvalidGraph, "forward attached to an edge not in G");
    if (!seen.insert(f.edge).second)
      throw Error(ErrorKind::InvalidGraph, "edge carries more than one forward");
    if (f.edge.second < last_target)
      throw Error(ErrorKind::NotCausal, "forwards must be ordered by target node");
    if (!(f.beta >= 0.0)) throw Error(ErrorKind::InvalidParameters, "beta must be nonnegative");
    last_target = f.edge.second;
  }

  std::optional<CausalPair> causal;
  Eigen::VectorXd betas(m);
  if (m > 0) {
    CausalPair c;
    c.H = Eigen::MatrixXd::Zero(n, m);
    c.K = Eigen::MatrixXd::Zero(m, n);
    std::vector<int> F(static_cast<std::size_t>(n), 0);
    for (int e = 0; e < m; ++e) {
      const auto [h, i] = forwards[static_cast<std::size_t>(e)].edge;
      c.H(i, e) = 1.0;
      c.K(e, h) = 1.0;
      betas(e) = forwards[static_cast<std::size_t>(e)].beta;
      for (int k = i; k < n; ++k) ++F[static_cast<std::size_t>(k)];
    }
    c.F = NondecreasingVector(F, m);
    causal = std::move(c);
  }
  return {MethodName::AGFB,
          assemble_lifted(graph_laplacian(G), Eigen::MatrixXd(n, 0), causal, betas, theta),
          true, "one forward per listed edge, P = 0"};
}

Eigen::VectorXd agfb_step_sizes(const GraphSpec& G, const std::vector<EdgeForward>& forwards) {
  Eigen::VectorXd g_hat(G.n);
  for (int i = 0; i < G.n; ++i) g_hat(i) = G.degree(i);
  for (const auto& f : forwards) {
    g_hat(f.edge.first) += 0.5 * f.beta;
    g_hat(f.edge.second) += 0.5 * f.beta;
  }
  return 2.0 * g_hat.cwiseInverse();
}

GraphSpec random_forward_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GraphSpec g{n, {}};
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    g.edges.emplace_back(pick(rng), i);
  }
  return g;
}

std::vector<GraphSpec::Edge> random_edge_assignment(const GraphSpec& G, int m,
                                                    std::uint64_t seed) {
  if (m < 0 || m > static_cast<int>(G.edges.size()))
    throw Error(ErrorKind::InvalidParameters, "more forwards than edges");
  std::vector<GraphSpec::Edge> edges = G.edges;
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  edges.resize(static_cast<std::size_t>(m));
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair(a.second, a.first) < std::pair(b.second, b.first);
  });
  return edges;
}

SplittingParams with_random_P(const SplittingParams& params, double target_norm,
                              std::uint64_t seed) {
  const int n = params.n();
  Eigen::MatrixXd P = random_P(n, n - 1, {0.0, 1.0}, seed);
  const double norm = spectral_norm(P);
  if (norm > 0.0) P *= std::sqrt(target_norm) / norm;
  const Eigen::MatrixXd gram = P * P.transpose();
  return assemble_with_grams(params.M, params.laplacian, P, gram, params.causal,
                             params.beta, params.theta);
}

}  // namespace fsplit
