#include "teamsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stack>

namespace teamsim {

namespace {

// Iterative Tarjan SCC over the digraph with edge (i,j) iff b_ij > 0.
// Components come out in reverse topological order of the condensation.
std::vector<std::vector<int>> tarjan_sccs(
    const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int next_index = 0;

  struct Frame {
    int v;
    size_t edge;
  };

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        int u = adj[f.v][f.edge++];
        if (index[u] == -1) {
          index[u] = low[u] = next_index++;
          stack.push_back(u);
          on_stack[u] = 1;
          call.push_back({u, 0});
        } else if (on_stack[u]) {
          low[f.v] = std::min(low[f.v], index[u]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          std::vector<int> scc;
          int u;
          do {
            u = stack.back();
            stack.pop_back();
            on_stack[u] = 0;
            scc.push_back(u);
          } while (u != f.v);
          sccs.push_back(std::move(scc));
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
      }
    }
  }
  return sccs;
}

// Period of a strongly connected digraph: gcd over all edges of
// level[u] + 1 - level[v], with levels from a BFS tree. Aperiodic iff 1.
int cycle_gcd(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> level(n, -1);
  std::vector<int> queue;
  queue.push_back(0);
  level[0] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int u : adj[v]) {
      if (level[u] == -1) {
        level[u] = level[v] + 1;
        queue.push_back(u);
      }
    }
  }
  int g = 0;
  for (int v = 0; v < n; ++v) {
    for (int u : adj[v]) {
      g = std::gcd(g, std::abs(level[v] + 1 - level[u]));
    }
  }
  return g;
}

}  // namespace

ConnectivityReport classify_connectivity(const Eigen::MatrixXd& b) {
  int n = static_cast<int>(b.rows());
  if (n == 0 || b.cols() != n) {
    throw std::invalid_argument("classify_connectivity: matrix must be square");
  }
  if ((b.array() < 0.0).any()) {
    throw std::domain_error("classify_connectivity: negative entry");
  }

  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (b(i, j) > 0.0) adj[i].push_back(j);
    }
  }

  ConnectivityReport report;
  report.positive_diagonal = (b.diagonal().array() > 0.0).all();

  auto sccs = tarjan_sccs(adj);
  std::vector<int> comp(n, -1);
  for (size_t c = 0; c < sccs.size(); ++c) {
    for (int v : sccs[c]) comp[v] = static_cast<int>(c);
  }

  report.strongly_connected = (sccs.size() == 1);
  report.irreducible = report.strongly_connected;

  // Sink components of the condensation (no edge leaving the component).
  std::vector<char> has_out(sccs.size(), 0);
  for (int v = 0; v < n; ++v) {
    for (int u : adj[v]) {
      if (comp[v] != comp[u]) has_out[comp[v]] = 1;
    }
  }
  std::vector<int> sinks;
  for (size_t c = 0; c < sccs.size(); ++c) {
    if (!has_out[c]) sinks.push_back(static_cast<int>(c));
  }
  // In a DAG every node reaches some sink, so a unique sink is reachable
  // from everywhere; several sinks mean no globally reachable node.
  if (sinks.size() == 1) {
    report.globally_reachable_nodes = sccs[sinks[0]];
    std::sort(report.globally_reachable_nodes.begin(),
              report.globally_reachable_nodes.end());
    report.has_globally_reachable_node = true;
  }

  if (report.irreducible) {
    report.primitive = (cycle_gcd(adj) == 1);
  }
  return report;
}

namespace detail {

std::optional<Eigen::VectorXd> power_iterate_left(const Eigen::MatrixXd& a,
                                                  Eigen::VectorXd seed,
                                                  double tol, int max_iter) {
  int n = static_cast<int>(a.rows());
  // Iterate on ((A+I)/2)^T: shares eigenvalue-1 left eigenvectors with A
  // and is aperiodic, so the iteration always converges for irreducible A.
  Eigen::MatrixXd bt =
      0.5 * (a.transpose() + Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd v = std::move(seed);
  v /= v.sum();
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = bt * v;
    next /= next.sum();
    // Residual against the original A, as required by the contract.
    double residual = (a.transpose() * next - next).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    if (residual < tol) {
      // polish to stationarity: the residual can lag the true error when
      // the spectral gap is small; warm starts already at the fixed point
      // exit after one check
      for (int extra = 0; extra < 40; ++extra) {
        Eigen::VectorXd polished = bt * v;
        polished /= polished.sum();
        double change = (polished - v).lpNorm<Eigen::Infinity>();
        v = std::move(polished);
        if (change < 1e-15) break;
      }
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace detail

Assignment left_dominant_eigenvector(
    const AppraisalMatrix& a, double tol, int max_iter,
    const std::optional<Assignment>& warm_start) {
  const Eigen::MatrixXd& m = a.values();
  int n = a.size();

  ConnectivityReport report = classify_connectivity(m);
  if (!report.irreducible) {
    throw std::invalid_argument(
        "left_dominant_eigenvector: eigenvector undefined (matrix is not "
        "irreducible)");
  }

  Eigen::VectorXd seed = warm_start ? warm_start->values()
                                    : Eigen::VectorXd::Constant(n, 1.0 / n);
  auto v = detail::power_iterate_left(m, std::move(seed), tol, max_iter);
  if (!v) {
    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / n);
    double residual = (m.transpose() * u - u).lpNorm<Eigen::Infinity>();
    std::ostringstream os;
    os << "left_dominant_eigenvector: no convergence within " << max_iter
       << " iterations (last residual " << residual << ")";
    throw std::runtime_error(os.str());
  }
  return Assignment(*v);
}

Assignment workload_diffusion(const AppraisalMatrix& a, int steps) {
  if (steps < 0) {
    throw std::invalid_argument("workload_diffusion: steps must be >= 0");
  }
  int n = a.size();
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int k = 0; k < steps; ++k) {
    q = a.values().transpose() * q;
  }
  return Assignment(q);
}

Assignment in_degree_assignment(const AppraisalMatrix& a) {
  Eigen::VectorXd col_sums = a.values().colwise().sum();
  double total = col_sums.sum();
  if (total <= 0.0) {
    throw std::invalid_argument("in_degree_assignment: all-zero matrix");
  }
  return Assignment(col_sums / total);
}

}  // namespace teamsim
