#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opsplit/admm/problem.hpp"

namespace opsplit {

// Undirected simple graph on nodes 0..n-1.
class Graph {
public:
    Graph(std::size_t nodes, std::vector<std::pair<std::size_t, std::size_t>> edges)
        : nodes_(nodes), edges_(std::move(edges)), neighbors_(nodes) {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (auto& [u, v] : edges_) {
            require(u < nodes_ && v < nodes_, ErrorKind::InvalidArgument,
                    "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") names a missing node");
            require(u != v, ErrorKind::InvalidArgument, "self-loop at node " + std::to_string(u));
            if (u > v) std::swap(u, v);
            require(seen.insert({u, v}).second, ErrorKind::InvalidArgument,
                    "duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
            neighbors_[u].push_back(v);
            neighbors_[v].push_back(u);
        }
    }

    std::size_t nodes() const { return nodes_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

    bool connected() const {
        if (nodes_ == 0) return false;
        std::vector<bool> seen(nodes_, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : neighbors_[u]) {
                if (!seen[v]) seen[v] = true, ++count, stack.push_back(v);
            }
        }
        return count == nodes_;
    }

    static Graph path(std::size_t n) {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
        return Graph(n, std::move(e));
    }

private:
    std::size_t nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

// One "u v" pair per line, 0-indexed; blank lines and '#' comments are skipped.
// The node count is one more than the largest index unless given.
inline Graph parse_edge_list(std::istream& in, std::size_t nodes = 0) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::string line;
    std::size_t line_no = 0, top = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long u, v;
        if (!(ss >> u)) continue;
        require(bool(ss >> v) && u >= 0 && v >= 0, ErrorKind::InvalidArgument,
                "edge list line " + std::to_string(line_no) + ": expected two nonnegative indices");
        std::string rest;
        require(!(ss >> rest), ErrorKind::InvalidArgument,
                "edge list line " + std::to_string(line_no) + ": trailing tokens");
        edges.emplace_back(std::size_t(u), std::size_t(v));
        top = std::max({top, std::size_t(u), std::size_t(v)});
    }
    const std::size_t count = nodes ? nodes : (edges.empty() ? 0 : top + 1);
    return Graph(count, std::move(edges));
}

struct DistributedProblem {
    Graph graph;
    std::vector<ProxFunction> local; // f_i on R^dim
    Eigen::Index dim = 1;

    void validate() const {
        require(graph.nodes() >= 2, ErrorKind::InvalidArgument, "distributed problem needs at least two nodes");
        require(graph.connected(), ErrorKind::InvalidArgument, "communication graph is disconnected");
        require(local.size() == graph.nodes(), ErrorKind::InvalidArgument, "need one local function per node");
        require(dim > 0, ErrorKind::InvalidArgument, "local dimension must be positive");
    }

    double objective(const std::vector<Vector>& x) const {
        double v = 0.0;
        for (std::size_t i = 0; i < local.size(); ++i) v += local[i].value(x[i]);
        return v;
    }

    // Sum of the local functions at a common point.
    double consensus_objective(const Vector& x) const {
        double v = 0.0;
        for (const auto& f : local) v += f.value(x);
        return v;
    }
};

struct DistributedTrace {
    std::vector<std::vector<Vector>> x; // per k, per node (kept when requested)
    std::vector<double> objective;      // sum_i f_i(x_i^k)
    std::vector<double> disagreement;   // sum over edges ||x_i^k - x_j^k||^2
    std::vector<Vector> final_x;
    std::vector<Vector> final_alpha;

    std::size_t size() const { return objective.size(); }
};

// Synchronous rounds of
//   x_i+ = argmin f_i(x) + gamma |N_i| ||x||^2 - <x, gamma(|N_i| x_i + sum_{j in N_i} x_j) - alpha_i>
//   alpha_i+ = alpha_i + gamma (|N_i| x_i+ - sum_{j in N_i} x_j+)
// from x_i = alpha_i = 0. Each node reads only its neighbors' iterates. Round k+1 reproduces
// iterate k of relaxed ADMM (lambda = 1/2, penalty 2 gamma, z0 = 0) on arc_formulation.
inline DistributedTrace run_distributed_admm(const DistributedProblem& problem, double gamma, std::size_t iters,
                                             bool keep_iterates = true) {
    problem.validate();
    require_positive(gamma, "gamma");
    const std::size_t m = problem.graph.nodes();
    std::vector<Vector> x(m, Vector::Zero(problem.dim)), alpha(m, Vector::Zero(problem.dim));
    DistributedTrace trace;
    auto record = [&] {
        trace.objective.push_back(problem.objective(x));
        double d = 0.0;
        for (const auto& [u, v] : problem.graph.edges()) d += (x[u] - x[v]).squaredNorm();
        trace.disagreement.push_back(d);
        if (keep_iterates) trace.x.push_back(x);
    };
    auto neighbor_sum = [&](const std::vector<Vector>& state, std::size_t i) {
        Vector s = Vector::Zero(problem.dim);
        for (std::size_t j : problem.graph.neighbors(i)) s += state[j];
        return s;
    };
    record();
    for (std::size_t k = 0; k < iters; ++k) {
        std::vector<Vector> next(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double deg = double(problem.graph.neighbors(i).size());
            const double t = 2.0 * gamma * deg;
            const Vector v = gamma * (deg * x[i] + neighbor_sum(x, i)) - alpha[i];
            next[i] = problem.local[i].prox(1.0 / t, v / t);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double deg = double(problem.graph.neighbors(i).size());
            alpha[i] += gamma * (deg * next[i] - neighbor_sum(next, i));
        }
        x = std::move(next);
        require(std::all_of(x.begin(), x.end(), [](const Vector& v) { return v.allFinite(); }), ErrorKind::NonFinite,
                "distributed iterate became non-finite at k=" + std::to_string(k + 1));
        record();
    }
    trace.final_x = x;
    trace.final_alpha = alpha;
    return trace;
}

// Edge-variable form: x = (x_1..x_m), y = (y_e), constraints x_i - y_e = 0 and x_j - y_e = 0
// for each edge e = (i, j); g is zero.
inline LinearlyConstrainedProblem arc_formulation(const DistributedProblem& problem) {
    problem.validate();
    const Eigen::Index d = problem.dim;
    const auto& edges = problem.graph.edges();
    const Eigen::Index m = Eigen::Index(problem.graph.nodes()), E = Eigen::Index(edges.size());
    Matrix A = Matrix::Zero(2 * E * d, m * d), B = Matrix::Zero(2 * E * d, E * d);
    for (Eigen::Index e = 0; e < E; ++e) {
        const auto [u, v] = edges[std::size_t(e)];
        A.block(2 * e * d, Eigen::Index(u) * d, d, d) = Matrix::Identity(d, d);
        A.block((2 * e + 1) * d, Eigen::Index(v) * d, d, d) = Matrix::Identity(d, d);
        B.block(2 * e * d, e * d, d, d) = -Matrix::Identity(d, d);
        B.block((2 * e + 1) * d, e * d, d, d) = -Matrix::Identity(d, d);
    }
    BlockSeparable blocks{problem.local, std::vector<Eigen::Index>(problem.local.size(), d)};
    auto p = make_problem(separable_sum(blocks), ProxFunction::zero(), std::move(A), std::move(B),
                          Vector::Zero(2 * E * d));
    p.f_blocks = std::move(blocks);
    return p;
}

} // namespace opsplit
