#include "rquant/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rquant/circle.hpp"
#include "rquant/errors.hpp"

namespace rquant {

namespace {

constexpr std::size_t kMaxAtoms = 256;
constexpr double kRankEps = 1e-13;    // anti-degeneracy perturbation unit
constexpr double kReducedTol = 1e-12; // entering threshold for reduced costs
constexpr double kFlowClamp = 1e-9;   // degenerate flows snap to zero

struct Cell {
    int i, j;
};

/// Basis maintained as a spanning tree over row nodes [0,m) and column
/// nodes [m, m+n); every basic cell is one tree edge.
struct Basis {
    int m, n;
    std::vector<Cell> cells;
    std::vector<std::vector<int>> adj; // node -> indices into cells

    Basis(int m_, int n_) : m(m_), n(n_), adj(static_cast<std::size_t>(m_ + n_)) {}

    void add(int i, int j) {
        const int id = static_cast<int>(cells.size());
        cells.push_back({i, j});
        adj[static_cast<std::size_t>(i)].push_back(id);
        adj[static_cast<std::size_t>(m + j)].push_back(id);
    }

    void replace(int cell_id, int i, int j) {
        const Cell old = cells[static_cast<std::size_t>(cell_id)];
        auto drop = [&](int node) {
            auto& v = adj[static_cast<std::size_t>(node)];
            v.erase(std::find(v.begin(), v.end(), cell_id));
        };
        drop(old.i);
        drop(m + old.j);
        cells[static_cast<std::size_t>(cell_id)] = {i, j};
        adj[static_cast<std::size_t>(i)].push_back(cell_id);
        adj[static_cast<std::size_t>(m + j)].push_back(cell_id);
    }

    int other_node(int cell_id, int node) const {
        const Cell& c = cells[static_cast<std::size_t>(cell_id)];
        return node == c.i ? m + c.j : c.i;
    }
};

/// Unique tree path between two nodes, as a list of basic cell ids.
std::vector<int> tree_path(const Basis& basis, int from, int to) {
    const std::size_t nodes = basis.adj.size();
    std::vector<int> via_cell(nodes, -1);
    std::vector<int> parent(nodes, -1);
    std::vector<int> stack{from};
    parent[static_cast<std::size_t>(from)] = from;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (u == to) {
            break;
        }
        for (int cell_id : basis.adj[static_cast<std::size_t>(u)]) {
            const int v = basis.other_node(cell_id, u);
            if (parent[static_cast<std::size_t>(v)] == -1) {
                parent[static_cast<std::size_t>(v)] = u;
                via_cell[static_cast<std::size_t>(v)] = cell_id;
                stack.push_back(v);
            }
        }
    }
    if (parent[static_cast<std::size_t>(to)] == -1) {
        throw NumericError("transportation basis lost connectivity");
    }
    std::vector<int> path;
    for (int u = to; u != from; u = parent[static_cast<std::size_t>(u)]) {
        path.push_back(via_cell[static_cast<std::size_t>(u)]);
    }
    std::reverse(path.begin(), path.end()); // ordered from `from` to `to`
    return path;
}

/// Dual potentials u_i + v_j = c_ij over the basis tree, u_0 = 0.
void solve_duals(const Basis& basis, const Eigen::MatrixXd& cost,
                 std::vector<double>& u, std::vector<double>& v) {
    const int m = basis.m, n = basis.n;
    std::vector<char> known(static_cast<std::size_t>(m + n), 0);
    u.assign(static_cast<std::size_t>(m), 0.0);
    v.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<int> stack{0};
    known[0] = 1;
    while (!stack.empty()) {
        const int node = stack.back();
        stack.pop_back();
        for (int cell_id : basis.adj[static_cast<std::size_t>(node)]) {
            const Cell& c = basis.cells[static_cast<std::size_t>(cell_id)];
            const int next = basis.other_node(cell_id, node);
            if (known[static_cast<std::size_t>(next)]) {
                continue;
            }
            known[static_cast<std::size_t>(next)] = 1;
            const double cij = cost(c.i, c.j);
            if (next >= m) {
                v[static_cast<std::size_t>(next - m)] =
                    cij - u[static_cast<std::size_t>(c.i)];
            } else {
                u[static_cast<std::size_t>(next)] =
                    cij - v[static_cast<std::size_t>(c.j)];
            }
            stack.push_back(next);
        }
    }
    if (!std::all_of(known.begin(), known.end(), [](char k) { return k == 1; })) {
        throw NumericError("transportation basis is not a spanning tree");
    }
}

/// Flows on a basis tree for given marginals, by leaf elimination. Exact:
/// every row and column sum is reproduced up to the single global imbalance,
/// absorbed at the last cell.
std::vector<double> solve_flows(const Basis& basis, const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b) {
    const int m = basis.m, n = basis.n;
    std::vector<double> rem(static_cast<std::size_t>(m + n));
    for (int i = 0; i < m; ++i) {
        rem[static_cast<std::size_t>(i)] = a[i];
    }
    for (int j = 0; j < n; ++j) {
        rem[static_cast<std::size_t>(m + j)] = b[j];
    }
    std::vector<int> degree(static_cast<std::size_t>(m + n));
    std::vector<char> cell_done(basis.cells.size(), 0);
    std::vector<char> node_done(static_cast<std::size_t>(m + n), 0);
    for (int node = 0; node < m + n; ++node) {
        degree[static_cast<std::size_t>(node)] =
            static_cast<int>(basis.adj[static_cast<std::size_t>(node)].size());
    }
    std::vector<int> leaves;
    for (int node = 0; node < m + n; ++node) {
        if (degree[static_cast<std::size_t>(node)] == 1) {
            leaves.push_back(node);
        }
    }
    std::vector<double> flow(basis.cells.size(), 0.0);
    std::size_t resolved = 0;
    while (!leaves.empty()) {
        const int node = leaves.back();
        leaves.pop_back();
        if (node_done[static_cast<std::size_t>(node)]) {
            continue;
        }
        int cell_id = -1;
        for (int cand : basis.adj[static_cast<std::size_t>(node)]) {
            if (!cell_done[static_cast<std::size_t>(cand)]) {
                cell_id = cand;
                break;
            }
        }
        node_done[static_cast<std::size_t>(node)] = 1;
        if (cell_id < 0) {
            continue; // root of the elimination
        }
        const double f = rem[static_cast<std::size_t>(node)];
        flow[static_cast<std::size_t>(cell_id)] = f;
        cell_done[static_cast<std::size_t>(cell_id)] = 1;
        ++resolved;
        const int next = basis.other_node(cell_id, node);
        rem[static_cast<std::size_t>(next)] -= f;
        if (--degree[static_cast<std::size_t>(next)] == 1) {
            leaves.push_back(next);
        }
    }
    if (resolved != basis.cells.size()) {
        throw NumericError("transportation basis flow resolution incomplete");
    }
    return flow;
}

} // namespace

TransportPlan solve_transport(const Eigen::MatrixXd& cost,
                              const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    if (m < 1 || n < 1 || cost.rows() != m || cost.cols() != n) {
        throw UsageError("transport problem dimensions are inconsistent");
    }
    for (int i = 0; i < m; ++i) {
        if (!(a[i] >= 0.0)) {
            throw DataError("transport source weights must be nonnegative");
        }
    }
    for (int j = 0; j < n; ++j) {
        if (!(b[j] >= 0.0)) {
            throw DataError("transport target weights must be nonnegative");
        }
    }

    // Rank perturbation: strictly increasing additions per source row break
    // every degenerate tie; the final column absorbs the added mass so the
    // two totals still agree.
    Eigen::VectorXd ap = a, bp = b;
    for (int i = 0; i < m; ++i) {
        ap[i] += kRankEps * static_cast<double>(i + 1);
    }
    bp[n - 1] += ap.sum() - b.sum();

    Basis basis(m, n);
    std::vector<double> flow;
    {
        // Northwest-corner start: walk from (0,0) to (m-1,n-1) moving to the
        // next row or column as one side empties; exactly m+n-1 cells.
        Eigen::VectorXd ra = ap, rb = bp;
        int i = 0, j = 0;
        while (true) {
            const double f = std::min(ra[i], rb[j]);
            basis.add(i, j);
            flow.push_back(f);
            ra[i] -= f;
            rb[j] -= f;
            if (i == m - 1 && j == n - 1) {
                break;
            }
            if (j == n - 1 || (ra[i] <= rb[j] && i < m - 1)) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    std::vector<double> u, v;
    const long max_pivots = 1000 + 16L * m * n;
    for (long pivot = 0;; ++pivot) {
        if (pivot > max_pivots) {
            throw NumericError("transportation simplex exceeded its pivot budget");
        }
        solve_duals(basis, cost, u, v);
        // Bland-style entering rule: first improving cell in row-major order.
        int ei = -1, ej = -1;
        for (int i = 0; i < m && ei < 0; ++i) {
            for (int j = 0; j < n; ++j) {
                const double rc = cost(i, j) - u[static_cast<std::size_t>(i)] -
                                  v[static_cast<std::size_t>(j)];
                if (rc < -kReducedTol) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        }
        if (ei < 0) {
            break; // optimal
        }
        // The entering cell closes a unique cycle with the tree path from its
        // column node back to its row node; flows alternate +/- around it,
        // with the entering cell taking '+'.
        const std::vector<int> path = tree_path(basis, m + ej, ei);
        double theta = std::numeric_limits<double>::infinity();
        int leaving = -1;
        for (std::size_t t = 0; t < path.size(); t += 2) {
            const int cell_id = path[t];
            const double f = flow[static_cast<std::size_t>(cell_id)];
            if (f < theta) {
                theta = f;
                leaving = cell_id;
            }
        }
        if (leaving < 0) {
            throw NumericError("transportation pivot found no leaving cell");
        }
        for (std::size_t t = 0; t < path.size(); ++t) {
            flow[static_cast<std::size_t>(path[t])] +=
                (t % 2 == 0) ? -theta : theta;
        }
        basis.replace(leaving, ei, ej);
        flow[static_cast<std::size_t>(leaving)] = theta;
    }

    // Strip the perturbation: exact flows for the true marginals on the
    // optimal basis. Degenerate entries come out as zeros, not epsilons.
    flow = solve_flows(basis, a, b);

    TransportPlan plan;
    plan.flows = Eigen::MatrixXd::Zero(m, n);
    double total = 0.0;
    for (std::size_t t = 0; t < basis.cells.size(); ++t) {
        const Cell& c = basis.cells[t];
        double f = flow[t];
        if (f < 0.0) {
            if (f < -kFlowClamp) {
                throw NumericError("transportation basis produced an infeasible flow");
            }
            f = 0.0;
        }
        plan.flows(c.i, c.j) = f;
        total += f * cost(c.i, c.j);
    }
    plan.cost = total;
    return plan;
}

TransportPlan discrete_wasserstein(const QuantizedMeasure& mu,
                                   const QuantizedMeasure& nu, double p) {
    require_same_manifold(mu.codebook.manifold, nu.codebook.manifold);
    if (!(p >= 1.0)) {
        throw UsageError("transport exponent must be >= 1");
    }
    const std::size_t m = mu.codebook.size();
    const std::size_t n = nu.codebook.size();
    if (m > kMaxAtoms || n > kMaxAtoms) {
        throw UsageError("transport supports are capped at 256 atoms");
    }
    if (m != mu.weights.size() || n != nu.weights.size()) {
        throw DataError("measure weights do not match the support size");
    }
    auto check_sum = [](const std::vector<double>& w, const char* side) {
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-9) {
            throw DataError(std::string(side) + " weights sum to " +
                            std::to_string(s) + ", expected 1");
        }
    };
    check_sum(mu.weights, "source");
    check_sum(nu.weights, "target");

    Eigen::MatrixXd cost(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::pow(distance(mu.codebook.centers[i], nu.codebook.centers[j]),
                         p);
        }
    }
    const Eigen::VectorXd a =
        Eigen::Map<const Eigen::VectorXd>(mu.weights.data(), static_cast<Eigen::Index>(m));
    const Eigen::VectorXd b =
        Eigen::Map<const Eigen::VectorXd>(nu.weights.data(), static_cast<Eigen::Index>(n));
    TransportPlan plan = solve_transport(cost, a, b);
    plan.p = p;
    plan.cost = std::pow(std::max(plan.cost, 0.0), 1.0 / p);
    return plan;
}

double circle_w1(const std::vector<double>& mu_atoms,
                 const std::vector<double>& mu_weights,
                 const std::vector<double>& nu_atoms,
                 const std::vector<double>& nu_weights) {
    if (mu_atoms.size() != mu_weights.size() ||
        nu_atoms.size() != nu_weights.size()) {
        throw DataError("atom and weight lists differ in length");
    }
    if (mu_atoms.empty() || nu_atoms.empty()) {
        throw DataError("circle W1 of an empty measure");
    }
    // Signed atoms of mu - nu, sorted; coincident angles merged.
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(mu_atoms.size() + nu_atoms.size());
    for (std::size_t i = 0; i < mu_atoms.size(); ++i) {
        atoms.emplace_back(circle::normalize_angle(mu_atoms[i]), mu_weights[i]);
    }
    for (std::size_t j = 0; j < nu_atoms.size(); ++j) {
        atoms.emplace_back(circle::normalize_angle(nu_atoms[j]), -nu_weights[j]);
    }
    std::sort(atoms.begin(), atoms.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [theta, w] : atoms) {
        if (!merged.empty() && theta - merged.back().first < 1e-12) {
            merged.back().second += w;
        } else {
            merged.emplace_back(theta, w);
        }
    }

    // Cumulative difference G is a step function; W1 is the arc-length L1
    // distance from G to its best constant, the length-weighted median.
    const std::size_t k = merged.size();
    std::vector<double> level(k), len(k);
    double cum = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        cum += merged[t].second;
        level[t] = cum;
        const double next =
            (t + 1 < k) ? merged[t + 1].first : merged[0].first + circle::kTwoPi;
        len[t] = next - merged[t].first;
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return level[x] < level[y]; });
    double acc = 0.0;
    double median = level[order.back()];
    for (std::size_t t : order) {
        acc += len[t];
        if (acc >= M_PI) { // half of the total length 2*pi
            median = level[t];
            break;
        }
    }
    double w1 = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        w1 += len[t] * std::abs(level[t] - median);
    }
    return w1;
}

double circle_w1(const QuantizedMeasure& mu, const QuantizedMeasure& nu) {
    if (mu.codebook.manifold.kind != ManifoldKind::circle ||
        nu.codebook.manifold.kind != ManifoldKind::circle) {
        throw DataError("circle W1 requires circle measures");
    }
    auto angles = [](const QuantizedMeasure& q) {
        std::vector<double> a;
        a.reserve(q.codebook.size());
        for (const ManifoldPoint& p : q.codebook.centers) {
            a.push_back(p.coords[0]);
        }
        return a;
    };
    return circle_w1(angles(mu), mu.weights, angles(nu), nu.weights);
}

std::pair<double, TransportPlan> padded_union_compare(const QuantizedMeasure& mu,
                                                      const QuantizedMeasure& nu,
                                                      double p) {
    require_same_manifold(mu.codebook.manifold, nu.codebook.manifold);
    // Union support: nu atoms coinciding with a mu atom (within 1e-12) are
    // identified with it instead of being duplicated.
    std::vector<ManifoldPoint> support = mu.codebook.centers;
    std::vector<int> nu_pos(nu.codebook.size(), -1);
    for (std::size_t j = 0; j < nu.codebook.size(); ++j) {
        for (std::size_t i = 0; i < mu.codebook.size(); ++i) {
            if (distance(nu.codebook.centers[j], mu.codebook.centers[i]) < 1e-12) {
                nu_pos[j] = static_cast<int>(i);
                break;
            }
        }
        if (nu_pos[j] < 0) {
            nu_pos[j] = static_cast<int>(support.size());
            support.push_back(nu.codebook.centers[j]);
        }
    }
    QuantizedMeasure mu_pad, nu_pad;
    mu_pad.codebook.manifold = mu.codebook.manifold;
    mu_pad.codebook.centers = support;
    nu_pad.codebook = mu_pad.codebook;
    mu_pad.weights.assign(support.size(), 0.0);
    nu_pad.weights.assign(support.size(), 0.0);
    for (std::size_t i = 0; i < mu.weights.size(); ++i) {
        mu_pad.weights[i] += mu.weights[i];
    }
    for (std::size_t j = 0; j < nu.weights.size(); ++j) {
        nu_pad.weights[static_cast<std::size_t>(nu_pos[j])] += nu.weights[j];
    }
    TransportPlan plan = discrete_wasserstein(mu_pad, nu_pad, p);
    return {plan.cost, plan};
}

} // namespace rquant
