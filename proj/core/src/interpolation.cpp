#include "skclt/interpolation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "skclt/error.hpp"
#include "skclt/parallel.hpp"
#include "skclt/qsolver.hpp"
#include "skclt/random.hpp"

namespace skclt {

std::string to_string(CavityPath path) { return path == CavityPath::one ? "one" : "two"; }

CavityPath parse_cavity_path(const std::string& name) {
  if (name == "one") return CavityPath::one;
  if (name == "two") return CavityPath::two;
  throw InvalidArgument("unknown cavity path '" + name + "' (expected one or two)");
}

std::string to_string(ExpectationPlan::Kind kind) {
  return kind == ExpectationPlan::Kind::quadrature ? "quadrature" : "mc";
}

namespace {

int min_spins(CavityPath path) { return path == CavityPath::one ? 1 : 2; }

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("interpolation parameter t must lie in [0, 1]");
}

// True when pair (i, j), i < j, is scaled by sqrt(t) on the given path.
bool is_cavity_pair(CavityPath path, int n, int j) {
  return path == CavityPath::one ? j == n - 1 : j >= n - 2;
}

}  // namespace

IsingForm path_form(CavityPath path, const PathPoint& point, const ModelParams& params, const Disorder& disorder) {
  check_t(point.t);
  const int n = params.n_spins;
  if (n < min_spins(path)) throw DimensionError("cavity path needs more spins");
  IsingForm form = sk_form(params, disorder);
  const double root_t = std::sqrt(point.t);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (is_cavity_pair(path, n, j)) form.pair[k] = root_t * form.pair[k];
    }
  }
  const double cavity = params.beta * std::sqrt(1.0 - point.t);
  const double root_q = std::sqrt(point.q);
  form.field[static_cast<std::size_t>(n - 1)] += cavity * point.z1 * root_q;
  if (path == CavityPath::two) form.field[static_cast<std::size_t>(n - 2)] += cavity * point.z2 * root_q;
  return form;
}

double path_energy_1(const PathPoint& point, const ModelParams& params, const Disorder& disorder,
                     const SpinConfig& config) {
  return path_form(CavityPath::one, point, params, disorder).evaluate(config);
}

double path_energy_2(const PathPoint& point, const ModelParams& params, const Disorder& disorder,
                     const SpinConfig& config) {
  return path_form(CavityPath::two, point, params, disorder).evaluate(config);
}

std::vector<std::string> observable_catalog() {
  return {"one",       "s1-sq",   "sbar-n-sbar-1", "sbar-n-sq", "sigma-n-sigma-nm1",
          "overlap-12", "s1-s2", "spins-4",       "s1-sq-overlap-34"};
}

ReplicaObservable make_observable(const std::string& name, const WeightVector& weights, double q) {
  const int n = weights.size();
  const int last = n - 1;
  const int prev = std::max(n - 2, 0);
  auto spin = [n](int arity, int replica, int site) { return ReplicaPolynomial::spin(n, arity, replica, site); };
  auto sbar = [&](int arity, int site) { return spin(arity, 0, site) - spin(arity, 1, site); };
  auto centered_overlap = [&](int arity, int a, int b) {
    return ReplicaPolynomial::overlap(n, arity, a, b, n) - ReplicaPolynomial::constant(n, arity, q);
  };
  if (name == "one") return {name, ReplicaPolynomial::constant(n, 1, 1.0)};
  if (name == "s1-sq") {
    const auto s1 = ReplicaPolynomial::weighted_difference(weights, 2, 0, 1);
    return {name, s1 * s1};
  }
  if (name == "sbar-n-sbar-1") return {name, sbar(2, last) * sbar(2, 0)};
  if (name == "sbar-n-sq") return {name, sbar(2, last) * sbar(2, last)};
  if (name == "sigma-n-sigma-nm1") return {name, spin(1, 0, last) * spin(1, 0, prev)};
  if (name == "overlap-12") return {name, centered_overlap(2, 0, 1)};
  if (name == "s1-s2") {
    return {name, ReplicaPolynomial::weighted_difference(weights, 4, 0, 1) *
                      ReplicaPolynomial::weighted_difference(weights, 4, 2, 3)};
  }
  if (name == "spins-4") {
    return {name, spin(4, 0, last) * spin(4, 1, 0) * spin(4, 2, prev) * spin(4, 3, std::min(1, last))};
  }
  if (name == "s1-sq-overlap-34") {
    const auto s1 = ReplicaPolynomial::weighted_difference(weights, 4, 0, 1);
    return {name, s1 * s1 * centered_overlap(4, 2, 3)};
  }
  throw InvalidArgument("unknown observable '" + name + "'");
}

Estimate PathSamples::combine(std::span<const std::pair<std::size_t, double>> terms) const {
  std::vector<double> values(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double acc = 0.0;
    for (const auto& [col, coeff] : terms) acc += coeff * rows[r].at(col);
    values[r] = acc;
  }
  Estimate est = mean_estimate(values, seed);
  if (deterministic) {
    est.stderr_ = 0.0;
  }
  return est;
}

Estimate PathSamples::column(std::size_t index) const {
  const std::pair<std::size_t, double> term{index, 1.0};
  return combine(std::span(&term, 1));
}

namespace {

// Observables compiled onto a basis of distinct replica monomials. Replicas
// are exchangeable under the product measure, so a term's expectation only
// depends on the multiset of its non-empty masks; sorting the masks merges
// terms that differ by a relabeling of replicas.
struct CompiledQuery {
  double t = 0.0;
  std::vector<ConfigCode> flat;          // concatenated sorted masks
  std::vector<std::size_t> offsets;      // monomial m spans [offsets[m], offsets[m+1])
  std::vector<std::vector<std::pair<std::size_t, double>>> columns;

  std::size_t basis_size() const { return offsets.size() - 1; }
};

CompiledQuery compile(const PathQuery& query) {
  CompiledQuery out;
  out.t = query.t;
  std::map<std::vector<ConfigCode>, std::size_t> index;
  std::vector<std::vector<ConfigCode>> monomials;
  for (const auto& poly : query.observables) {
    std::map<std::size_t, double> column;
    for (const auto& term : poly.terms()) {
      std::vector<ConfigCode> key;
      for (ConfigCode mask : term.masks) {
        if (mask != 0) key.push_back(mask);
      }
      std::sort(key.begin(), key.end());
      auto [it, inserted] = index.try_emplace(key, monomials.size());
      if (inserted) monomials.push_back(key);
      column[it->second] += term.coeff;
    }
    out.columns.emplace_back(column.begin(), column.end());
  }
  out.offsets.push_back(0);
  for (const auto& m : monomials) {
    out.flat.insert(out.flat.end(), m.begin(), m.end());
    out.offsets.push_back(out.flat.size());
  }
  return out;
}

// Neumaier-compensated accumulator, deterministic for a fixed input order.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Reusable per-thread buffers for Gibbs weights and correlators.
struct Workspace {
  std::vector<double> base;   // exponent without cavity-field terms
  std::vector<double> corr;   // probabilities, then correlators in place
  std::vector<double> basis;  // basis monomial values
};

// Exponent of every configuration for the form with the cavity z terms
// stripped; the z contributions are added per cavity node.
void fill_base_exponents(const IsingForm& form, Workspace& ws) {
  const std::size_t size = std::size_t{1} << form.n_spins;
  ws.base.resize(size);
  for (std::size_t c = 0; c < size; ++c) ws.base[c] = form.evaluate(static_cast<ConfigCode>(c));
}

void correlators_in_place(int n, std::span<const double> base, double shift_last, double shift_prev,
                          std::vector<double>& w) {
  const std::size_t size = std::size_t{1} << n;
  w.resize(size);
  const ConfigCode last_bit = ConfigCode{1} << (n - 1);
  const ConfigCode prev_bit = n >= 2 ? ConfigCode{1} << (n - 2) : 0;
  double max_e = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < size; ++c) {
    double e = base[c];
    e += (c & last_bit) ? shift_last : -shift_last;
    if (prev_bit) e += (c & prev_bit) ? shift_prev : -shift_prev;
    w[c] = e;
    max_e = std::max(max_e, e);
  }
  double z = 0.0;
  for (std::size_t c = 0; c < size; ++c) {
    w[c] = std::exp(w[c] - max_e);
    z += w[c];
  }
  const double inv_z = 1.0 / z;
  for (std::size_t c = 0; c < size; ++c) w[c] *= inv_z;
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * len) {
      for (std::size_t j = block; j < block + len; ++j) {
        const double u = w[j];
        const double v = w[j + len];
        w[j] = u + v;
        w[j + len] = u - v;
      }
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    if (std::popcount(a) & 1) w[a] = -w[a];
  }
}

void evaluate_basis(const CompiledQuery& query, std::span<const double> corr, std::vector<double>& out) {
  const std::size_t m = query.basis_size();
  out.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    double prod = 1.0;
    for (std::size_t k = query.offsets[b]; k < query.offsets[b + 1]; ++k) prod *= corr[query.flat[k]];
    out[b] = prod;
  }
}

struct CavityGrid {
  std::vector<double> z1;
  std::vector<double> z2;
  std::vector<double> weight;
};

CavityGrid cavity_grid(CavityPath path, int nodes) {
  const GaussHermiteRule rule = gauss_hermite_rule(nodes);
  CavityGrid grid;
  if (path == CavityPath::one) {
    grid.z1 = rule.nodes;
    grid.z2.assign(rule.nodes.size(), 0.0);
    grid.weight = rule.weights;
    return grid;
  }
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      grid.z1.push_back(rule.nodes[a]);
      grid.z2.push_back(rule.nodes[b]);
      grid.weight.push_back(rule.weights[a] * rule.weights[b]);
    }
  }
  return grid;
}

// Accumulates weight * basis values of every query for one coupling
// realization, integrating the cavity Gaussians over `grid`.
template <typename Accumulator>
void integrate_cavity(CavityPath path, const ModelParams& params, double q, const Disorder& disorder,
                      const std::vector<CompiledQuery>& queries, const CavityGrid& grid, double outer_weight,
                      Workspace& ws, std::vector<std::vector<Accumulator>>& acc) {
  const int n = params.n_spins;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const CompiledQuery& query = queries[qi];
    const PathPoint point{query.t, 0.0, 0.0, q};
    fill_base_exponents(path_form(path, point, params, disorder), ws);
    const double cavity = params.beta * std::sqrt(1.0 - query.t) * std::sqrt(q);
    // z enters only through cavity * z; at t = 1 (or q = 0) one node suffices
    const bool z_free = cavity == 0.0;
    const std::size_t z_count = z_free ? 1 : grid.weight.size();
    for (std::size_t zi = 0; zi < z_count; ++zi) {
      const double w = outer_weight * (z_free ? 1.0 : grid.weight[zi]);
      const double shift_last = z_free ? 0.0 : cavity * grid.z1[zi];
      const double shift_prev = (z_free || path == CavityPath::one) ? 0.0 : cavity * grid.z2[zi];
      correlators_in_place(n, ws.base, shift_last, shift_prev, ws.corr);
      evaluate_basis(query, ws.corr, ws.basis);
      auto& target = acc[qi];
      for (std::size_t b = 0; b < ws.basis.size(); ++b) target[b].add(w * ws.basis[b]);
    }
  }
}

struct PlainSum {
  double sum = 0.0;
  void add(double v) { sum += v; }
  double value() const { return sum; }
};

std::vector<double> to_columns(const std::vector<CompiledQuery>& queries,
                               const std::vector<std::vector<double>>& basis_values) {
  std::vector<double> row;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (const auto& column : queries[qi].columns) {
      double acc = 0.0;
      for (const auto& [b, coeff] : column) acc += coeff * basis_values[qi][b];
      row.push_back(acc);
    }
  }
  return row;
}

void validate_queries(CavityPath path, const ModelParams& params, std::span<const PathQuery> queries) {
  if (params.n_spins < min_spins(path)) throw DimensionError("cavity path needs more spins");
  if (params.n_spins > kEnumerationCeiling) {
    throw CapacityError("nu_t enumerates 2^N configurations; N exceeds the ceiling", params.n_spins,
                        kEnumerationCeiling);
  }
  if (params.n_spins > 32) throw CapacityError("configuration codes are 32-bit", params.n_spins, 32);
  for (const auto& query : queries) {
    check_t(query.t);
    for (const auto& obs : query.observables) {
      if (obs.n_spins() != params.n_spins) throw DimensionError("observable defined for a different N");
    }
  }
}

}  // namespace

PathSamples sample_path(CavityPath path, const ModelParams& params, double q, const ExpectationPlan& plan,
                        std::span<const PathQuery> queries) {
  validate_queries(path, params, queries);
  if (!(q >= 0.0 && q < 1.0)) throw InvalidArgument("q must lie in [0, 1)");
  std::vector<CompiledQuery> compiled;
  compiled.reserve(queries.size());
  for (const auto& query : queries) compiled.push_back(compile(query));
  const CavityGrid grid = cavity_grid(path, plan.cavity_nodes);
  const int n = params.n_spins;
  const std::size_t pairs = Disorder::pair_count(n);

  PathSamples out;
  out.seed = plan.base_seed;

  if (plan.kind == ExpectationPlan::Kind::quadrature) {
    if (n > ExpectationPlan::kMaxQuadratureSpins) {
      throw CapacityError("tensor quadrature over couplings is limited to N <= 3", n,
                          ExpectationPlan::kMaxQuadratureSpins);
    }
    const GaussHermiteRule rule = gauss_hermite_rule(plan.coupling_nodes);
    long total = 1;
    for (std::size_t p = 0; p < pairs; ++p) total *= plan.coupling_nodes;
    // fixed chunking keeps the summation order independent of plan.jobs
    const long chunks = std::min<long>(total, 64);
    const long chunk_size = (total + chunks - 1) / chunks;
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(chunks));
    parallel_for(chunks, plan.jobs, [&](long chunk) {
      Workspace ws;
      std::vector<std::vector<CompensatedSum>> acc(compiled.size());
      for (std::size_t qi = 0; qi < compiled.size(); ++qi) acc[qi].resize(compiled[qi].basis_size());
      std::vector<double> g(pairs);
      const long end = std::min(total, (chunk + 1) * chunk_size);
      for (long node = chunk * chunk_size; node < end; ++node) {
        long rest = node;
        double w = 1.0;
        for (std::size_t p = 0; p < pairs; ++p) {
          const auto digit = static_cast<std::size_t>(rest % plan.coupling_nodes);
          rest /= plan.coupling_nodes;
          g[p] = rule.nodes[digit];
          w *= rule.weights[digit];
        }
        const Disorder disorder(n, g);
        integrate_cavity(path, params, q, disorder, compiled, grid, w, ws, acc);
      }
      std::vector<std::vector<double>> basis_values(compiled.size());
      for (std::size_t qi = 0; qi < compiled.size(); ++qi) {
        for (const auto& sum : acc[qi]) basis_values[qi].push_back(sum.value());
      }
      partial[static_cast<std::size_t>(chunk)] = to_columns(compiled, basis_values);
    });
    std::vector<double> row(partial.front().size());
    std::vector<double> parts(partial.size());
    for (std::size_t col = 0; col < row.size(); ++col) {
      for (std::size_t c = 0; c < parts.size(); ++c) parts[c] = partial[c][col];
      row[col] = pairwise_sum(parts);
    }
    out.rows.push_back(std::move(row));
    out.deterministic = true;
    return out;
  }

  if (plan.n_disorders < 2) throw InvalidArgument("Monte Carlo plan needs at least 2 disorders");
  out.deterministic = false;
  out.rows.resize(static_cast<std::size_t>(plan.n_disorders));
  parallel_for(plan.n_disorders, plan.jobs, [&](long m) {
    Workspace ws;
    std::vector<std::vector<PlainSum>> acc(compiled.size());
    for (std::size_t qi = 0; qi < compiled.size(); ++qi) acc[qi].resize(compiled[qi].basis_size());
    const Disorder disorder = sample_disorder(derive_seed(plan.base_seed, static_cast<std::uint64_t>(m)), n);
    if (plan.antithetic) {
      integrate_cavity(path, params, q, disorder, compiled, grid, 0.5, ws, acc);
      integrate_cavity(path, params, q, disorder.negated(), compiled, grid, 0.5, ws, acc);
    } else {
      integrate_cavity(path, params, q, disorder, compiled, grid, 1.0, ws, acc);
    }
    std::vector<std::vector<double>> basis_values(compiled.size());
    for (std::size_t qi = 0; qi < compiled.size(); ++qi) {
      for (const auto& s : acc[qi]) basis_values[qi].push_back(s.value());
    }
    out.rows[static_cast<std::size_t>(m)] = to_columns(compiled, basis_values);
  });
  return out;
}

Estimate nu_t(const ReplicaPolynomial& observable, CavityPath path, double t, const ModelParams& params, double q,
              const ExpectationPlan& plan) {
  if (observable.arity() > 6) throw InvalidArgument("nu_t supports observables of arity <= 6");
  const PathQuery query{t, {observable}};
  return sample_path(path, params, q, plan, std::span(&query, 1)).column(0);
}

namespace {

using PairFactor = std::function<ReplicaPolynomial(int a, int b, int arity)>;

// sum_{l<l'<=n} f U(l,l') - n sum_{l<=n} f U(l,n+1) + n(n+1)/2 f U(n+1,n+2),
// with replicas numbered from 0 (so n+1 -> index n, n+2 -> index n+1).
ReplicaPolynomial cavity_terms(const ReplicaPolynomial& f, const PairFactor& u) {
  const int n = f.arity();
  const int arity = n + 2;
  if (arity > kMaxReplicas) throw InvalidArgument("derivative formula needs arity + 2 <= 8");
  const ReplicaPolynomial fa = f.with_arity(arity);
  ReplicaPolynomial acc(f.n_spins(), arity);
  for (int l = 0; l < n; ++l) {
    for (int lp = l + 1; lp < n; ++lp) acc += fa * u(l, lp, arity);
  }
  for (int l = 0; l < n; ++l) acc -= static_cast<double>(n) * (fa * u(l, n, arity));
  acc += 0.5 * n * (n + 1) * (fa * u(n, n + 1, arity));
  return acc;
}

}  // namespace

DerivativePolynomials derivative_polynomials(const ReplicaPolynomial& f, CavityPath path, double beta, double q) {
  const int n = f.n_spins();
  if (n < min_spins(path)) throw DimensionError("cavity path needs more spins");
  const double b2 = beta * beta;
  const int last = n - 1;
  auto spin_pair = [n](int site, int a, int b, int arity) {
    return ReplicaPolynomial::spin(n, arity, a, site) * ReplicaPolynomial::spin(n, arity, b, site);
  };
  auto shifted_overlap = [n, q](int a, int b, int arity, int upto) {
    return ReplicaPolynomial::overlap(n, arity, a, b, upto) - ReplicaPolynomial::constant(n, arity, q);
  };
  const int arity = f.arity() + 2;
  if (path == CavityPath::one) {
    const PairFactor u = [&](int a, int b, int ar) { return b2 * spin_pair(last, a, b, ar) * shifted_overlap(a, b, ar, n - 1); };
    return {cavity_terms(f, u), ReplicaPolynomial(n, arity), ReplicaPolynomial(n, arity)};
  }
  const int prev = n - 2;
  const PairFactor u1 = [&](int a, int b, int ar) { return b2 * spin_pair(last, a, b, ar) * shifted_overlap(a, b, ar, n - 2); };
  const PairFactor u2 = [&](int a, int b, int ar) { return b2 * spin_pair(prev, a, b, ar) * shifted_overlap(a, b, ar, n - 2); };
  const PairFactor u3 = [&](int a, int b, int ar) {
    return (b2 / n) * (spin_pair(last, a, b, ar) * spin_pair(prev, a, b, ar));
  };
  return {cavity_terms(f, u1), cavity_terms(f, u2), cavity_terms(f, u3)};
}

namespace {

DerivativeEstimate analytic_derivative(const ReplicaPolynomial& f, CavityPath path, double t,
                                       const ModelParams& params, double q, const ExpectationPlan& plan) {
  if (!(t >= 0.0 && t < 1.0)) throw InvalidArgument("the derivative formula holds for 0 <= t < 1");
  const DerivativePolynomials parts = derivative_polynomials(f, path, params.beta, q);
  const PathQuery query{t, {parts.part_i, parts.part_ii, parts.part_iii}};
  const PathSamples samples = sample_path(path, params, q, plan, std::span(&query, 1));
  const std::vector<std::pair<std::size_t, double>> all{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  return {samples.combine(all), samples.column(0), samples.column(1), samples.column(2)};
}

}  // namespace

DerivativeEstimate analytic_derivative_1(const ReplicaPolynomial& observable, double t, const ModelParams& params,
                                         double q, const ExpectationPlan& plan) {
  return analytic_derivative(observable, CavityPath::one, t, params, q, plan);
}

DerivativeEstimate analytic_derivative_2(const ReplicaPolynomial& observable, double t, const ModelParams& params,
                                         double q, const ExpectationPlan& plan) {
  return analytic_derivative(observable, CavityPath::two, t, params, q, plan);
}

std::vector<DerivativeCheck> check_derivatives(std::span<const ReplicaObservable> observables, CavityPath path,
                                               std::span<const double> t_grid, const ModelParams& params, double q,
                                               const ExpectationPlan& plan, double step) {
  if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  for (const auto& obs : observables) {
    if (obs.arity() > 6) throw InvalidArgument("derivative checks support arity <= 6");
  }
  const std::size_t n_obs = observables.size();
  std::vector<PathQuery> queries;
  // per t: four shifted queries with every f, then one query at t with f and its three parts
  for (double t : t_grid) {
    if (!(t - step >= 0.0 && t + step < 1.0)) {
      throw InvalidArgument("t grid point too close to the ends of [0, 1) for the finite-difference step");
    }
    for (double shift : {-step, step, -0.5 * step, 0.5 * step}) {
      PathQuery query{t + shift, {}};
      for (const auto& obs : observables) query.observables.push_back(obs.poly);
      queries.push_back(std::move(query));
    }
    PathQuery center{t, {}};
    for (const auto& obs : observables) {
      const DerivativePolynomials parts = derivative_polynomials(obs.poly, path, params.beta, q);
      center.observables.push_back(obs.poly);
      center.observables.push_back(parts.part_i);
      center.observables.push_back(parts.part_ii);
      center.observables.push_back(parts.part_iii);
    }
    queries.push_back(std::move(center));
  }
  const PathSamples samples = sample_path(path, params, q, plan, queries);

  std::vector<DerivativeCheck> checks;
  const std::size_t per_t = 4 * n_obs + 4 * n_obs;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const std::size_t base = ti * per_t;
    for (std::size_t o = 0; o < n_obs; ++o) {
      const std::size_t minus = base + o;
      const std::size_t plus = base + n_obs + o;
      const std::size_t half_minus = base + 2 * n_obs + o;
      const std::size_t half_plus = base + 3 * n_obs + o;
      const std::size_t center = base + 4 * n_obs + 4 * o;
      const double inv = 1.0 / (2.0 * step);
      const double inv_half = 1.0 / step;
      DerivativeCheck check;
      check.observable = observables[o].name;
      check.t = t_grid[ti];
      check.nu = samples.column(center);
      const std::vector<std::pair<std::size_t, double>> fd{{plus, inv}, {minus, -inv}};
      check.finite_difference = samples.combine(fd);
      // (4 D(h/2) - D(h)) / 3
      const std::vector<std::pair<std::size_t, double>> rich{{half_plus, 4.0 * inv_half / 3.0},
                                                             {half_minus, -4.0 * inv_half / 3.0},
                                                             {plus, -inv / 3.0},
                                                             {minus, inv / 3.0}};
      check.richardson = samples.combine(rich);
      const std::vector<std::pair<std::size_t, double>> total{{center + 1, 1.0}, {center + 2, 1.0}, {center + 3, 1.0}};
      check.analytic = {samples.combine(total), samples.column(center + 1), samples.column(center + 2),
                        samples.column(center + 3)};
      const std::vector<std::pair<std::size_t, double>> diff{
          {plus, inv}, {minus, -inv}, {center + 1, -1.0}, {center + 2, -1.0}, {center + 3, -1.0}};
      check.difference = samples.combine(diff);
      checks.push_back(check);
    }
  }
  return checks;
}

TaylorReport taylor_remainder_check(const ReplicaPolynomial& observable, int order, CavityPath path,
                                    const ModelParams& params, double q, const ExpectationPlan& plan) {
  if (order != 0 && order != 1) throw InvalidArgument("Taylor remainder checks support order 0 or 1");
  const DerivativePolynomials parts = derivative_polynomials(observable, path, params.beta, q);
  const ReplicaPolynomial derivative = parts.part_i + parts.part_ii + parts.part_iii;
  const std::vector<PathQuery> queries{{1.0, {observable, observable * observable}}, {0.0, {observable, derivative}}};
  const PathSamples samples = sample_path(path, params, q, plan, queries);
  TaylorReport report;
  report.n_spins = params.n_spins;
  report.order = order;
  report.nu = samples.column(0);
  report.f_squared = samples.column(1);
  report.nu0 = samples.column(2);
  report.derivative0 = samples.column(3);
  std::vector<std::pair<std::size_t, double>> rem{{0, 1.0}, {2, -1.0}};
  if (order == 1) rem.emplace_back(3, -1.0);
  report.remainder = samples.combine(rem);
  const double scale = std::pow(static_cast<double>(params.n_spins), -0.5 * (order + 1)) *
                       std::sqrt(std::max(report.f_squared.value, 0.0));
  report.bound_constant = scale > 0.0 ? std::abs(report.remainder.value) / scale : 0.0;
  return report;
}

TaylorSweep taylor_remainder_sweep(const std::function<ReplicaPolynomial(int n_spins)>& observable_for_n, int order,
                                   CavityPath path, double beta, double h, double q, std::span<const int> n_list,
                                   const ExpectationPlan& plan) {
  TaylorSweep sweep;
  std::vector<double> log_n, log_rem;
  for (int n : n_list) {
    const ModelParams params{beta, h, n};
    sweep.rows.push_back(taylor_remainder_check(observable_for_n(n), order, path, params, q, plan));
    const auto& row = sweep.rows.back();
    sweep.fitted_constant = std::max(sweep.fitted_constant, row.bound_constant);
    if (row.remainder.value != 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_rem.push_back(std::log(std::abs(row.remainder.value)));
    }
  }
  if (log_n.size() >= 2) sweep.decay_exponent = fit_line(log_n, log_rem).slope;
  return sweep;
}

CavityOverlapReport cavity_overlap_chain(const ModelParams& params, double q, const ExpectationPlan& plan) {
  const int n = params.n_spins;
  if (n < 3) throw DimensionError("the two-coordinate overlap chain needs N >= 3");
  const auto qc = ReplicaPolynomial::constant(n, 2, q);
  const auto trunc = ReplicaPolynomial::overlap(n, 2, 0, 1, n - 2) - qc;
  const auto full = ReplicaPolynomial::overlap(n, 2, 0, 1, n) - qc;
  const std::vector<PathQuery> queries{{0.0, {trunc * trunc}}, {1.0, {trunc * trunc, full * full}}};
  const PathSamples samples = sample_path(CavityPath::two, params, q, plan, queries);
  CavityOverlapReport report;
  report.n_spins = n;
  report.nu00_trunc = samples.column(0);
  report.nu_trunc = samples.column(1);
  report.nu_full = samples.column(2);
  report.ratio = report.nu_trunc.value > 0.0 ? report.nu00_trunc.value / report.nu_trunc.value : 0.0;
  const std::vector<std::pair<std::size_t, double>> diff{{2, 1.0}, {1, -1.0}};
  report.full_minus_trunc = samples.combine(diff);
  return report;
}

}  // namespace skclt
