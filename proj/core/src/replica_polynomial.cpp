#include "skclt/replica_polynomial.hpp"

#include <algorithm>
#include <bit>

#include "skclt/error.hpp"

namespace skclt {
namespace {

void check_replica(int replica, int arity) {
  if (replica < 0 || replica >= arity || arity > kMaxReplicas) {
    throw InvalidArgument("replica index " + std::to_string(replica) + " outside arity " + std::to_string(arity) +
                          " (max " + std::to_string(kMaxReplicas) + ")");
  }
}

void check_site(int site, int n_spins) {
  if (site < 0 || site >= n_spins) throw DimensionError("spin index " + std::to_string(site) + " out of range");
}

}  // namespace

ReplicaPolynomial::ReplicaPolynomial(int n_spins, int arity) : n_spins_(n_spins), arity_(arity) {
  if (n_spins < 1 || n_spins > 32) throw InvalidArgument("replica polynomials support 1 <= N <= 32");
  if (arity < 0 || arity > kMaxReplicas) {
    throw InvalidArgument("arity " + std::to_string(arity) + " exceeds the supported " + std::to_string(kMaxReplicas));
  }
}

ReplicaPolynomial ReplicaPolynomial::constant(int n_spins, int arity, double value) {
  ReplicaPolynomial p(n_spins, arity);
  if (value != 0.0) p.terms_.push_back(ReplicaTerm{value, {}});
  return p;
}

ReplicaPolynomial ReplicaPolynomial::spin(int n_spins, int arity, int replica, int site) {
  ReplicaPolynomial p(n_spins, arity);
  check_replica(replica, arity);
  check_site(site, n_spins);
  ReplicaTerm term{1.0, {}};
  term.masks[static_cast<std::size_t>(replica)] = ConfigCode{1} << site;
  p.terms_.push_back(term);
  return p;
}

ReplicaPolynomial ReplicaPolynomial::overlap(int n_spins, int arity, int a, int b, int upto) {
  ReplicaPolynomial p(n_spins, arity);
  check_replica(a, arity);
  check_replica(b, arity);
  if (upto < 0 || upto > n_spins) throw DimensionError("overlap range out of bounds");
  const double inv_n = 1.0 / static_cast<double>(n_spins);
  for (int i = 0; i < upto; ++i) {
    ReplicaTerm term{inv_n, {}};
    term.masks[static_cast<std::size_t>(a)] ^= ConfigCode{1} << i;
    term.masks[static_cast<std::size_t>(b)] ^= ConfigCode{1} << i;
    p.terms_.push_back(term);
  }
  p.canonicalize();
  return p;
}

ReplicaPolynomial ReplicaPolynomial::weighted_difference(const WeightVector& weights, int arity, int a, int b) {
  ReplicaPolynomial p(weights.size(), arity);
  check_replica(a, arity);
  check_replica(b, arity);
  for (int i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    ReplicaTerm plus{weights[i], {}};
    plus.masks[static_cast<std::size_t>(a)] = ConfigCode{1} << i;
    ReplicaTerm minus{-weights[i], {}};
    minus.masks[static_cast<std::size_t>(b)] = ConfigCode{1} << i;
    p.terms_.push_back(plus);
    p.terms_.push_back(minus);
  }
  p.canonicalize();
  return p;
}

int ReplicaPolynomial::used_replicas() const noexcept {
  int used = 0;
  for (const auto& term : terms_) {
    for (int l = kMaxReplicas - 1; l >= used; --l) {
      if (term.masks[static_cast<std::size_t>(l)] != 0) {
        used = l + 1;
        break;
      }
    }
  }
  return used;
}

ReplicaPolynomial ReplicaPolynomial::with_arity(int arity) const {
  if (arity < used_replicas()) throw InvalidArgument("declared arity smaller than the replicas in use");
  ReplicaPolynomial p(n_spins_, arity);
  p.terms_ = terms_;
  return p;
}

ReplicaPolynomial& ReplicaPolynomial::operator+=(const ReplicaPolynomial& other) {
  if (other.n_spins_ != n_spins_) throw DimensionError("adding polynomials over different N");
  arity_ = std::max(arity_, other.arity_);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

ReplicaPolynomial& ReplicaPolynomial::operator-=(const ReplicaPolynomial& other) {
  ReplicaPolynomial negated = other * -1.0;
  return *this += negated;
}

ReplicaPolynomial& ReplicaPolynomial::operator*=(double scalar) {
  if (scalar == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.coeff *= scalar;
  return *this;
}

ReplicaPolynomial operator*(const ReplicaPolynomial& a, const ReplicaPolynomial& b) {
  if (a.n_spins_ != b.n_spins_) throw DimensionError("multiplying polynomials over different N");
  ReplicaPolynomial out(a.n_spins_, std::max(a.arity_, b.arity_));
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      ReplicaTerm term{x.coeff * y.coeff, {}};
      for (std::size_t l = 0; l < kMaxReplicas; ++l) term.masks[l] = x.masks[l] ^ y.masks[l];
      out.terms_.push_back(term);
    }
  }
  out.canonicalize();
  return out;
}

ReplicaPolynomial ReplicaPolynomial::pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("negative polynomial power");
  ReplicaPolynomial result = constant(n_spins_, arity_, 1.0);
  for (int e = 0; e < exponent; ++e) result = result * *this;
  return result;
}

void ReplicaPolynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const ReplicaTerm& x, const ReplicaTerm& y) { return x.masks < y.masks; });
  std::vector<ReplicaTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& term : terms_) {
    if (!merged.empty() && merged.back().masks == term.masks) {
      merged.back().coeff += term.coeff;
    } else {
      merged.push_back(term);
    }
  }
  std::erase_if(merged, [](const ReplicaTerm& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

double ReplicaPolynomial::expectation(std::span<const double> correlators) const {
  if (correlators.size() != (std::size_t{1} << n_spins_)) throw DimensionError("correlator table size must be 2^N");
  double acc = 0.0;
  for (const auto& term : terms_) {
    double prod = term.coeff;
    for (ConfigCode mask : term.masks) {
      if (mask != 0) prod *= correlators[mask];
    }
    acc += prod;
  }
  return acc;
}

double ReplicaPolynomial::evaluate(std::span<const ConfigCode> replicas) const {
  if (static_cast<int>(replicas.size()) < used_replicas()) throw DimensionError("too few replicas supplied");
  double acc = 0.0;
  for (const auto& term : terms_) {
    int parity = 0;
    for (std::size_t l = 0; l < replicas.size() && l < kMaxReplicas; ++l) {
      // prod_{i in A} sigma_i = (-1)^{|A \ code|}
      const ConfigCode mask = term.masks[l];
      parity += std::popcount(static_cast<ConfigCode>(mask & ~replicas[l]));
    }
    acc += (parity & 1) ? -term.coeff : term.coeff;
  }
  return acc;
}

}  // namespace skclt
