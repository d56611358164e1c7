#include "yieldnet/model.hpp"

#include <algorithm>
#include <sstream>

#include "yieldnet/numeric.hpp"

namespace yieldnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::index_out_of_range: return "IndexOutOfRange";
    case ErrorKind::duplicate_link: return "DuplicateLink";
    case ErrorKind::missing_link: return "MissingLink";
    case ErrorKind::insufficient_retailers: return "InsufficientRetailers";
    case ErrorKind::insufficient_suppliers: return "InsufficientSuppliers";
    case ErrorKind::size_limit: return "SizeLimit";
    case ErrorKind::boundary_optimum: return "BoundaryOptimum";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::infeasible_moments: return "InfeasibleMoments";
    case ErrorKind::validation_failed: return "ValidationFailed";
  }
  return "Unknown";
}

GameParams GameParams::homogeneous(std::size_t n, std::size_t m, double s_max, double mu, double sigma2,
                                   double c, std::optional<double> delta) {
  return heterogeneous(n, m, s_max, std::vector<double>(m, mu), std::vector<double>(m, sigma2), c, delta);
}

GameParams GameParams::heterogeneous(std::size_t n, std::size_t m, double s_max, std::vector<double> mu,
                                     std::vector<double> sigma2, double c, std::optional<double> delta) {
  GameParams p;
  p.n = n;
  p.m = m;
  p.s_max = s_max;
  p.delta = delta.value_or(static_cast<double>(m) * s_max);
  p.mu = std::move(mu);
  p.sigma2 = std::move(sigma2);
  p.c = c;
  p.check_shape();
  return p;
}

void GameParams::check_shape() const {
  if (m == 0) throw Error(ErrorKind::invalid_argument, "m must be positive");
  if (mu.size() != m || sigma2.size() != m) {
    std::ostringstream os;
    os << "mu/sigma2 must have m=" << m << " entries (got " << mu.size() << ", " << sigma2.size() << ")";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
}

bool GameParams::equal_means() const {
  return std::all_of(mu.begin(), mu.end(), [&](double x) { return x == mu.front(); });
}

bool GameParams::equal_variances() const {
  return std::all_of(sigma2.begin(), sigma2.end(), [&](double x) { return x == sigma2.front(); });
}

PriceVector::PriceVector(std::vector<double> prices)
    : w(std::move(prices)), left_limit(w.size(), false) {}

PriceVector PriceVector::uniform(std::size_t m, double price) {
  return PriceVector(std::vector<double>(m, price));
}

PriceVector PriceVector::with_price(std::size_t j, double price) const {
  PriceVector out = *this;
  out.left_limit.resize(out.w.size(), false);
  out.w.at(j) = price;
  out.left_limit[j] = false;
  return out;
}

Network::Network(std::size_t n, std::size_t m) : n_(n), m_(m), retailer_links_(n), degree_(m, 0) {}

Network Network::from_links(std::size_t n, std::size_t m, std::span<const Link> links) {
  Network g(n, m);
  for (const Link& l : links) {
    g.check_indices(l.retailer, l.supplier);
    auto& row = g.retailer_links_[l.retailer];
    auto it = std::lower_bound(row.begin(), row.end(), l.supplier);
    if (it != row.end() && *it == l.supplier) {
      std::ostringstream os;
      os << "duplicate link (" << l.retailer << ", " << l.supplier << ")";
      throw Error(ErrorKind::duplicate_link, os.str());
    }
    row.insert(it, l.supplier);
    if (g.degree_[l.supplier]++ == 0) ++g.active_count_;
    ++g.link_count_;
  }
  return g;
}

void Network::check_indices(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= m_) {
    std::ostringstream os;
    os << "link (" << i << ", " << j << ") outside n=" << n_ << ", m=" << m_;
    throw Error(ErrorKind::index_out_of_range, os.str());
  }
}

std::vector<std::size_t> Network::retailers_of(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (has_link(i, j)) out.push_back(i);
  return out;
}

bool Network::has_link(std::size_t i, std::size_t j) const {
  const auto& row = retailer_links_.at(i);
  return std::binary_search(row.begin(), row.end(), j);
}

std::vector<std::size_t> Network::active_suppliers() const {
  std::vector<std::size_t> out;
  out.reserve(active_count_);
  for (std::size_t j = 0; j < m_; ++j)
    if (degree_[j] > 0) out.push_back(j);
  return out;
}

std::vector<std::size_t> Network::vacant_suppliers() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m_; ++j)
    if (degree_[j] == 0) out.push_back(j);
  return out;
}

std::vector<Link> Network::links() const {
  std::vector<Link> out;
  out.reserve(link_count_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j : retailer_links_[i]) out.push_back({i, j});
  return out;
}

Network Network::with_link(std::size_t i, std::size_t j) const {
  check_indices(i, j);
  Network g = *this;
  auto& row = g.retailer_links_[i];
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it != row.end() && *it == j) {
    std::ostringstream os;
    os << "link (" << i << ", " << j << ") already present";
    throw Error(ErrorKind::duplicate_link, os.str());
  }
  row.insert(it, j);
  if (g.degree_[j]++ == 0) ++g.active_count_;
  ++g.link_count_;
  return g;
}

Network Network::without_link(std::size_t i, std::size_t j) const {
  check_indices(i, j);
  Network g = *this;
  auto& row = g.retailer_links_[i];
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) {
    std::ostringstream os;
    os << "link (" << i << ", " << j << ") not present";
    throw Error(ErrorKind::missing_link, os.str());
  }
  row.erase(it);
  if (--g.degree_[j] == 0) --g.active_count_;
  --g.link_count_;
  return g;
}

Network build_network(std::size_t n, std::size_t m, std::span<const Link> links) {
  return Network::from_links(n, m, links);
}

Network add_link(const Network& g, std::size_t i, std::size_t j) { return g.with_link(i, j); }

Network remove_link(const Network& g, std::size_t i, std::size_t j) { return g.without_link(i, j); }

double SupplyRealization::total_active(const Network& g) const {
  double t = 0.0;
  for (std::size_t j = 0; j < g.m(); ++j)
    if (g.is_active(j)) t += s.at(j);
  return t;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_params(const GameParams& p, const PriceVector* w, bool moment_matched_sampling) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::optional<std::size_t> j, std::string msg) {
    report.violations.push_back({kind, j, std::move(msg)});
  };

  if (p.m == 0 || p.mu.size() != p.m || p.sigma2.size() != p.m) {
    add(ViolationKind::shape, std::nullopt, "mu and sigma2 must have m entries, m > 0");
    return report;
  }
  if (w != nullptr && w->size() != p.m) {
    add(ViolationKind::shape, std::nullopt, "price vector must have m entries");
    w = nullptr;
  }
  if (!(p.s_max > 0.0)) add(ViolationKind::mean_range, std::nullopt, "s_max must be positive");
  if (!(p.c > 0.0)) add(ViolationKind::link_cost, std::nullopt, "link cost c must be positive");

  for (std::size_t j = 0; j < p.m; ++j) {
    std::ostringstream os;
    const double mu = p.mu[j];
    const double s2 = p.sigma2[j];
    if (!(mu > 0.0) || definitely_positive(mu - p.s_max, magnitude({mu, p.s_max}))) {
      os << "supplier " << j << ": mean " << mu << " outside (0, s_max=" << p.s_max << "]";
      add(ViolationKind::mean_range, j, os.str());
      continue;
    }
    if (s2 < 0.0) {
      os << "supplier " << j << ": negative variance " << s2;
      add(ViolationKind::negative_variance, j, os.str());
    }
    if (moment_matched_sampling) {
      const double cap = mu * (p.s_max - mu);
      if (definitely_positive(s2 - cap, magnitude({s2, cap}))) {
        std::ostringstream ms;
        ms << "supplier " << j << ": variance " << s2 << " exceeds mu (s_max - mu) = " << cap;
        add(ViolationKind::moment_feasibility, j, ms.str());
      }
    }
    const double v1 = p.value(j, mu);
    if (p.c > 0.0 && definitely_positive(p.c - v1, magnitude({p.c, v1}))) {
      std::ostringstream cs;
      cs << "supplier " << j << ": link cost c=" << p.c << " exceeds v(1)=" << v1;
      add(ViolationKind::link_cost, j, cs.str());
    }
    if (w != nullptr) {
      const double wj = (*w)[j];
      if (wj < 0.0) {
        std::ostringstream ps;
        ps << "supplier " << j << ": negative price " << wj;
        add(ViolationKind::negative_price, j, ps.str());
      }
      const double bound = p.price_bound(j);
      if (definitely_positive(wj - bound, magnitude({wj, bound, p.delta}))) {
        std::ostringstream ps;
        ps << "supplier " << j << ": price " << wj << " exceeds bound " << bound;
        add(ViolationKind::price_bound, j, ps.str());
      }
    }
  }
  return report;
}

}  // namespace yieldnet
