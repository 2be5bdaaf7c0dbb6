#include "urnflow/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace urnflow {

namespace {
std::string history_string(History h, int n) {
  std::string s(n, '0');
  for (int r = 0; r < n; ++r)
    if (h & (History(1) << r)) s[r] = '1';
  return s;
}
}  // namespace

long FeatureAllocation::total_atoms() const {
  long t = 0;
  for (auto [h, m] : counts) t += m;
  return t;
}

void FeatureAllocation::validate() const {
  if (n < 1 || n > 63) throw std::invalid_argument("allocation: need 1 <= n <= 63");
  for (auto [h, m] : counts) {
    if (h == 0) throw std::invalid_argument("allocation: zero history stored");
    if (n < 64 && (h >> n) != 0)
      throw std::invalid_argument("allocation: history longer than n rows");
    if (m < 1) throw std::invalid_argument("allocation: nonpositive multiplicity");
  }
  if (has_atoms) {
    std::map<History, long> from_atoms;
    for (const auto& a : atoms) ++from_atoms[a.history];
    if (from_atoms != counts)
      throw std::invalid_argument("allocation: atom records disagree with counts");
  }
}

std::string FeatureAllocation::key() const {
  std::ostringstream os;
  bool first = true;
  for (auto [h, m] : counts) {
    if (!first) os << ',';
    first = false;
    os << history_string(h, n) << ':' << m;
  }
  return os.str();
}

FeatureAllocation extract_allocation(const std::vector<BernoulliRealization>& rows) {
  if (rows.empty() || rows.size() > 63)
    throw std::invalid_argument("extract_allocation: need 1..63 rows");
  FeatureAllocation a;
  a.n = int(rows.size());
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (int r = 0; r < a.n; ++r) {
    for (const auto& atom : rows[r].atoms) {
      auto it = index.find(atom.id);
      if (it == index.end()) {
        index.emplace(atom.id, a.atoms.size());
        a.atoms.push_back({atom.id, atom.location, History(1) << r});
      } else {
        a.atoms[it->second].history |= History(1) << r;
      }
    }
  }
  for (const auto& rec : a.atoms) ++a.counts[rec.history];
  a.has_atoms = true;
  return a;
}

FeatureAllocation restrict_allocation(const FeatureAllocation& a) {
  if (a.n < 2) throw std::invalid_argument("restrict_allocation: need n >= 2");
  FeatureAllocation r;
  r.n = a.n - 1;
  History mask = (History(1) << r.n) - 1;
  for (auto [h, m] : a.counts) {
    History cut = h & mask;
    if (cut != 0) r.counts[cut] += m;
  }
  if (a.has_atoms) {
    for (const auto& rec : a.atoms) {
      History cut = rec.history & mask;
      if (cut != 0) r.atoms.push_back({rec.id, rec.location, cut});
    }
    r.has_atoms = true;
  }
  return r;
}

bool history_precedes(History g, History h) {
  History d = g ^ h;
  if (d == 0) return false;
  int row = __builtin_ctzll(d);
  return (g >> row) & 1;  // the history containing the row comes first
}

LabeledMatrix left_ordered(const FeatureAllocation& a) {
  LabeledMatrix m;
  m.n = a.n;
  m.order = LabeledMatrix::Order::left_ordered;
  for (auto [h, cnt] : a.counts)
    for (long i = 0; i < cnt; ++i) m.columns.push_back(h);
  std::sort(m.columns.begin(), m.columns.end(), history_precedes);
  return m;
}

LabeledMatrix uniform_labeling(const FeatureAllocation& a, Rng& rng) {
  LabeledMatrix m = left_ordered(a);
  m.order = LabeledMatrix::Order::uniform_random;
  for (std::size_t i = m.columns.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(m.columns[i - 1], m.columns[pick(rng)]);
  }
  return m;
}

double allocation_log_pmf(const PartitionModel& model, double gamma,
                          const FeatureAllocation& a) {
  if (gamma <= 0.0) throw std::invalid_argument("allocation pmf: gamma must be positive");
  a.validate();
  double rate_sum = 0.0;
  for (int j = 1; j <= a.n; ++j) rate_sum += f_nk(model, j, 1);
  double lp = -gamma * rate_sum;
  for (auto [h, m] : a.counts) {
    lp += m * std::log(gamma);
    lp += m * log_f_nk(model, a.n, history_size(h));
    lp -= std::lgamma(double(m) + 1.0);
  }
  return lp;
}

double step_log_pmf(const PartitionModel& model, double gamma,
                    const FeatureAllocation& at_n, const FeatureAllocation& at_n1) {
  if (gamma <= 0.0) throw std::invalid_argument("step pmf: gamma must be positive");
  at_n1.validate();
  if (at_n1.n < 2 || at_n.n != at_n1.n - 1)
    throw std::invalid_argument("step pmf: row counts must differ by one");
  FeatureAllocation r = restrict_allocation(at_n1);
  if (r.counts != at_n.counts)
    throw std::invalid_argument("step pmf: first allocation is not the restriction of the second");

  int n = at_n.n;
  History newbit = History(1) << n;
  auto count_at = [](const std::map<History, long>& c, History h) {
    auto it = c.find(h);
    return it == c.end() ? 0L : it->second;
  };

  long fresh = count_at(at_n1.counts, newbit);  // history 0^n 1
  double rate = gamma * f_nk(model, n + 1, 1);
  double lp = fresh * std::log(rate) - rate - std::lgamma(double(fresh) + 1.0);

  for (auto [h, m] : at_n.counts) {
    long kept = count_at(at_n1.counts, h | newbit);
    long dropped = count_at(at_n1.counts, h);
    if (kept + dropped != m)
      throw std::invalid_argument("step pmf: inconsistent multiplicities");
    double phat = persistence_prob(model, n, history_size(h));
    lp += std::lgamma(double(m) + 1.0) - std::lgamma(double(kept) + 1.0) -
          std::lgamma(double(dropped) + 1.0);
    if (kept > 0) lp += kept * std::log(phat);
    if (dropped > 0) lp += dropped * std::log1p(-phat);
  }
  return lp;
}

double efpf_log(const PartitionModel& model, double gamma, int n,
                const std::vector<int>& column_sums) {
  if (gamma <= 0.0) throw std::invalid_argument("efpf: gamma must be positive");
  if (n < 1) throw std::invalid_argument("efpf: need n >= 1");
  double rate_sum = 0.0;
  for (int j = 1; j <= n; ++j) rate_sum += f_nk(model, j, 1);
  double k = double(column_sums.size());
  double lp = k * std::log(gamma) - std::lgamma(k + 1.0) - gamma * rate_sum;
  // sorted accumulation keeps the symmetry in the column sums bit-exact
  std::vector<int> sorted = column_sums;
  std::sort(sorted.begin(), sorted.end());
  for (int s : sorted) {
    if (s < 1 || s > n) throw std::invalid_argument("efpf: column sums must lie in [1,n]");
    lp += log_f_nk(model, n, s);
  }
  return lp;
}

std::vector<FeatureAllocation> enumerate_allocations(int n, long max_atoms) {
  if (n < 1 || n > 16) throw std::invalid_argument("enumerate_allocations: need 1 <= n <= 16");
  std::vector<History> histories;
  for (History h = 1; h < (History(1) << n); ++h) histories.push_back(h);
  std::vector<FeatureAllocation> out;
  FeatureAllocation cur;
  cur.n = n;
  auto recurse = [&](auto&& self, std::size_t i, long budget) -> void {
    if (i == histories.size()) {
      out.push_back(cur);
      return;
    }
    self(self, i + 1, budget);  // multiplicity zero
    for (long m = 1; m <= budget; ++m) {
      cur.counts[histories[i]] = m;
      self(self, i + 1, budget - m);
    }
    cur.counts.erase(histories[i]);
  };
  recurse(recurse, 0, max_atoms);
  return out;
}

}  // namespace urnflow
