#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "vfi/domains.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

namespace {

// Minimal KD-tree over boundary sample positions supporting
// "is any point strictly within radius of c".
class KdTree {
 public:
  KdTree(const std::vector<BoundarySample>& samples, int dim) : dim_(dim) {
    pts_.reserve(samples.size());
    for (const auto& s : samples) pts_.push_back(s.position);
    idx_.resize(pts_.size());
    std::iota(idx_.begin(), idx_.end(), 0u);
    nodes_.reserve(2 * pts_.size() / kLeaf + 2);
    root_ = build(0, pts_.size());
  }

  bool any_within(const Vec& c, double radius) const {
    return query(root_, c, radius * radius);
  }

 private:
  static constexpr std::size_t kLeaf = 16;

  struct Node {
    int axis = -1;  // -1: leaf
    double split = 0;
    double lo = 0, hi = 0;  // extent along axis
    int left = -1, right = -1;
    std::size_t begin = 0, end = 0;
  };

  int build(std::size_t begin, std::size_t end) {
    Node nd;
    nd.begin = begin;
    nd.end = end;
    if (end - begin <= kLeaf) {
      nodes_.push_back(nd);
      return int(nodes_.size()) - 1;
    }
    // Split on the widest axis at the median.
    int axis = 0;
    double best = -1;
    for (int a = 0; a < dim_; ++a) {
      double lo = 1e300, hi = -1e300;
      for (std::size_t i = begin; i < end; ++i) {
        double v = pts_[idx_[i]][a];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best) {
        best = hi - lo;
        axis = a;
      }
    }
    std::size_t mid = (begin + end) / 2;
    std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                     [&](unsigned l, unsigned r) {
                       return pts_[l][axis] < pts_[r][axis];
                     });
    nd.axis = axis;
    nd.split = pts_[idx_[mid]][axis];
    int self = int(nodes_.size());
    nodes_.push_back(nd);
    int left = build(begin, mid);
    int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  bool query(int node, const Vec& c, double rad2) const {
    const Node& nd = nodes_[node];
    if (nd.axis < 0) {
      for (std::size_t i = nd.begin; i < nd.end; ++i) {
        const Vec& p = pts_[idx_[i]];
        double d2 = 0;
        for (int a = 0; a < dim_; ++a) {
          double d = p[a] - c[a];
          d2 += d * d;
        }
        if (d2 < rad2) return true;
      }
      return false;
    }
    double d = c[nd.axis] - nd.split;
    int near = d < 0 ? nd.left : nd.right;
    int far = d < 0 ? nd.right : nd.left;
    if (query(near, c, rad2)) return true;
    if (d * d < rad2) return query(far, c, rad2);
    return false;
  }

  int dim_;
  std::vector<Vec> pts_;
  std::vector<unsigned> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Supremal tangent-ball radius over a coarse sample set, from the pairwise
// bound eps <= |z-y|^2 / (2 |N(y).(z-y)|).
double coarse_pair_estimate(const std::vector<BoundarySample>& s, int dim) {
  double best = 1e300;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      Vec d = s[j].position - s[i].position;
      double d2 = 0;
      for (int a = 0; a < dim; ++a) d2 += d[a] * d[a];
      double h = std::abs(s[i].normal.dot(d));
      if (h > 1e-14 * std::sqrt(d2)) best = std::min(best, d2 / (2 * h));
    }
  return best;
}

std::vector<BoundarySample> subsample(std::vector<BoundarySample> v,
                                      std::size_t cap) {
  if (v.size() <= cap) return v;
  std::vector<BoundarySample> out;
  out.reserve(cap);
  double step = double(v.size()) / cap;
  for (std::size_t i = 0; i < cap; ++i) out.push_back(v[std::size_t(i * step)]);
  return out;
}

}  // namespace

ReachEstimate reach_numeric(const Domain& dom, double tol) {
  if (!(tol > 0)) fail(ErrorCode::InvalidParams, "tol > 0 required");
  if (dom.n > 3)
    fail(ErrorCode::InvalidDimension, "reach bisection is implemented for n <= 3");

  // Coarse pass: pairwise estimate sets the sampling scale.
  double h0 = dom.diameter() / 64.0;
  auto coarse = subsample(sample_boundary(dom, h0), 1500);
  double m0 = coarse_pair_estimate(coarse, dom.n);
  if (!(m0 > 0) || !std::isfinite(m0))
    fail(ErrorCode::NoConvergence, "coarse reach estimate failed");

  // Fine sampling: spacing sqrt(tol*m0) keeps the chord sagitta below tol/2
  // at ball radius ~m0; together with the tol/2 bisection width this stays
  // inside the 2*tol agreement contract.
  double h = std::clamp(std::sqrt(tol * m0), tol, m0 / 4.0);
  auto samples = sample_boundary(dom, h);
  KdTree tree(samples, dom.n);

  // Query order interleaved across the sample set (fixed coprime stride) so
  // that infeasible steps find a violation early wherever it sits.
  std::vector<std::size_t> visit(samples.size());
  {
    std::size_t n = samples.size();
    std::size_t stride = n / 2 + 1;
    while (std::gcd(stride, n) != 1) ++stride;
    std::size_t at = 0;
    for (std::size_t i = 0; i < n; ++i) {
      visit[i] = at;
      at = (at + stride) % n;
    }
  }

  // For eps below the true reach no boundary point lies strictly inside
  // either tangent ball; the margin only absorbs FP roundoff.
  auto feasible = [&](double eps) {
    double rad = eps * (1.0 - 1e-12) - 1e-14;
    std::atomic<bool> violated{false};
    parallel_for(samples.size(), [&](std::size_t i) {
      if (violated.load(std::memory_order_relaxed)) return;
      const auto& s = samples[visit[i]];
      Vec inner = s.position - s.normal * eps;
      Vec outer = s.position + s.normal * eps;
      inner.n = outer.n = dom.n;
      if (tree.any_within(inner, rad) || tree.any_within(outer, rad))
        violated.store(true, std::memory_order_relaxed);
    });
    return !violated.load();
  };

  double lo = tol;
  double hi = std::min(dom.diameter(), 1.25 * m0 + 4 * tol);
  if (!feasible(lo))
    fail(ErrorCode::NoConvergence, "no feasible lower bracket at eps = tol");
  if (feasible(hi))
    fail(ErrorCode::NoConvergence, "upper bracket still feasible");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), ReachMethod::UniformBallBisection, tol};
}

}  // namespace vfi
