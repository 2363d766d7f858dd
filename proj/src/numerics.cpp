#include "riskaverse/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

namespace riskaverse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

// ---------------------------------------------------------------------------
// invariant_sum
// ---------------------------------------------------------------------------

namespace {

// Exponents returned by frexp for finite doubles lie in [-1073, 1024].
constexpr int kExpMin = -1080;
constexpr int kExpBins = 2120;

struct ExponentBins {
  std::array<__int128, kExpBins> acc{};
  int lo = kExpBins;
  int hi = -1;
};

}  // namespace

double invariant_sum(std::span<const double> terms) {
  thread_local ExponentBins bins;
  double nonfinite = 0.0;
  bool any_nonfinite = false;
  for (double t : terms) {
    if (!std::isfinite(t)) {
      nonfinite += t;
      any_nonfinite = true;
      continue;
    }
    if (t == 0.0) continue;
    int e = 0;
    const double m = std::frexp(t, &e);
    const auto mant = static_cast<long long>(std::ldexp(m, 53));
    const int b = e - kExpMin;
    bins.acc[b] += mant;
    bins.lo = std::min(bins.lo, b);
    bins.hi = std::max(bins.hi, b);
  }
  double total = 0.0;
  for (int b = bins.lo; b <= bins.hi; ++b) {
    if (bins.acc[b] != 0) {
      total += std::ldexp(static_cast<double>(bins.acc[b]), b + kExpMin - 53);
      bins.acc[b] = 0;
    }
  }
  bins.lo = kExpBins;
  bins.hi = -1;
  if (any_nonfinite) return nonfinite;
  return total;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

// 15-point Kronrod abscissae on [-1, 1] (nonnegative half) and weights; the
// embedded 7-point Gauss rule uses the odd-indexed abscissae and the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule1D {
  std::array<double, 15> x{};   // on [-1, 1]
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};  // zero where the node is not a Gauss node
};

const Rule1D& rule() {
  static const Rule1D r = [] {
    Rule1D out;
    int idx = 0;
    for (int j = 0; j < 7; ++j) {
      const double g = (j % 2 == 1) ? kWg[j / 2] : 0.0;
      out.x[idx] = -kXgk[j];
      out.wk[idx] = kWgk[j];
      out.wg[idx] = g;
      ++idx;
      out.x[idx] = kXgk[j];
      out.wk[idx] = kWgk[j];
      out.wg[idx] = g;
      ++idx;
    }
    out.x[14] = 0.0;
    out.wk[14] = kWgk[7];
    out.wg[14] = kWg[3];
    return out;
  }();
  return r;
}

struct Cell {
  Vector lo;
  Vector hi;
  double k = 0.0;
  double g = 0.0;
  double kabs = 0.0;
  double err = 0.0;
  std::size_t serial = 0;
  std::size_t slot = 0;
};

struct CellOrder {
  bool operator()(const Cell* a, const Cell* b) const {
    if (a->err != b->err) return a->err < b->err;
    return a->serial > b->serial;
  }
};

class CellRule {
 public:
  CellRule(const ScalarField& fn, int dim) : fn_(fn), dim_(dim), point_(dim), idx_(dim) {}

  std::size_t evaluations = 0;

  void apply(Cell& c) {
    const Rule1D& r = rule();
    Vector half = 0.5 * (c.hi - c.lo);
    Vector mid = 0.5 * (c.hi + c.lo);
    double vol = half.prod();
    double k = 0.0, g = 0.0, kabs = 0.0;
    std::fill(idx_.begin(), idx_.end(), 0);
    while (true) {
      double wk = 1.0, wg = 1.0;
      for (int d = 0; d < dim_; ++d) {
        point_[d] = mid[d] + half[d] * r.x[idx_[d]];
        wk *= r.wk[idx_[d]];
        wg *= r.wg[idx_[d]];
      }
      const double f = fn_(point_);
      ++evaluations;
      if (!std::isfinite(f)) {
        throw NumericalError("integrate: non-finite integrand at " + format_point(point_));
      }
      k += wk * f;
      kabs += wk * std::abs(f);
      if (wg != 0.0) g += wg * f;
      int d = 0;
      while (d < dim_ && ++idx_[d] == 15) {
        idx_[d] = 0;
        ++d;
      }
      if (d == dim_) break;
    }
    c.k = k * vol;
    c.g = g * vol;
    c.kabs = kabs * vol;
    c.err = std::abs(c.k - c.g);
  }

 private:
  const ScalarField& fn_;
  int dim_;
  Vector point_;
  std::vector<int> idx_;
};

}  // namespace

QuadratureResult integrate(const ScalarField& fn, const Box& box, const QuadratureOptions& opts) {
  const int dim = box.dim();
  if (opts.max_cells == 0) throw std::invalid_argument("integrate: max_cells must be positive");
  if (opts.initial_splits < 1) throw std::invalid_argument("integrate: initial_splits must be >= 1");
  if (!opts.breakpoints.empty() && static_cast<int>(opts.breakpoints.size()) != dim) {
    throw std::invalid_argument("integrate: breakpoints must list one vector per dimension");
  }

  // Initial partition edges per dimension.
  std::vector<std::vector<double>> edges(dim);
  for (int d = 0; d < dim; ++d) {
    std::vector<double> cuts = {box.lower()[d], box.upper()[d]};
    if (!opts.breakpoints.empty()) {
      for (double b : opts.breakpoints[d]) {
        if (b > box.lower()[d] && b < box.upper()[d]) cuts.push_back(b);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      for (int s = 0; s < opts.initial_splits; ++s) {
        edges[d].push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * s / opts.initial_splits);
      }
    }
    edges[d].push_back(cuts.back());
  }

  std::vector<std::unique_ptr<Cell>> storage;
  std::priority_queue<Cell*, std::vector<Cell*>, CellOrder> heap;
  CellRule cell_rule(fn, dim);
  std::size_t serial = 0;

  std::vector<std::size_t> idx(dim, 0);
  while (true) {
    auto c = std::make_unique<Cell>();
    c->lo.resize(dim);
    c->hi.resize(dim);
    for (int d = 0; d < dim; ++d) {
      c->lo[d] = edges[d][idx[d]];
      c->hi[d] = edges[d][idx[d] + 1];
    }
    c->serial = serial++;
    c->slot = storage.size();
    cell_rule.apply(*c);
    heap.push(c.get());
    storage.push_back(std::move(c));
    int d = 0;
    while (d < dim && ++idx[d] == edges[d].size() - 1) {
      idx[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }

  auto totals = [&](double& value, double& error, double& absval) {
    std::vector<double> ks, es, as;
    ks.reserve(heap.size());
    for (const auto& c : storage) {
      if (!c) continue;
      ks.push_back(c->k);
      es.push_back(c->err);
      as.push_back(c->kabs);
    }
    value = invariant_sum(ks);
    error = invariant_sum(es);
    absval = invariant_sum(as);
  };

  QuadratureResult result;
  double value = 0.0, error = 0.0, absval = 0.0;
  totals(value, error, absval);
  // Running sums for the loop; exact totals are recomputed at the end.
  while (true) {
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 50.0 * kEps * absval});
    if (error <= target) {
      result.converged = true;
      break;
    }
    if (heap.size() >= opts.max_cells) break;
    Cell* worst = heap.top();
    heap.pop();
    // Split along the dimension that is widest relative to the full box.
    int split = 0;
    double best = -1.0;
    for (int d = 0; d < dim; ++d) {
      const double w = (worst->hi[d] - worst->lo[d]) / (box.upper()[d] - box.lower()[d]);
      if (w > best) {
        best = w;
        split = d;
      }
    }
    const double cut = 0.5 * (worst->lo[split] + worst->hi[split]);
    if (!(cut > worst->lo[split] && cut < worst->hi[split])) {
      heap.push(worst);
      break;  // cells cannot be refined further in floating point
    }
    auto left = std::make_unique<Cell>();
    auto right = std::make_unique<Cell>();
    left->lo = worst->lo;
    left->hi = worst->hi;
    left->hi[split] = cut;
    right->lo = worst->lo;
    right->hi = worst->hi;
    right->lo[split] = cut;
    left->serial = serial++;
    right->serial = serial++;
    cell_rule.apply(*left);
    cell_rule.apply(*right);
    value += left->k + right->k - worst->k;
    error += left->err + right->err - worst->err;
    absval += left->kabs + right->kabs - worst->kabs;
    heap.push(left.get());
    heap.push(right.get());
    left->slot = worst->slot;
    right->slot = storage.size();
    storage[left->slot] = std::move(left);
    storage.push_back(std::move(right));
  }
  totals(value, error, absval);
  result.value = value;
  result.error = error;
  result.cells = heap.size();
  result.evaluations = cell_rule.evaluations;
  if (!result.converged) {
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 50.0 * kEps * absval});
    result.converged = error <= target;
  }
  return result;
}

double integrate_box(const ScalarField& fn, const Box& box, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_box: tol must be positive");
  QuadratureOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = 0.0;
  opts.max_cells = 200000;
  QuadratureResult r = integrate(fn, box, opts);
  if (!r.converged) {
    throw NumericalError("integrate_box: subdivision budget exhausted (error estimate " +
                         std::to_string(r.error) + ")");
  }
  return r.value;
}

// ---------------------------------------------------------------------------
// Grid argmax
// ---------------------------------------------------------------------------

void GridSpec::validate() const {
  if (points_per_dim < 3) throw std::invalid_argument("GridSpec: points_per_dim must be >= 3");
  if (refinement_rounds < 0) throw std::invalid_argument("GridSpec: refinement_rounds must be >= 0");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw std::invalid_argument("GridSpec: shrink_factor must lie in (0, 1)");
  }
}

namespace {

// Relative tolerance for keeping secondary local maxima alive between rounds.
constexpr double kExploreTol = 1e-3;
constexpr std::size_t kMaxWindows = 64;

struct Window {
  Box box;
  Vector half_width;
  bool plateau = false;
};

// Uniform tensor grid over a window together with the sampled values.
struct GridSample {
  Box box;
  int n = 0;
  int dim = 0;
  Vector spacing;
  std::vector<Vector> points;
  std::vector<double> values;

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int d = dim - 1; d >= 0; --d) f = f * n + idx[d];
    return f;
  }
  std::vector<int> unflat(std::size_t f) const {
    std::vector<int> idx(dim);
    for (int d = 0; d < dim; ++d) {
      idx[d] = static_cast<int>(f % n);
      f /= n;
    }
    return idx;
  }
  // Neighbours in the 3^M - 1 stencil.
  std::vector<std::size_t> neighbours(std::size_t f) const {
    std::vector<std::size_t> out;
    const std::vector<int> base = unflat(f);
    std::vector<int> off(dim, -1);
    while (true) {
      bool zero = true, ok = true;
      std::vector<int> idx = base;
      for (int d = 0; d < dim; ++d) {
        if (off[d] != 0) zero = false;
        idx[d] += off[d];
        if (idx[d] < 0 || idx[d] >= n) ok = false;
      }
      if (!zero && ok) out.push_back(flat(idx));
      int d = 0;
      while (d < dim && ++off[d] == 2) {
        off[d] = -1;
        ++d;
      }
      if (d == dim) break;
    }
    return out;
  }
};

GridSample sample_grid(const ScalarField& fn, const Box& box, int n) {
  GridSample s;
  s.box = box;
  s.n = n;
  s.dim = box.dim();
  s.spacing = box.width() / (n - 1);
  std::size_t total = 1;
  for (int d = 0; d < s.dim; ++d) total *= static_cast<std::size_t>(n);
  s.points.reserve(total);
  s.values.reserve(total);
  for (std::size_t f = 0; f < total; ++f) {
    const std::vector<int> idx = s.unflat(f);
    Vector p(s.dim);
    for (int d = 0; d < s.dim; ++d) {
      p[d] = (idx[d] == n - 1) ? box.upper()[d] : box.lower()[d] + s.spacing[d] * idx[d];
    }
    const double v = fn(p);
    if (std::isnan(v)) throw NumericalError("grid_argmax: objective is NaN at " + format_point(p));
    if (v == kInf) throw NumericalError("grid_argmax: objective is +inf at " + format_point(p));
    s.points.push_back(std::move(p));
    s.values.push_back(v);
  }
  return s;
}

double tie_floor(double best, double tol, double scale) {
  return best - tol * std::abs(best) - 64.0 * kEps * scale;
}

struct Cluster {
  std::vector<std::size_t> members;
  std::size_t best = 0;
};

// Connected components (3^M stencil) among the flagged grid points.
std::vector<Cluster> connected_clusters(const GridSample& s, const std::vector<char>& flagged) {
  std::vector<char> seen(s.values.size(), 0);
  std::vector<Cluster> out;
  for (std::size_t f = 0; f < s.values.size(); ++f) {
    if (!flagged[f] || seen[f]) continue;
    Cluster c;
    std::vector<std::size_t> stack = {f};
    seen[f] = 1;
    c.best = f;
    while (!stack.empty()) {
      const std::size_t g = stack.back();
      stack.pop_back();
      c.members.push_back(g);
      if (s.values[g] > s.values[c.best] || (s.values[g] == s.values[c.best] && g < c.best)) c.best = g;
      for (std::size_t h : s.neighbours(g)) {
        if (flagged[h] && !seen[h]) {
          seen[h] = 1;
          stack.push_back(h);
        }
      }
    }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
  }
  return out;
}

struct Bounds {
  Vector lower;
  Vector upper;
  double extent() const { return (upper - lower).maxCoeff(); }
};

Bounds cluster_bounds(const GridSample& s, const Cluster& c) {
  Bounds b{s.points[c.members.front()], s.points[c.members.front()]};
  for (std::size_t m : c.members) {
    b.lower = b.lower.cwiseMin(s.points[m]);
    b.upper = b.upper.cwiseMax(s.points[m]);
  }
  return b;
}

// Local maxima competitive with `global_best`, each grown by its tie set.
std::vector<Cluster> competitive_clusters(const GridSample& s, double global_best, double explore_floor,
                                          double tie_tol, double scale) {
  const std::size_t n = s.values.size();
  std::vector<char> local_max(n, 0);
  for (std::size_t f = 0; f < n; ++f) {
    const double v = s.values[f];
    if (!(v >= explore_floor) || v == -kInf) continue;
    bool is_max = true;
    for (std::size_t h : s.neighbours(f)) {
      if (s.values[h] > v) {
        is_max = false;
        break;
      }
    }
    local_max[f] = is_max ? 1 : 0;
  }
  // Grow each local maximum by neighbours tied with it.
  std::vector<char> flagged = local_max;
  std::vector<std::size_t> stack;
  for (std::size_t f = 0; f < n; ++f) {
    if (local_max[f]) stack.push_back(f);
  }
  while (!stack.empty()) {
    const std::size_t g = stack.back();
    stack.pop_back();
    const double floor = tie_floor(s.values[g], tie_tol, scale);
    for (std::size_t h : s.neighbours(g)) {
      if (!flagged[h] && s.values[h] >= floor && s.values[h] > -kInf) {
        flagged[h] = 1;
        stack.push_back(h);
      }
    }
  }
  (void)global_best;
  return connected_clusters(s, flagged);
}

Vector samples_spacing_hint(const Box& box, int n) { return box.width() / (n - 1); }

double max_abs_finite(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  }
  return m;
}

bool point_less(const Vector& a, const Vector& b) {
  for (int d = 0; d < a.size(); ++d) {
    if (a[d] != b[d]) return a[d] < b[d];
  }
  return false;
}

}  // namespace

SetEstimate grid_argmax(const ScalarField& fn, const Box& box, const GridSpec& grid, double plateau_tol) {
  grid.validate();
  if (!(plateau_tol >= 0.0)) throw std::invalid_argument("grid_argmax: plateau_tol must be >= 0");
  const int n = grid.points_per_dim;
  const int dim = box.dim();

  SetEstimate est;
  est.plateau_tol = plateau_tol;

  GridSample coarse = sample_grid(fn, box, n);
  est.coarse_cell_size = coarse.spacing.maxCoeff();

  // Each round holds the samples of every live window.
  // The discrete maximum of a smooth objective lies within one coarse cell of
  // the true one, so the first window reaches one cell around each cluster.
  std::vector<Window> windows = {Window{box, samples_spacing_hint(box, n) / grid.shrink_factor, false}};
  std::vector<GridSample> samples;
  samples.push_back(std::move(coarse));

  double scale = max_abs_finite(samples.front().values);
  auto global_best = [&]() {
    double b = -kInf;
    for (const auto& s : samples) {
      for (double v : s.values) b = std::max(b, v);
    }
    return b;
  };

  double best = global_best();
  if (best == -kInf) {
    est.empty = true;
    est.value = -kInf;
    est.cell_size = est.coarse_cell_size;
    est.notes.push_back("objective is -inf on the whole grid");
    return est;
  }

  for (int round = 0; round < grid.refinement_rounds; ++round) {
    const double explore_floor = tie_floor(best, kExploreTol, scale);
    struct Candidate {
      Window window;
      double value;
      Vector best_point;
    };
    std::vector<Candidate> next;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const GridSample& s = samples[w];
      if (windows[w].plateau) {
        next.push_back({windows[w], *std::max_element(s.values.begin(), s.values.end()),
                        s.points[std::max_element(s.values.begin(), s.values.end()) - s.values.begin()]});
        continue;
      }
      for (const Cluster& c : competitive_clusters(s, best, explore_floor, plateau_tol, scale)) {
        const Bounds bounds = cluster_bounds(s, c);
        Vector hw = (grid.shrink_factor * windows[w].half_width).cwiseMax(s.spacing);
        Vector lo = (bounds.lower - hw).cwiseMax(box.lower());
        Vector hi = (bounds.upper + hw).cwiseMin(box.upper());
        Window nw{Box(lo, hi), hw, false};
        const Vector old_width = windows[w].box.width();
        const Vector new_width = nw.box.width();
        bool shrunk = false;
        for (int d = 0; d < dim; ++d) {
          if (new_width[d] < 0.999 * old_width[d]) shrunk = true;
        }
        if (!shrunk) {
          // Flat region that refinement cannot localize: keep its samples.
          nw = windows[w];
          nw.plateau = true;
        }
        next.push_back({nw, s.values[c.best], s.points[c.best]});
      }
    }
    // Drop duplicate windows (same best point up to the current resolution).
    std::sort(next.begin(), next.end(), [](const Candidate& a, const Candidate& b) {
      if (a.value != b.value) return a.value > b.value;
      return point_less(a.best_point, b.best_point);
    });
    std::vector<Candidate> kept;
    for (auto& c : next) {
      bool dup = false;
      for (const auto& k : kept) {
        if (k.window.box.contains(c.best_point) && c.window.box.contains(k.best_point) &&
            (k.best_point - c.best_point).cwiseAbs().maxCoeff() <=
                c.window.half_width.maxCoeff()) {
          dup = true;
          break;
        }
      }
      if (!dup) kept.push_back(std::move(c));
      if (kept.size() >= kMaxWindows) break;
    }
    std::vector<Window> new_windows;
    std::vector<GridSample> new_samples;
    for (auto& k : kept) {
      if (k.window.plateau) {
        // Reuse the existing samples of a carried plateau.
        for (std::size_t w = 0; w < windows.size(); ++w) {
          if (windows[w].box.lower() == k.window.box.lower() && windows[w].box.upper() == k.window.box.upper()) {
            new_samples.push_back(samples[w]);
            break;
          }
        }
      } else {
        new_samples.push_back(sample_grid(fn, k.window.box, n));
      }
      new_windows.push_back(k.window);
    }
    windows = std::move(new_windows);
    samples = std::move(new_samples);
    for (const auto& s : samples) scale = std::max(scale, max_abs_finite(s.values));
    best = std::max(best, global_best());
  }

  // Final selection over the last round's samples.
  best = global_best();
  const double floor = tie_floor(best, plateau_tol, scale);
  double final_cell = 0.0;
  for (const auto& s : samples) final_cell = std::max(final_cell, s.spacing.maxCoeff());
  est.cell_size = final_cell;
  est.value = best;

  std::vector<std::pair<Vector, double>> chosen;
  for (const auto& s : samples) {
    std::vector<char> flagged(s.values.size(), 0);
    for (std::size_t f = 0; f < s.values.size(); ++f) flagged[f] = s.values[f] >= floor && s.values[f] > -kInf;
    for (const Cluster& c : connected_clusters(s, flagged)) {
      const double extent = cluster_bounds(s, c).extent();
      if (extent <= est.coarse_cell_size * (1.0 + 1e-12) || c.members.size() == 1) {
        chosen.emplace_back(s.points[c.best], s.values[c.best]);
      } else {
        est.plateau = true;
        for (std::size_t m : c.members) chosen.emplace_back(s.points[m], s.values[m]);
      }
    }
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const auto& a, const auto& b) { return point_less(a.first, b.first); });
  // Deduplicate at the final cell resolution, keeping the better value.
  const double dedup = 0.5 * final_cell;
  for (auto& c : chosen) {
    bool merged = false;
    for (std::size_t i = 0; i < est.points.size(); ++i) {
      if ((est.points[i] - c.first).cwiseAbs().maxCoeff() <= dedup) {
        if (c.second > est.values[i]) {
          est.points[i] = c.first;
          est.values[i] = c.second;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      est.points.push_back(c.first);
      est.values.push_back(c.second);
    }
  }
  if (est.plateau) est.notes.push_back("flat maximizing region: points are representative grid samples");
  return est;
}

SetEstimate finite_argmax(const std::vector<Vector>& candidates, std::span<const double> values,
                          double plateau_tol) {
  if (candidates.size() != values.size()) {
    throw std::invalid_argument("finite_argmax: candidate and value counts differ");
  }
  if (candidates.empty()) throw std::invalid_argument("finite_argmax: no candidates");
  SetEstimate est;
  est.plateau_tol = plateau_tol;
  double best = -kInf, scale = 0.0;
  for (double v : values) {
    if (std::isnan(v)) throw NumericalError("finite_argmax: NaN objective");
    best = std::max(best, v);
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  }
  est.value = best;
  if (best == -kInf) {
    est.empty = true;
    est.notes.push_back("objective is -inf at every candidate");
    return est;
  }
  const double floor = tie_floor(best, plateau_tol, scale);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (values[i] >= floor) {
      est.points.push_back(candidates[i]);
      est.values.push_back(values[i]);
    }
  }
  return est;
}

double set_distance(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  auto directed = [](const std::vector<Vector>& from, const std::vector<Vector>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double nearest = kInf;
      for (const auto& q : to) nearest = std::min(nearest, (p - q).norm());
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// ---------------------------------------------------------------------------
// Hessian
// ---------------------------------------------------------------------------

HessianResult finite_diff_hessian(const ScalarField& fn, const Vector& point, double step,
                                  const std::optional<Box>& box) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_hessian: step must be positive");
  const int m = static_cast<int>(point.size());
  if (box && !box->contains(point)) {
    throw std::invalid_argument("finite_diff_hessian: point outside the box");
  }
  HessianResult out;
  out.hessian = Matrix::Zero(m, m);
  out.steps = Vector::Constant(m, step);
  // dir[i] = 0 for central differences, +1/-1 for a one-sided stencil.
  std::vector<int> dir(m, 0);
  if (box) {
    for (int i = 0; i < m; ++i) {
      const double below = point[i] - box->lower()[i];
      const double above = box->upper()[i] - point[i];
      const double room = std::min(below, above);
      if (room >= step) continue;
      if (room >= 0.1 * step) {
        out.steps[i] = room;
        continue;
      }
      out.one_sided = true;
      dir[i] = above >= below ? 1 : -1;
      const double reach = std::max(above, below);
      out.steps[i] = std::min(step, 0.5 * reach);
    }
  }
  auto eval = [&](int i, double si, int j, double sj) {
    Vector p = point;
    if (i >= 0) p[i] += si;
    if (j >= 0) p[j] += sj;
    const double v = fn(p);
    if (!std::isfinite(v)) throw NumericalError("finite_diff_hessian: non-finite value at " + format_point(p));
    return v;
  };
  const double f0 = eval(-1, 0, -1, 0);
  for (int i = 0; i < m; ++i) {
    const double h = out.steps[i];
    if (dir[i] == 0) {
      out.hessian(i, i) = (eval(i, h, -1, 0) - 2.0 * f0 + eval(i, -h, -1, 0)) / (h * h);
    } else {
      const double s = dir[i] * h;
      out.hessian(i, i) = (eval(i, 2.0 * s, -1, 0) - 2.0 * eval(i, s, -1, 0) + f0) / (h * h);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double hi = out.steps[i], hj = out.steps[j];
      double v;
      if (dir[i] == 0 && dir[j] == 0) {
        v = (eval(i, hi, j, hj) - eval(i, hi, j, -hj) - eval(i, -hi, j, hj) + eval(i, -hi, j, -hj)) /
            (4.0 * hi * hj);
      } else {
        const double si = (dir[i] == 0 ? 1 : dir[i]) * hi;
        const double sj = (dir[j] == 0 ? 1 : dir[j]) * hj;
        v = (eval(i, si, j, sj) - eval(i, si, -1, 0) - eval(j, sj, -1, 0) + f0) / (si * sj);
      }
      out.hessian(i, j) = v;
      out.hessian(j, i) = v;
    }
  }
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  return out;
}

// ---------------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------------

double ray_crossing(const ScalarField& fn, const Vector& origin, const Vector& dir, double level,
                    double max_distance, double rel_tol) {
  if (!(max_distance > 0.0)) return 0.0;
  auto g = [&](double t) {
    const double v = fn(origin + t * dir);
    if (std::isnan(v)) throw NumericalError("ray_crossing: NaN objective");
    return v - level;
  };
  double lo = 0.0, hi = max_distance * std::ldexp(1.0, -40);
  double ghi = g(hi);
  while (ghi < 0.0) {
    if (hi >= max_distance) return max_distance;
    lo = hi;
    hi = std::min(2.0 * hi, max_distance);
    ghi = g(hi);
  }
  double glo = g(lo);
  if (glo >= 0.0) return lo;
  // Illinois variant of regula falsi, with bisection when the secant stalls.
  int side = 0;
  const double tol = rel_tol * max_distance;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double t = (std::isfinite(glo) && std::isfinite(ghi)) ? (lo * ghi - hi * glo) / (ghi - glo)
                                                          : 0.5 * (lo + hi);
    if (!(t > lo && t < hi) || it % 4 == 3) t = 0.5 * (lo + hi);
    const double gt = g(t);
    if (gt >= 0.0) {
      hi = t;
      ghi = gt;
      if (side == 1) glo *= 0.5;
      side = 1;
    } else {
      lo = t;
      glo = gt;
      if (side == -1) ghi *= 0.5;
      side = -1;
    }
  }
  return hi;
}

double distance_to_face(const Box& box, const Vector& origin, const Vector& dir) {
  double t = kInf;
  for (int d = 0; d < origin.size(); ++d) {
    if (dir[d] > 0.0) t = std::min(t, (box.upper()[d] - origin[d]) / dir[d]);
    if (dir[d] < 0.0) t = std::min(t, (box.lower()[d] - origin[d]) / dir[d]);
  }
  return std::max(0.0, t);
}

// ---------------------------------------------------------------------------
// setlim
// ---------------------------------------------------------------------------

SetLimit setlim_detect(const std::vector<SetEstimate>& traces, double match_radius, int stability_window,
                       double diameter) {
  if (stability_window < 1) throw std::invalid_argument("setlim_detect: window must be >= 1");
  if (!(match_radius >= 0.0)) throw std::invalid_argument("setlim_detect: match_radius must be >= 0");
  if (static_cast<int>(traces.size()) < stability_window) {
    throw std::invalid_argument("setlim_detect: fewer traces than the stability window");
  }
  std::vector<const SetEstimate*> window_traces;
  for (const auto& t : traces) window_traces.push_back(&t);
  const std::size_t first = window_traces.size() - static_cast<std::size_t>(stability_window);

  SetLimit out;
  const SetEstimate& last = *window_traces.back();
  out.limit.plateau_tol = last.plateau_tol;
  out.limit.cell_size = last.cell_size;
  out.limit.coarse_cell_size = last.coarse_cell_size;
  out.limit.plateau = last.plateau;

  for (std::size_t i = first; i < window_traces.size(); ++i) {
    if (window_traces[i]->empty) {
      out.diverged = true;
      out.limit.empty = true;
      out.reason = "an estimate in the stability window is empty";
      return out;
    }
  }

  double spread = 0.0;
  for (std::size_t i = first; i < window_traces.size(); ++i) {
    for (const auto& p : window_traces[i]->points) {
      if (!p.allFinite()) {
        out.diverged = true;
        out.limit.empty = true;
        out.reason = "non-finite point in the stability window";
        return out;
      }
      for (const auto& q : last.points) spread = std::max(spread, (p - q).norm());
    }
  }
  if (diameter > 0.0 && spread > diameter * (1.0 + 1e-12)) {
    out.diverged = true;
    out.limit.empty = true;
    out.reason = "window spread exceeds the parameter-space diameter";
    return out;
  }

  for (std::size_t pi = 0; pi < last.points.size(); ++pi) {
    const Vector& p = last.points[pi];
    bool persistent = true;
    for (std::size_t i = first; i + 1 < window_traces.size() && persistent; ++i) {
      bool found = false;
      for (const auto& q : window_traces[i]->points) {
        if ((p - q).norm() <= match_radius) {
          found = true;
          break;
        }
      }
      persistent = found;
    }
    if (!persistent) continue;
    bool dup = false;
    for (const auto& kept : out.limit.points) {
      if ((kept - p).norm() <= match_radius && !last.plateau) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    out.limit.points.push_back(p);
    out.limit.values.push_back(pi < last.values.size() ? last.values[pi] : 0.0);
  }
  if (out.limit.points.empty()) {
    out.diverged = true;
    out.limit.empty = true;
    out.reason = "no point persists across the stability window";
    return out;
  }
  out.limit.value = last.value;
  return out;
}

}  // namespace riskaverse
