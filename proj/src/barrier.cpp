#include "mmbarrier/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <thread>

#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smallest theta_2 + theta_3 admitted by the alpha search.
constexpr double kAlphaTail = 1e-6;

struct DenominatorValue {
  double bits = 0.0;
  SupportDistribution dist;
  std::string presentation_id;
};

using Denominator = std::function<DenominatorValue(const Theta&, const SolverOptions&)>;

struct Model {
  Denominator denominator;
  double log2_rank = 0.0;
  bool symmetric = false;
};

struct Point {
  Theta theta{1.0, 0.0, 0.0};
  bool constrained = false;
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool clamped = false;
  SupportDistribution dist;
  std::string presentation_id;
};

using Evaluator = std::function<Point(const Theta&)>;

bool symmetric_presentation(const Presentation& pres) {
  const TensorSupport& s = pres.support;
  return s.dim(1) == s.dim(2) && axis_swap_symmetric(s);
}

void check_finite_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(name) + " must be finite and nonnegative");
}

std::size_t thread_count(const SearchConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("MMBARRIER_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return 1;
}

// Evaluates fn on every theta; results keep the input order.
std::vector<Point> evaluate_all(const std::vector<Theta>& thetas, const Evaluator& fn, std::size_t threads) {
  std::vector<Point> out(thetas.size());
  threads = std::min(threads, thetas.size());
  if (threads <= 1) {
    for (std::size_t n = 0; n < thetas.size(); ++n) out[n] = fn(thetas[n]);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t n = t; n < thetas.size(); n += threads) out[n] = fn(thetas[n]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double score(const Point& p, bool maximize) {
  if (!p.constrained) return -kInf;
  return maximize ? p.value : -p.value;
}

// Strictly better, ties going to the lexicographically smaller theta.
bool better(const Point& a, const Point& b, bool maximize) {
  const double sa = score(a, maximize);
  const double sb = score(b, maximize);
  if (sa != sb) return sa > sb;
  return a.theta.values() < b.theta.values();
}

class Search {
 public:
  Search(Evaluator eval, bool maximize, double tail, const SearchConfig& config)
      : eval_(std::move(eval)), maximize_(maximize), tail_(tail), config_(config) {
    if (!(config.theta_step > 0.0 && config.theta_step <= 0.5)) throw InvalidArgument("theta step must lie in (0, 0.5]");
    if (!(config.theta_resolution > 0.0)) throw InvalidArgument("theta resolution must be positive");
    diag_.theta_step = config.theta_step;
    diag_.theta_resolution = config.theta_resolution;
  }

  Point run(bool symmetric) {
    diag_.symmetric_restriction = symmetric;
    if (symmetric) {
      run_line();
    } else {
      run_simplex();
    }
    return best_;
  }

  const SearchDiagnostics& diagnostics() const { return diag_; }

 private:
  void consider(const Point& p) {
    if (!p.constrained) ++diag_.unconstrained_thetas;
    if (p.clamped) ++diag_.clamp_events;
    if (!have_best_ || better(p, best_, maximize_)) {
      best_ = p;
      have_best_ = true;
    }
  }

  Point refine_eval(const Theta& theta) {
    ++diag_.refinement_evaluations;
    Point p = eval_(theta);
    consider(p);
    return p;
  }

  void run_line() {
    const double hi = 1.0 - tail_;
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * config_.theta_step;
      if (t > hi + 1e-12) break;
      grid.push_back(std::min(t, hi));
    }
    if (grid.back() < hi) grid.push_back(hi);

    std::vector<Theta> thetas;
    for (double t : grid) thetas.push_back(Theta::symmetric(t));
    const auto points = evaluate_all(thetas, eval_, thread_count(config_));
    diag_.grid_points = points.size();
    std::size_t best_idx = 0;
    for (std::size_t n = 0; n < points.size(); ++n) {
      consider(points[n]);
      if (better(points[n], points[best_idx], maximize_)) best_idx = n;
    }

    // Golden-section search on the bracket around the best grid point; the
    // objective is quasi-concave (resp. quasi-convex) along the line.
    double lo = grid[best_idx == 0 ? 0 : best_idx - 1];
    double up = grid[std::min(best_idx + 1, grid.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = up - inv_phi * (up - lo);
    double b = lo + inv_phi * (up - lo);
    double fa = score(refine_eval(Theta::symmetric(a)), maximize_);
    double fb = score(refine_eval(Theta::symmetric(b)), maximize_);
    while (up - lo > config_.theta_resolution) {
      if (fa >= fb) {
        up = b;
        b = a;
        fb = fa;
        a = up - inv_phi * (up - lo);
        fa = score(refine_eval(Theta::symmetric(a)), maximize_);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + inv_phi * (up - lo);
        fb = score(refine_eval(Theta::symmetric(b)), maximize_);
      }
    }
  }

  // Coordinates (t1, t2) with t3 = 1 - t1 - t2; feasible when all three are
  // nonnegative and t2 + t3 >= tail.
  bool feasible(double t1, double t2) const {
    const double t3 = 1.0 - t1 - t2;
    return t1 >= 0.0 && t2 >= 0.0 && t3 >= -1e-15 && 1.0 - t1 >= tail_ - 1e-15;
  }

  static Theta make_theta(double t1, double t2) { return Theta(t1, t2, std::max(0.0, 1.0 - t1 - t2)); }

  void run_simplex() {
    const double h = config_.theta_step;
    std::vector<Theta> thetas;
    for (std::size_t i = 0;; ++i) {
      const double t1 = static_cast<double>(i) * h;
      if (t1 > 1.0 + 1e-12) break;
      for (std::size_t j = 0;; ++j) {
        const double t2 = static_cast<double>(j) * h;
        if (t1 + t2 > 1.0 + 1e-12) break;
        const double c1 = std::min(t1, 1.0);
        const double c2 = std::min(t2, 1.0 - c1);
        if (feasible(c1, c2)) thetas.push_back(make_theta(c1, c2));
      }
    }
    const auto points = evaluate_all(thetas, eval_, thread_count(config_));
    diag_.grid_points = points.size();
    for (const auto& p : points) consider(p);

    // Pattern search from the best grid point, halving the step.
    static constexpr double kDirs[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    Point current = best_;
    double step = h / 2.0;
    std::size_t budget = 20000;
    while (step >= config_.theta_resolution / 2.0 && budget > 0) {
      bool moved = false;
      for (const auto& d : kDirs) {
        const double t1 = current.theta[0];
        const double t2 = current.theta[1];
        // Longest feasible move up to `step` along d.
        double s = step;
        while (s > 1e-15 && !feasible(t1 + s * d[0], t2 + s * d[1])) s /= 2.0;
        if (s <= 1e-15 || s < step / 64.0) continue;
        const Point cand = refine_eval(make_theta(std::max(0.0, t1 + s * d[0]), std::max(0.0, t2 + s * d[1])));
        --budget;
        if (score(cand, maximize_) > score(current, maximize_)) {
          current = cand;
          moved = true;
          break;
        }
      }
      if (!moved) step /= 2.0;
    }
  }

  Evaluator eval_;
  bool maximize_;
  double tail_;
  SearchConfig config_;
  SearchDiagnostics diag_;
  Point best_;
  bool have_best_ = false;
};

void validate_query(const BarrierQuery& query) {
  if (query.presentations.empty()) throw InvalidArgument("barrier query needs at least one presentation");
  if (!std::isfinite(query.asymptotic_rank) || !(query.asymptotic_rank > 1.0)) {
    throw InvalidArgument("asymptotic rank must be finite and greater than 1");
  }
  check_finite_nonnegative(query.p, "p");
  check_finite_nonnegative(query.kappa, "kappa");
}

Model single_model(const BarrierQuery& query, const SearchConfig& config) {
  validate_query(query);
  std::vector<std::shared_ptr<const EntropyProgram>> programs;
  std::vector<std::string> ids;
  for (const auto& pres : query.presentations) {
    programs.push_back(std::make_shared<const EntropyProgram>(pres.support, pres.orbits));
    ids.push_back(pres.id);
  }
  Model model;
  model.log2_rank = std::log2(query.asymptotic_rank);
  model.symmetric = restricts_to_symmetric_theta(query, config);
  model.denominator = [programs, ids](const Theta& theta, const SolverOptions& options) {
    DenominatorValue best;
    for (std::size_t n = 0; n < programs.size(); ++n) {
      EntropyReport r = programs[n]->solve(theta, options);
      const double bits = std::max(0.0, r.value_bits);
      if (n == 0 || bits < best.bits) best = {bits, std::move(r.distribution), ids[n]};
    }
    return best;
  };
  return model;
}

Point omega_point(const Model& model, double p, double kappa, const Theta& theta, const SolverOptions& options) {
  Point pt;
  pt.theta = theta;
  pt.numerator = quasi_value(p, theta).log2_value;
  DenominatorValue den = model.denominator(theta, options);
  pt.denominator = den.bits;
  pt.dist = std::move(den.dist);
  pt.presentation_id = std::move(den.presentation_id);
  if (pt.denominator <= 0.0) {
    pt.constrained = false;
    pt.value = kInf;
    return pt;
  }
  double ratio = model.log2_rank / pt.denominator;
  if (ratio < 1.0) {
    ratio = 1.0;
    pt.clamped = true;
  }
  pt.constrained = true;
  pt.value = pt.numerator * ratio + kappa * (ratio - 1.0);
  return pt;
}

Point alpha_point(const Model& model, const Theta& theta, const SolverOptions& options) {
  Point pt;
  pt.theta = theta;
  const double tail = theta[1] + theta[2];
  pt.numerator = tail;
  // The alpha expression divides by theta_2 + theta_3, so the inner value is
  // needed to a proportionally tighter tolerance near theta_1 = 1.
  SolverOptions tight = options;
  tight.tol_bits = std::clamp(1e-6 * model.log2_rank * tail, 1e-13, options.tol_bits);
  DenominatorValue den = model.denominator(theta, tight);
  double d = den.bits;
  if (d > model.log2_rank) {
    d = model.log2_rank;
    pt.clamped = true;
  }
  pt.denominator = den.bits;
  pt.dist = std::move(den.dist);
  pt.presentation_id = std::move(den.presentation_id);
  pt.constrained = true;
  pt.value = std::clamp((2.0 * d / model.log2_rank - 1.0 - theta[0]) / tail, 0.0, 1.0);
  return pt;
}

BarrierResult to_result(const Point& best, const Search& search, const Model& model, RankMode mode) {
  BarrierResult r;
  r.value = best.value;
  r.theta_star = best.theta;
  r.numerator_bits = best.numerator;
  r.denominator_bits = best.denominator;
  r.log2_rank = model.log2_rank;
  r.inner_distribution = best.dist;
  r.presentation_id = best.presentation_id;
  r.clamped = best.clamped;
  r.rank_mode = mode;
  r.diagnostics = search.diagnostics();
  return r;
}

BarrierResult run_omega(const Model& model, double p, double kappa, RankMode mode, const SearchConfig& config) {
  check_finite_nonnegative(p, "p");
  check_finite_nonnegative(kappa, "kappa");
  Search search([&](const Theta& t) { return omega_point(model, p, kappa, t, config.solver); }, true, 0.0, config);
  const Point best = search.run(model.symmetric);
  return to_result(best, search, model, mode);
}

}  // namespace

std::string to_string(MethodLabel label) {
  switch (label) {
    case MethodLabel::kRestriction:
      return "restriction";
    case MethodLabel::kDegeneration:
      return "degeneration";
    case MethodLabel::kMonomialDegeneration:
      return "monomial-degeneration";
    case MethodLabel::kMonomialRestriction:
      return "monomial-restriction";
  }
  return "unknown";
}

std::string to_string(RankMode mode) {
  switch (mode) {
    case RankMode::kRegistry:
      return "registry";
    case RankMode::kUser:
      return "user";
    case RankMode::kHeuristic:
      return "heuristic";
  }
  return "unknown";
}

BarrierQuery make_query(std::string tensor_id, TensorSupport support, double asymptotic_rank,
                        std::optional<OrbitPartition> orbits, double p, double kappa) {
  BarrierQuery q;
  q.presentations.push_back({tensor_id, std::move(support), std::move(orbits)});
  q.tensor_id = std::move(tensor_id);
  q.asymptotic_rank = asymptotic_rank;
  q.p = p;
  q.kappa = kappa;
  return q;
}

bool restricts_to_symmetric_theta(const BarrierQuery& query, const SearchConfig& config) {
  // D(theta) is convex for a single presentation, so averaging theta with its
  // axis-swapped image cannot increase it. A minimum over several
  // presentations is not convex and gets the full simplex.
  return config.domain == ThetaDomain::kAuto && query.presentations.size() == 1 &&
         symmetric_presentation(query.presentations.front());
}

double barrier_omega_at_theta(const BarrierQuery& query, const Theta& theta, const SolverOptions& options) {
  const Model model = single_model(query, SearchConfig{});
  return omega_point(model, query.p, query.kappa, theta, options).value;
}

BarrierResult barrier_omega(const BarrierQuery& query, const SearchConfig& config) {
  const Model model = single_model(query, config);
  return run_omega(model, query.p, query.kappa, query.rank_mode, config);
}

std::vector<std::pair<double, BarrierResult>> barrier_curve(const BarrierQuery& query, double p_min, double p_max,
                                                            double step, const SearchConfig& config) {
  check_finite_nonnegative(p_min, "p_min");
  if (!std::isfinite(p_max) || p_max < p_min) throw InvalidArgument("p_max must be at least p_min");
  if (!(step > 0.0)) throw InvalidArgument("p step must be positive");
  const Model model = single_model(query, config);
  const auto count = static_cast<std::size_t>(std::floor((p_max - p_min) / step + 1e-9));
  std::vector<std::pair<double, BarrierResult>> curve;
  for (std::size_t k = 0; k <= count; ++k) {
    const double p = std::min(p_min + static_cast<double>(k) * step, p_max);
    curve.emplace_back(p, run_omega(model, p, query.kappa, query.rank_mode, config));
  }
  return curve;
}

BarrierResult barrier_alpha(const BarrierQuery& query, const SearchConfig& config) {
  const Model model = single_model(query, config);
  Search search([&](const Theta& t) { return alpha_point(model, t, config.solver); }, false, kAlphaTail, config);
  const Point best = search.run(model.symmetric);
  return to_result(best, search, model, query.rank_mode);
}

BarrierResult barrier_mixed(const MixedSequence& mixed, double p, double kappa, const SearchConfig& config) {
  if (mixed.factors.empty()) throw InvalidArgument("mixed sequence needs at least one factor");
  std::vector<std::shared_ptr<const EntropyProgram>> programs;
  std::vector<double> weights;
  double heuristic_log_rank = 0.0;
  bool symmetric = config.domain == ThetaDomain::kAuto;
  for (const auto& f : mixed.factors) {
    if (!std::isfinite(f.weight) || !(f.weight > 0.0)) throw InvalidArgument("mixed factor weights must be positive");
    programs.push_back(std::make_shared<const EntropyProgram>(f.presentation.support, f.presentation.orbits));
    weights.push_back(f.weight);
    symmetric = symmetric && symmetric_presentation(f.presentation);
    if (mixed.rank_mode == RankMode::kHeuristic) {
      if (!std::isfinite(f.asymptotic_rank) || !(f.asymptotic_rank >= 1.0)) {
        throw InvalidArgument("factor '" + f.tensor_id + "' needs an asymptotic rank >= 1 in heuristic mode");
      }
      heuristic_log_rank += f.weight * std::log2(f.asymptotic_rank);
    }
  }

  Model model;
  model.symmetric = symmetric;
  if (mixed.rank_mode == RankMode::kHeuristic) {
    model.log2_rank = heuristic_log_rank;
  } else {
    if (!mixed.asymptotic_rank) throw InvalidArgument("user rank mode needs the asymptotic rank of the sequence");
    if (!std::isfinite(*mixed.asymptotic_rank) || !(*mixed.asymptotic_rank > 1.0)) {
      throw InvalidArgument("asymptotic rank must be finite and greater than 1");
    }
    model.log2_rank = std::log2(*mixed.asymptotic_rank);
  }
  if (!(model.log2_rank > 0.0)) throw InvalidArgument("mixed sequence has asymptotic rank 1");

  model.denominator = [programs, weights](const Theta& theta, const SolverOptions& options) {
    DenominatorValue total{0.0, {}, "mixed"};
    for (std::size_t n = 0; n < programs.size(); ++n) {
      EntropyReport r = programs[n]->solve(theta, options);
      total.bits += weights[n] * std::max(0.0, r.value_bits);
      if (n == 0) total.dist = std::move(r.distribution);
    }
    return total;
  };
  return run_omega(model, p, kappa, mixed.rank_mode, config);
}

double omega_from_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) throw InvalidArgument("alpha must lie in [0, 1]");
  return 6.0 / (2.0 + alpha);
}

double alpha_consistency_check(const BarrierQuery& query, const SearchConfig& config) {
  BarrierQuery at_alpha = query;
  at_alpha.p = barrier_alpha(query, config).value;
  at_alpha.kappa = 0.0;
  return barrier_omega(at_alpha, config).value;
}

}  // namespace mmbarrier
