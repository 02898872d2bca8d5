#include "pinndd/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "pinndd/batch_eval.hpp"
#include "pinndd/loss.hpp"
#include "pinndd/metrics.hpp"
#include "pinndd/rng.hpp"
#include "pinndd/train.hpp"

namespace pinndd {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult make_check(std::string name, double tolerance, double observed) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  c.observed = observed;
  c.passed = observed <= tolerance;
  return c;
}

PointMatrix random_points(int n, const Rect& box, Rng& rng) {
  PointMatrix pts(n, 2);
  for (int k = 0; k < n; ++k) {
    pts(k, 0) = rng.uniform(box.x0, box.x1);
    pts(k, 1) = rng.uniform(box.y0, box.y1);
  }
  return pts;
}

Params random_params(const NetworkSpec& spec, Rng& rng) {
  Params p = init_params(spec, rng.next_u64(), rng.next_u64());
  return p;
}

// five-point first-derivative stencil
double fd_deriv(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

// --------------------------------------------------------------------------
// RNG known answers (reference outputs of the numpy Philox bit generator)

std::vector<CheckResult> verify_rng() {
  static constexpr std::uint64_t kat0[4] = {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL,
                                            0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL};
  static constexpr std::uint64_t kat1[4] = {0xdeba9a568b8d6a64ULL, 0x5011cddc9472b926ULL,
                                            0x2962d2082056bcfdULL, 0xc7d5296941154004ULL};
  double mismatches = 0;
  {
    Rng r(0, 0);
    for (std::uint64_t expected : kat0)
      if (r.next_u64() != expected) mismatches += 1;
  }
  {
    Rng r(456, 123);
    for (std::uint64_t expected : kat1)
      if (r.next_u64() != expected) mismatches += 1;
  }
  return {make_check("rng: philox4x64-10 known answers", 0, mismatches)};
}

// --------------------------------------------------------------------------
// derivative oracle: forward_derivs vs finite differences of forward

std::vector<CheckResult> verify_derivative_oracle(int instances) {
  Rng rng(7, 77);
  double max_grad = 0, max_lap = 0;
  for (int it = 0; it < instances; ++it) {
    NetworkSpec spec = NetworkSpec::mlp(4 + static_cast<int>(rng.below(6)),
                                        2 + static_cast<int>(rng.below(3)));
    const Params params = random_params(spec, rng);
    const Eigen::Vector2d x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const EvalBundle bundle = forward_derivs(spec, params, x);
    const auto f = [&](double ax, double ay) {
      return forward(spec, params, {ax, ay})(0);
    };
    const double h = 1e-5;
    const double gx = (f(x(0) + h, x(1)) - f(x(0) - h, x(1))) / (2 * h);
    const double gy = (f(x(0), x(1) + h) - f(x(0), x(1) - h)) / (2 * h);
    max_grad = std::max(max_grad,
                        std::abs(gx - bundle.grad(0, 0)) / (std::abs(gx) + 1e-12));
    max_grad = std::max(max_grad,
                        std::abs(gy - bundle.grad(1, 0)) / (std::abs(gy) + 1e-12));
    const double h2 = 1e-4;
    const double lap =
        (f(x(0) + h2, x(1)) - 2 * f(x(0), x(1)) + f(x(0) - h2, x(1))) / (h2 * h2) +
        (f(x(0), x(1) + h2) - 2 * f(x(0), x(1)) + f(x(0), x(1) - h2)) / (h2 * h2);
    max_lap = std::max(max_lap,
                       std::abs(lap - bundle.laplacian(0)) / (std::abs(lap) + 1e-12));
  }
  return {make_check("nn: spatial gradient vs finite differences", 1e-5, max_grad),
          make_check("nn: laplacian vs finite-difference hessian trace", 1e-5, max_lap)};
}

// --------------------------------------------------------------------------
// gradient oracle: per-term analytic parameter gradients vs central FD

namespace {

struct TermCase {
  std::string name;
  DerivMode mode;
  int outputs;
  // value and seed assembly from the evaluated streams and fixed term data
  std::function<double(const BatchEval&)> value;
  std::function<void(const BatchEval&, Eigen::MatrixXd&)> seed;
};

double gradcheck_term(const TermCase& term, int instances, std::uint64_t seed) {
  Rng rng(seed, 5000);
  double max_rel = 0;
  for (int it = 0; it < instances; ++it) {
    NetworkSpec spec;
    spec.input_dim = 2;
    spec.hidden_widths = {4 + static_cast<int>(rng.below(4)), 3 + static_cast<int>(rng.below(4))};
    spec.output_dim = term.outputs;
    const int n = 6 + static_cast<int>(rng.below(8));
    const PointMatrix pts = random_points(n, {-1, 1, -1, 1}, rng);
    Params params = random_params(spec, rng);

    BatchEval eval(spec, term.mode, pts);
    eval.forward(params);
    Eigen::MatrixXd seeds =
        Eigen::MatrixXd::Zero(static_cast<int>(term.mode) * n, term.outputs);
    term.seed(eval, seeds);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    eval.backward(params, seeds, grad);

    for (int i = 0; i < params.size(); ++i) {
      const double h = 1e-5 * (1.0 + std::abs(params.values[i]));
      Params pp = params, pm = params;
      pp.values[i] += h;
      pm.values[i] -= h;
      BatchEval ep(spec, term.mode, pts), em(spec, term.mode, pts);
      ep.forward(pp);
      em.forward(pm);
      const double fd = (term.value(ep) - term.value(em)) / (2 * h);
      max_rel = std::max(max_rel, std::abs(fd - grad[i]) / (std::abs(grad[i]) + 1e-12));
    }
  }
  return max_rel;
}

}  // namespace

std::vector<CheckResult> verify_gradient_oracle(int instances_per_term) {
  std::vector<CheckResult> checks;
  Rng data_rng(99, 6000);

  // fixed random term data, sized generously for any instance batch
  const int cap = 64;
  Eigen::VectorXd fvals(cap), gvals(cap), tvals(cap), tnvals(cap), lam(cap), hx(cap), hy(cap);
  Eigen::VectorXd nx(cap), ny(cap);
  for (int k = 0; k < cap; ++k) {
    fvals(k) = data_rng.uniform(-2, 2);
    gvals(k) = data_rng.uniform(-1, 1);
    tvals(k) = data_rng.uniform(-1, 1);
    tnvals(k) = data_rng.uniform(-2, 2);
    lam(k) = data_rng.uniform(-1, 1);
    hx(k) = data_rng.uniform(-1, 1);
    hy(k) = data_rng.uniform(-1, 1);
    const double angle = data_rng.uniform(0, 2 * kPi);
    nx(k) = std::cos(angle);
    ny(k) = std::sin(angle);
  }
  const double cweight = 10.0;

  std::vector<TermCase> terms;
  terms.push_back({"residual (scalar)", DerivMode::full, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return (cweight * e.lap().col(0) + fvals.head(n)).squaredNorm() / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     s.block(3 * n, 0, n, 1) =
                         (2.0 * cweight / n) * (cweight * e.lap().col(0) + fvals.head(n));
                   }});
  terms.push_back({"residual (stokes momentum)", DerivMode::full, 3,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     const Eigen::VectorXd ru = -e.lap().col(0) + e.dx().col(2) - hx.head(n);
                     const Eigen::VectorXd rv = -e.lap().col(1) + e.dy().col(2) - hy.head(n);
                     return (ru.squaredNorm() + rv.squaredNorm()) / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     const Eigen::VectorXd ru = -e.lap().col(0) + e.dx().col(2) - hx.head(n);
                     const Eigen::VectorXd rv = -e.lap().col(1) + e.dy().col(2) - hy.head(n);
                     s.block(3 * n, 0, n, 1) = (-2.0 / n) * ru;
                     s.block(3 * n, 1, n, 1) = (-2.0 / n) * rv;
                     s.block(n, 2, n, 1) = (2.0 / n) * ru;
                     s.block(2 * n, 2, n, 1) = (2.0 / n) * rv;
                   }});
  terms.push_back({"boundary", DerivMode::value, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return (e.value().col(0) - gvals.head(n)).squaredNorm() / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     s.col(0) = (2.0 / n) * (e.value().col(0) - gvals.head(n));
                   }});
  terms.push_back({"interface value", DerivMode::first, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return (e.value().col(0) - tvals.head(n)).squaredNorm() / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     s.block(0, 0, n, 1) = (2.0 / n) * (e.value().col(0) - tvals.head(n));
                   }});
  terms.push_back({"interface flux", DerivMode::first, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     const Eigen::VectorXd flux =
                         cweight * (e.dx().col(0).cwiseProduct(nx.head(n)) +
                                    e.dy().col(0).cwiseProduct(ny.head(n)));
                     return (flux - tnvals.head(n)).squaredNorm() / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     const Eigen::VectorXd flux =
                         cweight * (e.dx().col(0).cwiseProduct(nx.head(n)) +
                                    e.dy().col(0).cwiseProduct(ny.head(n)));
                     const Eigen::VectorXd r = (2.0 / n) * (flux - tnvals.head(n));
                     s.block(n, 0, n, 1) = cweight * r.cwiseProduct(nx.head(n));
                     s.block(2 * n, 0, n, 1) = cweight * r.cwiseProduct(ny.head(n));
                   }});
  terms.push_back({"lagrangian boundary", DerivMode::value, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return lam.head(n).dot(e.value().col(0) - gvals.head(n));
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     s.col(0) = lam.head(e.points());
                   }});
  terms.push_back({"lagrangian interface", DerivMode::first, 1,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return lam.head(n).dot(e.value().col(0) - tvals.head(n));
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     s.block(0, 0, e.points(), 1) = lam.head(e.points());
                   }});
  terms.push_back({"divergence", DerivMode::full, 3,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return (e.dx().col(0) + e.dy().col(1)).squaredNorm() / n;
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     const Eigen::VectorXd d = (2.0 / n) * (e.dx().col(0) + e.dy().col(1));
                     s.block(n, 0, n, 1) = d;
                     s.block(2 * n, 1, n, 1) = d;
                   }});
  terms.push_back({"lagrangian divergence", DerivMode::full, 3,
                   [&](const BatchEval& e) {
                     const int n = e.points();
                     return lam.head(n).dot(e.dx().col(0) + e.dy().col(1));
                   },
                   [&](const BatchEval& e, Eigen::MatrixXd& s) {
                     const int n = e.points();
                     s.block(n, 0, n, 1) = lam.head(n);
                     s.block(2 * n, 1, n, 1) = lam.head(n);
                   }});

  std::uint64_t seed = 11;
  for (const TermCase& term : terms)
    checks.push_back(make_check("grad: " + term.name + " vs finite differences", 1e-6,
                                gradcheck_term(term, instances_per_term, seed++)));
  return checks;
}

// --------------------------------------------------------------------------
// exact-solution consistency oracles

std::vector<CheckResult> verify_problem(const Problem& problem, int points, std::uint64_t seed) {
  Rng rng(seed, 4000);
  std::vector<CheckResult> checks;
  const PartitionModel partition = problem.default_partition();
  const int regions = partition.subdomain_count();

  // random interior points per subdomain
  std::vector<std::vector<Eigen::Vector2d>> per_region(regions);
  while (true) {
    bool done = true;
    for (const auto& v : per_region) done = done && static_cast<int>(v.size()) >= points;
    if (done) break;
    const Eigen::Vector2d x{rng.uniform(problem.domain().x0, problem.domain().x1),
                            rng.uniform(problem.domain().y0, problem.domain().y1)};
    auto& bucket = per_region[partition.locate(x)];
    if (static_cast<int>(bucket.size()) < points) bucket.push_back(x);
  }

  double grad_err = 0, pde_err = 0, div_err = 0;
  for (int region = 0; region < regions; ++region) {
    const int r = problem.region_for_subdomain(region);
    for (const Eigen::Vector2d& x : per_region[region]) {
      Eigen::VectorXd value;
      Eigen::Matrix2Xd grad;
      problem.exact_in_region(r, x, value, grad);

      // closed-form gradient vs finite differences of the value form
      for (int f = 0; f < problem.field_count(); ++f) {
        const auto vx = [&](double t) {
          Eigen::VectorXd v;
          Eigen::Matrix2Xd g;
          problem.exact_in_region(r, {t, x(1)}, v, g);
          return v(f);
        };
        const auto vy = [&](double t) {
          Eigen::VectorXd v;
          Eigen::Matrix2Xd g;
          problem.exact_in_region(r, {x(0), t}, v, g);
          return v(f);
        };
        grad_err = std::max(grad_err, std::abs(fd_deriv(vx, x(0), 1e-4) - grad(0, f)));
        grad_err = std::max(grad_err, std::abs(fd_deriv(vy, x(1), 1e-4) - grad(1, f)));
      }

      // laplacian per field from finite differences of the gradient form
      const auto lap_of = [&](int f) {
        const auto gx = [&](double t) {
          Eigen::VectorXd v;
          Eigen::Matrix2Xd g;
          problem.exact_in_region(r, {t, x(1)}, v, g);
          return g(0, f);
        };
        const auto gy = [&](double t) {
          Eigen::VectorXd v;
          Eigen::Matrix2Xd g;
          problem.exact_in_region(r, {x(0), t}, v, g);
          return g(1, f);
        };
        return fd_deriv(gx, x(0), 1e-3) + fd_deriv(gy, x(1), 1e-3);
      };

      const Eigen::VectorXd f = problem.forcing_in_region(r, x);
      if (problem.is_stokes()) {
        pde_err = std::max(pde_err, std::abs(-lap_of(0) + grad(0, 2) - f(0)));
        pde_err = std::max(pde_err, std::abs(-lap_of(1) + grad(1, 2) - f(1)));
        div_err = std::max(div_err, std::abs(grad(0, 0) + grad(1, 1)));
      } else {
        const double c = problem.flux_weight(r, 0);
        pde_err = std::max(pde_err, std::abs(c * lap_of(0) + f(0)));
      }
    }
  }
  checks.push_back(
      make_check(problem.name() + ": exact gradient vs finite differences", 1e-8, grad_err));
  checks.push_back(
      make_check(problem.name() + ": pde residual of the exact solution", 1e-8, pde_err));
  if (problem.is_stokes())
    checks.push_back(
        make_check(problem.name() + ": divergence of the exact velocity", 1e-8, div_err));

  // boundary consistency
  double bd_err = 0;
  for (int e = 0; e < 4; ++e) {
    for (int k = 0; k < 100; ++k) {
      const Rect& d = problem.domain();
      const double t = rng.next_double();
      Eigen::Vector2d x;
      if (e == 0) x = {d.x0 + t * d.width(), d.y0};
      if (e == 1) x = {d.x0 + t * d.width(), d.y1};
      if (e == 2) x = {d.x0, d.y0 + t * d.height()};
      if (e == 3) x = {d.x1, d.y0 + t * d.height()};
      const Eigen::VectorXd g = problem.boundary_value(x);
      const Eigen::VectorXd u = problem.exact(x).head(problem.boundary_field_count());
      bd_err = std::max(bd_err, (g - u).cwiseAbs().maxCoeff());
    }
  }
  checks.push_back(
      make_check(problem.name() + ": boundary data equals the exact trace", 1e-12, bd_err));

  // interface jump oracles
  if (!partition.interfaces().empty()) {
    double pq_err = -1;
    if (problem.name() == "poisson_smooth" || problem.name() == "disc_coeff") {
      double err = 0;
      for (const Interface& f : partition.interfaces()) {
        for (int k = 0; k < 50; ++k) {
          const double t = rng.next_double();
          const Eigen::Vector2d x = f.a + t * (f.b - f.a);
          Eigen::VectorXd p, q;
          problem.jump(f, x, p, q);
          err = std::max({err, p.cwiseAbs().maxCoeff(), q.cwiseAbs().maxCoeff()});
        }
      }
      pq_err = err;
      checks.push_back(make_check(problem.name() + ": interface jumps vanish", 1e-12, err));
    }
    if (problem.name() == "stokes_interface") {
      const Interface& f = partition.interfaces()[0];
      double up_err = 0, pp_err = 0, force_err = 0, pn_err = 0;
      for (int k = 0; k <= 200; ++k) {
        const double s = 2 * kPi * k / 200.0;
        const Eigen::Vector2d x{std::cos(s), std::sin(s)};
        Eigen::VectorXd p, q;
        problem.jump(f, x, p, q);
        up_err = std::max({up_err, std::abs(p(0)), std::abs(p(1))});
        pp_err = std::max(pp_err, std::abs(p(2)));
        // velocity flux jump equals +F_tau t along the canonical normal,
        // which points inward here; the classical outward-normal identity
        // carries the opposite sign.
        const Eigen::Vector2d t{-std::sin(s), std::cos(s)};
        const double ft = stokes_tangential_force(s);
        force_err = std::max(force_err, std::abs(q(0) - ft * t(0)));
        force_err = std::max(force_err, std::abs(q(1) - ft * t(1)));
        pn_err = std::max(pn_err, std::abs(q(2) - (-60.0 * std::cos(3 * s))));
      }
      checks.push_back(make_check("stokes_interface: velocity jump vanishes", 1e-12, up_err));
      checks.push_back(make_check("stokes_interface: pressure jump vanishes", 1e-12, pp_err));
      checks.push_back(make_check(
          "stokes_interface: velocity flux jump vs tangential force", 1e-8, force_err));
      checks.push_back(make_check(
          "stokes_interface: pressure flux jump vs derived closed form", 1e-8, pn_err));
    }
    (void)pq_err;
  }
  return checks;
}

// --------------------------------------------------------------------------
// tilde identities

std::vector<CheckResult> verify_tilde_identities() {
  std::vector<CheckResult> checks;
  Rng rng(31, 7000);

  // reconstruction identity on random traces
  double recon_err = 0;
  for (int it = 0; it < 200; ++it) {
    const int n = 5;
    TraceMessage mi, mj;
    mi.interface_index = mj.interface_index = 0;
    mi.sender = 1;
    mj.sender = 0;
    mi.value = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-3, 3); });
    mj.value = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-3, 3); });
    mi.flux = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-3, 3); });
    mj.flux = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-3, 3); });
    InterfaceJumps jumps;
    jumps.p = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-1, 1); });
    jumps.q = Eigen::MatrixXd::NullaryExpr(n, 1, [&] { return rng.uniform(-1, 1); });
    const TildeValues tilde = synchronize({mi, mj}, {jumps}, 0);
    const InterfaceTilde& t = tilde.interfaces[0];
    // (U_i - tilde_ij) - (U_j - tilde_ji) == (U_i - U_j) - p
    const Eigen::MatrixXd lhs = (mi.value - t.value_hi) - (mj.value - t.value_lo);
    const Eigen::MatrixXd rhs = mi.value - mj.value - jumps.p;
    recon_err = std::max(recon_err, (lhs - rhs).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd lhs_n = (mi.flux - t.flux_hi) - (mj.flux - t.flux_lo);
    const Eigen::MatrixXd rhs_n = mi.flux - mj.flux - jumps.q;
    recon_err = std::max(recon_err, (lhs_n - rhs_n).cwiseAbs().maxCoeff());
  }
  checks.push_back(make_check("tilde: reconstruction identity", 1e-14, recon_err));

  // with exact-solution traces, the interface losses vanish on every benchmark
  double worst = 0;
  for (const std::string& name : problem_names()) {
    const auto problem = make_problem(name);
    const PartitionModel partition = problem->default_partition();
    SamplePlan plan = problem->default_sample_plan();
    plan.interior = 200;
    plan.boundary_per_edge = 20;
    plan.interface_default = 40;
    plan.interface_counts.clear();
    const SampleSet samples = build_samples(partition, plan, 5);

    std::vector<InterfaceJumps> jumps;
    std::vector<TraceMessage> messages;
    for (std::size_t g = 0; g < partition.interfaces().size(); ++g) {
      const Interface& f = partition.interfaces()[g];
      const PointMatrix& pts = samples.interface_pts[g];
      InterfaceJumps j;
      j.p.resize(pts.rows(), problem->field_count());
      j.q.resize(pts.rows(), problem->field_count());
      TraceMessage hi, lo;
      hi.interface_index = lo.interface_index = static_cast<int>(g);
      hi.sender = f.hi;
      lo.sender = f.lo;
      hi.value.resize(pts.rows(), problem->field_count());
      lo.value.resize(pts.rows(), problem->field_count());
      hi.flux.resize(pts.rows(), problem->field_count());
      lo.flux.resize(pts.rows(), problem->field_count());
      for (int k = 0; k < pts.rows(); ++k) {
        const Eigen::Vector2d x = pts.row(k).transpose();
        Eigen::VectorXd p, q;
        problem->jump(f, x, p, q);
        j.p.row(k) = p;
        j.q.row(k) = q;
        const Eigen::Vector2d n = f.normal_at(x);
        Eigen::VectorXd value;
        Eigen::Matrix2Xd grad;
        problem->exact_in_region(problem->region_for_subdomain(f.hi), x, value, grad);
        hi.value.row(k) = value;
        for (int fld = 0; fld < problem->field_count(); ++fld)
          hi.flux(k, fld) =
              problem->flux_weight(problem->region_for_subdomain(f.hi), fld) * grad.col(fld).dot(n);
        problem->exact_in_region(problem->region_for_subdomain(f.lo), x, value, grad);
        lo.value.row(k) = value;
        for (int fld = 0; fld < problem->field_count(); ++fld)
          lo.flux(k, fld) =
              problem->flux_weight(problem->region_for_subdomain(f.lo), fld) * grad.col(fld).dot(n);
      }
      jumps.push_back(std::move(j));
      messages.push_back(std::move(hi));
      messages.push_back(std::move(lo));
    }
    if (jumps.empty()) continue;
    const TildeValues tilde = synchronize(messages, jumps, 0);
    for (std::size_t g = 0; g < jumps.size(); ++g) {
      const Interface& f = partition.interfaces()[g];
      const TraceMessage& hi = messages[2 * g];
      const TraceMessage& lo = messages[2 * g + 1];
      const long n = hi.value.rows();
      (void)f;
      worst = std::max(worst,
                       (hi.value - tilde.interfaces[g].value_hi).squaredNorm() / double(n));
      worst = std::max(worst,
                       (lo.value - tilde.interfaces[g].value_lo).squaredNorm() / double(n));
      worst = std::max(worst,
                       (hi.flux - tilde.interfaces[g].flux_hi).squaredNorm() / double(n));
      worst = std::max(worst,
                       (lo.flux - tilde.interfaces[g].flux_lo).squaredNorm() / double(n));
    }
  }
  checks.push_back(make_check("tilde: interface losses vanish on exact traces", 1e-16, worst));
  return checks;
}

// --------------------------------------------------------------------------
// schedule checks: communication counts, determinism, zero-rate reduction

std::vector<CheckResult> verify_schedules() {
  std::vector<CheckResult> checks;
  const auto problem = make_problem("poisson_smooth");
  const PartitionModel partition = PartitionModel::grid(problem->domain(), 2, 1);
  SamplePlan plan;
  plan.interior = 80;
  plan.boundary_per_edge = 10;
  plan.interface_default = 16;
  const SampleSet samples = build_samples(partition, plan, 5);
  const std::vector<NetworkSpec> specs(2, NetworkSpec::mlp(8, 2));

  const auto run_with = [&](Algorithm a, WorkerMode w, double al, long epochs, long outer,
                            long inner) {
    TrainConfig c;
    c.algorithm = a;
    c.epochs = epochs;
    c.outer_iterations = outer;
    c.inner_epochs = inner;
    c.rates.alpha0 = al > 0 ? 0.1 : 0.0;
    c.rates.alpha_lambda = al;
    c.workers = w;
    c.seed = 5;
    return train(problem, partition, samples, specs, c);
  };

  const TrainResult a1 = run_with(Algorithm::a1, WorkerMode::sequential, 0.0, 60, 0, 0);
  checks.push_back(make_check("train: a1 communications equal epochs", 0,
                              std::abs(double(a1.communications - 60))));
  const TrainResult a3 = run_with(Algorithm::a3, WorkerMode::sequential, 0.05, 0, 6, 10);
  checks.push_back(make_check("train: a3 communications equal outer iterations", 0,
                              std::abs(double(a3.communications - 6))));

  const TrainResult again = run_with(Algorithm::a1, WorkerMode::sequential, 0.0, 60, 0, 0);
  double det = 0;
  for (int i = 0; i < 2; ++i)
    det = std::max(det,
                   (a1.best_params[i].values - again.best_params[i].values).cwiseAbs().maxCoeff());
  checks.push_back(make_check("train: reruns are bitwise identical", 0, det));

  const TrainResult par = run_with(Algorithm::a1, WorkerMode::parallel, 0.0, 60, 0, 0);
  double par_diff = 0;
  for (int i = 0; i < 2; ++i)
    par_diff = std::max(
        par_diff, (a1.best_params[i].values - par.best_params[i].values).cwiseAbs().maxCoeff());
  checks.push_back(make_check("train: parallel workers match sequential bitwise", 0, par_diff));

  const TrainResult a2zero = run_with(Algorithm::a2, WorkerMode::sequential, 0.0, 60, 0, 0);
  double zr = 0;
  for (int i = 0; i < 2; ++i)
    zr = std::max(zr,
                  (a1.best_params[i].values - a2zero.best_params[i].values).cwiseAbs().maxCoeff());
  checks.push_back(make_check("train: zero-rate a2 reproduces a1 bitwise", 0, zr));
  return checks;
}

std::vector<CheckResult> verify_all() {
  std::vector<CheckResult> checks;
  const auto append = [&](std::vector<CheckResult> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };
  append(verify_rng());
  append(verify_derivative_oracle(100));
  append(verify_gradient_oracle(20));
  for (const std::string& name : problem_names())
    append(verify_problem(*make_problem(name), 1000));
  append(verify_tilde_identities());
  append(verify_schedules());
  return checks;
}

std::string format_report(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (const CheckResult& c : checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  (observed " << c.observed
       << ", tolerance " << c.tolerance << ")\n";
  }
  int failed = 0;
  for (const CheckResult& c : checks)
    if (!c.passed) ++failed;
  os << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

}  // namespace pinndd
