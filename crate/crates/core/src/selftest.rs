//! Built-in verification suite behind `sasaki selftest`. Each criterion is
//! seeded, self-contained and reports a single pass/fail with a summary of
//! the worst residual it saw.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{ConstantField, Pairing, Scaled, VectorField};
use crate::geometry::{Chart, Geometry};
use crate::linalg::sup_norm;
use crate::models::chart::{FrameVector, ModelChart};
use crate::models::families::{field_family, FamilyField};
use crate::models::ode::{euler_exponents, integrate_local, ode_residual, Jet, OdeId, OdeSpec};
use crate::models::random::{random_point, PolyTrig, PolyTrigField};
use crate::sasaki::verify_tension_decomposition;
use crate::scalar::{derivatives4, Scalar};
use crate::variational::{BoxDomain, Verdict, DEFAULT_CLASSIFY_TOL, FIRST_VARIATION_RTOL};

const SEED: u64 = 0x5a5a_2024;

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub module: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({}; {:.1} s)",
            self.id,
            self.module,
            self.title,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// What a single criterion found: whether it passed, and why.
struct Outcome {
    passed: bool,
    detail: String,
}

type Runner = fn(&mut ChaCha8Rng) -> Result<Outcome>;

pub struct Criterion {
    pub id: u8,
    pub module: &'static str,
    pub title: &'static str,
    /// Wall-clock budget; exceeding it fails the criterion.
    pub budget: Option<Duration>,
    run: Runner,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, module, title, budget: Option<u64>, run| Criterion {
        id,
        module,
        title,
        budget: budget.map(Duration::from_secs),
        run,
    };
    vec![
        c(1, "field-ops", "Laplacian identities and S(fX)", Some(30), identity_suite as Runner),
        c(2, "sasaki-oracle", "tension decomposition", Some(120), sasaki_oracle),
        c(3, "models", "Nil3 closed forms", None, nil3_closed_forms),
        c(4, "models", "hyperbolic closed forms", None, hyperbolic_closed_forms),
        c(5, "variational", "plane biharmonic families", None, plane_families),
        c(6, "variational", "first variation", None, first_variation_suite),
        c(7, "models", "transformed ODE blow-up", None, blow_up_demo),
    ]
}

/// Runs every criterion whose module name or number matches `filter`.
pub fn run_all(filter: Option<&str>) -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| f == c.module || f == c.id.to_string()))
        .map(|c| run_one(&c))
        .collect()
}

pub fn run_one(c: &Criterion) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + c.id as u64);
    let start = Instant::now();
    let outcome = (c.run)(&mut rng);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = c.budget {
        if elapsed > b {
            passed = false;
            detail.push_str(&format!("; over budget of {} s", b.as_secs()));
        }
    }
    CriterionResult { id: c.id, module: c.module, title: c.title, passed, detail, elapsed }
}

/// Largest `|a − b| / max(1, scale)` seen so far, with the tolerance it must stay under.
struct Worst {
    tol: f64,
    value: f64,
}

impl Worst {
    fn new(tol: f64) -> Self {
        Worst { tol, value: 0.0 }
    }

    fn record(&mut self, residual: f64, scale: f64) {
        let r = residual / scale.max(1.0);
        self.value = if r.is_nan() { f64::NAN } else { self.value.max(r) };
    }

    fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn identity_charts() -> Vec<(ModelChart, Vec<f64>, Vec<f64>)> {
    vec![
        (ModelChart::euclidean(2), vec![-1.0; 2], vec![1.0; 2]),
        (ModelChart::nil3(), vec![-1.0; 3], vec![1.0; 3]),
        (ModelChart::hyperbolic(2, 1.0), vec![-1.0, 0.5], vec![1.0, 2.0]),
        (ModelChart::hyperbolic(3, 2.0), vec![-1.0, -1.0, 0.5], vec![1.0, 1.0, 2.0]),
    ]
}

fn identity_suite(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut pairing_identity = Worst::new(1e-5);
    let mut product_identity = Worst::new(1e-5);
    let mut s_scaling = Worst::new(1e-5);
    for (chart, lo, hi) in identity_charts() {
        let geo = Geometry::new(chart);
        let m = chart.dim();
        for _ in 0..50 {
            let x = PolyTrigField::random(rng, m);
            let y = PolyTrigField::random(rng, m);
            let f = PolyTrig::random(rng, m);
            let p = random_point(rng, &lo, &hi);

            let pairing = Pairing { geo: &geo, x: &x, y: &y };
            let lhs = geo.laplace_beltrami(&pairing, &p)?;
            let lx = geo.rough_laplacian(&x, &p)?;
            let ly = geo.rough_laplacian(&y, &p)?;
            let (xv, yv) = (x.eval(&p)?, y.eval(&p)?);
            let a = geo.inner(&p, &lx, &yv)?;
            let b = geo.inner(&p, &xv, &ly)?;
            let d = geo.divergence_oneform(&geo.theta(&x, &y), &p)?;
            let scale = [lhs, a, b, 2.0 * d].iter().fold(0.0_f64, |s, v| s.max(v.abs()));
            pairing_identity.record((lhs - a + b + 2.0 * d).abs(), scale);

            let fx = Scaled { scale: &f, field: &x };
            let left = geo.rough_laplacian(&fx, &p)?;
            let lf = geo.laplace_beltrami(&f, &p)?;
            let fv = f.value(&p);
            let grad = geo.gradient(&f, &p)?;
            let along = geo.covariant_derivative(&x, &grad, &p)?;
            let right: Vec<f64> = (0..m).map(|i| lf * xv[i] + fv * lx[i] - 2.0 * along[i]).collect();
            let scale = [sup_norm(&left), lf.abs() * sup_norm(&xv), fv.abs() * sup_norm(&lx), 2.0 * sup_norm(&along)]
                .into_iter()
                .fold(0.0, f64::max);
            product_identity.record(diff_norm(&left, &right), scale);

            let sf = geo.s_tensor(&fx, &p)?;
            let sx: Vec<f64> = geo.s_tensor(&x, &p)?.into_iter().map(|v| v * fv * fv).collect();
            s_scaling.record(diff_norm(&sf, &sx), sup_norm(&sx));
        }
    }
    Ok(Outcome {
        passed: pairing_identity.ok() && product_identity.ok() && s_scaling.ok(),
        detail: format!(
            "pairing {:.2e}, product {:.2e}, S scaling {:.2e}; tol 1e-5",
            pairing_identity.value, product_identity.value, s_scaling.value
        ),
    })
}

fn sasaki_oracle(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = Worst::new(1e-5);
    for (chart, lo, hi) in identity_charts() {
        let geo = Geometry::new(chart);
        for _ in 0..20 {
            let x = PolyTrigField::random(rng, chart.dim());
            let p = random_point(rng, &lo, &hi);
            let check = verify_tension_decomposition(&geo, &x, &p)?;
            worst.record(check.relative(), 1.0);
        }
    }
    Ok(Outcome { passed: worst.ok(), detail: format!("worst relative residual {:.2e}; tol 1e-5", worst.value) })
}

fn nil3_closed_forms(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let chart = ModelChart::nil3();
    let geo = Geometry::new(chart);
    let (lo, hi) = (vec![-2.0; 3], vec![2.0; 3]);

    let mut frame = Worst::new(1e-8);
    for index in 0..3 {
        let e = FrameVector { chart, index };
        for _ in 0..10 {
            let p = random_point(rng, &lo, &hi);
            let half: Vec<f64> = e.eval(&p)?.into_iter().map(|v| 0.5 * v).collect();
            frame.record(diff_norm(&geo.rough_laplacian(&e, &p)?, &half), 0.0);
        }
    }

    let mut products = Worst::new(1e-8);
    for _ in 0..10 {
        let p = random_point(rng, &lo, &hi);
        let r = geo.riemann(&p)?;
        let [e1, e2, e3] = ModelChart::nil3_frame(&p);
        for (u, v, w) in [(&e2, &e1, &e3), (&e2, &e3, &e1), (&e3, &e1, &e2)] {
            products.record(sup_norm(&r.apply(u, v, w)), 0.0);
        }
    }

    let mut profile = Worst::new(1e-6);
    let e1 = FrameVector { chart, index: 0 };
    for _ in 0..10 {
        let f = PolyTrig::random(rng, 1);
        let p = random_point(rng, &lo, &hi);
        let field = Scaled { scale: &f, field: e1 };
        let b = geo.bitension(&field, &p)?;
        let [d0, _, d2, _, d4] = derivatives4(|t: Jet| f.value(&[t]), p[0]);
        let expected = [d4 - d2 + 0.25 * d0, 0.0, 0.0];
        profile.record(diff_norm(&b, &expected), sup_norm(&expected));
    }

    let mut basis = Worst::new(1e-9);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for sign in [1.0, -1.0] {
        for k in 0..=8 {
            let t = -2.0 + 0.5 * k as f64;
            let plain = ode_residual(OdeId::Heisenberg, |x: Jet| (x * (sign * s)).exp(), t, 3, 1.0)?;
            let times_x = ode_residual(OdeId::Heisenberg, |x: Jet| x * (x * (sign * s)).exp(), t, 3, 1.0)?;
            basis.record(plain.abs().max(times_x.abs()), 0.0);
        }
    }
    Ok(Outcome {
        passed: frame.ok() && products.ok() && profile.ok() && basis.ok(),
        detail: format!(
            "frame {:.2e} (tol 1e-8), curvature products {:.2e} (tol 1e-8), f(x)e1 {:.2e} (tol 1e-6), basis {:.2e} (tol 1e-9)",
            frame.value, products.value, profile.value, basis.value
        ),
    })
}

/// `[−1, 1]^{n−1} × [0.5, 2]` in the half-space model.
fn half_space_box(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![-1.0; n];
    let mut hi = vec![1.0; n];
    lo[n - 1] = 0.5;
    hi[n - 1] = 2.0;
    (lo, hi)
}

fn hyperbolic_closed_forms(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut frame = Worst::new(1e-6);
    let mut euler = Worst::new(1e-9);
    let mut verdicts = Vec::new();
    for n in [2usize, 3, 5] {
        for c in [1.0, 2.0] {
            let chart = ModelChart::hyperbolic(n, c);
            let geo = Geometry::new(chart);
            let v = FrameVector { chart, index: n - 1 };
            let k = (n - 1) as f64;
            let (lo, hi) = half_space_box(n);
            for _ in 0..10 {
                let p = random_point(rng, &lo, &hi);
                let vp = v.eval(&p)?;
                let want_lap: Vec<f64> = vp.iter().map(|a| k * c * c * a).collect();
                let want_s: Vec<f64> = vp.iter().map(|a| -c.powi(3) * k * a).collect();
                frame.record(diff_norm(&geo.rough_laplacian(&v, &p)?, &want_lap), sup_norm(&want_lap));
                frame.record(diff_norm(&geo.s_tensor(&v, &p)?, &want_s), sup_norm(&want_s));
                frame.record((geo.divergence_field(&v, &p)? + k * c).abs(), k * c);
            }
            let (rm, rp) = euler_exponents(n);
            for r in [rm, rp] {
                for y in [0.5, 1.0, 1.5, 2.0] {
                    let res = ode_residual(OdeId::HyperbolicHarmonic, |t: Jet| (t.ln() * r).exp(), y, n, c)?;
                    euler.record(res.abs(), 0.0);
                }
            }
            let field = field_family("hyperbolic-fV", &[0.0, 1.0], &chart)?;
            let domain = BoxDomain::new(lo, hi, 16)?;
            // the 9^5 grid is too slow for one core; 4^5 still covers the box corners
            let samples = if n >= 5 { 4 } else { 9 };
            let report = geo.classify_with_samples(&field, &domain, DEFAULT_CLASSIFY_TOL, samples);
            verdicts.push((n, c, report.verdict));
        }
    }
    let wrong: Vec<String> = verdicts
        .iter()
        .filter(|(_, _, v)| *v != Verdict::HarmonicVectorField)
        .map(|(n, c, v)| format!("n={n} c={c}: {}", v.as_str()))
        .collect();
    Ok(Outcome {
        passed: frame.ok() && euler.ok() && wrong.is_empty(),
        detail: format!(
            "frame {:.2e} (tol 1e-6), exponents {:.2e} (tol 1e-9), verdicts {}",
            frame.value,
            euler.value,
            if wrong.is_empty() { "all harmonic_vector_field".to_string() } else { wrong.join(", ") }
        ),
    })
}

fn random_biharmonic_params(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut p: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // β ≠ 0
    p[6] = rng.gen_range(0.3..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    p
}

fn plane_families(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let chart = ModelChart::euclidean(2);
    let geo = Geometry::new(chart);
    let square = BoxDomain::new(vec![-1.0; 2], vec![1.0; 2], 16)?;
    let grid = square.sample_grid(9);
    let mut draws = Worst::new(1e-6);
    for _ in 0..20 {
        let field = field_family("r2-biharmonic", &random_biharmonic_params(rng), &chart)?;
        for p in &grid {
            draws.record(sup_norm(&geo.bitension(&field, p)?), 0.0);
        }
    }

    let plane = FamilyField::non_harmonic_plane_field(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let lap = geo.rough_laplacian(&plane, &[0.0, 0.0])?;
    let first = (lap[0].abs() - 2.0).abs();
    let verdict = geo.classify(&plane, &square, DEFAULT_CLASSIFY_TOL).verdict;
    Ok(Outcome {
        passed: draws.ok() && first <= 1e-8 && verdict == Verdict::BiharmonicVectorField,
        detail: format!(
            "draws sup {:.2e} (tol 1e-6), |lap X|_1 at origin off by {:.2e} (tol 1e-8), verdict {}",
            draws.value,
            first,
            verdict.as_str()
        ),
    })
}

/// The energy side carries second derivatives of the bump, which a 64-point
/// rule resolves only to about 1e-2; 128 points brings it under 1e-4.
const VARIATION_QUADRATURE: usize = 128;

fn first_variation_suite(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let boxes = [
        (ModelChart::euclidean(2), vec![-1.0, -1.0], vec![1.0, 1.0]),
        (ModelChart::hyperbolic(2, 1.0), vec![-0.5, 0.75], vec![0.5, 1.75]),
    ];
    let mut gaps = Vec::new();
    let mut failures = 0;
    for (chart, lo, hi) in &boxes {
        let geo = Geometry::new(*chart);
        let domain = BoxDomain::new(lo.clone(), hi.clone(), VARIATION_QUADRATURE)?;
        for _ in 0..10 {
            let x = PolyTrigField::random(rng, 2);
            let v = PolyTrigField::random(rng, 2);
            let fv = geo.first_variation(&x, &v, &domain)?;
            if !fv.agrees(FIRST_VARIATION_RTOL) {
                failures += 1;
            }
            gaps.push(fv.relative_gap());
        }
    }
    let worst_gap = gaps.iter().copied().fold(0.0, f64::max);

    let chart = ModelChart::euclidean(2);
    let geo = Geometry::new(chart);
    let domain = BoxDomain::new(vec![-1.0; 2], vec![1.0; 2], VARIATION_QUADRATURE)?;
    let mut critical = 0.0_f64;
    for _ in 0..3 {
        let x = field_family("r2-biharmonic", &random_biharmonic_params(rng), &chart)?;
        let v = ConstantField(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        let fv = geo.first_variation(&x, &v, &domain)?;
        critical = critical.max(fv.lhs.abs() / fv.scale.max(f64::MIN_POSITIVE));
    }
    let critical_ok = critical <= FIRST_VARIATION_RTOL;
    Ok(Outcome {
        passed: failures == 0 && critical_ok,
        detail: format!(
            "{failures}/20 pairs disagree, worst gap {:.2e} (tol 1e-3); biharmonic |lhs|/scale {:.2e} (tol 1e-3)",
            worst_gap, critical
        ),
    })
}

fn blow_up_demo(_rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = OdeSpec::new(2, 1.0)?;
    let coarse = integrate_local(&spec, [1.0, 0.0, 0.0, 0.0], (0.0, 10.0), 1e-3)?;
    let fine = integrate_local(&spec, [1.0, 0.0, 0.0, 0.0], (0.0, 10.0), 5e-4)?;
    let (escape, stable) = match (coarse.blow_up, fine.blow_up) {
        (Some(a), Some(b)) => {
            let rel = (a.t_star - b.t_star).abs() / b.t_star;
            (format!("t* {:.4} vs {:.4} (rel {:.2e}, tol 5e-2)", a.t_star, b.t_star, rel), rel <= 0.05)
        }
        _ => ("no escape detected".to_string(), false),
    };
    let zero = integrate_local(&spec, [0.0; 4], (0.0, 10.0), 1e-3)?;
    let reached = zero.blow_up.is_none() && zero.t.last().is_some_and(|t| (t - 10.0).abs() < 1e-9);
    let quiet = zero.max_abs_v() <= 1e-12;
    Ok(Outcome {
        passed: stable && reached && quiet,
        detail: format!("{escape}; zero init max|v| {:.1e} over full span: {}", zero.max_abs_v(), reached),
    })
}
