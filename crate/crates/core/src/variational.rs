//! Tension, bitension and bienergy of a vector field viewed as a map into
//! the tangent bundle with the Sasaki metric, and the critical-point checks
//! built on them.
//!
//! With `S(X) = Σ R(∇_eᵢX, X)eᵢ` the tension splits into lifts,
//! `τ(X) = (−S(X))ʰ + (−Δ̄X)ᵛ`, and the bitension is
//!
//! ```text
//! Δ̄Δ̄X + Σᵢ [ (∇_eᵢR)(eᵢ, S)X + R(eᵢ, ∇_eᵢS)X + 2R(eᵢ, S)∇_eᵢX ]
//! ```
//!
//! whose vanishing characterizes biharmonic vector fields. Frame sums are
//! evaluated as inverse-metric contractions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::field::{Perturbed, Scaled, ScalarField, VectorField};
use crate::geometry::{Chart, Geometry};
use crate::linalg::Matrix;
use crate::quadrature::{integrate_box, tensor_grid};
use crate::scalar::Scalar;

/// Horizontal and vertical parts of the tension field at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensionValue {
    /// `−S(X)`
    pub horizontal: Vec<f64>,
    /// `−Δ̄X`
    pub vertical: Vec<f64>,
}

impl TensionValue {
    /// `‖τ‖²` in the Sasaki metric; the lifts are orthogonal and isometric.
    pub fn norm_squared(&self, g: &Matrix<f64>) -> f64 {
        g.bilinear(&self.horizontal, &self.horizontal) + g.bilinear(&self.vertical, &self.vertical)
    }
}

/// The bitension split into its rough-Laplacian and curvature parts.
#[derive(Clone, Debug)]
pub struct BitensionParts<T> {
    pub rough: Vec<T>,
    pub curvature: Vec<T>,
}

impl<T: Scalar> BitensionParts<T> {
    pub fn total(&self) -> Vec<T> {
        self.rough.iter().zip(&self.curvature).map(|(a, b)| *a + *b).collect()
    }
}

/// Axis-aligned coordinate box with a Gauss–Legendre rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Gauss–Legendre points per axis.
    pub quadrature_points: usize,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, quadrature_points: usize) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(GeomError::InvalidDomain("bounds must have equal, nonzero length".into()));
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a < b)) {
            return Err(GeomError::InvalidDomain("each lower bound must be below its upper bound".into()));
        }
        if quadrature_points < 2 {
            return Err(GeomError::InvalidDomain("at least 2 quadrature points per axis".into()));
        }
        Ok(BoxDomain { lower, upper, quadrature_points })
    }

    /// The unit cube `[0, 1]ᵐ`.
    pub fn unit(dim: usize, quadrature_points: usize) -> Self {
        BoxDomain { lower: vec![0.0; dim], upper: vec![1.0; dim], quadrature_points }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Checks dimension and that every corner is a valid chart point.
    pub fn validate<C: Chart>(&self, chart: &C) -> Result<()> {
        if self.dim() != chart.dim() {
            return Err(GeomError::Dimension { expected: chart.dim(), got: self.dim() });
        }
        for mask in 0..(1usize << self.dim()) {
            let corner: Vec<f64> = (0..self.dim())
                .map(|d| if mask >> d & 1 == 1 { self.upper[d] } else { self.lower[d] })
                .collect();
            if !chart.contains(&corner) {
                return Err(GeomError::InvalidDomain(format!("corner {corner:?} lies outside the chart")));
            }
        }
        Ok(())
    }

    /// `k` equally spaced points per axis, boundary included.
    pub fn sample_grid(&self, k: usize) -> Vec<Vec<f64>> {
        let k = k.max(2);
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|d| {
                (0..k)
                    .map(|i| self.lower[d] + (self.upper[d] - self.lower[d]) * i as f64 / (k - 1) as f64)
                    .collect()
            })
            .collect();
        tensor_grid(&axes)
    }

    /// Smooth bump `exp(1 − 1/(1 − r²))` on the inscribed ellipsoid, zero outside.
    pub fn bump(&self) -> Bump {
        Bump {
            center: self.center(),
            half: self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (b - a)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Bump {
    center: Vec<f64>,
    half: Vec<f64>,
}

impl ScalarField for Bump {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        let mut r2 = T::zero();
        for ((xi, c), h) in x.iter().zip(&self.center).zip(&self.half) {
            let s = (*xi - *c) / *h;
            r2 += s * s;
        }
        if r2.re() >= 1.0 {
            return Ok(T::zero());
        }
        Ok(((-r2 + 1.0).recip() * -1.0 + 1.0).exp())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// `|Q(2n) − Q(n)|`
    pub error_estimate: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstVariation {
    /// Numeric `d/dt E₂(X + tV)` at `t = 0`.
    pub lhs: f64,
    /// `∫ g(bitension(X), V) v_g`.
    pub rhs: f64,
    /// Difference between the extrapolated and the finer centered quotient.
    pub derivative_error_estimate: f64,
    /// `2√(E₂(X)·E₂(V))`, the size against which `lhs` and `rhs` are judged.
    pub scale: f64,
    pub quadrature: QuadratureEstimate,
}

/// Relative agreement required between the two sides of the first variation.
pub const FIRST_VARIATION_RTOL: f64 = 1e-3;

impl FirstVariation {
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`, zero when both vanish.
    pub fn relative_gap(&self) -> f64 {
        let m = self.lhs.abs().max(self.rhs.abs());
        if m == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / m
        }
    }

    /// Both sides agree to `rtol` relative, or both are below `rtol·scale`
    /// (a critical point up to quadrature error).
    pub fn agrees(&self, rtol: f64) -> bool {
        let tol = rtol * self.scale;
        self.relative_gap() <= rtol || (self.lhs.abs() <= tol && self.rhs.abs() <= tol)
    }
}

/// The classes a field can satisfy, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Parallel,
    HarmonicMap,
    BiharmonicVectorField,
    HarmonicVectorField,
    None,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Parallel => "parallel",
            Verdict::HarmonicMap => "harmonic_map",
            Verdict::BiharmonicVectorField => "biharmonic_vector_field",
            Verdict::HarmonicVectorField => "harmonic_vector_field",
            Verdict::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Verdict::Parallel,
            Verdict::HarmonicMap,
            Verdict::BiharmonicVectorField,
            Verdict::HarmonicVectorField,
            Verdict::None,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }
}

/// Sup-norm residuals over the sample grid, measured in the metric `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖∇X‖`
    pub parallel: f64,
    /// `‖Δ̄X‖`
    pub rough_laplacian: f64,
    /// `‖S(X)‖`
    pub s_tensor: f64,
    /// `‖bitension‖`
    pub bitension: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub parallel: bool,
    pub harmonic_map: bool,
    pub harmonic_vector_field: bool,
    pub biharmonic_vector_field: bool,
}

impl ClassFlags {
    /// Thresholds residuals strictly (a residual equal to `tol` fails) and
    /// closes the result under parallel ⇒ harmonic map ⇒ both vector-field
    /// classes.
    pub fn from_residuals(r: &Residuals, tol: f64) -> Self {
        let pass = |v: f64| v.is_finite() && v < tol;
        let parallel = pass(r.parallel);
        let harmonic_map = parallel || (pass(r.rough_laplacian) && pass(r.s_tensor));
        ClassFlags {
            parallel,
            harmonic_map,
            harmonic_vector_field: harmonic_map || pass(r.rough_laplacian),
            biharmonic_vector_field: harmonic_map || pass(r.bitension),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.parallel {
            Verdict::Parallel
        } else if self.harmonic_map {
            Verdict::HarmonicMap
        } else if self.biharmonic_vector_field {
            Verdict::BiharmonicVectorField
        } else if self.harmonic_vector_field {
            Verdict::HarmonicVectorField
        } else {
            Verdict::None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub residuals: Residuals,
    pub verdict: Verdict,
    pub classes: ClassFlags,
    pub tolerance: f64,
    pub sample_points: usize,
    /// Set when some grid point could not be evaluated; the verdict is then `none`.
    pub error: Option<String>,
}

/// Per-point norms used for classification and CSV sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDiagnostics {
    pub point: Vec<f64>,
    pub covariant_norm: f64,
    pub rough_laplacian_norm: f64,
    pub s_norm: f64,
    pub bitension_norm: f64,
    pub bienergy_density: f64,
    pub rough_laplacian: Vec<f64>,
}

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-5;
pub const DEFAULT_SAMPLES_PER_AXIS: usize = 9;

/// Centered-difference steps for the numeric `t`-derivative.
const VARIATION_STEPS: (f64, f64) = (1e-3, 5e-4);

impl<C: Chart> Geometry<C> {
    pub fn tension<F: VectorField>(&self, field: &F, x: &[f64]) -> Result<TensionValue> {
        let s = self.s_tensor(field, x)?;
        let lap = self.rough_laplacian(field, x)?;
        Ok(TensionValue {
            horizontal: s.into_iter().map(|v| -v).collect(),
            vertical: lap.into_iter().map(|v| -v).collect(),
        })
    }

    pub fn bitension_parts<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<BitensionParts<T>> {
        let n = self.dim();
        let rough = self.rough_laplacian(&self.rough_laplacian_field(field), x)?;

        let curv = self.riemann(x)?;
        if curv.as_slice().iter().all(|v| v.re() == 0.0) && T::DEPTH == 0 {
            // every curvature term contracts R or ∇R, so both must vanish
            let dcurv = self.nabla_riemann(x)?;
            if dcurv.as_slice().iter().all(|v| v.re() == 0.0) {
                return Ok(BitensionParts { rough, curvature: vec![T::zero(); n] });
            }
        }

        let xv = self.field_value(field, x)?;
        let s_field = self.s_tensor_field(field);
        let s = self.s_tensor(field, x)?;
        let ds = self.covariant_jacobian(&s_field, x)?;
        let dx = self.covariant_jacobian(field, x)?;
        let dcurv = self.nabla_riemann(x)?;
        let ginv = self.inverse_metric(x)?;

        let mut curvature = vec![T::zero(); n];
        for (l, out) in curvature.iter_mut().enumerate() {
            let mut acc = T::zero();
            for i in 0..n {
                for j in 0..n {
                    let gij = ginv[(i, j)];
                    if gij.re() == 0.0 && T::DEPTH == 0 {
                        continue;
                    }
                    let mut t = T::zero();
                    for b in 0..n {
                        for c in 0..n {
                            let r = curv.get(l, j, b, c);
                            // (∇_eᵢR)(eᵢ, S)X
                            t += dcurv.get(i, l, j, b, c) * s[b] * xv[c];
                            // R(eᵢ, ∇_eᵢS)X
                            t += r * ds[(b, i)] * xv[c];
                            // 2R(eᵢ, S)∇_eᵢX
                            t += r * s[b] * dx[(c, i)] * 2.0;
                        }
                    }
                    acc += gij * t;
                }
            }
            *out = acc;
        }
        Ok(BitensionParts { rough, curvature })
    }

    /// Full bitension vector at `x`.
    pub fn bitension<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Vec<T>> {
        Ok(self.bitension_parts(field, x)?.total())
    }

    /// `½(g(S, S) + g(Δ̄X, Δ̄X))`.
    pub fn bienergy_density<F: VectorField>(&self, field: &F, x: &[f64]) -> Result<f64> {
        let g = self.metric_at(x)?;
        Ok(0.5 * self.tension(field, x)?.norm_squared(&g))
    }

    fn integrate<Fn1>(&self, domain: &BoxDomain, n: usize, f: Fn1) -> Result<f64>
    where
        Fn1: Fn(&[f64]) -> Result<f64> + Sync,
    {
        integrate_box(&domain.lower, &domain.upper, n, |x| Ok(f(x)? * self.volume_density(x)?))
    }

    /// `E₂(X) = ½∫_D ‖τ(X)‖² v_g`. The value uses the doubled rule; its
    /// distance to the base rule is the error estimate.
    pub fn bienergy<F: VectorField>(&self, field: &F, domain: &BoxDomain) -> Result<QuadratureEstimate> {
        domain.validate(&self.chart)?;
        let n = domain.quadrature_points;
        let coarse = self.integrate(domain, n, |x| self.bienergy_density(field, x))?;
        let fine = self.integrate(domain, 2 * n, |x| self.bienergy_density(field, x))?;
        let error_estimate = (fine - coarse).abs();
        Ok(QuadratureEstimate {
            value: fine,
            error_estimate,
            converged: error_estimate <= 1e-8 * fine.abs().max(1.0),
        })
    }

    /// First variation of `E₂` at `X` in the direction `bump·V`.
    ///
    /// `lhs` differentiates `t ↦ E₂(X + t·bump·V)` numerically (centered
    /// quotients at two steps, Richardson-extrapolated); `rhs` integrates
    /// `g(bitension(X), bump·V)`. Both use the domain's base rule.
    pub fn first_variation<F: VectorField, V: VectorField>(
        &self,
        field: &F,
        direction: &V,
        domain: &BoxDomain,
    ) -> Result<FirstVariation> {
        domain.validate(&self.chart)?;
        let n = domain.quadrature_points;
        let bumped = Scaled { scale: domain.bump(), field: direction };
        let energy = |t: f64| {
            let xt = Perturbed { base: field, direction: &bumped, t };
            self.integrate(domain, n, |x| self.bienergy_density(&xt, x))
        };
        let (h1, h2) = VARIATION_STEPS;
        let d1 = (energy(h1)? - energy(-h1)?) / (2.0 * h1);
        let d2 = (energy(h2)? - energy(-h2)?) / (2.0 * h2);
        let ratio = (h1 / h2).powi(2);
        let lhs = (ratio * d2 - d1) / (ratio - 1.0);
        let integrand = |x: &[f64]| {
            let b = self.bitension(field, x)?;
            let v = bumped.eval(x)?;
            self.inner(x, &b, &v)
        };
        let rhs = self.integrate(domain, n, integrand)?;
        // the bitension is the costly integrand; compare against the rule at
        // half the points, which overestimates the error of the full rule
        let rhs_coarse = self.integrate(domain, (n / 2).max(1), integrand)?;
        let error_estimate = (rhs - rhs_coarse).abs();
        // Cauchy–Schwarz bound on |dE₂/dt| for flat charts; a natural size
        // for the variation elsewhere.
        let ex = self.integrate(domain, n, |x| self.bienergy_density(field, x))?;
        let ev = self.integrate(domain, n, |x| self.bienergy_density(&bumped, x))?;
        Ok(FirstVariation {
            lhs,
            rhs,
            scale: 2.0 * (ex * ev).max(0.0).sqrt(),
            derivative_error_estimate: (lhs - d2).abs(),
            quadrature: QuadratureEstimate {
                value: rhs,
                error_estimate,
                converged: error_estimate <= 1e-6 * rhs.abs().max(1e-6),
            },
        })
    }

    /// All per-point norms at `x`.
    pub fn diagnose<F: VectorField>(&self, field: &F, x: &[f64]) -> Result<PointDiagnostics> {
        let n = self.dim();
        let g = self.metric_at(x)?;
        let ginv = g.inverse()?;
        let jac = self.covariant_jacobian(field, x)?;
        // ‖∇X‖² = g_kl gⁱʲ (∇ᵢX)ᵏ(∇ⱼX)ˡ
        let mut cov = 0.0;
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        cov += g[(k, l)] * ginv[(i, j)] * jac[(k, i)] * jac[(l, j)];
                    }
                }
            }
        }
        let tension = self.tension(field, x)?;
        let lap: Vec<f64> = tension.vertical.iter().map(|v| -v).collect();
        let s_sq = g.bilinear(&tension.horizontal, &tension.horizontal);
        let lap_sq = g.bilinear(&lap, &lap);
        let bit = self.bitension(field, x)?;
        Ok(PointDiagnostics {
            point: x.to_vec(),
            covariant_norm: cov.max(0.0).sqrt(),
            rough_laplacian_norm: lap_sq.max(0.0).sqrt(),
            s_norm: s_sq.max(0.0).sqrt(),
            bitension_norm: g.bilinear(&bit, &bit).max(0.0).sqrt(),
            bienergy_density: 0.5 * (s_sq + lap_sq),
            rough_laplacian: lap,
        })
    }

    /// Diagnostics on a `k`-per-axis grid, evaluated in parallel, returned
    /// in grid order.
    pub fn sweep<F: VectorField>(&self, field: &F, points: &[Vec<f64>]) -> Result<Vec<PointDiagnostics>> {
        points.par_iter().map(|p| self.diagnose(field, p)).collect()
    }

    pub fn classify<F: VectorField>(&self, field: &F, domain: &BoxDomain, tol: f64) -> ClassificationReport {
        self.classify_with_samples(field, domain, tol, DEFAULT_SAMPLES_PER_AXIS)
    }

    pub fn classify_with_samples<F: VectorField>(
        &self,
        field: &F,
        domain: &BoxDomain,
        tol: f64,
        samples_per_axis: usize,
    ) -> ClassificationReport {
        let grid = domain.sample_grid(samples_per_axis);
        let sample_points = grid.len();
        let evaluated = domain.validate(&self.chart).and_then(|_| self.sweep(field, &grid));
        match evaluated {
            Ok(diags) => {
                let sup = |f: fn(&PointDiagnostics) -> f64| {
                    diags.iter().map(f).fold(0.0_f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
                };
                let residuals = Residuals {
                    parallel: sup(|d| d.covariant_norm),
                    rough_laplacian: sup(|d| d.rough_laplacian_norm),
                    s_tensor: sup(|d| d.s_norm),
                    bitension: sup(|d| d.bitension_norm),
                };
                let classes = ClassFlags::from_residuals(&residuals, tol);
                ClassificationReport {
                    verdict: classes.verdict(),
                    residuals,
                    classes,
                    tolerance: tol,
                    sample_points,
                    error: None,
                }
            }
            Err(e) => {
                let nan = f64::NAN;
                let residuals = Residuals { parallel: nan, rough_laplacian: nan, s_tensor: nan, bitension: nan };
                let classes = ClassFlags::from_residuals(&residuals, tol);
                ClassificationReport {
                    verdict: Verdict::None,
                    residuals,
                    classes,
                    tolerance: tol,
                    sample_points,
                    error: Some(e.to_string()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{zero_field, ConstantField};
    use crate::models::ModelChart;

    struct Poly;
    impl VectorField for Poly {
        fn dim(&self) -> usize {
            2
        }
        fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
            Ok(vec![x[0] * x[0] + x[1] * x[1], T::zero()])
        }
    }

    struct Quartic;
    impl VectorField for Quartic {
        fn dim(&self) -> usize {
            2
        }
        fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
            Ok(vec![x[0].powi(4), T::zero()])
        }
    }

    /// `y^r · V` on the half-space model.
    struct PowerV {
        n: usize,
        c: f64,
        r: f64,
    }
    impl VectorField for PowerV {
        fn dim(&self) -> usize {
            self.n
        }
        fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
            let y = x[self.n - 1];
            let mut v = vec![T::zero(); self.n];
            v[self.n - 1] = y.powf(self.r) * y * self.c;
            Ok(v)
        }
    }

    #[test]
    fn bienergy_density_examples() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        assert!((geo.bienergy_density(&Poly, &[0.3, -0.7]).unwrap() - 8.0).abs() < 1e-10);
        assert_eq!(geo.bienergy_density(&ConstantField(vec![1.0, 2.0]), &[0.1, 0.2]).unwrap(), 0.0);

        for n in [2usize, 3] {
            let geo = Geometry::new(ModelChart::hyperbolic(n, 1.0));
            let v = PowerV { n, c: 1.0, r: 0.0 };
            let mut p = vec![0.2; n];
            p[n - 1] = 1.4;
            let e = geo.bienergy_density(&v, &p).unwrap();
            assert!((e - ((n - 1) * (n - 1)) as f64).abs() < 1e-9, "n={n}: {e}");
        }
    }

    #[test]
    fn bienergy_on_unit_square() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let d = BoxDomain::unit(2, 4);
        let q = geo.bienergy(&Poly, &d).unwrap();
        assert!((q.value - 8.0).abs() < 1e-10 && q.converged);
        assert_eq!(geo.bienergy(&zero_field(2), &d).unwrap().value, 0.0);
    }

    #[test]
    fn bitension_of_hyperbolic_harmonic_field() {
        for (n, c) in [(2usize, 1.0), (3, 2.0)] {
            let nf = (n - 1) as f64;
            let r = (nf + (nf * (nf + 4.0)).sqrt()) / 2.0;
            let geo = Geometry::new(ModelChart::hyperbolic(n, c));
            let field = PowerV { n, c, r };
            let mut p = vec![0.1; n];
            p[n - 1] = 1.3;
            let b = geo.bitension(&field, &p).unwrap();
            let f = p[n - 1].powf(r);
            let expected = 2.0 * c.powi(6) * nf * nf * f.powi(3) * c * p[n - 1];
            assert!((b[n - 1] - expected).abs() < 1e-6 * expected.abs(), "{b:?} vs {expected}");
            assert!(b[..n - 1].iter().all(|v| v.abs() < 1e-8));
        }
    }

    #[test]
    fn flat_bitension_is_rough_laplacian_squared() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let parts = geo.bitension_parts(&Quartic, &[0.4, 0.1]).unwrap();
        assert!(parts.curvature.iter().all(|v| *v == 0.0));
        // Δ̄Δ̄(x⁴∂x) = 24∂x
        assert!((parts.rough[0] - 24.0).abs() < 1e-9);
    }

    #[test]
    fn first_variation_sides_agree() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let d = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0], 64).unwrap();
        let fv = geo.first_variation(&Quartic, &ConstantField(vec![1.0, 0.5]), &d).unwrap();
        assert!((fv.lhs - fv.rhs).abs() <= 1e-3 * fv.rhs.abs(), "{fv:?}");
    }

    #[test]
    fn classification_flags_are_monotone() {
        let r = Residuals { parallel: 0.0, rough_laplacian: 1.0, s_tensor: 1.0, bitension: 1.0 };
        let f = ClassFlags::from_residuals(&r, 1e-5);
        assert!(f.harmonic_map && f.harmonic_vector_field && f.biharmonic_vector_field);
        assert_eq!(f.verdict(), Verdict::Parallel);

        let at = Residuals { parallel: 1.0, rough_laplacian: 1e-5, s_tensor: 0.0, bitension: 0.0 };
        let f = ClassFlags::from_residuals(&at, 1e-5);
        assert!(!f.harmonic_vector_field);
        assert_eq!(f.verdict(), Verdict::BiharmonicVectorField);
    }

    #[test]
    fn classify_reports_errors_instead_of_failing() {
        let geo = Geometry::new(ModelChart::hyperbolic(2, 1.0));
        let d = BoxDomain { lower: vec![0.0, -1.0], upper: vec![1.0, 1.0], quadrature_points: 4 };
        let rep = geo.classify(&zero_field(2), &d, 1e-5);
        assert_eq!(rep.verdict, Verdict::None);
        assert!(rep.error.is_some());
    }

    #[test]
    fn classify_parallel_field() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let rep = geo.classify(&ConstantField(vec![1.0, 0.0]), &BoxDomain::unit(2, 4), 1e-5);
        assert_eq!(rep.verdict, Verdict::Parallel);
        assert_eq!(rep.sample_points, 81);
    }
}
