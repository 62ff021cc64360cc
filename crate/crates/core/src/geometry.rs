//! Single-chart Riemannian geometry: metric, Levi-Civita connection,
//! curvature and its covariant derivative, all evaluated pointwise.
//!
//! # Curvature sign
//!
//! The curvature operator is `R(X, Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`.
//! In coordinates `r[l][i][j][k]` is the `∂ₗ` component of `R(∂ᵢ, ∂ⱼ)∂ₖ`:
//!
//! ```text
//! Rˡᵢⱼₖ = ∂ᵢΓˡⱼₖ − ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ − ΓˡⱼₘΓᵐᵢₖ
//! ```
//!
//! With this sign the round sphere has `g(R(u, v)v, u) > 0`. Every downstream
//! operator (`S(X)`, the bitension) is written against this convention.

use crate::diff::{DiffBackend, Smooth};
use crate::error::{GeomError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A manifold described by one coordinate chart.
pub trait Chart: Sync {
    fn dim(&self) -> usize;

    /// Metric components `g_ij` at `x`. Callers check [`Chart::contains`].
    fn metric<T: Scalar>(&self, x: &[T]) -> Result<Matrix<T>>;

    /// Whether `x` lies in the chart's domain of validity.
    fn contains(&self, _x: &[f64]) -> bool {
        true
    }

    fn name(&self) -> String;
}

/// A chart paired with the differentiation backend used for all derived
/// quantities.
#[derive(Clone, Debug)]
pub struct Geometry<C> {
    pub chart: C,
    pub backend: DiffBackend,
}

/// `Γᵏᵢⱼ` at a point, stored as `gamma[k][i][j]`.
#[derive(Clone, Debug)]
pub struct Christoffel<T> {
    dim: usize,
    gamma: Vec<T>,
}

impl<T: Scalar> Christoffel<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.gamma[(k * self.dim + i) * self.dim + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.gamma
    }

    /// Largest `|Γᵏᵢⱼ − Γᵏⱼᵢ|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut m = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m = m.max((self.get(k, i, j).re() - self.get(k, j, i).re()).abs());
                }
            }
        }
        m
    }

    /// `Γᵏᵢⱼ uⁱ vʲ` as a vector indexed by `k`.
    pub fn contract(&self, u: &[T], v: &[T]) -> Vec<T> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut s = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        s += self.get(k, i, j) * u[i] * v[j];
                    }
                }
                s
            })
            .collect()
    }
}

/// Curvature components `r[l][i][j][k]` (first index contravariant).
#[derive(Clone, Debug)]
pub struct Curvature<T> {
    dim: usize,
    r: Vec<T>,
}

impl<T: Scalar> Curvature<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> T {
        let n = self.dim;
        self.r[((l * n + i) * n + j) * n + k]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.r
    }

    /// `R(u, v)w`.
    pub fn apply(&self, u: &[T], v: &[T], w: &[T]) -> Vec<T> {
        let n = self.dim;
        (0..n)
            .map(|l| {
                let mut s = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        let uv = u[i] * v[j];
                        for k in 0..n {
                            s += self.get(l, i, j, k) * uv * w[k];
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// Fully covariant `R_lijk = g_lm Rᵐᵢⱼₖ`.
    pub fn lowered(&self, g: &Matrix<T>) -> Vec<T> {
        let n = self.dim;
        let mut out = vec![T::zero(); n * n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = T::zero();
                        for m in 0..n {
                            s += g[(l, m)] * self.get(m, i, j, k);
                        }
                        out[((l * n + i) * n + j) * n + k] = s;
                    }
                }
            }
        }
        out
    }

    /// Sectional curvature `g(R(u, v)v, u) / (|u|²|v|² − g(u, v)²)`.
    pub fn sectional(&self, g: &Matrix<T>, u: &[T], v: &[T]) -> T {
        let rv = self.apply(u, v, v);
        let num = g.bilinear(&rv, u);
        let den = g.bilinear(u, u) * g.bilinear(v, v) - g.bilinear(u, v) * g.bilinear(u, v);
        num / den
    }
}

/// Covariant derivative of curvature, `dr[a][l][i][j][k] = (∇ₐR)ˡᵢⱼₖ`.
#[derive(Clone, Debug)]
pub struct CurvatureGradient<T> {
    dim: usize,
    dr: Vec<T>,
}

impl<T: Scalar> CurvatureGradient<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, l: usize, i: usize, j: usize, k: usize) -> T {
        let n = self.dim;
        self.dr[(((a * n + l) * n + i) * n + j) * n + k]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.dr
    }

    /// `(∇_d R)(u, v)w`.
    pub fn apply(&self, d: &[T], u: &[T], v: &[T], w: &[T]) -> Vec<T> {
        let n = self.dim;
        (0..n)
            .map(|l| {
                let mut s = T::zero();
                for a in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let c = d[a] * u[i] * v[j];
                            for k in 0..n {
                                s += self.get(a, l, i, j, k) * c * w[k];
                            }
                        }
                    }
                }
                s
            })
            .collect()
    }
}

struct MetricFn<'g, C>(&'g Geometry<C>);
struct ChristoffelFn<'g, C>(&'g Geometry<C>);
struct RiemannFn<'g, C>(&'g Geometry<C>);

impl<C: Chart> Smooth for MetricFn<'_, C> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.0.metric_at(x)?.into_vec())
    }
}

impl<C: Chart> Smooth for ChristoffelFn<'_, C> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.0.christoffel(x)?.gamma)
    }
}

impl<C: Chart> Smooth for RiemannFn<'_, C> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.0.riemann(x)?.r)
    }
}

impl<C: Chart> Geometry<C> {
    pub fn new(chart: C) -> Self {
        Geometry { chart, backend: DiffBackend::default() }
    }

    pub fn with_backend(chart: C, backend: DiffBackend) -> Self {
        Geometry { chart, backend }
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub(crate) fn check_point<T: Scalar>(&self, x: &[T]) -> Result<()> {
        let n = self.chart.dim();
        if x.len() != n {
            return Err(GeomError::Dimension { expected: n, got: x.len() });
        }
        let re: Vec<f64> = x.iter().map(Scalar::re).collect();
        if !self.chart.contains(&re) {
            return Err(GeomError::OutsideDomain { point: re });
        }
        Ok(())
    }

    pub fn metric_at<T: Scalar>(&self, x: &[T]) -> Result<Matrix<T>> {
        self.check_point(x)?;
        self.chart.metric(x)
    }

    pub fn inverse_metric<T: Scalar>(&self, x: &[T]) -> Result<Matrix<T>> {
        self.metric_at(x)?.inverse()
    }

    /// `g(u, v)` at `x`.
    pub fn inner<T: Scalar>(&self, x: &[T], u: &[T], v: &[T]) -> Result<T> {
        Ok(self.metric_at(x)?.bilinear(u, v))
    }

    /// Riemannian norm of a vector at an `f64` point.
    pub fn norm(&self, x: &[f64], u: &[f64]) -> Result<f64> {
        Ok(self.inner(x, u, u)?.max(0.0).sqrt())
    }

    /// `√det g`, the density of the volume element in these coordinates.
    pub fn volume_density<T: Scalar>(&self, x: &[T]) -> Result<T> {
        Ok(self.metric_at(x)?.determinant().sqrt())
    }

    /// `Γᵏᵢⱼ = ½ gᵏˡ(∂ᵢg_jl + ∂ⱼg_il − ∂ₗg_ij)`.
    pub fn christoffel<T: Scalar>(&self, x: &[T]) -> Result<Christoffel<T>> {
        let n = self.dim();
        let p = self.backend.partials(&MetricFn(self), x)?;
        let g = Matrix::from_vec(n, n, p.value);
        let ginv = g.inverse()?;
        let dg = |a: usize, i: usize, j: usize| p.d[a][i * n + j];
        // lowered first kind: Γ_lij
        let mut first = vec![T::zero(); n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    first[(l * n + i) * n + j] = (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)) * 0.5;
                }
            }
        }
        let mut gamma = vec![T::zero(); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = T::zero();
                    for l in 0..n {
                        s += ginv[(k, l)] * first[(l * n + i) * n + j];
                    }
                    gamma[(k * n + i) * n + j] = s;
                }
            }
        }
        Ok(Christoffel { dim: n, gamma })
    }

    pub fn riemann<T: Scalar>(&self, x: &[T]) -> Result<Curvature<T>> {
        let n = self.dim();
        let p = self.backend.partials(&ChristoffelFn(self), x)?;
        let gamma = Christoffel { dim: n, gamma: p.value };
        let dgam = |a: usize, k: usize, i: usize, j: usize| p.d[a][(k * n + i) * n + j];
        let mut r = vec![T::zero(); n * n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = dgam(i, l, j, k) - dgam(j, l, i, k);
                        for m in 0..n {
                            s += gamma.get(l, i, m) * gamma.get(m, j, k)
                                - gamma.get(l, j, m) * gamma.get(m, i, k);
                        }
                        r[((l * n + i) * n + j) * n + k] = s;
                    }
                }
            }
        }
        Ok(Curvature { dim: n, r })
    }

    /// `(∇ₐR)ˡᵢⱼₖ = ∂ₐRˡᵢⱼₖ + ΓˡₐₘRᵐᵢⱼₖ − ΓᵐₐᵢRˡₘⱼₖ − ΓᵐₐⱼRˡᵢₘₖ − ΓᵐₐₖRˡᵢⱼₘ`.
    pub fn nabla_riemann<T: Scalar>(&self, x: &[T]) -> Result<CurvatureGradient<T>> {
        let n = self.dim();
        let p = self.backend.partials(&RiemannFn(self), x)?;
        let curv = Curvature { dim: n, r: p.value };
        let gamma = self.christoffel(x)?;
        let idx = |l: usize, i: usize, j: usize, k: usize| ((l * n + i) * n + j) * n + k;
        let mut dr = vec![T::zero(); n.pow(5)];
        for a in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let mut s = p.d[a][idx(l, i, j, k)];
                            for m in 0..n {
                                s += gamma.get(l, a, m) * curv.get(m, i, j, k);
                                s -= gamma.get(m, a, i) * curv.get(l, m, j, k);
                                s -= gamma.get(m, a, j) * curv.get(l, i, m, k);
                                s -= gamma.get(m, a, k) * curv.get(l, i, j, m);
                            }
                            dr[a * n.pow(4) + idx(l, i, j, k)] = s;
                        }
                    }
                }
            }
        }
        Ok(CurvatureGradient { dim: n, dr })
    }

    /// `∂ₖg_ij − Γˡₖᵢg_lj − Γˡₖⱼg_il`, largest component. Vanishes for the
    /// Levi-Civita connection.
    pub fn metric_compatibility_defect(&self, x: &[f64]) -> Result<f64> {
        let n = self.dim();
        let p = self.backend.partials(&MetricFn(self), x)?;
        let g = Matrix::from_vec(n, n, p.value.clone());
        let gamma = self.christoffel(x)?;
        let mut worst = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = p.d[k][i * n + j];
                    for l in 0..n {
                        s -= gamma.get(l, k, i) * g[(l, j)] + gamma.get(l, k, j) * g[(i, l)];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
        Ok(worst)
    }

    /// `g^{ij} aᵢ bⱼ`-style trace helper: `Σ g^{ij} f(i, j)`.
    pub(crate) fn trace<T: Scalar>(ginv: &Matrix<T>, f: impl Fn(usize, usize) -> T) -> T {
        let n = ginv.rows();
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s += ginv[(i, j)] * f(i, j);
            }
        }
        s
    }
}
