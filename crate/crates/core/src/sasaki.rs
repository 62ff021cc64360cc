//! The tangent bundle as a `2m`-dimensional chart with the Sasaki metric,
//! and the tension field of a general map between charts.
//!
//! This is an independent route to the tension of a vector field: `X` is
//! treated as the section `x ↦ (x, X(x))` of `TM`, its tension is computed
//! from the generic map formula with Christoffel symbols obtained
//! numerically from the Sasaki metric, and the result is split into
//! horizontal and vertical parts.

use crate::diff::Smooth;
use crate::error::{GeomError, Result};
use crate::field::VectorField;
use crate::geometry::{Chart, Geometry};
use crate::linalg::{sup_norm, Matrix};
use crate::scalar::Scalar;

/// `TM` in the induced coordinates `(x¹…xᵐ, u¹…uᵐ)`.
#[derive(Clone, Debug)]
pub struct TangentChart<C> {
    pub base: Geometry<C>,
}

impl<C: Chart> TangentChart<C> {
    pub fn new(base: Geometry<C>) -> Self {
        TangentChart { base }
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    fn split<'a, T>(&self, q: &'a [T]) -> Result<(&'a [T], &'a [T])> {
        let m = self.base_dim();
        if q.len() != 2 * m {
            return Err(GeomError::Dimension { expected: 2 * m, got: q.len() });
        }
        Ok(q.split_at(m))
    }

    /// `(Γu)ᵏᵢ = Γᵏᵢⱼuʲ` at `q = (x, u)`.
    fn connection_matrix<T: Scalar>(&self, x: &[T], u: &[T]) -> Result<Matrix<T>> {
        let m = self.base_dim();
        let gamma = self.base.christoffel(x)?;
        Ok(Matrix::from_fn(m, m, |k, i| {
            let mut s = T::zero();
            for (j, uj) in u.iter().enumerate() {
                s += gamma.get(k, i, j) * *uj;
            }
            s
        }))
    }

    /// Coordinates of the coordinate frame `{∂xⁱ, ∂uⁱ}` in the lift frame
    /// `{∂xⁱʰ, ∂xⁱᵛ}`: `∂xⁱ = (∂xⁱ)ʰ + Γᵏᵢⱼuʲ(∂xₖ)ᵛ` and `∂uⁱ = (∂xⁱ)ᵛ`.
    fn lift_frame<T: Scalar>(&self, q: &[T]) -> Result<Matrix<T>> {
        let (x, u) = self.split(q)?;
        let m = self.base_dim();
        let gu = self.connection_matrix(x, u)?;
        Ok(Matrix::from_fn(2 * m, 2 * m, |r, c| {
            match (r < m, c < m) {
                (true, true) => T::cst(if r == c { 1.0 } else { 0.0 }),
                (true, false) => T::zero(),
                (false, true) => gu[(r - m, c)],
                (false, false) => T::cst(if r == c { 1.0 } else { 0.0 }),
            }
        }))
    }

    /// Sasaki metric components: `Aᵀ·diag(g, g)·A` with `A` the lift frame.
    pub fn sasaki_metric<T: Scalar>(&self, q: &[T]) -> Result<Matrix<T>> {
        let (x, _) = self.split(q)?;
        let m = self.base_dim();
        let g = self.base.metric_at(x)?;
        let block = Matrix::from_fn(2 * m, 2 * m, |r, c| {
            if r < m && c < m {
                g[(r, c)]
            } else if r >= m && c >= m {
                g[(r - m, c - m)]
            } else {
                T::zero()
            }
        });
        let a = self.lift_frame(q)?;
        Ok(a.transpose().matmul(&block).matmul(&a))
    }

    /// Coordinates of the horizontal lift of `v` at `q`: `(v, −Γᵏᵢⱼvⁱuʲ)`.
    pub fn horizontal_lift(&self, q: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let (x, u) = self.split(q)?;
        let gu = self.connection_matrix(x, u)?;
        let mut out = v.to_vec();
        out.extend(gu.mul_vec(v).into_iter().map(|c| -c));
        Ok(out)
    }

    /// Coordinates of the vertical lift of `v`: `(0, v)`.
    pub fn vertical_lift(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        out.extend_from_slice(v);
        out
    }

    /// Splits a tangent vector `w = (a, b)` of `TM` at `q` as `w₁ʰ + w₂ᵛ`.
    pub fn lift_decompose(&self, q: &[f64], w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (x, u) = self.split(q)?;
        let m = self.base_dim();
        if w.len() != 2 * m {
            return Err(GeomError::Dimension { expected: 2 * m, got: w.len() });
        }
        let (a, b) = w.split_at(m);
        let gu = self.connection_matrix(x, u)?;
        let shift = gu.mul_vec(a);
        Ok((a.to_vec(), b.iter().zip(shift).map(|(bk, s)| bk + s).collect()))
    }
}

impl<C: Chart> Chart for TangentChart<C> {
    fn dim(&self) -> usize {
        2 * self.base_dim()
    }

    fn metric<T: Scalar>(&self, q: &[T]) -> Result<Matrix<T>> {
        self.sasaki_metric(q)
    }

    fn contains(&self, q: &[f64]) -> bool {
        let m = self.base_dim();
        q.len() == 2 * m && self.base.chart.contains(&q[..m]) && q[m..].iter().all(|v| v.is_finite())
    }

    fn name(&self) -> String {
        format!("T({})", self.base.chart.name())
    }
}

/// A smooth map between two charts, given in coordinates.
pub trait SmoothMap: Sync {
    fn source_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>;
}

/// A vector field seen as the section `x ↦ (x, X(x))` of `TM`.
pub struct Section<F>(pub F);

impl<F: VectorField> SmoothMap for Section<F> {
    fn source_dim(&self) -> usize {
        self.0.dim()
    }
    fn target_dim(&self) -> usize {
        2 * self.0.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let mut out = x.to_vec();
        out.extend(self.0.eval(x)?);
        Ok(out)
    }
}

struct MapFn<'a, M>(&'a M);

impl<M: SmoothMap> Smooth for MapFn<'_, M> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.0.eval(x)
    }
}

/// Flattened Jacobian `∂ᵢφᵞ`, row-major in `(i, γ)`.
struct MapJacFn<'a, S, M> {
    source: &'a Geometry<S>,
    map: &'a M,
}

impl<S: Chart, M: SmoothMap> Smooth for MapJacFn<'_, S, M> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let p = self.source.backend.partials(&MapFn(self.map), x)?;
        Ok(p.d.into_iter().flatten().collect())
    }
}

/// `τ(φ)ᵞ = gⁱʲ(∂ᵢ∂ⱼφᵞ − Γᵏᵢⱼ∂ₖφᵞ + Γ′ᵞ_αβ ∂ᵢφᵅ∂ⱼφᵝ)` in target coordinates,
/// with `Γ′` taken from the target chart at `φ(p)`.
pub fn map_tension<S: Chart, C: Chart, M: SmoothMap>(
    source: &Geometry<S>,
    target: &Geometry<C>,
    map: &M,
    p: &[f64],
) -> Result<Vec<f64>> {
    source.check_point(p)?;
    let m = source.dim();
    let k = target.dim();
    if map.source_dim() != m || map.target_dim() != k {
        return Err(GeomError::Dimension { expected: k, got: map.target_dim() });
    }
    let second = source.backend.partials(&MapJacFn { source, map }, p)?;
    let d1 = |i: usize, c: usize| second.value[i * k + c];
    let d2 = |i: usize, j: usize, c: usize| second.d[i][j * k + c];
    let image = map.eval(p)?;
    let gamma_t = target.christoffel(&image)?;
    let gamma_s = source.christoffel(p)?;
    let ginv = source.inverse_metric(p)?;
    Ok((0..k)
        .map(|c| {
            Geometry::<S>::trace(&ginv, |i, j| {
                let mut s = d2(i, j, c);
                for l in 0..m {
                    s -= gamma_s.get(l, i, j) * d1(l, c);
                }
                for a in 0..k {
                    for b in 0..k {
                        s += gamma_t.get(c, a, b) * d1(i, a) * d1(j, b);
                    }
                }
                s
            })
        })
        .collect())
}

/// Both routes to the tension of a vector field at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCheck {
    /// Horizontal and vertical parts of the generic map tension.
    pub oracle: (Vec<f64>, Vec<f64>),
    /// `(−S(X), −Δ̄X)` from the coordinate formulas.
    pub direct: (Vec<f64>, Vec<f64>),
    /// Sup-norm of the difference.
    pub residual: f64,
    /// Sup-norm of the direct tension, for relative comparisons.
    pub scale: f64,
}

impl DecompositionCheck {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale.max(1.0)
    }
}

/// Tension of `X: M → TM` through the Sasaki metric, decomposed at
/// `(p, X(p))` and compared with the direct formula.
pub fn verify_tension_decomposition<C: Chart + Clone, F: VectorField>(
    geo: &Geometry<C>,
    field: &F,
    p: &[f64],
) -> Result<DecompositionCheck> {
    let tc = TangentChart::new(geo.clone());
    let total = Geometry::with_backend(tc, geo.backend);
    let section = Section(field);
    let tau = map_tension(geo, &total, &section, p)?;
    let q = section.eval(p)?;
    let oracle = total.chart.lift_decompose(&q, &tau)?;
    let direct = geo.tension(field, p)?;
    let diff: Vec<f64> = oracle
        .0
        .iter()
        .chain(&oracle.1)
        .zip(direct.horizontal.iter().chain(&direct.vertical))
        .map(|(a, b)| a - b)
        .collect();
    let all: Vec<f64> = direct.horizontal.iter().chain(&direct.vertical).copied().collect();
    Ok(DecompositionCheck {
        residual: sup_norm(&diff),
        scale: sup_norm(&all),
        oracle,
        direct: (direct.horizontal, direct.vertical),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ConstantField;
    use crate::models::ModelChart;

    struct Square;
    impl SmoothMap for Square {
        fn source_dim(&self) -> usize {
            2
        }
        fn target_dim(&self) -> usize {
            1
        }
        fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
            Ok(vec![x[0] * x[0] + x[1] * x[1]])
        }
    }

    #[test]
    fn flat_sasaki_metric_is_identity() {
        let tc = TangentChart::new(Geometry::new(ModelChart::euclidean(2)));
        let g = tc.sasaki_metric(&[0.3, 1.0, -2.0, 5.0]).unwrap();
        assert_eq!(g.as_slice(), Matrix::<f64>::identity(4).as_slice());
    }

    #[test]
    fn zero_fiber_gives_block_diagonal() {
        let base = Geometry::new(ModelChart::nil3());
        let tc = TangentChart::new(base.clone());
        let x = [0.7, -0.2, 1.1];
        let g = base.metric_at(&x).unwrap();
        let q = [x[0], x[1], x[2], 0.0, 0.0, 0.0];
        let gs = tc.sasaki_metric(&q).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let expected = match (r < 3, c < 3) {
                    (true, true) => g[(r, c)],
                    (false, false) => g[(r - 3, c - 3)],
                    _ => 0.0,
                };
                assert!((gs[(r, c)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn horizontal_lift_decomposes_to_itself() {
        let tc = TangentChart::new(Geometry::new(ModelChart::hyperbolic(2, 1.5)));
        let q = [0.2, 0.9, 1.0, -0.4];
        let v = [0.3, -1.2];
        let (h, w) = tc.lift_decompose(&q, &tc.horizontal_lift(&q, &v).unwrap()).unwrap();
        assert!(h.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!(w.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn tension_of_scalar_maps() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let line = Geometry::new(ModelChart::euclidean(1));
        let t = map_tension(&geo, &line, &Square, &[0.4, -0.3]).unwrap();
        assert!((t[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_field_has_zero_tension_both_ways() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let check = verify_tension_decomposition(&geo, &ConstantField(vec![1.0, -2.0]), &[0.1, 0.2]).unwrap();
        assert!(check.residual < 1e-12 && check.scale == 0.0);
    }

    #[test]
    fn hyperbolic_v_decomposition() {
        let (n, c) = (2usize, 1.0);
        let geo = Geometry::new(ModelChart::hyperbolic(n, c));
        struct V;
        impl VectorField for V {
            fn dim(&self) -> usize {
                2
            }
            fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
                Ok(vec![T::zero(), x[1]])
            }
        }
        let p = [0.3, 1.2];
        let check = verify_tension_decomposition(&geo, &V, &p).unwrap();
        assert!(check.residual < 1e-6, "{check:?}");
        // horizontal part c³(n−1)V, vertical part −(n−1)c²V
        assert!((check.oracle.0[1] - p[1]).abs() < 1e-6);
        assert!((check.oracle.1[1] + p[1]).abs() < 1e-6);
    }
}
