//! Vector fields, scalar fields and one-forms on a chart, and the first- and
//! second-order operators acting on them.
//!
//! Signs: the Laplace–Beltrami operator and the rough Laplacian are both the
//! positive operators, `Δf = −gⁱʲ(∂ᵢ∂ⱼf − Γᵏᵢⱼ∂ₖf)` and `Δ̄X = −Tr ∇²X`. On
//! flat `ℝ²`, `Δ(x² + y²) = −4`.

use crate::diff::Smooth;
use crate::error::Result;
use crate::geometry::{Chart, Geometry};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub trait VectorField: Sync {
    fn dim(&self) -> usize;
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>;
    fn label(&self) -> String {
        "vector field".to_string()
    }
}

pub trait ScalarField: Sync {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<T>;
}

pub trait OneForm: Sync {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>;
}

impl<F: VectorField> VectorField for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        (**self).eval(x)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<F: ScalarField> ScalarField for &F {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        (**self).eval(x)
    }
}

struct FieldFn<'a, F>(&'a F);
struct ScalarFn<'a, F>(&'a F);
struct FormFn<'a, F>(&'a F);

impl<F: VectorField> Smooth for FieldFn<'_, F> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.0.eval(x)
    }
}

impl<F: ScalarField> Smooth for ScalarFn<'_, F> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(vec![self.0.eval(x)?])
    }
}

impl<F: OneForm> Smooth for FormFn<'_, F> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.0.eval(x)
    }
}

/// Flattened `(∇ᵢX)ᵏ`, row-major in `(k, i)`.
struct CovJacFn<'a, C, F> {
    geo: &'a Geometry<C>,
    field: &'a F,
}

impl<C: Chart, F: VectorField> Smooth for CovJacFn<'_, C, F> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.geo.covariant_jacobian(self.field, x)?.into_vec())
    }
}

/// Coordinate differential `∂ᵢf` of a scalar field.
struct DifferentialFn<'a, C, F> {
    geo: &'a Geometry<C>,
    f: &'a F,
}

impl<C: Chart, F: ScalarField> Smooth for DifferentialFn<'_, C, F> {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let p = self.geo.backend.partials(&ScalarFn(self.f), x)?;
        Ok(p.d.into_iter().map(|d| d[0]).collect())
    }
}

impl<C: Chart> Geometry<C> {
    pub(crate) fn field_value<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Vec<T>> {
        self.check_point(x)?;
        let v = field.eval(x)?;
        if v.len() != self.dim() {
            return Err(crate::error::GeomError::Dimension { expected: self.dim(), got: v.len() });
        }
        Ok(v)
    }

    /// `N[k][i] = (∇_∂ᵢ X)ᵏ = ∂ᵢXᵏ + ΓᵏᵢⱼXʲ`.
    pub fn covariant_jacobian<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Matrix<T>> {
        self.check_point(x)?;
        let n = self.dim();
        let p = self.backend.partials(&FieldFn(field), x)?;
        if p.value.len() != n {
            return Err(crate::error::GeomError::Dimension { expected: n, got: p.value.len() });
        }
        let gamma = self.christoffel(x)?;
        let mut jac = Matrix::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                let mut s = p.d[i][k];
                for j in 0..n {
                    s += gamma.get(k, i, j) * p.value[j];
                }
                jac[(k, i)] = s;
            }
        }
        Ok(jac)
    }

    /// `∇_d X` for a direction vector `d` at `x`.
    pub fn covariant_derivative<T: Scalar, F: VectorField>(&self, field: &F, direction: &[T], x: &[T]) -> Result<Vec<T>> {
        Ok(self.covariant_jacobian(field, x)?.mul_vec(direction))
    }

    /// `∇_∂ᵢ X`.
    pub fn covariant_derivative_coord<T: Scalar, F: VectorField>(&self, field: &F, i: usize, x: &[T]) -> Result<Vec<T>> {
        let jac = self.covariant_jacobian(field, x)?;
        Ok((0..self.dim()).map(|k| jac[(k, i)]).collect())
    }

    /// `∇_D X` for a direction field `D`.
    pub fn covariant_derivative_along<T: Scalar, F: VectorField, D: VectorField>(
        &self,
        field: &F,
        direction: &D,
        x: &[T],
    ) -> Result<Vec<T>> {
        let d = self.field_value(direction, x)?;
        self.covariant_derivative(field, &d, x)
    }

    /// Second covariant derivative `h[i][k][j] = (∇²X)(∂ᵢ, ∂ⱼ)ᵏ`, returned as
    /// one `(k, j)` matrix per `i`.
    pub fn second_covariant<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Vec<Matrix<T>>> {
        let n = self.dim();
        let p = self.backend.partials(&CovJacFn { geo: self, field }, x)?;
        let jac = Matrix::from_vec(n, n, p.value);
        let gamma = self.christoffel(x)?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut h = Matrix::zeros(n, n);
            for k in 0..n {
                for j in 0..n {
                    let mut s = p.d[i][k * n + j];
                    for l in 0..n {
                        s += gamma.get(k, i, l) * jac[(l, j)] - gamma.get(l, i, j) * jac[(k, l)];
                    }
                    h[(k, j)] = s;
                }
            }
            out.push(h);
        }
        Ok(out)
    }

    /// Rough Laplacian `Δ̄X = −gⁱʲ(∇²X)(∂ᵢ, ∂ⱼ)`.
    pub fn rough_laplacian<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        let hess = self.second_covariant(field, x)?;
        let ginv = self.inverse_metric(x)?;
        Ok((0..n).map(|k| -Self::trace(&ginv, |i, j| hess[i][(k, j)])).collect())
    }

    /// `S(X) = gⁱʲ R(∇_∂ᵢX, X)∂ⱼ`.
    pub fn s_tensor<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        let xv = self.field_value(field, x)?;
        let jac = self.covariant_jacobian(field, x)?;
        let curv = self.riemann(x)?;
        let ginv = self.inverse_metric(x)?;
        let mut out = vec![T::zero(); n];
        for (l, o) in out.iter_mut().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    let mut tr = T::zero();
                    for i in 0..n {
                        for j in 0..n {
                            tr += ginv[(i, j)] * jac[(a, i)] * curv.get(l, a, b, j);
                        }
                    }
                    *o += tr * xv[b];
                }
            }
        }
        Ok(out)
    }

    /// `Δf = −gⁱʲ(∂ᵢ∂ⱼf − Γᵏᵢⱼ∂ₖf)`.
    pub fn laplace_beltrami<T: Scalar, F: ScalarField>(&self, f: &F, x: &[T]) -> Result<T> {
        self.check_point(x)?;
        let n = self.dim();
        let p = self.backend.partials(&DifferentialFn { geo: self, f }, x)?;
        let gamma = self.christoffel(x)?;
        let ginv = self.inverse_metric(x)?;
        Ok(-Self::trace(&ginv, |i, j| {
            let mut s = p.d[i][j];
            for k in 0..n {
                s -= gamma.get(k, i, j) * p.value[k];
            }
            s
        }))
    }

    /// `(grad f)ⁱ = gⁱʲ∂ⱼf`.
    pub fn gradient<T: Scalar, F: ScalarField>(&self, f: &F, x: &[T]) -> Result<Vec<T>> {
        self.check_point(x)?;
        let p = self.backend.partials(&ScalarFn(f), x)?;
        let df: Vec<T> = p.d.into_iter().map(|d| d[0]).collect();
        Ok(self.inverse_metric(x)?.mul_vec(&df))
    }

    /// `div X = ∂ᵢXⁱ + ΓⁱᵢₖXᵏ`.
    pub fn divergence_field<T: Scalar, F: VectorField>(&self, field: &F, x: &[T]) -> Result<T> {
        let jac = self.covariant_jacobian(field, x)?;
        let mut s = T::zero();
        for i in 0..self.dim() {
            s += jac[(i, i)];
        }
        Ok(s)
    }

    /// `div ω = gⁱʲ(∂ᵢωⱼ − Γᵏᵢⱼωₖ)`.
    pub fn divergence_oneform<T: Scalar, W: OneForm>(&self, form: &W, x: &[T]) -> Result<T> {
        self.check_point(x)?;
        let n = self.dim();
        let p = self.backend.partials(&FormFn(form), x)?;
        let gamma = self.christoffel(x)?;
        let ginv = self.inverse_metric(x)?;
        Ok(Self::trace(&ginv, |i, j| {
            let mut s = p.d[i][j];
            for k in 0..n {
                s -= gamma.get(k, i, j) * p.value[k];
            }
            s
        }))
    }

    /// `θ_XY(Z) = g(X, ∇_Z Y)` as a one-form.
    pub fn theta<'g, X: VectorField, Y: VectorField>(&'g self, x: X, y: Y) -> Theta<'g, C, X, Y> {
        Theta { geo: self, x, y }
    }

    /// `Δ̄X` as a vector field, so operators compose.
    pub fn rough_laplacian_field<F: VectorField>(&self, field: F) -> RoughLaplacianField<'_, C, F> {
        RoughLaplacianField { geo: self, field }
    }

    /// `S(X)` as a vector field.
    pub fn s_tensor_field<F: VectorField>(&self, field: F) -> STensorField<'_, C, F> {
        STensorField { geo: self, field }
    }
}

pub struct Theta<'g, C, X, Y> {
    geo: &'g Geometry<C>,
    x: X,
    y: Y,
}

impl<C: Chart, X: VectorField, Y: VectorField> OneForm for Theta<'_, C, X, Y> {
    fn eval<T: Scalar>(&self, p: &[T]) -> Result<Vec<T>> {
        let g = self.geo.metric_at(p)?;
        let xv = self.x.eval(p)?;
        let gx = g.mul_vec(&xv);
        let jac = self.geo.covariant_jacobian(&self.y, p)?;
        let n = self.geo.dim();
        Ok((0..n)
            .map(|i| {
                let mut s = T::zero();
                for l in 0..n {
                    s += gx[l] * jac[(l, i)];
                }
                s
            })
            .collect())
    }
}

pub struct RoughLaplacianField<'g, C, F> {
    geo: &'g Geometry<C>,
    field: F,
}

impl<C: Chart, F: VectorField> VectorField for RoughLaplacianField<'_, C, F> {
    fn dim(&self) -> usize {
        self.geo.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.geo.rough_laplacian(&self.field, x)
    }
    fn label(&self) -> String {
        format!("rough_laplacian({})", self.field.label())
    }
}

pub struct STensorField<'g, C, F> {
    geo: &'g Geometry<C>,
    field: F,
}

impl<C: Chart, F: VectorField> VectorField for STensorField<'_, C, F> {
    fn dim(&self) -> usize {
        self.geo.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.geo.s_tensor(&self.field, x)
    }
    fn label(&self) -> String {
        format!("S({})", self.field.label())
    }
}

/// `f·X`.
pub struct Scaled<S, F> {
    pub scale: S,
    pub field: F,
}

impl<S: ScalarField, F: VectorField> VectorField for Scaled<S, F> {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let f = self.scale.eval(x)?;
        Ok(self.field.eval(x)?.into_iter().map(|v| v * f).collect())
    }
    fn label(&self) -> String {
        format!("f*{}", self.field.label())
    }
}

/// `X + t·V`.
pub struct Perturbed<F, V> {
    pub base: F,
    pub direction: V,
    pub t: f64,
}

impl<F: VectorField, V: VectorField> VectorField for Perturbed<F, V> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let a = self.base.eval(x)?;
        if self.t == 0.0 {
            return Ok(a);
        }
        let b = self.direction.eval(x)?;
        Ok(a.into_iter().zip(b).map(|(u, v)| u + v * self.t).collect())
    }
    fn label(&self) -> String {
        format!("{} + {}*{}", self.base.label(), self.t, self.direction.label())
    }
}

/// Field with constant coordinate components.
#[derive(Clone, Debug)]
pub struct ConstantField(pub Vec<f64>);

impl VectorField for ConstantField {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<T: Scalar>(&self, _x: &[T]) -> Result<Vec<T>> {
        Ok(self.0.iter().map(|&v| T::cst(v)).collect())
    }
    fn label(&self) -> String {
        format!("const{:?}", self.0)
    }
}

/// The zero field of a given dimension.
pub fn zero_field(dim: usize) -> ConstantField {
    ConstantField(vec![0.0; dim])
}

/// `g(X, Y)` as a scalar field.
pub struct Pairing<'g, C, X, Y> {
    pub geo: &'g Geometry<C>,
    pub x: X,
    pub y: Y,
}

impl<C: Chart, X: VectorField, Y: VectorField> ScalarField for Pairing<'_, C, X, Y> {
    fn eval<T: Scalar>(&self, p: &[T]) -> Result<T> {
        let u = self.x.eval(p)?;
        let v = self.y.eval(p)?;
        self.geo.inner(p, &u, &v)
    }
}
