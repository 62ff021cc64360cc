//! Differentiation strategies.
//!
//! Anything that must be differentiated implements [`Smooth`]: a map from
//! chart coordinates to a flat list of components, evaluable at any
//! [`Scalar`]. The backend then produces all first partials at a point,
//! where the point itself may already carry dual parts from an outer
//! differentiation.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::{Dual, Scalar};

pub trait Smooth: Sync {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>;
}

/// Value and coordinate partials; `d[i][c]` is `∂ᵢ` of component `c`.
#[derive(Clone, Debug)]
pub struct Partials<T> {
    pub value: Vec<T>,
    pub d: Vec<Vec<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffBackend {
    /// Nested forward-mode dual numbers, at most `max_depth` layers deep.
    Dual { max_depth: usize },
    /// Central differences with step `rel_step · max(1, |xᵢ|)`.
    FiniteDifference { rel_step: f64 },
}

impl Default for DiffBackend {
    fn default() -> Self {
        DiffBackend::Dual { max_depth: 4 }
    }
}

impl DiffBackend {
    pub fn finite_difference() -> Self {
        DiffBackend::FiniteDifference { rel_step: 1e-4 }
    }

    pub fn label(&self) -> String {
        match self {
            DiffBackend::Dual { max_depth } => format!("dual(depth={max_depth})"),
            DiffBackend::FiniteDifference { rel_step } => format!("fd(step={rel_step:e})"),
        }
    }

    pub fn partials<T: Scalar, F: Smooth + ?Sized>(&self, f: &F, x: &[T]) -> Result<Partials<T>> {
        match *self {
            DiffBackend::Dual { max_depth } => {
                let required = T::DEPTH + 1;
                if required > max_depth {
                    return Err(GeomError::Capability { required, max: max_depth });
                }
                let mut value = Vec::new();
                let mut d = Vec::with_capacity(x.len());
                for i in 0..x.len() {
                    let xd: Vec<Dual<T>> = x
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| if i == j { Dual::variable(v) } else { Dual::constant(v) })
                        .collect();
                    let out = f.eval(&xd)?;
                    if i == 0 {
                        value = out.iter().map(|c| c.re).collect();
                    }
                    d.push(out.into_iter().map(|c| c.eps).collect());
                }
                if x.is_empty() {
                    value = f.eval(x)?;
                }
                Ok(Partials { value, d })
            }
            DiffBackend::FiniteDifference { rel_step } => {
                let value = f.eval(x)?;
                let mut d = Vec::with_capacity(x.len());
                for i in 0..x.len() {
                    let h = rel_step * x[i].re().abs().max(1.0);
                    let mut xp = x.to_vec();
                    let mut xm = x.to_vec();
                    xp[i] = xp[i] + h;
                    xm[i] = xm[i] - h;
                    let fp = f.eval(&xp)?;
                    let fm = f.eval(&xm)?;
                    d.push(fp.into_iter().zip(fm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
                }
                Ok(Partials { value, d })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Poly;
    impl Smooth for Poly {
        fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
            Ok(vec![x[0] * x[0] + x[1] * x[1], x[0] * x[1].sin()])
        }
    }

    #[test]
    fn backends_agree_on_first_partials() {
        let p = [1.0, 2.0];
        let a = DiffBackend::default().partials(&Poly, &p).unwrap();
        let b = DiffBackend::finite_difference().partials(&Poly, &p).unwrap();
        assert_eq!(a.d[0][0], 2.0);
        assert_eq!(a.d[1][0], 4.0);
        for i in 0..2 {
            for c in 0..2 {
                assert!((a.d[i][c] - b.d[i][c]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn depth_limit_is_enforced() {
        let backend = DiffBackend::Dual { max_depth: 1 };
        let p = [Dual::variable(1.0), Dual::constant(2.0)];
        let err = backend.partials(&Poly, &p).unwrap_err();
        assert_eq!(err, GeomError::Capability { required: 2, max: 1 });
    }
}
