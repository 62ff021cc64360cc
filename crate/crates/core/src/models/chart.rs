use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::field::VectorField;
use crate::geometry::Chart;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// The built-in manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ModelChart {
    /// Flat `ℝᵐ`.
    Euclidean { dim: usize },
    /// The Heisenberg group with `(dx)² + (dy − x dz)² + (dz)²`, coordinates `(x, y, z)`.
    Nil3,
    /// Upper half-space `y > 0` with `(cy)⁻²(Σ dxᵢ² + dy²)`; `y` is the last coordinate.
    Hyperbolic { n: usize, c: f64 },
}

impl ModelChart {
    pub fn euclidean(dim: usize) -> Self {
        ModelChart::Euclidean { dim }
    }

    pub fn nil3() -> Self {
        ModelChart::Nil3
    }

    pub fn hyperbolic(n: usize, c: f64) -> Self {
        ModelChart::Hyperbolic { n, c }
    }

    /// Builds a chart from its stable id and numeric parameters.
    pub fn from_id(id: &str, params: &[f64]) -> Result<Self> {
        let arity = |expected: &str| GeomError::Arity {
            id: id.to_string(),
            expected: expected.to_string(),
            got: params.len(),
        };
        let chart = match id {
            "euclidean" => match params {
                [m] if *m >= 1.0 && m.fract() == 0.0 => ModelChart::Euclidean { dim: *m as usize },
                [_] => return Err(GeomError::Degenerate("euclidean dimension must be a positive integer".into())),
                _ => return Err(arity("1 (dimension)")),
            },
            "nil3" => match params {
                [] => ModelChart::Nil3,
                _ => return Err(arity("0")),
            },
            "hyperbolic" => match params {
                [n, c] => {
                    if *n < 2.0 || n.fract() != 0.0 {
                        return Err(GeomError::Degenerate("hyperbolic dimension must be an integer >= 2".into()));
                    }
                    if !(*c > 0.0) {
                        return Err(GeomError::Degenerate("hyperbolic curvature scale c must be positive".into()));
                    }
                    ModelChart::Hyperbolic { n: *n as usize, c: *c }
                }
                _ => return Err(arity("2 (n, c)")),
            },
            other => return Err(GeomError::UnknownId(other.to_string())),
        };
        Ok(chart)
    }

    pub fn id(&self) -> &'static str {
        match self {
            ModelChart::Euclidean { .. } => "euclidean",
            ModelChart::Nil3 => "nil3",
            ModelChart::Hyperbolic { .. } => "hyperbolic",
        }
    }

    /// Left-invariant orthonormal frame `e₁ = ∂x, e₂ = ∂y, e₃ = ∂z + x∂y` of Nil₃.
    pub fn nil3_frame<T: Scalar>(x: &[T]) -> [Vec<T>; 3] {
        let (o, z) = (T::one(), T::zero());
        [vec![o, z, z], vec![z, o, z], vec![z, x[0], o]]
    }

    /// Orthonormal frame `(E₁, …, Eₙ₋₁, V)` of the half-space model with
    /// `Eᵢ = cy∂xᵢ` and `V = cy∂y`.
    pub fn hyperbolic_frame<T: Scalar>(n: usize, c: f64, x: &[T]) -> Vec<Vec<T>> {
        let cy = x[n - 1] * c;
        (0..n)
            .map(|a| {
                let mut e = vec![T::zero(); n];
                e[a] = cy;
                e
            })
            .collect()
    }

    /// A point well inside the chart, used as a default sample location.
    pub fn base_point(&self) -> Vec<f64> {
        match *self {
            ModelChart::Euclidean { dim } => vec![0.0; dim],
            ModelChart::Nil3 => vec![0.0; 3],
            ModelChart::Hyperbolic { n, .. } => {
                let mut p = vec![0.0; n];
                p[n - 1] = 1.0;
                p
            }
        }
    }
}

/// One vector of the orthonormal frame of Nil₃ or of the half-space model,
/// as a vector field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameVector {
    pub chart: ModelChart,
    pub index: usize,
}

impl VectorField for FrameVector {
    fn dim(&self) -> usize {
        self.chart.dim()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let frame = match self.chart {
            ModelChart::Nil3 => ModelChart::nil3_frame(x).to_vec(),
            ModelChart::Hyperbolic { n, c } => ModelChart::hyperbolic_frame(n, c, x),
            ModelChart::Euclidean { dim } => (0..dim)
                .map(|a| (0..dim).map(|b| T::cst(if a == b { 1.0 } else { 0.0 })).collect())
                .collect(),
        };
        frame.into_iter().nth(self.index).ok_or(GeomError::Dimension { expected: self.chart.dim(), got: self.index + 1 })
    }
    fn label(&self) -> String {
        format!("frame[{}]", self.index)
    }
}

impl Chart for ModelChart {
    fn dim(&self) -> usize {
        match *self {
            ModelChart::Euclidean { dim } => dim,
            ModelChart::Nil3 => 3,
            ModelChart::Hyperbolic { n, .. } => n,
        }
    }

    fn metric<T: Scalar>(&self, x: &[T]) -> Result<Matrix<T>> {
        match *self {
            ModelChart::Euclidean { dim } => Ok(Matrix::identity(dim)),
            ModelChart::Nil3 => {
                let (o, z) = (T::one(), T::zero());
                let a = x[0];
                Ok(Matrix::from_rows(vec![
                    vec![o, z, z],
                    vec![z, o, -a],
                    vec![z, -a, a * a + 1.0],
                ]))
            }
            ModelChart::Hyperbolic { n, c } => {
                let cy = x[n - 1] * c;
                let w = (cy * cy).recip();
                let mut g = Matrix::zeros(n, n);
                for i in 0..n {
                    g[(i, i)] = w;
                }
                Ok(g)
            }
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        if x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match *self {
            ModelChart::Hyperbolic { n, .. } => x[n - 1] > 0.0,
            _ => true,
        }
    }

    fn name(&self) -> String {
        match *self {
            ModelChart::Euclidean { dim } => format!("euclidean({dim})"),
            ModelChart::Nil3 => "nil3".to_string(),
            ModelChart::Hyperbolic { n, c } => format!("hyperbolic({n},{c})"),
        }
    }
}
