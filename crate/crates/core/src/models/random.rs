//! Seeded random smooth fields built from low-degree polynomials and
//! sinusoids, used by the identity and oracle suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{ScalarField, VectorField};
use crate::scalar::Scalar;

/// `a₀ + Σ aᵢxᵢ + Σ bᵢⱼxᵢxⱼ + Σ cₖ sin(wₖ·x + φₖ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTrig {
    constant: f64,
    linear: Vec<f64>,
    quadratic: Vec<Vec<f64>>,
    waves: Vec<(f64, Vec<f64>, f64)>,
}

impl PolyTrig {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize) -> Self {
        let mut u = |s: f64| rng.gen_range(-s..s);
        let constant = u(1.0);
        let linear = (0..dim).map(|_| u(1.0)).collect();
        let quadratic = (0..dim).map(|_| (0..dim).map(|_| u(0.5)).collect()).collect();
        let waves = (0..2)
            .map(|_| (u(1.0), (0..dim).map(|_| u(1.5)).collect(), u(3.0)))
            .collect();
        PolyTrig { constant, linear, quadratic, waves }
    }

    pub fn value<T: Scalar>(&self, x: &[T]) -> T {
        let mut s = T::cst(self.constant);
        for (i, a) in self.linear.iter().enumerate() {
            s += x[i] * *a;
        }
        for (i, row) in self.quadratic.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                s += x[i] * x[j] * *b;
            }
        }
        for (amp, w, phase) in &self.waves {
            let mut arg = T::cst(*phase);
            for (i, wi) in w.iter().enumerate() {
                arg += x[i] * *wi;
            }
            s += arg.sin() * *amp;
        }
        s
    }
}

impl ScalarField for PolyTrig {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        Ok(self.value(x))
    }
}

/// A vector field with independent [`PolyTrig`] components.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTrigField {
    components: Vec<PolyTrig>,
}

impl PolyTrigField {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize) -> Self {
        PolyTrigField { components: (0..dim).map(|_| PolyTrig::random(rng, dim)).collect() }
    }
}

impl VectorField for PolyTrigField {
    fn dim(&self) -> usize {
        self.components.len()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.components.iter().map(|c| c.value(x)).collect())
    }
    fn label(&self) -> String {
        "poly-trig".into()
    }
}

/// Uniform point in the box `[lower, upper]`.
pub fn random_point(rng: &mut ChaCha8Rng, lower: &[f64], upper: &[f64]) -> Vec<f64> {
    lower.iter().zip(upper).map(|(a, b)| rng.gen_range(*a..*b)).collect()
}
