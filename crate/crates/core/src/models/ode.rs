//! The scalar ODEs that the model fields reduce to, and a fixed-step RK4
//! integrator for the transformed hyperbolic equation.
//!
//! With `D = y d/dy` and `L = −D² + (n−1)D + (n−1)`, the hyperbolic
//! harmonic equation is `Lf = 0` and the linear part of the biharmonic one
//! is `L²f`; substituting `y = eᵗ` turns `D` into `d/dt`.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::{derivatives4, Dual};

/// Scalar carrying derivatives up to order four.
pub type Jet = Dual<Dual<Dual<Dual<f64>>>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OdeId {
    /// `f'''' − f'' + ¼f`
    #[serde(rename = "heisenberg")]
    Heisenberg,
    /// `y²f'' − (n−2)yf' − (n−1)f`
    #[serde(rename = "hyperbolic-harmonic")]
    HyperbolicHarmonic,
    /// `y⁴f'''' + (8−2n)y³f''' + (n−8)(n−2)y²f'' + (n−2)(3n−4)yf' + (n−1)²f + 2c²(n−1)²f³`
    #[serde(rename = "hyperbolic-biharmonic")]
    HyperbolicBiharmonic,
    /// `v'''' + (2−2n)v''' + (n−1)(n−3)v'' + 2(n−1)²v' + (n−1)²v + 2c²(n−1)²v³`
    #[serde(rename = "hyperbolic-transformed")]
    HyperbolicTransformed,
}

impl OdeId {
    pub const ALL: [OdeId; 4] = [
        OdeId::Heisenberg,
        OdeId::HyperbolicHarmonic,
        OdeId::HyperbolicBiharmonic,
        OdeId::HyperbolicTransformed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OdeId::Heisenberg => "heisenberg",
            OdeId::HyperbolicHarmonic => "hyperbolic-harmonic",
            OdeId::HyperbolicBiharmonic => "hyperbolic-biharmonic",
            OdeId::HyperbolicTransformed => "hyperbolic-transformed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        OdeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| GeomError::UnknownId(s.to_string()))
    }

    /// Whether the independent variable must be positive.
    pub fn needs_positive_argument(&self) -> bool {
        matches!(self, OdeId::HyperbolicHarmonic | OdeId::HyperbolicBiharmonic)
    }
}

/// Left side minus right side of the named equation, from the values
/// `d = [f, f', f'', f''', f'''']` at `t`.
pub fn residual_from_derivatives(id: OdeId, t: f64, d: [f64; 5], n: usize, c: f64) -> Result<f64> {
    if id.needs_positive_argument() && !(t > 0.0) {
        return Err(GeomError::OutsideDomain { point: vec![t] });
    }
    let k = n as f64 - 1.0;
    let nf = n as f64;
    let [f, f1, f2, f3, f4] = d;
    Ok(match id {
        OdeId::Heisenberg => f4 - f2 + 0.25 * f,
        OdeId::HyperbolicHarmonic => t * t * f2 - (nf - 2.0) * t * f1 - k * f,
        OdeId::HyperbolicBiharmonic => {
            t.powi(4) * f4
                + (8.0 - 2.0 * nf) * t.powi(3) * f3
                + (nf - 8.0) * (nf - 2.0) * t * t * f2
                + (nf - 2.0) * (3.0 * nf - 4.0) * t * f1
                + k * k * f
                + 2.0 * c * c * k * k * f.powi(3)
        }
        OdeId::HyperbolicTransformed => {
            f4 + (2.0 - 2.0 * nf) * f3 + k * (nf - 3.0) * f2 + 2.0 * k * k * f1 + k * k * f + 2.0 * c * c * k * k * f.powi(3)
        }
    })
}

/// Residual of the named equation for `f`, differentiated exactly.
pub fn ode_residual<F>(id: OdeId, f: F, t: f64, n: usize, c: f64) -> Result<f64>
where
    F: Fn(Jet) -> Jet,
{
    if id.needs_positive_argument() && !(t > 0.0) {
        return Err(GeomError::OutsideDomain { point: vec![t] });
    }
    residual_from_derivatives(id, t, derivatives4(f, t), n, c)
}

/// Roots `r₋ < r₊` of `r² − (n−1)r − (n−1) = 0`.
pub fn euler_exponents(n: usize) -> (f64, f64) {
    let k = n as f64 - 1.0;
    let disc = (k * (k + 4.0)).sqrt();
    ((k - disc) / 2.0, (k + disc) / 2.0)
}

/// The transformed hyperbolic equation in explicit form
/// `v'''' = F(v, v', v'', v''')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeSpec {
    pub n: usize,
    pub c: f64,
}

impl OdeSpec {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 || !(c > 0.0) || !c.is_finite() {
            return Err(GeomError::Degenerate("need n >= 2 and c > 0".into()));
        }
        Ok(OdeSpec { n, c })
    }

    /// `(v, v', v'', v''') ↦ (v', v'', v''', v'''')`.
    pub fn rhs(&self, s: &[f64; 4]) -> [f64; 4] {
        let k = self.n as f64 - 1.0;
        let nf = self.n as f64;
        let [v, v1, v2, v3] = *s;
        let v4 = -((2.0 - 2.0 * nf) * v3
            + k * (nf - 3.0) * v2
            + 2.0 * k * k * v1
            + k * k * v
            + 2.0 * self.c * self.c * k * k * v * v * v);
        [v1, v2, v3, v4]
    }

    fn rk4(&self, s: &[f64; 4], h: f64) -> [f64; 4] {
        let add = |a: &[f64; 4], b: &[f64; 4], w: f64| std::array::from_fn::<f64, 4, _>(|i| a[i] + w * b[i]);
        let k1 = self.rhs(s);
        let k2 = self.rhs(&add(s, &k1, h / 2.0));
        let k3 = self.rhs(&add(s, &k2, h / 2.0));
        let k4 = self.rhs(&add(s, &k3, h));
        std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

/// `|v|` beyond which the solution is declared to have escaped.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

/// Relative disagreement between one step and two half steps beyond which
/// the step is considered unresolvable.
const HALVING_DIVERGENCE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowUpReason {
    Threshold,
    StepHalvingDiverged,
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowUp {
    /// Time of the last step taken.
    pub t_star: f64,
    pub reason: BlowUpReason,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<[f64; 4]>,
    pub blow_up: Option<BlowUp>,
    /// Largest relative disagreement seen between full and halved steps.
    pub max_halving_discrepancy: f64,
}

impl Trajectory {
    pub fn max_abs_v(&self) -> f64 {
        self.states.iter().fold(0.0, |m, s| m.max(s[0].abs()))
    }
}

/// Classical RK4 with step `h` over `span`. Each step is also taken as two
/// half steps; the halved result is kept and their disagreement monitors
/// resolution. Integration stops at the first time `|v|` exceeds the
/// threshold, the halving check diverges, or the state stops being finite.
pub fn integrate_local(spec: &OdeSpec, init: [f64; 4], span: (f64, f64), step: f64) -> Result<Trajectory> {
    let (t0, t1) = span;
    if !(step > 0.0) || !step.is_finite() {
        return Err(GeomError::Degenerate("step must be positive".into()));
    }
    if !(t1 > t0) {
        return Err(GeomError::Degenerate("span must be increasing".into()));
    }
    if init.iter().any(|v| !v.is_finite()) || init[0].abs() > BLOW_UP_THRESHOLD {
        return Err(GeomError::Degenerate("initial state is already blown up".into()));
    }
    let steps = ((t1 - t0) / step).ceil() as usize;
    let mut traj = Trajectory {
        t: vec![t0],
        states: vec![init],
        blow_up: None,
        max_halving_discrepancy: 0.0,
    };
    let mut s = init;
    for k in 0..steps {
        let t = t0 + k as f64 * step;
        let h = step.min(t1 - t);
        let full = spec.rk4(&s, h);
        let half = spec.rk4(&spec.rk4(&s, h / 2.0), h / 2.0);
        let scale = half.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let disc = full.iter().zip(&half).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / scale;
        let reason = if half.iter().any(|v| !v.is_finite()) {
            Some(BlowUpReason::NonFinite)
        } else if half[0].abs() > BLOW_UP_THRESHOLD {
            Some(BlowUpReason::Threshold)
        } else if disc > HALVING_DIVERGENCE {
            Some(BlowUpReason::StepHalvingDiverged)
        } else {
            None
        };
        if let Some(reason) = reason {
            if k == 0 {
                return Err(GeomError::Degenerate("solution escapes within the first step".into()));
            }
            traj.blow_up = Some(BlowUp { t_star: t + h, reason });
            return Ok(traj);
        }
        traj.max_halving_discrepancy = traj.max_halving_discrepancy.max(disc);
        s = half;
        traj.t.push(t + h);
        traj.states.push(s);
    }
    Ok(traj)
}
