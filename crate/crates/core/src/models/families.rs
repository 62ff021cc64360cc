//! Named vector-field families on the model charts.
//!
//! | id               | chart        | params                                   |
//! |------------------|--------------|------------------------------------------|
//! | `r2-biharmonic`  | euclidean(2) | `A B C D a b β` (both components) or 14  |
//! | `r2-xu-plus-v`   | euclidean(2) | expressions `u`, `v`                     |
//! | `nil3-e1`        | nil3         | `c1 c2 c3 c4`                            |
//! | `nil3-e3`        | nil3         | `c2 c4`                                  |
//! | `hyperbolic-fV`  | hyperbolic   | `c1 c2`                                  |

use crate::error::{GeomError, Result};
use crate::expr::ExprScalar;
use crate::field::{ScalarField, VectorField};
use crate::models::chart::ModelChart;
use crate::models::ode::euler_exponents;
use crate::scalar::Scalar;

pub const FAMILY_IDS: [&str; 5] = ["r2-biharmonic", "r2-xu-plus-v", "nil3-e1", "nil3-e3", "hyperbolic-fV"];

/// Parameters `A, B, C, D, a, b, β` of the separable biharmonic solutions
/// on the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiharmonicParams {
    pub a_: f64,
    pub b_: f64,
    pub c: f64,
    pub d: f64,
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

impl BiharmonicParams {
    pub fn from_slice(p: &[f64]) -> Self {
        BiharmonicParams { a_: p[0], b_: p[1], c: p[2], d: p[3], a: p[4], b: p[5], beta: p[6] }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.a_, self.b_, self.c, self.d, self.a, self.b, self.beta]
    }

    /// `{(A+Cx)cosh βx + (B+Dx)sinh βx}{a cos βy + b sin βy}`
    pub fn f<T: Scalar>(&self, x: T, y: T) -> T {
        let bx = x * self.beta;
        let by = y * self.beta;
        ((x * self.c + self.a_) * bx.cosh() + (x * self.d + self.b_) * bx.sinh())
            * (by.cos() * self.a + by.sin() * self.b)
    }

    /// `{(A+Cx)cos βx + (B+Dx)sin βx}{a cosh βy + b sinh βy}`
    pub fn g<T: Scalar>(&self, x: T, y: T) -> T {
        let bx = x * self.beta;
        let by = y * self.beta;
        ((x * self.c + self.a_) * bx.cos() + (x * self.d + self.b_) * bx.sin())
            * (by.cosh() * self.a + by.sinh() * self.b)
    }

    /// Closed form of `f_xx + f_yy`.
    pub fn f_laplacian_sum(&self, x: f64, y: f64) -> f64 {
        let (bx, by) = (self.beta * x, self.beta * y);
        2.0 * self.beta
            * (self.d * bx.cosh() + self.c * bx.sinh())
            * (self.a * by.cos() + self.b * by.sin())
    }
}

/// A built-in field family instance.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyField {
    /// `f ∂x + g ∂y`, each with its own parameter set.
    R2Biharmonic { f: BiharmonicParams, g: BiharmonicParams },
    /// `(xu + v)∂x + (yu + v)∂y`.
    R2XuPlusV { u: ExprScalar, v: ExprScalar },
    /// `(c₁ + c₂x)e^{x/√2} + (c₃ + c₄x)e^{−x/√2}` times `e₁ = ∂x`.
    Nil3E1 { c: [f64; 4] },
    /// `z(c₂e^{z/√2} + c₄e^{−z/√2})` times `e₃ = ∂z + x∂y`.
    Nil3E3 { c2: f64, c4: f64 },
    /// `(c₁y^{r₋} + c₂y^{r₊}) V` with `V = cy∂y`.
    HyperbolicFV { n: usize, c: f64, c1: f64, c2: f64, exponents: (f64, f64) },
}

impl FamilyField {
    /// The field of the plane whose components are biharmonic but not harmonic,
    /// for arbitrary `A`, `B`.
    pub fn non_harmonic_plane_field(a_: f64, b_: f64) -> Self {
        FamilyField::R2Biharmonic {
            f: BiharmonicParams::from_slice(&[a_, b_, 1.0, 1.0, 1.0, 0.0, 1.0]),
            g: BiharmonicParams::from_slice(&[a_, b_, 0.0, 1.0, 1.0, 1.0, 1.0]),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            FamilyField::R2Biharmonic { .. } => "r2-biharmonic",
            FamilyField::R2XuPlusV { .. } => "r2-xu-plus-v",
            FamilyField::Nil3E1 { .. } => "nil3-e1",
            FamilyField::Nil3E3 { .. } => "nil3-e3",
            FamilyField::HyperbolicFV { .. } => "hyperbolic-fV",
        }
    }

    /// The chart the family lives on.
    pub fn chart(&self) -> ModelChart {
        match *self {
            FamilyField::R2Biharmonic { .. } | FamilyField::R2XuPlusV { .. } => ModelChart::euclidean(2),
            FamilyField::Nil3E1 { .. } | FamilyField::Nil3E3 { .. } => ModelChart::nil3(),
            FamilyField::HyperbolicFV { n, c, .. } => ModelChart::hyperbolic(n, c),
        }
    }

    /// The same field as coordinate-component expressions, where the
    /// grammar can express it.
    pub fn to_expressions(&self) -> Option<Vec<String>> {
        let num = |v: f64| format!("({v:?})");
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            FamilyField::R2Biharmonic { f, g } => {
                let fx = format!(
                    "(({a}+{c}*x)*cosh({k}*x)+({b}+{d}*x)*sinh({k}*x))*({aa}*cos({k}*y)+{bb}*sin({k}*y))",
                    a = num(f.a_), b = num(f.b_), c = num(f.c), d = num(f.d), aa = num(f.a), bb = num(f.b), k = num(f.beta)
                );
                let gx = format!(
                    "(({a}+{c}*x)*cos({k}*x)+({b}+{d}*x)*sin({k}*x))*({aa}*cosh({k}*y)+{bb}*sinh({k}*y))",
                    a = num(g.a_), b = num(g.b_), c = num(g.c), d = num(g.d), aa = num(g.a), bb = num(g.b), k = num(g.beta)
                );
                Some(vec![fx, gx])
            }
            FamilyField::R2XuPlusV { u, v } => Some(vec![
                format!("x*({})+({})", u.text, v.text),
                format!("y*({})+({})", u.text, v.text),
            ]),
            FamilyField::Nil3E1 { c } => Some(vec![
                format!(
                    "({}+{}*x)*exp({k}*x)+({}+{}*x)*exp(-{k}*x)",
                    num(c[0]), num(c[1]), num(c[2]), num(c[3]), k = num(s2)
                ),
                "0".into(),
                "0".into(),
            ]),
            FamilyField::Nil3E3 { c2, c4 } => {
                let h = format!("z*({}*exp({k}*z)+{}*exp(-{k}*z))", num(*c2), num(*c4), k = num(s2));
                Some(vec!["0".into(), format!("x*{h}"), h])
            }
            FamilyField::HyperbolicFV { n, c, c1, c2, exponents } => {
                let y = format!("x{n}");
                let mut comps = vec!["0".to_string(); *n];
                comps[n - 1] = format!(
                    "{}*{y}*({}*{y}^{}+{}*{y}^{})",
                    num(*c), num(*c1), num(exponents.0), num(*c2), num(exponents.1)
                );
                Some(comps)
            }
        }
    }
}

impl VectorField for FamilyField {
    fn dim(&self) -> usize {
        match self {
            FamilyField::R2Biharmonic { .. } | FamilyField::R2XuPlusV { .. } => 2,
            FamilyField::Nil3E1 { .. } | FamilyField::Nil3E3 { .. } => 3,
            FamilyField::HyperbolicFV { n, .. } => *n,
        }
    }

    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(GeomError::Dimension { expected: self.dim(), got: x.len() });
        }
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            FamilyField::R2Biharmonic { f, g } => Ok(vec![f.f(x[0], x[1]), g.g(x[0], x[1])]),
            FamilyField::R2XuPlusV { u, v } => {
                let (uu, vv) = (u.eval(x)?, v.eval(x)?);
                Ok(vec![x[0] * uu + vv, x[1] * uu + vv])
            }
            FamilyField::Nil3E1 { c } => {
                let (ep, em) = ((x[0] * s2).exp(), (x[0] * -s2).exp());
                let f = (x[0] * c[1] + c[0]) * ep + (x[0] * c[3] + c[2]) * em;
                Ok(vec![f, T::zero(), T::zero()])
            }
            FamilyField::Nil3E3 { c2, c4 } => {
                let z = x[2];
                let h = z * ((z * s2).exp() * *c2 + (z * -s2).exp() * *c4);
                Ok(vec![T::zero(), x[0] * h, h])
            }
            FamilyField::HyperbolicFV { n, c, c1, c2, exponents } => {
                let y = x[n - 1];
                if y.re() <= 0.0 {
                    return Err(GeomError::OutsideDomain { point: x.iter().map(Scalar::re).collect() });
                }
                let f = y.powf(exponents.0) * *c1 + y.powf(exponents.1) * *c2;
                let mut out = vec![T::zero(); *n];
                out[n - 1] = f * y * *c;
                Ok(out)
            }
        }
    }

    fn label(&self) -> String {
        self.id().to_string()
    }
}

/// Builds a numeric family on `chart`.
pub fn field_family(id: &str, params: &[f64], chart: &ModelChart) -> Result<FamilyField> {
    field_family_with_exprs(id, params, &[], chart)
}

/// Builds any family; `exprs` carries `u` and `v` for `r2-xu-plus-v`.
pub fn field_family_with_exprs(
    id: &str,
    params: &[f64],
    exprs: &[String],
    chart: &ModelChart,
) -> Result<FamilyField> {
    let arity = |expected: &str, got: usize| GeomError::Arity { id: id.to_string(), expected: expected.to_string(), got };
    if params.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::Degenerate(format!("non-finite parameter for `{id}`")));
    }
    let field = match id {
        "r2-biharmonic" => {
            let (f, g) = match params.len() {
                7 => (BiharmonicParams::from_slice(params), BiharmonicParams::from_slice(params)),
                14 => (BiharmonicParams::from_slice(&params[..7]), BiharmonicParams::from_slice(&params[7..])),
                n => return Err(arity("7 or 14 (A, B, C, D, a, b, beta)", n)),
            };
            if f.beta == 0.0 || g.beta == 0.0 {
                return Err(GeomError::Degenerate("beta must be nonzero".into()));
            }
            FamilyField::R2Biharmonic { f, g }
        }
        "r2-xu-plus-v" => {
            if !params.is_empty() {
                return Err(arity("0 numeric (u and v are expressions)", params.len()));
            }
            let [u, v] = exprs else {
                return Err(arity("2 expressions (u, v)", exprs.len()));
            };
            let (u, v) = (ExprScalar::parse(u)?, ExprScalar::parse(v)?);
            if u.expr.arity() > 2 || v.expr.arity() > 2 {
                return Err(GeomError::UnknownId("u and v may only use x and y".into()));
            }
            FamilyField::R2XuPlusV { u, v }
        }
        "nil3-e1" => match params {
            [a, b, c, d] => FamilyField::Nil3E1 { c: [*a, *b, *c, *d] },
            _ => return Err(arity("4 (c1, c2, c3, c4)", params.len())),
        },
        "nil3-e3" => match params {
            [c2, c4] => FamilyField::Nil3E3 { c2: *c2, c4: *c4 },
            _ => return Err(arity("2 (c2, c4)", params.len())),
        },
        "hyperbolic-fV" => match (params, chart) {
            ([c1, c2], ModelChart::Hyperbolic { n, c }) => FamilyField::HyperbolicFV {
                n: *n,
                c: *c,
                c1: *c1,
                c2: *c2,
                exponents: euler_exponents(*n),
            },
            ([_, _], _) => {
                return Err(GeomError::Degenerate("hyperbolic-fV requires the hyperbolic manifold".into()))
            }
            _ => return Err(arity("2 (c1, c2)", params.len())),
        },
        other => return Err(GeomError::UnknownId(other.to_string())),
    };
    if field.chart().id() != chart.id() || field.dim() != crate::geometry::Chart::dim(chart) {
        return Err(GeomError::Degenerate(format!("family `{id}` does not live on `{}`", chart.id())));
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprField;

    #[test]
    fn arity_and_unknown_ids() {
        let r2 = ModelChart::euclidean(2);
        assert!(matches!(field_family("r2-biharmonic", &[1.0; 6], &r2), Err(GeomError::Arity { .. })));
        assert!(matches!(field_family("torus", &[], &r2), Err(GeomError::UnknownId(_))));
        assert!(field_family("nil3-e1", &[1.0; 4], &r2).is_err());
        assert!(field_family("r2-biharmonic", &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0], &r2).is_err());
    }

    #[test]
    fn xu_plus_v_substitution() {
        let f = field_family_with_exprs("r2-xu-plus-v", &[], &["x".into(), "0".into()], &ModelChart::euclidean(2)).unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(f.eval(&[2.0, 3.0]).unwrap(), vec![4.0, 6.0]);
    }

    #[test]
    fn expression_rendering_matches() {
        let h = ModelChart::hyperbolic(3, 2.0);
        let fams = vec![
            field_family("r2-biharmonic", &[0.3, -1.0, 0.5, 2.0, 1.1, -0.4, 0.8], &ModelChart::euclidean(2)).unwrap(),
            FamilyField::non_harmonic_plane_field(0.5, -0.25),
            field_family("nil3-e1", &[0.1, 1.0, -0.3, 0.7], &ModelChart::nil3()).unwrap(),
            field_family("nil3-e3", &[1.0, -2.0], &ModelChart::nil3()).unwrap(),
            field_family("hyperbolic-fV", &[0.5, 1.5], &h).unwrap(),
        ];
        for fam in fams {
            let exprs = fam.to_expressions().unwrap();
            let ef = ExprField::parse(&exprs, fam.dim()).unwrap();
            let p: Vec<f64> = (0..fam.dim()).map(|i| 0.3 + 0.2 * i as f64).collect();
            let a = fam.eval(&p).unwrap();
            let b = ef.eval(&p).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0), "{}: {a:?} vs {b:?}", fam.id());
            }
        }
    }
}
