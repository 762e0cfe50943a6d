//! Multi-precision evaluation of `Psi(t)` and of the closed-form `|J|`.
//!
//! Near the boundary of a joint spectrum the closed forms in `(x, y)` lose
//! digits to cancellation once `(x, y)` has been rounded to doubles. Evaluating
//! in MPFR keeps the comparison against `J_theta` meaningful there.

use num_traits::ToPrimitive;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::groups::GroupName;
use crate::jacobian::invariant_polys;
use crate::laurent::{LaurentPoly, TorusPoint};

pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Debug)]
pub struct CFloat {
    pub re: Float,
    pub im: Float,
}

impl CFloat {
    pub fn new(prec: u32, re: f64, im: f64) -> Self {
        CFloat {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &CFloat) -> CFloat {
        let p = self.prec();
        CFloat {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn add_f64(&self, v: f64) -> CFloat {
        CFloat {
            re: Float::with_val(self.prec(), &self.re + v),
            im: self.im.clone(),
        }
    }

    pub fn scale(&self, v: f64) -> CFloat {
        let p = self.prec();
        CFloat {
            re: Float::with_val(p, &self.re * v),
            im: Float::with_val(p, &self.im * v),
        }
    }

    pub fn mul(&self, o: &CFloat) -> CFloat {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        CFloat {
            re: rr - ii,
            im: ri + ir,
        }
    }

    pub fn norm(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `p(e^{2 pi i theta})`, each monomial from its exact phase `e1 theta1 + e2 theta2`.
pub fn evaluate(p: &LaurentPoly, t: TorusPoint, prec: u32) -> CFloat {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let th1 = Float::with_val(prec, t.theta1);
    let th2 = Float::with_val(prec, t.theta2);
    let mut acc = CFloat::new(prec, 0.0, 0.0);
    for ((e1, e2), coeff) in p.terms() {
        let phase = Float::with_val(prec, &th1 * *e1) + Float::with_val(prec, &th2 * *e2);
        let (s, c) = Float::with_val(prec, &phase * &two_pi).sin_cos(Float::new(prec));
        let k = coeff.to_i64().expect("invariant coefficients fit in i64");
        acc.re += Float::with_val(prec, &c * k);
        acc.im += Float::with_val(prec, &s * k);
    }
    acc
}

pub fn psi(group: GroupName, t: TorusPoint, prec: u32) -> Result<(CFloat, CFloat)> {
    let (p, q) = invariant_polys(group)?;
    Ok((evaluate(&p, t, prec), evaluate(&q, t, prec)))
}

/// `|J^2| / (16 pi^4)` from the invariants, for the six measure groups.
pub fn jacobian_squared_norm(group: GroupName, x: &CFloat, y: &CFloat) -> Result<Float> {
    use GroupName::*;
    let prec = x.prec();
    let one = |v: f64| CFloat::new(prec, v, 0.0);
    let sq = |z: &CFloat| z.mul(z);
    let v = match group {
        Z0 => sq(&x.mul(y)),
        Z2_2 => sq(x).mul(&one(4.0).add(&sq(y).scale(-1.0))),
        Z2_3 => sq(y).mul(&sq(x).add(&y.scale(-4.0))),
        D4_1 => one(4.0)
            .add(&sq(x).scale(-1.0))
            .mul(&one(4.0).add(&sq(y).scale(-1.0))),
        D4_2 => y
            .add_f64(1.0)
            .mul(&y.scale(-1.0).add_f64(3.0))
            .mul(&y.scale(4.0).add(&sq(x).scale(-1.0)).add_f64(4.0)),
        D6_1 => {
            let lin = y.add(&x.scale(2.0)).add_f64(1.0);
            let x2 = sq(x);
            let quad = x
                .scale(24.0)
                .add_f64(16.0)
                .add(&x2.scale(-13.0))
                .add(&x2.mul(x).scale(2.0))
                .add(&y.scale(16.0))
                .add(&x.mul(y).scale(-4.0))
                .add(&x2.mul(y).scale(-1.0))
                .add(&sq(y).scale(4.0));
            lin.mul(&quad)
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{group} carries no joint spectral measure here"
            )))
        }
    };
    Ok(v.norm())
}

/// `|J_xy(Psi(t))|` with every step carried out at `prec` bits.
pub fn jacobian_xy_norm(group: GroupName, t: TorusPoint, prec: u32) -> Result<f64> {
    let (x, y) = psi(group, t, prec)?;
    let n = jacobian_squared_norm(group, &x, &y)?;
    let four_pi2 = Float::with_val(prec, Constant::Pi).square() * 4u32;
    Ok((n.sqrt() * four_pi2).to_f64())
}
