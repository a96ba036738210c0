//! The WKB double expansion for `ε²y″ = Q(x)y` at a point.
//!
//! With `y = exp(S₀/ε + U + εV)` the unknowns `U` and `V′` are series in
//! `ε²` whose coefficients are derivative towers in `x`:
//!
//! ```text
//! u  = −½·log(S₀′ :* v′)
//! v′ = (−½/S₀′) *> (u′·u′ + u″ +: v′·v′)
//! ```
//!
//! where `u′` differentiates every coefficient tower. `S₀′ = √Q` is an input;
//! integrating it is left to the caller.

use crate::coeff::Coeff;
use crate::dif::Dif;
use crate::error::{Error, Result};
use crate::series::Series;

/// Series in `ε²` with tower coefficients.
pub type DifSeries = Series<Dif<f64>>;

pub struct WkbResult {
    pub u: DifSeries,
    pub v_prime: DifSeries,
    /// Values of the coefficients of `u` at the expansion point.
    pub u_main: Series<f64>,
    pub v_prime_main: Series<f64>,
    /// Number of `ε²` orders the caller asked for.
    pub orders: usize,
}

impl WkbResult {
    /// `(uMain_k, v′Main_k)` for `k < orders`.
    pub fn table(&self) -> Result<Vec<(f64, f64)>> {
        let u = self.u_main.coeffs(self.orders)?;
        let v = self.v_prime_main.coeffs(self.orders)?;
        Ok(u.into_iter().zip(v).collect())
    }
}

/// `(a₀ :* aq) +: z = a₀ :* (aq + z)`, i.e. `a + ε²·z`. Coefficient `k` of
/// the result reads `z` only at `k − 1`.
pub fn add_to_tail(a: &DifSeries, z: &DifSeries) -> DifSeries {
    let z = z.clone();
    a.add(&Series::cons(Dif::zero(), move || z))
}

/// Solves the co-recursive pair for `U` and `V′` given the tower of `S₀′`.
pub fn wkb_expand(s0_prime: &Dif<f64>, orders: usize) -> Result<WkbResult> {
    if orders == 0 {
        return Err(Error::Parameter("wkb needs at least one order".into()));
    }
    let s0 = s0_prime.value()?;
    if s0.is_nan() || s0 <= 0.0 {
        return Err(Error::domain("wkb", format!("S0' value {s0} is not positive")));
    }
    let scale = Dif::constant(-0.5).div(s0_prime);
    let (v_prime, knot) = Series::forward();
    let head = s0_prime.clone();
    let vp = v_prime.clone();
    let u = Series::cons(head, move || vp).ln().scale(&Dif::constant(-0.5));
    let u1 = u.map(Dif::shift);
    let u2 = u1.map(Dif::shift);
    knot.bind(add_to_tail(&u1.mul(&u1).add(&u2), &v_prime.mul(&v_prime)).scale(&scale));
    let u_main = u.try_map(Dif::value);
    let v_prime_main = v_prime.try_map(Dif::value);
    Ok(WkbResult {
        u,
        v_prime,
        u_main,
        v_prime_main,
        orders,
    })
}

/// `S₀′ = √x` as a tower at `x0`, for the Airy equation `Q(x) = x`.
pub fn airy_s0_prime(x0: f64) -> Result<Dif<f64>> {
    if x0.is_nan() || x0 <= 0.0 {
        return Err(Error::domain("airy", format!("x0 = {x0} is not positive")));
    }
    Ok(Dif::var(x0).sqrt())
}
