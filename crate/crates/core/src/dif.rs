//! Derivative towers: a value together with all of its derivatives with
//! respect to one implicit variable, `[e, e′, e″, …]`.
//!
//! Towers form a differential algebra. Derivatives are not obtained from a
//! symbolic form; they are produced lazily by co-recursive definitions such
//! as `exp x = w where w = exp x₀ :> x′·w`.

use std::fmt;

use crate::coeff::{Coeff, Elementary};
use crate::error::{Error, Result};
use crate::series::Series;
use crate::stream::{Knot, Stream};

/// Maximum number of leading levels the l'Hôpital branch of [`Dif::div`]
/// will strip before giving up on an indeterminate quotient.
pub const LHOPITAL_DEPTH: usize = 4096;

/// A derivative tower. Element `k` is the `k`-th derivative.
#[derive(Clone)]
pub struct Dif<C> {
    repr: Repr<C>,
}

#[derive(Clone)]
enum Repr<C> {
    /// `[c, 0, 0, …]`
    Const(C),
    /// An ended stream continues with zeros.
    Tower(Stream<C>),
}

pub struct DifKnot<C>(Knot<C>);

impl<C: Coeff> DifKnot<C> {
    pub fn bind(self, target: Dif<C>) {
        self.0.bind(target.into_stream());
    }
}

impl<C: Coeff> fmt::Debug for Dif<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Const(c) => f.debug_tuple("Dif::Const").field(c).finish(),
            Repr::Tower(s) => f.debug_tuple("Dif::Tower").field(s).finish(),
        }
    }
}

/// Rows of Pascal's triangle in the coefficient type, grown on demand.
struct Binomials<C> {
    row: Vec<C>,
}

impl<C: Coeff> Binomials<C> {
    fn new() -> Self {
        Binomials { row: Vec::new() }
    }

    fn row(&mut self, k: usize) -> &[C] {
        assert!(k + 1 >= self.row.len(), "rows are requested in order");
        while self.row.len() < k + 1 {
            let mut next = Vec::with_capacity(self.row.len() + 1);
            next.push(C::one());
            for w in self.row.windows(2) {
                next.push(w[0].plus(&w[1]));
            }
            if !self.row.is_empty() {
                next.push(C::one());
            }
            self.row = next;
        }
        &self.row
    }
}

impl<C: Coeff> Dif<C> {
    pub fn constant(c: C) -> Self {
        Dif {
            repr: Repr::Const(c),
        }
    }

    /// The differentiation variable at `x0`: `[x0, 1, 0, 0, …]`.
    pub fn var(x0: C) -> Self {
        Self::from_stream(Stream::finite(vec![x0, C::one()]))
    }

    pub fn from_stream(s: Stream<C>) -> Self {
        Dif {
            repr: Repr::Tower(s),
        }
    }

    /// A finite tower followed by zeros.
    pub fn from_vec(v: Vec<C>) -> Self {
        Self::from_stream(Stream::finite(v))
    }

    /// `value :> tail`, the tail built on demand.
    pub fn cons(value: C, tail: impl FnOnce() -> Dif<C> + 'static) -> Self {
        Self::from_stream(Stream::cons(value, move || tail().into_stream()))
    }

    pub fn deferred(f: impl FnOnce() -> Result<Dif<C>> + 'static) -> Self {
        Self::from_stream(Stream::deferred(move || Ok(f()?.into_stream())))
    }

    pub fn forward() -> (Self, DifKnot<C>) {
        let (s, k) = Stream::forward();
        (Self::from_stream(s), DifKnot(k))
    }

    pub fn fix(f: impl FnOnce(&Dif<C>) -> Dif<C>) -> Self {
        let (d, knot) = Self::forward();
        knot.bind(f(&d));
        d
    }

    fn failing(e: Error) -> Self {
        Self::from_stream(Stream::generate(move |_| Err(e.clone())))
    }

    pub fn into_stream(self) -> Stream<C> {
        match self.repr {
            Repr::Const(c) => Stream::finite(vec![c]),
            Repr::Tower(s) => s,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self.repr, Repr::Const(_))
    }

    fn get_opt(&self, k: usize) -> Result<Option<C>> {
        match &self.repr {
            Repr::Const(c) => Ok((k == 0).then(|| c.clone())),
            Repr::Tower(s) => s.get_opt(k),
        }
    }

    fn known_len(&self) -> Option<usize> {
        match &self.repr {
            Repr::Const(_) => Some(1),
            Repr::Tower(s) => s.known_len(),
        }
    }

    /// The `k`-th derivative.
    pub fn get(&self, k: usize) -> Result<C> {
        Ok(self.get_opt(k)?.unwrap_or_else(C::zero))
    }

    /// The value itself (element 0).
    pub fn value(&self) -> Result<C> {
        self.get(0)
    }

    pub fn elements(&self, n: usize) -> Result<Vec<C>> {
        (0..n).map(|k| self.get(k)).collect()
    }

    /// The derivation: drops the value and keeps the derivatives.
    pub fn shift(&self) -> Self {
        match &self.repr {
            Repr::Const(_) => Self::constant(C::zero()),
            Repr::Tower(s) => Self::from_stream(s.tail()),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::from_stream(Stream::generate_partial(move |k| {
            match (a.get_opt(k)?, b.get_opt(k)?) {
                (None, None) => Ok(None),
                (x, y) => Ok(Some(f(
                    &x.unwrap_or_else(C::zero),
                    &y.unwrap_or_else(C::zero),
                ))),
            }
        }))
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Const(x), Repr::Const(y)) => Self::constant(x.plus(y)),
            _ => self.zip(other, C::plus),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Const(x), Repr::Const(y)) => Self::constant(x.minus(y)),
            _ => self.zip(other, C::minus),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Const(x) => Self::constant(x.negated()),
            Repr::Tower(s) => Self::from_stream(s.map(C::negated)),
        }
    }

    /// `c *> x`
    pub fn scale(&self, c: &C) -> Self {
        match &self.repr {
            Repr::Const(x) => Self::constant(c.times(x)),
            Repr::Tower(s) => {
                let c = c.clone();
                Self::from_stream(s.map(move |x| c.times(x)))
            }
        }
    }

    /// Product by the Leibniz rule `(xy)′ = x′y + xy′`, element `k` being
    /// `Σ C(k,i)·x⁽ⁱ⁾·y⁽ᵏ⁻ⁱ⁾`. Reads elements `0..=k` of each factor.
    pub fn mul(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Const(x), _) => return other.scale(x),
            (_, Repr::Const(y)) => return self.scale(y),
            _ => {}
        }
        let (a, b) = (self.clone(), other.clone());
        let mut binom = Binomials::<C>::new();
        Self::from_stream(Stream::generate_partial(move |k| {
            if let (Some(la), Some(lb)) = (a.known_len(), b.known_len()) {
                if k + 1 >= la + lb {
                    return Ok(None);
                }
            }
            let row = binom.row(k);
            let mut acc = C::zero();
            for (i, c) in row.iter().enumerate() {
                let Some(x) = a.get_opt(i)? else { break };
                if x.is_zero() {
                    continue;
                }
                if let Some(y) = b.get_opt(k - i)? {
                    acc = acc.plus(&c.times(&x).times(&y));
                }
            }
            Ok(Some(acc))
        }))
    }

    /// `x² :> 2·(x′·x)`
    pub fn sqr(&self) -> Self {
        match &self.repr {
            Repr::Const(x) => Self::constant(x.times(x)),
            Repr::Tower(_) => {
                let x = self.clone();
                Self::deferred(move || {
                    let x0 = x.value()?;
                    let xq = x.shift();
                    Ok(Self::cons(x0.times(&x0), move || {
                        xq.mul(&x).scale(&C::from_i64(2))
                    }))
                })
            }
        }
    }

    /// `ip = 1/x₀ :> −x′·ip²`
    pub fn recip(&self) -> Self {
        if let Repr::Const(x) = &self.repr {
            return match C::one().try_div(x) {
                Ok(r) => Self::constant(r),
                Err(_) => Self::failing(Error::Pole),
            };
        }
        let x = self.clone();
        Self::deferred(move || {
            let x0 = x.value()?;
            let r0 = C::one().try_div(&x0).map_err(|_| Error::Pole)?;
            let xq = x.shift();
            Ok(Self::fix(|ip| {
                let ip = ip.clone();
                Self::cons(r0, move || xq.mul(&ip.sqr()).neg())
            }))
        })
    }

    /// Quotient of towers.
    ///
    /// When both values vanish the leading level of each tower is dropped
    /// (de l'Hôpital) and the division retried. Only the value of such a
    /// result is meaningful: its higher elements are those of the ratio of
    /// the shifted towers, not derivatives of the extended quotient.
    /// Two towers that are both identically zero (constructionally) give
    /// the zero tower.
    pub fn div(&self, other: &Self) -> Self {
        if let (Repr::Const(x), Repr::Const(y)) = (&self.repr, &other.repr) {
            return match (x.is_zero(), y.is_zero()) {
                (true, true) => Self::constant(C::zero()),
                (false, true) => Self::failing(Error::Pole),
                _ => match x.try_div(y) {
                    Ok(q) => Self::constant(q),
                    Err(e) => Self::failing(e),
                },
            };
        }
        let (x, y) = (self.clone(), other.clone());
        Self::deferred(move || {
            for level in 0..LHOPITAL_DEPTH {
                let (xs, ys) = (x.skip(level), y.skip(level));
                let (xv, yv) = (xs.get_opt(0)?, ys.get_opt(0)?);
                match (xv, yv) {
                    (None, None) => return Ok(Self::constant(C::zero())),
                    (xv, Some(yv)) if !yv.is_zero() => {
                        let _ = xv;
                        return Ok(Self::quotient(xs, ys, yv));
                    }
                    (Some(xv), _) if !xv.is_zero() => return Err(Error::Pole),
                    _ => {}
                }
            }
            Err(Error::domain(
                "div",
                format!("indeterminate quotient beyond {LHOPITAL_DEPTH} levels"),
            ))
        })
    }

    fn skip(&self, n: usize) -> Self {
        if n == 0 {
            return self.clone();
        }
        match &self.repr {
            Repr::Const(_) => Self::constant(C::zero()),
            Repr::Tower(s) => Self::from_stream(s.skip(n)),
        }
    }

    /// `w = x/y` with `y₀ ≠ 0`, from `x = w·y` solved element by element.
    fn quotient(x: Self, y: Self, y0: C) -> Self {
        if let Repr::Const(_) = y.repr {
            return Self::from_stream(Stream::generate_partial(move |k| {
                x.get_opt(k)?.map(|e| e.try_div(&y0)).transpose()
            }));
        }
        let mut w: Vec<C> = Vec::new();
        let mut binom = Binomials::<C>::new();
        Self::from_stream(Stream::generate(move |k| {
            let row = binom.row(k);
            let mut acc = x.get(k)?;
            for (i, wi) in w.iter().enumerate() {
                if wi.is_zero() {
                    continue;
                }
                if let Some(yj) = y.get_opt(k - i)? {
                    acc = acc.minus(&row[i].times(wi).times(&yj));
                }
            }
            let wk = acc.try_div(&y0)?;
            w.push(wk.clone());
            Ok(wk)
        }))
    }

    /// Taylor coefficients about the current point: element `k` over `k!`.
    pub fn taylor(&self) -> Series<C> {
        let d = self.clone();
        let mut fact = C::one();
        Series::generate(move |k| {
            if k > 0 {
                fact = fact.times(&C::from_i64(k as i64));
            }
            d.get_opt(k)?.map(|e| e.try_div(&fact)).transpose()
        })
    }
}

impl<C: Elementary> Dif<C> {
    /// `x₀` must be known before the tower can start.
    fn lift(
        &self,
        on_const: impl FnOnce(&C) -> Result<C>,
        on_tower: impl FnOnce(Dif<C>, C) -> Result<Dif<C>> + 'static,
    ) -> Self {
        match &self.repr {
            Repr::Const(c) => match on_const(c) {
                Ok(v) => Self::constant(v),
                Err(e) => Self::failing(e),
            },
            Repr::Tower(_) => {
                let x = self.clone();
                Self::deferred(move || {
                    let x0 = x.value()?;
                    on_tower(x, x0)
                })
            }
        }
    }

    /// `w = exp x₀ :> x′·w`
    pub fn exp(&self) -> Self {
        self.lift(C::try_exp, |x, x0| {
            let w0 = x0.try_exp()?;
            let xq = x.shift();
            Ok(Self::fix(|w| {
                let w = w.clone();
                Self::cons(w0, move || xq.mul(&w))
            }))
        })
    }

    /// `log x₀ :> x′/x`
    pub fn ln(&self) -> Self {
        self.lift(C::try_ln, |x, x0| {
            let v = x0.try_ln()?;
            Ok(Self::cons(v, move || x.shift().div(&x)))
        })
    }

    /// `w = √x₀ :> ½·(x′/w)`; needs `x₀ > 0`.
    pub fn sqrt(&self) -> Self {
        self.lift(C::try_sqrt, |x, x0| {
            if !x0.is_positive() {
                return Err(Error::domain("sqrt", format!("tower value {x0:?} is not positive")));
            }
            let w0 = x0.try_sqrt()?;
            let half = C::one().try_div(&C::from_i64(2))?;
            let xq = x.shift();
            Ok(Self::fix(|w| {
                let w = w.clone();
                Self::cons(w0, move || xq.div(&w).scale(&half))
            }))
        })
    }

    fn sin_cos_pair(x: &Dif<C>, x0: &C) -> Result<(Self, Self)> {
        let (s0, c0) = (x0.try_sin()?, x0.try_cos()?);
        let xq = x.shift();
        let (s, s_knot) = Self::forward();
        let (c, c_knot) = Self::forward();
        let (xs, cc) = (xq.clone(), c.clone());
        s_knot.bind(Self::cons(s0, move || xs.mul(&cc)));
        let ss = s.clone();
        c_knot.bind(Self::cons(c0, move || xq.mul(&ss).neg()));
        Ok((s, c))
    }

    /// `sin x₀ :> x′·cos x`, built together with its cosine partner.
    pub fn sin(&self) -> Self {
        self.lift(C::try_sin, |x, x0| Ok(Self::sin_cos_pair(&x, &x0)?.0))
    }

    /// `cos x₀ :> −x′·sin x`
    pub fn cos(&self) -> Self {
        self.lift(C::try_cos, |x, x0| Ok(Self::sin_cos_pair(&x, &x0)?.1))
    }

    /// `atan x₀ :> x′/(1 + x²)`
    pub fn atan(&self) -> Self {
        self.lift(C::try_atan, |x, x0| {
            let v = x0.try_atan()?;
            Ok(Self::cons(v, move || {
                x.shift().div(&Self::constant(C::one()).add(&x.sqr()))
            }))
        })
    }

    /// `asin x₀ :> x′/√(1 − x²)`; needs `|x₀| < 1`.
    pub fn asin(&self) -> Self {
        self.lift(C::try_asin, |x, x0| {
            if !C::one().minus(&x0.times(&x0)).is_positive() {
                return Err(Error::domain("asin", format!("|{x0:?}| is not below 1")));
            }
            let v = x0.try_asin()?;
            Ok(Self::cons(v, move || {
                x.shift()
                    .div(&Self::constant(C::one()).sub(&x.sqr()).sqrt())
            }))
        })
    }
}

/// Tower of `sin(x)·e^{−x}` for the variable tower `x`, from the coupled
/// pair `p = sin x₀·e^{−x₀} :> q − p`, `q = cos x₀·e^{−x₀} :> −p − q`.
/// Cost is linear in the number of elements requested.
pub fn exsn<C: Elementary>(x: &Dif<C>) -> Dif<C> {
    let x = x.clone();
    Dif::deferred(move || {
        let x0 = x.value()?;
        let ex = x0.negated().try_exp()?;
        let p0 = x0.try_sin()?.times(&ex);
        let q0 = x0.try_cos()?.times(&ex);
        let (p, p_knot) = Dif::forward();
        let (q, q_knot) = Dif::forward();
        let (pp, qq) = (p.clone(), q.clone());
        p_knot.bind(Dif::cons(p0, move || qq.sub(&pp)));
        let (pp, qq) = (p.clone(), q.clone());
        q_knot.bind(Dif::cons(q0, move || pp.neg().sub(&qq)));
        Ok(p)
    })
}

/// Derivatives of the Lambert function at zero, from `W(0) = 0` and
/// `W′ = e^{−W}/(1 + W)`.
pub fn lambert_w<C: Elementary>() -> Dif<C> {
    Dif::fix(|w| {
        let w = w.clone();
        Dif::cons(C::zero(), move || {
            w.neg().exp().div(&Dif::constant(C::one()).add(&w))
        })
    })
}

impl<C: Coeff> Coeff for Dif<C> {
    fn zero() -> Self {
        Dif::constant(C::zero())
    }
    fn one() -> Self {
        Dif::constant(C::one())
    }
    fn from_i64(n: i64) -> Self {
        Dif::constant(C::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        matches!(&self.repr, Repr::Const(c) if c.is_zero())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.div(rhs))
    }
}

impl<C: Elementary> Elementary for Dif<C> {
    fn try_exp(&self) -> Result<Self> {
        Ok(self.exp())
    }
    fn try_ln(&self) -> Result<Self> {
        Ok(self.ln())
    }
    fn try_sqrt(&self) -> Result<Self> {
        Ok(self.sqrt())
    }
    fn try_sin(&self) -> Result<Self> {
        Ok(self.sin())
    }
    fn try_cos(&self) -> Result<Self> {
        Ok(self.cos())
    }
    fn try_atan(&self) -> Result<Self> {
        Ok(self.atan())
    }
    fn try_asin(&self) -> Result<Self> {
        Ok(self.asin())
    }
    fn try_pow(&self, a: &Self) -> Result<Self> {
        Ok(a.mul(&self.ln()).exp())
    }
    fn is_positive(&self) -> bool {
        self.value().map(|v| v.is_positive()).unwrap_or(false)
    }
}

macro_rules! dif_op {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> std::ops::$tr for &Dif<C> {
            type Output = Dif<C>;
            fn $method(self, rhs: Self) -> Dif<C> {
                Dif::$method(self, rhs)
            }
        }
    };
}

dif_op!(Add, add);
dif_op!(Sub, sub);
dif_op!(Mul, mul);
dif_op!(Div, div);

impl<C: Coeff> std::ops::Neg for &Dif<C> {
    type Output = Dif<C>;
    fn neg(self) -> Dif<C> {
        Dif::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;
    use proptest::prelude::*;

    fn close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (k, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol * w.abs().max(1.0), "element {k}: {g} vs {w}");
        }
    }

    #[test]
    fn constants_and_variables() {
        assert_eq!(Dif::var(2.5).elements(4).unwrap(), vec![2.5, 1.0, 0.0, 0.0]);
        let pi = Dif::constant(std::f64::consts::PI);
        assert_eq!(pi.elements(3).unwrap(), vec![std::f64::consts::PI, 0.0, 0.0]);
        let z = Dif::var(0.0);
        assert_eq!((z.value().unwrap(), z.get(1).unwrap()), (0.0, 1.0));
    }

    #[test]
    fn products() {
        let a = 3.0;
        assert_eq!(Dif::var(a).sqr().elements(5).unwrap(), vec![9.0, 6.0, 2.0, 0.0, 0.0]);
        assert_eq!((&Dif::var(1.0) * &Dif::var(1.0)).elements(3).unwrap(), vec![1.0, 2.0, 2.0]);
        let u = Dif::var(0.3).sin();
        close(
            &(&Dif::constant(2.0) * &u).elements(6).unwrap(),
            &u.scale(&2.0).elements(6).unwrap(),
            0.0,
        );
        assert!((&Dif::constant(2.0) * &Dif::constant(4.0)).is_const());
    }

    #[test]
    fn reciprocal_and_division() {
        // (−1)ⁿ n!/x^{n+1} at x = 2
        let want = [0.5, -0.25, 0.25, -0.375];
        close(&Dif::var(2.0).recip().elements(4).unwrap(), &want, 1e-15);
        let lim = (&Dif::var(0.0).sin() / &Dif::var(0.0)).value().unwrap();
        assert_eq!(lim, 1.0);
        let u = Dif::var(0.7).exp();
        close(
            &(&u / &Dif::constant(1.0)).elements(6).unwrap(),
            &u.elements(6).unwrap(),
            0.0,
        );
        assert_eq!((&Dif::var(1.0) / &Dif::var(0.0)).value(), Err(Error::Pole));
        assert_eq!(Dif::var(0.0).recip().value(), Err(Error::Pole));
        assert_eq!(
            (&Dif::constant(0.0) / &Dif::constant(0.0)).elements(3).unwrap(),
            vec![0.0; 3]
        );
        let z = Dif::from_vec(vec![0.0, 0.0]);
        assert_eq!((&z / &z).elements(2).unwrap(), vec![0.0; 2]);
    }

    #[test]
    fn exact_reciprocal() {
        let x = Dif::var(Rational::from(2));
        let r = x.recip().elements(6).unwrap();
        let prod = (&x * &Dif::from_vec(r)).elements(6).unwrap();
        let mut want = vec![Rational::zero(); 6];
        want[0] = Rational::one();
        assert_eq!(prod, want);
    }

    #[test]
    fn elementary_towers() {
        assert_eq!(Dif::var(0.0).exp().elements(5).unwrap(), vec![1.0; 5]);
        close(&Dif::var(0.0).sin().elements(5).unwrap(), &[0.0, 1.0, 0.0, -1.0, 0.0], 0.0);
        close(&Dif::var(1.5).exp().ln().elements(4).unwrap(), &[1.5, 1.0, 0.0, 0.0], 1e-12);
        close(&Dif::var(0.25).sqrt().elements(3).unwrap(), &[0.5, 1.0, -2.0], 1e-14);
        close(&Dif::var(1.0).atan().elements(3).unwrap(), &[std::f64::consts::FRAC_PI_4, 0.5, -0.5], 1e-15);
        // asin′(x) = (1−x²)^{−1/2}, asin″(x) = x(1−x²)^{−3/2}
        let x: f64 = 0.5;
        let d1 = (1.0 - x * x).powf(-0.5);
        let d2 = x * (1.0 - x * x).powf(-1.5);
        close(&Dif::var(x).asin().elements(3).unwrap(), &[x.asin(), d1, d2], 1e-14);
    }

    #[test]
    fn elementary_domains() {
        assert!(matches!(Dif::var(-1.0).ln().value(), Err(Error::Domain { .. })));
        assert!(matches!(Dif::var(0.0).sqrt().value(), Err(Error::Domain { .. })));
        assert!(matches!(Dif::var(1.0).asin().value(), Err(Error::Domain { .. })));
        assert!(matches!(Dif::constant(-2.0).ln().value(), Err(Error::Domain { .. })));
    }

    #[test]
    fn shift() {
        assert_eq!(Dif::var(4.0).shift().elements(3).unwrap(), vec![1.0, 0.0, 0.0]);
        assert!(Dif::constant(9.0).shift().is_zero());
        let e = Dif::var(0.0).exp();
        close(&e.shift().elements(6).unwrap(), &e.elements(6).unwrap(), 0.0);
    }

    #[test]
    fn main_value_and_taylor() {
        assert_eq!(Dif::var(2.5).value().unwrap(), 2.5);
        let t = Dif::var(0.0).exp().taylor().coeffs(4).unwrap();
        close(&t, &[1.0, 1.0, 0.5, 1.0 / 6.0], 1e-15);
        let direct = Series::from_vec(vec![0.0, 1.0]).sin().coeffs(10).unwrap();
        close(&Dif::var(0.0).sin().taylor().coeffs(10).unwrap(), &direct, 1e-12);
    }

    #[test]
    fn exsn_matches_leibniz_product() {
        let x = Dif::var(0.7);
        let fast = exsn(&x).elements(15).unwrap();
        let naive = (&x.sin() * &x.neg().exp()).elements(15).unwrap();
        close(&fast, &naive, 1e-9);
        close(&exsn(&Dif::var(0.0)).elements(3).unwrap(), &[0.0, 1.0, -2.0], 1e-15);
    }

    #[test]
    fn lambert_exact() {
        let w = lambert_w::<Rational>().elements(9).unwrap();
        let want: Vec<Rational> = (0i64..9)
            .map(|n| if n == 0 { Rational::zero() } else { Rational::from((-n).pow(n as u32 - 1)) })
            .collect();
        assert_eq!(w, want);
    }

    fn tower(v: Vec<f64>) -> Dif<f64> {
        Dif::from_stream(Stream::finite(v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn const_is_cons_with_zero_tail(c in -3.0f64..3.0, v in prop::collection::vec(-2.0f64..2.0, 1..6)) {
            let a = Dif::constant(c);
            let b = Dif::cons(c, || Dif::constant(0.0));
            let u = tower(v);
            for (x, y) in [(&a * &u, &b * &u), (&a + &u, &b + &u), (&u / &(&a + &Dif::constant(10.0)), &u / &(&b + &Dif::constant(10.0)))] {
                prop_assert_eq!(x.elements(8).unwrap(), y.elements(8).unwrap());
            }
            prop_assert_eq!(a.exp().elements(5).unwrap(), b.exp().elements(5).unwrap());
            prop_assert_eq!(a.shift().elements(4).unwrap(), b.shift().elements(4).unwrap());
        }

        #[test]
        fn leibniz_rule(x in prop::collection::vec(-2.0f64..2.0, 1..8), y in prop::collection::vec(-2.0f64..2.0, 1..8)) {
            let (u, v) = (tower(x), tower(y));
            let lhs = (&u * &v).shift().elements(10).unwrap();
            let rhs = (&(&u.shift() * &v) + &(&u * &v.shift())).elements(10).unwrap();
            close(&lhs, &rhs, 1e-12);
        }

        #[test]
        fn chain_rule(x0 in -1.0f64..1.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let u = Dif::var(x0).sin().scale(&a).add(&Dif::var(x0).sqr().scale(&b));
            let du = u.shift();
            let cases: [(Dif<f64>, Dif<f64>); 4] = [
                (u.exp(), u.exp()),
                (u.sin(), u.cos()),
                (u.cos(), u.sin().neg()),
                (u.atan(), Dif::constant(1.0).div(&Dif::constant(1.0).add(&u.sqr()))),
            ];
            for (f, df) in cases {
                close(&f.shift().elements(8).unwrap(), &(&df * &du).elements(8).unwrap(), 1e-9);
            }
        }

        #[test]
        fn reciprocal_identity(x0 in 0.2f64..3.0, a in -1.0f64..1.0) {
            let u = Dif::var(x0).add(&Dif::var(x0).sin().scale(&a)).add(&Dif::constant(2.0));
            let one = (&u * &u.recip()).elements(10).unwrap();
            let mut want = vec![0.0; 10];
            want[0] = 1.0;
            close(&one, &want, 1e-10);
        }
    }
}
