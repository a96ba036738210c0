//! Formal power series as lazy coefficient streams.
//!
//! Every operation is a co-recursive definition over the operands'
//! coefficients: nothing is truncated, and a coefficient is computed only
//! when somebody asks for it. Elementary functions are written as integral
//! equations, e.g. `exp u = w where w = ∫ w·u′` with `w₀ = exp u₀`.

use std::fmt::{self, Display, Write as _};

use crate::coeff::{Coeff, Elementary};
use crate::error::{Error, Result};
use crate::stream::{Knot, Stream};

/// A formal power series `u₀ + u₁x + u₂x² + …`.
///
/// The compact zero series ([`Series::zero`]) is a distinct representation;
/// a coefficient stream that ends also reads as zeros from that point on.
/// Zero detection is purely constructional: an infinite stream of zero
/// coefficients is never recognised as the zero series.
#[derive(Clone)]
pub struct Series<C> {
    repr: Repr<C>,
}

#[derive(Clone)]
enum Repr<C> {
    Zero,
    Coeffs(Stream<C>),
}

/// Write end of [`Series::forward`].
pub struct SeriesKnot<C>(Knot<C>);

impl<C: Coeff> SeriesKnot<C> {
    pub fn bind(self, target: Series<C>) {
        self.0.bind(target.into_stream());
    }
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => f.write_str("Series::Zero"),
            Repr::Coeffs(s) => f.debug_tuple("Series").field(s).finish(),
        }
    }
}

impl<C: Coeff> Series<C> {
    pub fn zero() -> Self {
        Series { repr: Repr::Zero }
    }

    pub fn constant(c: C) -> Self {
        Self::from_vec(vec![c])
    }

    /// A polynomial: the given coefficients followed by the zero tail.
    pub fn from_vec(coeffs: Vec<C>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self::from_stream(Stream::finite(coeffs))
    }

    pub fn from_stream(s: Stream<C>) -> Self {
        Series {
            repr: Repr::Coeffs(s),
        }
    }

    /// Coefficient `k` is `f(k)`; `Ok(None)` ends the series (zero tail).
    pub fn generate(f: impl FnMut(usize) -> Result<Option<C>> + 'static) -> Self {
        Self::from_stream(Stream::generate_partial(f))
    }

    /// `x^m`: one, preceded by `m` zeros.
    pub fn monomial(m: usize) -> Self {
        let mut c = vec![C::zero(); m];
        c.push(C::one());
        Self::from_vec(c)
    }

    /// The identity series `x`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    /// `head + x·tail`, the tail built on demand.
    pub fn cons(head: C, tail: impl FnOnce() -> Series<C> + 'static) -> Self {
        Self::from_stream(Stream::cons(head, move || tail().into_stream()))
    }

    /// A series whose definition runs (fallibly) on first access.
    pub fn deferred(f: impl FnOnce() -> Result<Series<C>> + 'static) -> Self {
        Self::from_stream(Stream::deferred(move || Ok(f()?.into_stream())))
    }

    pub fn forward() -> (Self, SeriesKnot<C>) {
        let (s, k) = Stream::forward();
        (Self::from_stream(s), SeriesKnot(k))
    }

    /// Ties a self-referential series definition.
    pub fn fix(f: impl FnOnce(&Series<C>) -> Series<C>) -> Self {
        let (s, knot) = Self::forward();
        knot.bind(f(&s));
        s
    }

    /// True only for the compact zero representation.
    pub fn is_zero_tail(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// The coefficient stream; the zero series becomes an empty, ended stream.
    pub fn into_stream(self) -> Stream<C> {
        match self.repr {
            Repr::Zero => Stream::finite(Vec::new()),
            Repr::Coeffs(s) => s,
        }
    }

    fn get(&self, k: usize) -> Result<Option<C>> {
        match &self.repr {
            Repr::Zero => Ok(None),
            Repr::Coeffs(s) => s.get_opt(k),
        }
    }

    fn known_len(&self) -> Option<usize> {
        match &self.repr {
            Repr::Zero => Some(0),
            Repr::Coeffs(s) => s.known_len(),
        }
    }

    pub fn coeff(&self, k: usize) -> Result<C> {
        Ok(self.get(k)?.unwrap_or_else(C::zero))
    }

    pub fn head(&self) -> Result<C> {
        self.coeff(0)
    }

    /// The first `n` coefficients (zeros past the end of a polynomial).
    pub fn coeffs(&self, n: usize) -> Result<Vec<C>> {
        (0..n).map(|k| self.coeff(k)).collect()
    }

    /// `ū` in `u = u₀ + x·ū`.
    pub fn tail(&self) -> Self {
        match &self.repr {
            Repr::Zero => Self::zero(),
            Repr::Coeffs(s) => Self::from_stream(s.tail()),
        }
    }

    /// Coefficientwise map (`fmap`).
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D + 'static) -> Series<D> {
        match &self.repr {
            Repr::Zero => Series::zero(),
            Repr::Coeffs(s) => Series::from_stream(s.map(f)),
        }
    }

    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D> + 'static) -> Series<D> {
        match &self.repr {
            Repr::Zero => Series::zero(),
            Repr::Coeffs(s) => Series::from_stream(s.try_map(f)),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C + 'static) -> Self {
        let (u, v) = (self.clone(), other.clone());
        Self::generate(move |k| match (u.get(k)?, v.get(k)?) {
            (None, None) => Ok(None),
            (a, b) => Ok(Some(f(
                &a.unwrap_or_else(C::zero),
                &b.unwrap_or_else(C::zero),
            ))),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => other.clone(),
            (_, Repr::Zero) => self.clone(),
            _ => self.zip(other, C::plus),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => other.neg(),
            (_, Repr::Zero) => self.clone(),
            _ => self.zip(other, C::minus),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(C::negated)
    }

    /// `c *> u`
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let c = c.clone();
        self.map(move |x| c.times(x))
    }

    /// Cauchy product. Coefficient `k` reads coefficients `0..=k` of each
    /// operand and nothing beyond.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero_tail() || other.is_zero_tail() {
            return Self::zero();
        }
        let (u, v) = (self.clone(), other.clone());
        Self::generate(move |k| {
            if let (Some(a), Some(b)) = (u.known_len(), v.known_len()) {
                if a == 0 || b == 0 || k + 1 >= a + b {
                    return Ok(None);
                }
            }
            let mut acc = C::zero();
            for i in 0..=k {
                let Some(ui) = u.get(i)? else { break };
                if ui.is_zero() {
                    continue;
                }
                if let Some(vj) = v.get(k - i)? {
                    acc = acc.plus(&ui.times(&vj));
                }
            }
            Ok(Some(acc))
        })
    }

    /// `w = u / v`, from `u = w·v`: `w₀ = u₀/v₀`, `w̄ = (ū − w₀·v̄)/v`.
    /// Fails (when forced) if `v₀ = 0`; no cancellation of powers of `x`.
    pub fn div(&self, other: &Self) -> Self {
        if other.is_zero_tail() {
            return Self::generate(|_| Err(Error::LeadingZeroDivisor));
        }
        if self.is_zero_tail() {
            return Self::zero();
        }
        let (u, v) = (self.clone(), other.clone());
        let mut w: Vec<C> = Vec::new();
        let mut v0: Option<C> = None;
        Self::generate(move |k| {
            let v0 = match &v0 {
                Some(x) => x.clone(),
                None => {
                    let x = v.coeff(0)?;
                    if x.is_zero() {
                        return Err(Error::LeadingZeroDivisor);
                    }
                    v0 = Some(x.clone());
                    x
                }
            };
            let mut acc = u.coeff(k)?;
            for (i, wi) in w.iter().enumerate() {
                if wi.is_zero() {
                    continue;
                }
                if let Some(vj) = v.get(k - i)? {
                    acc = acc.minus(&wi.times(&vj));
                }
            }
            let wk = acc.try_div(&v0)?;
            w.push(wk.clone());
            Ok(Some(wk))
        })
    }

    /// Term-by-term derivative: coefficient `k` is `(k+1)·u_{k+1}`.
    pub fn diff(&self) -> Self {
        if self.is_zero_tail() {
            return Self::zero();
        }
        let u = self.clone();
        Self::generate(move |k| {
            Ok(u.get(k + 1)?
                .map(|c| C::from_i64(k as i64 + 1).times(&c)))
        })
    }

    /// Integral with constant term `c`: coefficient `k+1` is `u_k/(k+1)`.
    pub fn integrate(&self, c: C) -> Self {
        if self.is_zero_tail() && c.is_zero() {
            return Self::zero();
        }
        let u = self.clone();
        Self::cons(c, move || {
            u.clone()
                .try_map_indexed(|k, x| x.try_div(&C::from_i64(k as i64 + 1)))
        })
    }

    fn try_map_indexed(&self, f: impl Fn(usize, &C) -> Result<C> + 'static) -> Self {
        if self.is_zero_tail() {
            return Self::zero();
        }
        let u = self.clone();
        Self::generate(move |k| u.get(k)?.map(|x| f(k, &x)).transpose())
    }

    /// `u(v(x))` by the infinite Horner scheme `u₀ + v·(u₁ + v·(u₂ + …))`.
    /// Requires `v₀ = 0`.
    pub fn compose(&self, inner: &Self) -> Self {
        let (u, v) = (self.clone(), inner.clone());
        Self::deferred(move || {
            if !v.coeff(0)?.is_zero() {
                return Err(Error::CompositionHead);
            }
            Ok(horner(u, v.tail()))
        })
    }

    /// Functional inverse `t` of `v = x + v₂x² + …`, so that `v(t(z)) = z`.
    ///
    /// Written as `t = z·p`, `p = 1 − p²·(v₂ + v₃t + v₄t² + …)`, which is
    /// productive where the direct `t = z − v₂t² − …` is not.
    pub fn revert(&self) -> Self {
        let v = self.clone();
        Self::deferred(move || {
            if !v.coeff(0)?.is_zero() || !v.coeff(1)?.minus(&C::one()).is_zero() {
                return Err(Error::ReversionForm);
            }
            let vb = v.tail().tail();
            let (t, t_knot) = Series::forward();
            let (p, p_knot) = Series::forward();
            let (pp, tt) = (p.clone(), t.clone());
            p_knot.bind(Series::cons(C::one(), move || {
                pp.mul(&pp).mul(&vb.compose(&tt)).neg()
            }));
            t_knot.bind(Series::cons(C::zero(), move || p));
            Ok(t)
        })
    }

    /// Swaps the two levels of a series of series: coefficient `(i, j)` of
    /// the result is coefficient `(j, i)` of `m`. Lazy in both directions.
    pub fn transpose(m: &Series<Series<C>>) -> Series<Series<C>> {
        if m.is_zero_tail() {
            return Series::zero();
        }
        let m = m.clone();
        Series::generate(move |i| {
            let m = m.clone();
            Ok(Some(Series::generate(move |j| match m.get(j)? {
                None => Ok(None),
                Some(row) => row.coeff(i).map(Some),
            })))
        })
    }
}

impl<C: Coeff> Series<C> {
    fn head_checked(&self, op: &'static str) -> Result<C> {
        let u0 = self.coeff(0)?;
        if u0.is_zero() {
            return Err(Error::SingularHead { op });
        }
        Ok(u0)
    }
}

impl<C: Elementary> Series<C> {
    /// `w = ∫ w·u′`, `w₀ = exp u₀`.
    pub fn exp(&self) -> Self {
        let u = self.clone();
        Self::deferred(move || {
            let w0 = u.coeff(0)?.try_exp()?;
            let du = u.diff();
            Ok(Series::fix(|w| du.mul(w).integrate(w0)))
        })
    }

    /// `∫ u′/u`, constant term `log u₀`.
    pub fn ln(&self) -> Self {
        let u = self.clone();
        Self::deferred(move || {
            let w0 = u.coeff(0)?.try_ln()?;
            Ok(u.diff().div(&u).integrate(w0))
        })
    }

    fn sin_cos_pair(u: &Self) -> Result<(Self, Self)> {
        let u0 = u.coeff(0)?;
        let (s0, c0) = (u0.try_sin()?, u0.try_cos()?);
        let du = u.diff();
        let (s, s_knot) = Series::forward();
        let (c, c_knot) = Series::forward();
        s_knot.bind(c.mul(&du).integrate(s0));
        c_knot.bind(s.mul(&du).integrate(c0.negated()).neg());
        Ok((s, c))
    }

    /// Coupled with [`Series::cos`]: `S = ∫ C·u′`, `C = −∫ S·u′`.
    pub fn sin(&self) -> Self {
        let u = self.clone();
        Self::deferred(move || Ok(Self::sin_cos_pair(&u)?.0))
    }

    pub fn cos(&self) -> Self {
        let u = self.clone();
        Self::deferred(move || Ok(Self::sin_cos_pair(&u)?.1))
    }

    /// `w = √u₀ + ∫ u′/(2w)`. Requires `u₀ ≠ 0`.
    pub fn sqrt(&self) -> Self {
        let u = self.clone();
        Self::deferred(move || {
            let w0 = u.head_checked("sqrt")?.try_sqrt()?;
            let du = u.diff();
            Ok(Series::fix(|w| du.div(&w.scale(&C::from_i64(2))).integrate(w0)))
        })
    }

    /// `w = u₀^a + ∫ a·u′·w/u`. Requires `u₀ ≠ 0`.
    pub fn pow(&self, a: &C) -> Self {
        let (u, a) = (self.clone(), a.clone());
        Self::deferred(move || {
            let w0 = u.head_checked("pow")?.try_pow(&a)?;
            let du = u.diff().scale(&a);
            Ok(Series::fix(|w| du.mul(w).div(&u).integrate(w0)))
        })
    }
}

impl<C: Coeff + Display> Series<C> {
    /// Coefficients `0..n` as CSV with an `index,value` header.
    pub fn to_csv(&self, n: usize) -> Result<String> {
        let mut out = String::from("index,value\n");
        for (k, c) in self.coeffs(n)?.iter().enumerate() {
            let _ = writeln!(out, "{k},{c}");
        }
        Ok(out)
    }
}

fn horner<C: Coeff>(u: Series<C>, vbar: Series<C>) -> Series<C> {
    Series::deferred(move || {
        let Some(u0) = u.get(0)? else {
            return Ok(Series::zero());
        };
        let (ubar, vb) = (u.tail(), vbar.clone());
        Ok(Series::cons(u0, move || vb.mul(&horner(ubar, vbar))))
    })
}

impl<C: Coeff> Coeff for Series<C> {
    fn zero() -> Self {
        Series::zero()
    }
    fn one() -> Self {
        Series::constant(C::one())
    }
    fn from_i64(n: i64) -> Self {
        if n == 0 {
            Series::zero()
        } else {
            Series::constant(C::from_i64(n))
        }
    }
    fn is_zero(&self) -> bool {
        self.is_zero_tail()
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

macro_rules! series_op {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> std::ops::$tr for &Series<C> {
            type Output = Series<C>;
            fn $method(self, rhs: Self) -> Series<C> {
                Series::$method(self, rhs)
            }
        }
    };
}

series_op!(Add, add);
series_op!(Sub, sub);
series_op!(Mul, mul);
series_op!(Div, div);

impl<C: Coeff> std::ops::Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::neg(self)
    }
}
