//! Named showcase sequences: integers, Fibonacci numbers, the partition
//! generating function and the regular solution of a singular Bessel-type
//! equation.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::series::Series;
use crate::stream::Stream;

/// `ones = 1 : ones`
pub fn ones<T: Clone + One + 'static>() -> Stream<T> {
    Stream::fix(|s| {
        let s = s.clone();
        Stream::cons(T::one(), move || s)
    })
}

/// `integs = 1 : (integs + ones)`
pub fn integs<T: Clone + One + Add<Output = T> + 'static>() -> Stream<T> {
    let ones = ones::<T>();
    Stream::fix(|s| {
        let s = s.clone();
        Stream::cons(T::one(), move || &s + &ones)
    })
}

/// `fibs = 0 : ftail`, `ftail = 1 : (fibs + ftail)`
pub fn fibs<T: Clone + Zero + One + 'static>() -> Stream<T> {
    Stream::fix(|fibs| {
        let fibs = fibs.clone();
        Stream::cons(T::zero(), move || {
            Stream::fix(|ftail| {
                let ftail = ftail.clone();
                Stream::cons(T::one(), move || fibs.zip_with(&ftail, |a: &T, b: &T| a.clone() + b.clone()))
            })
        })
    })
}

/// Generating function of the partition numbers `p(n)`.
///
/// `Z = 1 + x·B₁` with the open family `B_m = 1 + x·(B_{m+1} + x^{m-1}·B_m)`.
/// Member `B_{m+1}` is only created once `B_m`'s tail is demanded, so
/// forcing `N` coefficients creates `O(N)` member series.
pub fn partitions() -> Series<Rational> {
    Series::cons(Rational::one(), || partition_member(1))
}

fn partition_member(m: usize) -> Series<Rational> {
    Series::fix(|p| {
        let p = p.clone();
        Series::cons(Rational::one(), move || {
            partition_member(m + 1).add(&Series::monomial(m - 1).mul(&p))
        })
    })
}

/// Regular solution of `x²w″ + w′ + w/4 = 0` with `w₀ = 1`, obtained by
/// integrating `w′ = −w/4 − x²w″` once.
pub fn bessel_series() -> Series<Rational> {
    let quarter = Rational::from_parts(-1, 4).expect("nonzero denominator");
    Series::fix(|w| {
        let w2 = w.diff().diff();
        let shifted = Series::cons(Rational::zero(), move || {
            Series::cons(Rational::zero(), move || w2)
        });
        w.scale(&quarter).sub(&shifted).integrate(Rational::one())
    })
}

/// Coefficient domain of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Exact,
    Float,
}

/// What a catalog producer hands back.
pub enum Produced {
    Integers(Stream<BigInt>),
    Exact(Series<Rational>),
    Float(Series<f64>),
}

impl Produced {
    /// The first `n` values in their text form (`p/q` for exact values,
    /// shortest round-trip decimal for floats).
    pub fn render(&self, n: usize) -> Result<Vec<String>> {
        Ok(match self {
            Produced::Integers(s) => s.take(n)?.iter().map(ToString::to_string).collect(),
            Produced::Exact(s) => s.coeffs(n)?.iter().map(ToString::to_string).collect(),
            Produced::Float(s) => s.coeffs(n)?.iter().map(ToString::to_string).collect(),
        })
    }
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub domain: Domain,
    pub summary: &'static str,
    pub producer: fn() -> Produced,
}

fn q_vec(v: &[i64]) -> Series<Rational> {
    Series::from_vec(v.iter().map(|&n| Rational::from(n)).collect())
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "integs",
        domain: Domain::Exact,
        summary: "1, 2, 3, ... as integs = 1 : (integs + ones)",
        producer: || Produced::Integers(integs()),
    },
    CatalogEntry {
        name: "fibs",
        domain: Domain::Exact,
        summary: "Fibonacci numbers from the self-referential zip",
        producer: || Produced::Integers(fibs()),
    },
    CatalogEntry {
        name: "partitions",
        domain: Domain::Exact,
        summary: "partition numbers p(n) from the open B_m family",
        producer: || Produced::Exact(partitions()),
    },
    CatalogEntry {
        name: "bessel",
        domain: Domain::Exact,
        summary: "regular solution of x^2 w'' + w' + w/4 = 0, w(0) = 1",
        producer: || Produced::Exact(bessel_series()),
    },
    CatalogEntry {
        name: "exp-demo",
        domain: Domain::Exact,
        summary: "exp of the series x",
        producer: || Produced::Exact(Series::x().exp()),
    },
    CatalogEntry {
        name: "revser-demo",
        domain: Domain::Exact,
        summary: "functional inverse of x + x^2",
        producer: || Produced::Exact(q_vec(&[0, 1, 1]).revert()),
    },
];

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Parameter(format!("unknown series {name:?}")))
}
