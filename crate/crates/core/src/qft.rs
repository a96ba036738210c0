//! Zero-dimensional field theory: the logarithmic Dyson-Schwinger equation
//! `φ = J + ½γ(φ′ + φ²)` solved as a series in the coupling `γ` whose
//! coefficients are polynomials in the source `J`.

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::series::Series;

/// γ-outer, J-inner.
pub type PhiSeries = Series<Series<Rational>>;

/// The unique solution with `φ|_{γ=0} = J`. Coefficient `k+1` reads
/// coefficients up to `k` only.
pub fn dyson_schwinger() -> PhiSeries {
    let half = Series::constant(Rational::from_parts(1, 2).expect("nonzero denominator"));
    Series::fix(|phi| {
        let phi = phi.clone();
        Series::cons(Series::x(), move || {
            phi.map(Series::diff).add(&phi.mul(&phi)).scale(&half)
        })
    })
}

/// The `n`-point function: row `n−1` of the transposed solution, i.e. the
/// γ-series of the `J^{n−1}` coefficients. No factorial normalization.
pub fn greens(n: usize) -> Result<Series<Rational>> {
    if n < 2 {
        return Err(Error::Parameter(format!("greens needs n >= 2, got {n}")));
    }
    Series::transpose(&dyson_schwinger()).coeff(n - 1)
}

/// Coefficients `0..=order` of [`greens`].
pub fn greens_coeffs(n: usize, order: usize) -> Result<Vec<Rational>> {
    greens(n)?.coeffs(order + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    pub max_order: usize,
    /// `(k, a, value)` for every nonzero coefficient of `γ^k J^a` with
    /// `k + a` even.
    pub violations: Vec<(usize, usize, Rational)>,
}

impl ParityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `γ^k J^a` appears only with `k + a` odd, for `k ≤ max_order`.
/// Inner polynomials of order `k` have degree at most `k+1`; one extra
/// entry is inspected past that.
pub fn parity_check(max_order: usize) -> Result<ParityReport> {
    let phi = dyson_schwinger();
    let mut violations = Vec::new();
    for (k, row) in phi.coeffs(max_order + 1)?.iter().enumerate() {
        for (a, c) in row.coeffs(k + 3)?.into_iter().enumerate() {
            if (k + a) % 2 == 0 && !c.is_zero() {
                violations.push((k, a, c));
            }
        }
    }
    Ok(ParityReport {
        max_order,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn first_orders() {
        let phi = dyson_schwinger();
        assert_eq!(phi.coeff(0).unwrap().coeffs(3).unwrap(), qs(&["0", "1", "0"]));
        assert_eq!(phi.coeff(1).unwrap().coeffs(4).unwrap(), qs(&["1/2", "0", "1/2", "0"]));
        assert_eq!(phi.coeff(2).unwrap().coeffs(5).unwrap(), qs(&["0", "1", "0", "1/2", "0"]));
    }

    #[test]
    fn two_and_four_point() {
        let g2 = greens_coeffs(2, 12).unwrap();
        let even = qs(&["1", "1", "25/8", "15", "12155/128", "11865/16", "7040125/1024"]);
        for (k, c) in g2.iter().enumerate() {
            if k % 2 == 0 {
                assert_eq!(c, &even[k / 2], "γ^{k}");
            } else {
                assert!(c.is_zero());
            }
        }
        let g4 = greens_coeffs(4, 8).unwrap();
        assert_eq!(
            [g4[2].clone(), g4[4].clone(), g4[6].clone(), g4[8].clone()].to_vec(),
            qs(&["1/2", "4", "525/16", "300"])
        );
    }

    #[test]
    fn transpose_matches_direct_lookup() {
        let phi = dyson_schwinger();
        for n in 2..=6 {
            let g = greens_coeffs(n, 12).unwrap();
            for (k, c) in g.iter().enumerate() {
                assert_eq!(c, &phi.coeff(k).unwrap().coeff(n - 1).unwrap());
            }
        }
    }

    #[test]
    fn parity_and_degree() {
        assert!(parity_check(12).unwrap().holds());
        for c in greens_coeffs(3, 12).unwrap().iter().step_by(2) {
            assert!(c.is_zero());
        }
        let phi = dyson_schwinger();
        for k in 0..=12 {
            let row = phi.coeff(k).unwrap().coeffs(k + 4).unwrap();
            assert!(!row[k + 1].is_zero());
            assert!(row[k + 2..].iter().all(Coeff::is_zero));
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(greens(1), Err(Error::Parameter(_))));
    }
}
