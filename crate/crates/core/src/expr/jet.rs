//! Order-3 jets: value and first three derivatives, propagated exactly.
//!
//! Entries are raw derivatives f, f', f'', f''' (not Taylor coefficients), so
//! the product and chain rules carry binomial factors. Division is the
//! triangular solve of f = q*g truncated at order three; callers guard the
//! denominator before calling `div`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub f0: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Jet3 {
    pub fn constant(c: Complex64) -> Self {
        Jet3 { f0: c, f1: ZERO, f2: ZERO, f3: ZERO }
    }

    /// Jet of the identity evaluated at z.
    pub fn variable(z: Complex64) -> Self {
        Jet3 { f0: z, f1: Complex64::new(1.0, 0.0), f2: ZERO, f3: ZERO }
    }

    pub fn is_finite(&self) -> bool {
        let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        finite(self.f0) && finite(self.f1) && finite(self.f2) && finite(self.f3)
    }

    /// Quotient jet; the caller has already rejected small |rhs.f0|.
    pub fn div(self, g: Jet3) -> Jet3 {
        let q0 = self.f0 / g.f0;
        let q1 = (self.f1 - q0 * g.f1) / g.f0;
        let q2 = (self.f2 - 2.0 * q1 * g.f1 - q0 * g.f2) / g.f0;
        let q3 = (self.f3 - 3.0 * q2 * g.f1 - 3.0 * q1 * g.f2 - q0 * g.f3) / g.f0;
        Jet3 { f0: q0, f1: q1, f2: q2, f3: q3 }
    }

    /// exp(f): every derivative is exp(f0) times a Bell polynomial in f1..f3.
    pub fn exp(self) -> Jet3 {
        let e = self.f0.exp();
        Jet3 {
            f0: e,
            f1: e * self.f1,
            f2: e * (self.f1 * self.f1 + self.f2),
            f3: e * (self.f1 * self.f1 * self.f1 + 3.0 * self.f1 * self.f2 + self.f3),
        }
    }

    /// Principal branch log(f); the caller has already rejected arguments on
    /// or near the cut.
    pub fn log(self) -> Jet3 {
        let l1 = self.f1 / self.f0;
        let l2 = self.f2 / self.f0 - l1 * l1;
        let l3 = self.f3 / self.f0 - 3.0 * self.f1 * self.f2 / (self.f0 * self.f0)
            + 2.0 * l1 * l1 * l1;
        Jet3 { f0: self.f0.ln(), f1: l1, f2: l2, f3: l3 }
    }

    /// Integer power by repeated squaring. Negative exponents are handled by
    /// the caller (reciprocal of the positive power) so the division guard
    /// stays in one place.
    pub fn powi(self, n: u32) -> Jet3 {
        let mut acc = Jet3::constant(Complex64::new(1.0, 0.0));
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Faa di Bruno at order three: jet of outer(inner) from the jet of
    /// `outer` at inner.f0 and the jet of `inner` at the base point.
    pub fn chain(outer: Jet3, inner: Jet3) -> Jet3 {
        let g1 = inner.f1;
        let g2 = inner.f2;
        let g3 = inner.f3;
        Jet3 {
            f0: outer.f0,
            f1: outer.f1 * g1,
            f2: outer.f1 * g2 + outer.f2 * g1 * g1,
            f3: outer.f1 * g3 + 3.0 * outer.f2 * g1 * g2 + outer.f3 * g1 * g1 * g1,
        }
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        Jet3 {
            f0: self.f0 + rhs.f0,
            f1: self.f1 + rhs.f1,
            f2: self.f2 + rhs.f2,
            f3: self.f3 + rhs.f3,
        }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        Jet3 {
            f0: self.f0 - rhs.f0,
            f1: self.f1 - rhs.f1,
            f2: self.f2 - rhs.f2,
            f3: self.f3 - rhs.f3,
        }
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, g: Jet3) -> Jet3 {
        Jet3 {
            f0: self.f0 * g.f0,
            f1: self.f1 * g.f0 + self.f0 * g.f1,
            f2: self.f2 * g.f0 + 2.0 * self.f1 * g.f1 + self.f0 * g.f2,
            f3: self.f3 * g.f0 + 3.0 * self.f2 * g.f1 + 3.0 * self.f1 * g.f2 + self.f0 * g.f3,
        }
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3 { f0: -self.f0, f1: -self.f1, f2: -self.f2, f3: -self.f3 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn product_rule_matches_monomial() {
        // (z^2)' family via z*z at z = 2+i: f = z^2, f' = 2z, f'' = 2, f''' = 0.
        let z = c(2.0, 1.0);
        let j = Jet3::variable(z) * Jet3::variable(z);
        assert_eq!(j.f0, z * z);
        assert_eq!(j.f1, 2.0 * z);
        assert_eq!(j.f2, c(2.0, 0.0));
        assert_eq!(j.f3, ZERO);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Jet3 { f0: c(1.1, -0.3), f1: c(0.4, 2.0), f2: c(-1.0, 0.1), f3: c(0.2, 0.2) };
        let b = Jet3 { f0: c(0.8, 0.5), f1: c(-0.2, 0.9), f2: c(1.3, -0.4), f3: c(0.0, 1.0) };
        let q = (a * b).div(b);
        assert!(close(q.f0, a.f0, 1e-14));
        assert!(close(q.f1, a.f1, 1e-13));
        assert!(close(q.f2, a.f2, 1e-13));
        assert!(close(q.f3, a.f3, 1e-12));
    }

    #[test]
    fn exp_log_jets_match_closed_forms() {
        // exp at the identity jet: all four entries equal exp(z).
        let z = c(0.3, -0.2);
        let e = Jet3::variable(z).exp();
        let ez = z.exp();
        for v in [e.f0, e.f1, e.f2, e.f3] {
            assert!(close(v, ez, 1e-15));
        }
        // log z: derivatives 1/z, -1/z^2, 2/z^3.
        let l = Jet3::variable(z).log();
        assert!(close(l.f0, z.ln(), 1e-15));
        assert!(close(l.f1, 1.0 / z, 1e-14));
        assert!(close(l.f2, -1.0 / (z * z), 1e-14));
        assert!(close(l.f3, 2.0 / (z * z * z), 1e-13));
    }

    #[test]
    fn log_inverts_exp() {
        let j = Jet3 { f0: c(0.2, 0.4), f1: c(1.0, -0.5), f2: c(0.3, 0.3), f3: c(-0.1, 0.8) };
        let back = j.exp().log();
        assert!(close(back.f0, j.f0, 1e-14));
        assert!(close(back.f1, j.f1, 1e-13));
        assert!(close(back.f2, j.f2, 1e-13));
        assert!(close(back.f3, j.f3, 1e-12));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let j = Jet3 { f0: c(0.4, 0.1), f1: c(1.0, 0.0), f2: c(0.5, -0.5), f3: c(0.0, 0.2) };
        let by_mul = j * j * j * j * j;
        let by_pow = j.powi(5);
        assert!(close(by_pow.f0, by_mul.f0, 1e-14));
        assert!(close(by_pow.f3, by_mul.f3, 1e-12));
    }

    #[test]
    fn chain_rule_on_cubic_inside_exp() {
        // d^3/dz^3 exp(z^3) at z: exp(z^3) * (27 z^6 + 54 z^3 + 6) z^0 terms:
        // f' = 3z^2 e, f'' = (6z + 9z^4) e, f''' = (6 + 54 z^3 + 27 z^6) e.
        let z = c(0.5, 0.3);
        let inner = Jet3::variable(z).powi(3);
        let outer = Jet3::variable(inner.f0).exp();
        let j = Jet3::chain(outer, inner);
        let e = (z * z * z).exp();
        assert!(close(j.f1, 3.0 * z * z * e, 1e-13));
        assert!(close(j.f2, (6.0 * z + 9.0 * z.powu(4)) * e, 1e-13));
        assert!(close(j.f3, (6.0 + 54.0 * z.powu(3) + 27.0 * z.powu(6)) * e, 1e-12));
    }
}
