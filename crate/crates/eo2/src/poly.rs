//! Dense univariate polynomials and reduced rational functions over GF(2^n).
//!
//! Coefficients are stored ascending with no trailing zeros, so the zero
//! polynomial is the empty vector. Rational functions keep a monic
//! denominator coprime to the numerator. Root finding is exhaustive over
//! the field; partial fractions require the denominator to split.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("denominator does not split over GF(2^{n}): {unsplit} of {total} linear factors found; enlarge the field")]
    FieldTooSmall { n: u32, unsplit: usize, total: usize },
}

/// Polynomial over GF(2^n); index i holds the coefficient of x^i.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly(Vec<Gf>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Gf::ONE])
    }

    pub fn x() -> Self {
        Poly(vec![Gf::ZERO, Gf::ONE])
    }

    pub fn constant(c: Gf) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// c * x^k.
    pub fn monomial(c: Gf, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; k + 1];
        v[k] = c;
        Poly(v)
    }

    /// x - alpha (equivalently x + alpha in characteristic 2).
    pub fn linear(alpha: Gf) -> Self {
        Poly(vec![alpha, Gf::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Coefficient of x^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Gf {
        self.0.get(k).copied().unwrap_or(Gf::ZERO)
    }

    pub fn leading(&self) -> Gf {
        self.0.last().copied().unwrap_or(Gf::ZERO)
    }

    pub fn add(&self, other: &Poly, _k: &FieldCtx) -> Poly {
        let mut v = vec![Gf::ZERO; self.0.len().max(other.0.len())];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = Gf(self.coeff(i).0 ^ other.coeff(i).0);
        }
        Poly::from_coeffs(v)
    }

    /// Subtraction coincides with addition in characteristic 2.
    pub fn sub(&self, other: &Poly, k: &FieldCtx) -> Poly {
        self.add(other, k)
    }

    pub fn scale(&self, c: Gf, k: &FieldCtx) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, k: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                v[i + j] = k.add(v[i + j], k.mul(a, b));
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn pow(&self, mut e: usize, k: &FieldCtx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e != 0 {
            if e & 1 != 0 {
                acc = acc.mul(&base, k);
            }
            base = base.mul(&base, k);
            e >>= 1;
        }
        acc
    }

    /// Long division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &Poly, k: &FieldCtx) -> Result<(Poly, Poly), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = d.deg().unwrap();
        let lead_inv = k.inv(d.leading())?;
        let mut rem = self.0.clone();
        let mut quot = vec![Gf::ZERO; self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let c = k.mul(*rem.last().unwrap(), lead_inv);
            if !c.is_zero() {
                quot[shift] = c;
                for (i, &di) in d.0.iter().enumerate() {
                    rem[shift + i] = k.sub(rem[shift + i], k.mul(c, di));
                }
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            while rem.len() > dd && rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, k: &FieldCtx) -> Result<Poly, PolyError> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, k)?;
            a = b;
            b = r;
        }
        Ok(a.monic(k)?.0)
    }

    /// Scale to leading coefficient 1; returns (monic poly, old leading).
    pub fn monic(&self, k: &FieldCtx) -> Result<(Poly, Gf), PolyError> {
        if self.is_zero() {
            return Ok((Poly::zero(), Gf::ONE));
        }
        let lead = self.leading();
        Ok((self.scale(k.inv(lead)?, k), lead))
    }

    pub fn eval(&self, x: Gf, k: &FieldCtx) -> Gf {
        let mut acc = Gf::ZERO;
        for &c in self.0.iter().rev() {
            acc = k.add(k.mul(acc, x), c);
        }
        acc
    }

    /// Render with an ASCII variable name, for diagnostics.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = if c == Gf::ONE && i > 0 {
                String::new()
            } else {
                format!("{}", c.0)
            };
            let var_part = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let sep = if !coeff.is_empty() && !var_part.is_empty() {
                "*"
            } else {
                ""
            };
            parts.push(format!("{coeff}{sep}{var_part}"));
        }
        parts.join(" + ")
    }
}

/// All roots of p in the ctx field, with multiplicities, by exhaustive scan.
pub fn find_roots(p: &Poly, k: &FieldCtx) -> Result<Vec<(Gf, usize)>, PolyError> {
    if p.is_zero() {
        // Every element is a root of 0; callers never want that.
        return Err(PolyError::DivisionByZero);
    }
    let mut out = Vec::new();
    let mut cur = p.clone();
    for a in k.elements() {
        if cur.is_constant() {
            break;
        }
        let mut mult = 0usize;
        while cur.eval(a, k).is_zero() && !cur.is_constant() {
            let (q, r) = cur.divrem(&Poly::linear(a), k)?;
            debug_assert!(r.is_zero());
            cur = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((a, mult));
        }
    }
    Ok(out)
}

/// Rational function over GF(2^n): num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly, k: &FieldCtx) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let g = num.gcd(&den, k)?;
        let (num, den) = if g.deg() > Some(0) {
            (num.divrem(&g, k)?.0, den.divrem(&g, k)?.0)
        } else {
            (num, den)
        };
        let (den, lead) = den.monic(k)?;
        let num = num.scale(k.inv(lead)?, k);
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFn::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, other: &RationalFn, k: &FieldCtx) -> Result<RationalFn, PolyError> {
        RationalFn::new(
            self.num
                .mul(&other.den, k)
                .add(&other.num.mul(&self.den, k), k),
            self.den.mul(&other.den, k),
            k,
        )
    }

    pub fn mul(&self, other: &RationalFn, k: &FieldCtx) -> Result<RationalFn, PolyError> {
        RationalFn::new(
            self.num.mul(&other.num, k),
            self.den.mul(&other.den, k),
            k,
        )
    }

    pub fn pow(&self, mut e: usize, k: &FieldCtx) -> Result<RationalFn, PolyError> {
        let mut base = self.clone();
        let mut acc = RationalFn::from_poly(Poly::one());
        while e != 0 {
            if e & 1 != 0 {
                acc = acc.mul(&base, k)?;
            }
            base = base.mul(&base, k)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Substitute another rational function for the variable.
    pub fn compose(&self, inner: &RationalFn, k: &FieldCtx) -> Result<RationalFn, PolyError> {
        let eval_poly = |p: &Poly| -> Result<RationalFn, PolyError> {
            // Horner in rational arithmetic.
            let mut acc = RationalFn::zero();
            for &c in p.coeffs().iter().rev() {
                acc = acc.mul(inner, k)?;
                acc = acc.add(&RationalFn::from_poly(Poly::constant(c)), k)?;
            }
            Ok(acc)
        };
        let n = eval_poly(&self.num)?;
        let d = eval_poly(&self.den)?;
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        RationalFn::new(n.num.mul(&d.den, k), n.den.mul(&d.num, k), k)
    }
}

/// Partial-fraction decomposition f = poly_part + sum over poles alpha of
/// sum_i b[i-1] / (x - alpha)^i. The map is keyed by pole, each coefficient
/// vector is indexed by pole order minus one and has a nonzero last entry.
///
/// Fails with `FieldTooSmall` when the denominator has an irreducible factor
/// of degree > 1 over the ctx field.
pub fn partial_fractions(
    f: &RationalFn,
    k: &FieldCtx,
) -> Result<(Poly, BTreeMap<Gf, Vec<Gf>>), PolyError> {
    let (poly_part, rem) = f.num.divrem(&f.den, k)?;
    let den_deg = f.den.deg().unwrap_or(0);
    let roots = find_roots(&f.den, k)?;
    let split_deg: usize = roots.iter().map(|&(_, m)| m).sum();
    if split_deg != den_deg {
        return Err(PolyError::FieldTooSmall {
            n: k.n(),
            unsplit: den_deg - split_deg,
            total: den_deg,
        });
    }

    let mut tails: BTreeMap<Gf, Vec<Gf>> = BTreeMap::new();
    let mut cur_num = rem;
    let mut cur_den = f.den.clone();
    let mut remaining = roots;
    // Peel one pole order at a time: the top coefficient at a pole of order m
    // is cur_num(alpha) / (cur_den / (x-alpha)^m)(alpha); subtract and recurse
    // on a denominator one degree smaller. Exact, and avoids dividing by k!
    // (which vanishes in characteristic 2).
    while let Some((alpha, mult)) = remaining.pop() {
        let lin = Poly::linear(alpha);
        let mut m = mult;
        while m > 0 {
            let lin_pow = lin.pow(m, k);
            let cofactor = cur_den.divrem(&lin_pow, k)?.0;
            let b = k.div(cur_num.eval(alpha, k), cofactor.eval(alpha, k))?;
            if !b.is_zero() {
                let tail = tails.entry(alpha).or_default();
                if tail.len() < m {
                    tail.resize(m, Gf::ZERO);
                }
                tail[m - 1] = b;
            }
            // cur_num - b * cofactor is divisible by (x - alpha).
            let adjusted = cur_num.sub(&cofactor.scale(b, k), k);
            cur_num = adjusted.divrem(&lin, k)?.0;
            cur_den = cur_den.divrem(&lin, k)?.0;
            m -= 1;
        }
    }
    debug_assert!(cur_num.is_zero());
    tails.retain(|_, v| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        !v.is_empty()
    });
    Ok((poly_part, tails))
}

/// Rebuild a rational function from a partial-fraction decomposition.
pub fn recombine(
    poly_part: &Poly,
    tails: &BTreeMap<Gf, Vec<Gf>>,
    k: &FieldCtx,
) -> Result<RationalFn, PolyError> {
    let mut acc = RationalFn::from_poly(poly_part.clone());
    for (&alpha, bs) in tails {
        for (i, &b) in bs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let term = RationalFn::new(Poly::constant(b), Poly::linear(alpha).pow(i + 1, k), k)?;
            acc = acc.add(&term, k)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    fn poly(k: &FieldCtx, coeffs: &[u16]) -> Poly {
        let _ = k;
        Poly::from_coeffs(coeffs.iter().map(|&c| Gf(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let k = gf(4);
        let a = poly(&k, &[3, 0, 7, 1, 9]);
        let d = poly(&k, &[5, 2, 1]);
        let (q, r) = a.divrem(&d, &k).unwrap();
        assert!(r.deg() < d.deg());
        assert_eq!(q.mul(&d, &k).add(&r, &k), a);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let k = gf(3);
        let shared = poly(&k, &[2, 1]); // x + t
        let a = shared.mul(&poly(&k, &[1, 1, 1]), &k);
        let b = shared.mul(&poly(&k, &[3, 1]), &k);
        assert_eq!(a.gcd(&b, &k).unwrap(), shared);
    }

    #[test]
    fn roots_with_multiplicity() {
        let k = gf(2);
        // (x - 1)^2 (x - t) = x^3 + ...
        let p = Poly::linear(Gf(1))
            .pow(2, &k)
            .mul(&Poly::linear(Gf(2)), &k);
        let roots = find_roots(&p, &k).unwrap();
        assert_eq!(roots, vec![(Gf(1), 2), (Gf(2), 1)]);
    }

    #[test]
    fn simple_pole() {
        // 1/x -> no polynomial part, single tail at 0.
        let k = gf(1);
        let f = RationalFn::new(Poly::one(), Poly::x(), &k).unwrap();
        let (p, tails) = partial_fractions(&f, &k).unwrap();
        assert!(p.is_zero());
        assert_eq!(tails.len(), 1);
        assert_eq!(tails[&Gf::ZERO], vec![Gf::ONE]);
    }

    #[test]
    fn two_simple_poles_over_gf2() {
        // 1/(x(x+1)) = 1/x + 1/(x+1) in characteristic 2.
        let k = gf(1);
        let den = Poly::x().mul(&Poly::linear(Gf::ONE), &k);
        let f = RationalFn::new(Poly::one(), den, &k).unwrap();
        let (p, tails) = partial_fractions(&f, &k).unwrap();
        assert!(p.is_zero());
        assert_eq!(tails[&Gf::ZERO], vec![Gf::ONE]);
        assert_eq!(tails[&Gf::ONE], vec![Gf::ONE]);
    }

    #[test]
    fn polynomial_part_split_off() {
        // (x^3 + 1)/x = x^2 + 1/x.
        let k = gf(1);
        let f = RationalFn::new(poly(&k, &[1, 0, 0, 1]), Poly::x(), &k).unwrap();
        let (p, tails) = partial_fractions(&f, &k).unwrap();
        assert_eq!(p, poly(&k, &[0, 0, 1]));
        assert_eq!(tails[&Gf::ZERO], vec![Gf::ONE]);
    }

    #[test]
    fn unsplit_denominator_reports_field_too_small() {
        // x^2 + x + 1 is irreducible over GF(2).
        let k = gf(1);
        let f = RationalFn::new(Poly::one(), poly(&k, &[1, 1, 1]), &k).unwrap();
        match partial_fractions(&f, &k) {
            Err(PolyError::FieldTooSmall { n: 1, unsplit: 2, total: 2 }) => {}
            other => panic!("expected FieldTooSmall, got {other:?}"),
        }
        // The same denominator splits over GF(4).
        let k4 = gf(2);
        let f4 = RationalFn::new(Poly::one(), poly(&k4, &[1, 1, 1]), &k4).unwrap();
        let (_, tails) = partial_fractions(&f4, &k4).unwrap();
        assert_eq!(tails.len(), 2);
    }

    #[test]
    fn recombine_inverts_partial_fractions() {
        let k = gf(3);
        // Mixed poles and a polynomial part.
        let den = Poly::linear(Gf(2))
            .pow(3, &k)
            .mul(&Poly::linear(Gf(5)), &k)
            .mul(&Poly::x(), &k);
        let num = poly(&k, &[1, 3, 0, 2, 7, 1]);
        let f = RationalFn::new(num, den, &k).unwrap();
        let (p, tails) = partial_fractions(&f, &k).unwrap();
        assert_eq!(recombine(&p, &tails, &k).unwrap(), f);
    }

    #[test]
    fn compose_with_moebius() {
        // f = x^2 composed with 1/x gives 1/x^2.
        let k = gf(2);
        let f = RationalFn::from_poly(poly(&k, &[0, 0, 1]));
        let inv_x = RationalFn::new(Poly::one(), Poly::x(), &k).unwrap();
        let g = f.compose(&inv_x, &k).unwrap();
        assert_eq!(g.num(), &Poly::one());
        assert_eq!(g.den(), &poly(&k, &[0, 0, 1]));
    }

    #[test]
    fn rational_reduction_is_canonical() {
        let k = gf(2);
        // (2x)/(2x^2) reduces to 1/x with monic denominator.
        let f = RationalFn::new(poly(&k, &[0, 2]), poly(&k, &[0, 0, 2]), &k).unwrap();
        assert_eq!(f.num(), &Poly::one());
        assert_eq!(f.den(), &Poly::x());
    }
}
