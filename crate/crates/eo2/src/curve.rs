//! Curves y^2 - y = f(x) over GF(2^n): reduction of f to standard form,
//! branch data, and numeric invariants.
//!
//! Substituting y -> y + eps changes f by eps^2 + eps without changing the
//! curve, so every even-exponent monomial c*u^(2m) (u a pole-local
//! coordinate or x itself) can be replaced by sqrt(c)*u^m. Iterating leaves
//! f as a sum of tails in x_alpha = 1/(x - alpha) with odd exponents only:
//! the standard form. The branch at alpha then carries the ramification
//! invariant d_alpha = 2*c_alpha + 1, the top odd exponent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldCtx, FieldError, Gf};
use crate::poly::{partial_fractions, Poly, PolyError, RationalFn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("f has a pole at infinity (reduced polynomial part of degree {degree}); enable the Moebius pre-pass or move the pole by hand")]
    PoleAtInfinity { degree: usize },
    #[error("f reduces to a constant: y^2 - y = f splits, there is no ramified cover")]
    Unramified,
    #[error("every element of GF(2^{n}) is a pole of f, leaving no Moebius center; enlarge the field")]
    NoMoebiusCenter { n: u32 },
    #[error("invalid curve data: {0}")]
    BadInput(String),
}

/// One branch point: the pole alpha and the standard-form tail coefficients
/// a_0..a_c of f_alpha = sum_i a_i * x_alpha^(2i+1), top coefficient
/// nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchDatum {
    pub alpha: Gf,
    pub coeffs: Vec<Gf>,
}

impl BranchDatum {
    /// c = (d-1)/2, the number of nonzero-index coefficients.
    pub fn c(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ramification invariant d = 2c + 1 (the pole order of the tail).
    pub fn d(&self) -> usize {
        2 * self.c() + 1
    }
}

/// A curve in standard form: the field and the branch data, with branches
/// sorted by pole bitmask. The first branch is the base one (ss blocks
/// elsewhere are indexed against it).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveData {
    ctx: FieldCtx,
    branches: Vec<BranchDatum>,
}

impl CurveData {
    pub fn new(ctx: FieldCtx, mut branches: Vec<BranchDatum>) -> Result<Self, CurveError> {
        if branches.is_empty() {
            return Err(CurveError::BadInput("no branch points".into()));
        }
        for b in &branches {
            ctx.element(b.alpha.0 as u32)?;
            if b.coeffs.is_empty() {
                return Err(CurveError::BadInput(format!(
                    "branch at {} has no coefficients",
                    b.alpha
                )));
            }
            if b.coeffs.last().unwrap().is_zero() {
                return Err(CurveError::BadInput(format!(
                    "branch at {} has zero top coefficient",
                    b.alpha
                )));
            }
            for &c in &b.coeffs {
                ctx.element(c.0 as u32)?;
            }
        }
        branches.sort_by_key(|b| b.alpha);
        if branches.windows(2).any(|w| w[0].alpha == w[1].alpha) {
            return Err(CurveError::BadInput("duplicate branch points".into()));
        }
        Ok(CurveData { ctx, branches })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn branches(&self) -> &[BranchDatum] {
        &self.branches
    }

    /// The standard-form rational function sum_b sum_i a_i/(x-alpha)^(2i+1).
    pub fn to_rational(&self) -> Result<RationalFn, CurveError> {
        let k = &self.ctx;
        let mut acc = RationalFn::zero();
        for b in &self.branches {
            for (i, &a) in b.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let term = RationalFn::new(
                    Poly::constant(a),
                    Poly::linear(b.alpha).pow(2 * i + 1, k),
                    k,
                )?;
                acc = acc.add(&term, k)?;
            }
        }
        Ok(acc)
    }

    pub fn invariants(&self) -> Invariants {
        let r = self.branches.len() - 1;
        let genus = r + self.branches.iter().map(|b| b.c()).sum::<usize>();
        let mut d_multiset: Vec<usize> = self.branches.iter().map(|b| b.d()).collect();
        d_multiset.sort_unstable_by(|a, b| b.cmp(a));
        let ones_mod4 = d_multiset.iter().filter(|&&d| d % 4 == 1).count();
        debug_assert!((genus + 1) % 2 == ones_mod4 % 2);
        let a_number = (genus + 1 - ones_mod4) / 2;
        Invariants {
            genus,
            two_rank: r,
            a_number,
            d_multiset,
        }
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            field: FieldParams {
                n: self.ctx.n(),
                modulus: Some(self.ctx.modulus()),
            },
            f: None,
            branches: Some(
                self.branches
                    .iter()
                    .map(|b| BranchParts {
                        alpha: b.alpha.0 as u32,
                        coeffs: b.coeffs.iter().map(|c| c.0 as u32).collect(),
                    })
                    .collect(),
            ),
        }
    }
}

/// Numeric invariants read off the branch data.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Invariants {
    pub genus: usize,
    /// The 2-rank r = #branches - 1.
    pub two_rank: usize,
    /// (g + 1 - #{d = 1 mod 4}) / 2.
    pub a_number: usize,
    /// Ramification invariants, descending.
    pub d_multiset: Vec<usize>,
}

/// Result of reducing f to standard form. The substitution record makes the
/// reduction checkable: with f' the input after the recorded Moebius change
/// of coordinate (if any), f' + epsilon + epsilon^2 = standard form +
/// constant.
#[derive(Clone, Debug)]
pub struct NormalizedCurve {
    pub curve: CurveData,
    /// beta such that x was replaced by beta + 1/x, when the pre-pass ran.
    pub moebius: Option<Gf>,
    /// Accumulated y-shift.
    pub epsilon: RationalFn,
    /// Additive constant dropped at the end.
    pub constant: Gf,
    /// The input after the Moebius substitution (equal to the input when
    /// none was needed).
    pub f_used: RationalFn,
}

/// Reduce f to standard form. With `moebius` enabled, a pole at infinity is
/// first moved to a finite point by x -> beta + 1/x, beta the smallest
/// element that is not a pole of f; disabled, such inputs are an error.
pub fn normalize(
    f: &RationalFn,
    k: &FieldCtx,
    moebius: bool,
) -> Result<NormalizedCurve, CurveError> {
    if f.is_constant() {
        return Err(CurveError::Unramified);
    }
    let (poly_part, tails) = partial_fractions(f, k)?;

    let (poly_odd, poly_eps, constant) = reduce_even_powers(poly_part.coeffs(), k);
    if poly_odd.iter().any(|c| !c.is_zero()) {
        if !moebius {
            let degree = poly_odd.iter().rposition(|c| !c.is_zero()).unwrap();
            return Err(CurveError::PoleAtInfinity { degree });
        }
        let beta = k
            .elements()
            .find(|&b| !f.den().eval(b, k).is_zero())
            .ok_or(CurveError::NoMoebiusCenter { n: k.n() })?;
        // x -> beta + 1/x maps every finite pole to a nonzero point and the
        // pole at infinity to 0; beta itself is not a pole, so no new pole
        // appears at infinity and one pass suffices.
        let center = RationalFn::new(Poly::from_coeffs(vec![Gf::ONE, beta]), Poly::x(), k)?;
        let moved = f.compose(&center, k)?;
        let mut out = normalize(&moved, k, false)?;
        out.moebius = Some(beta);
        return Ok(out);
    }

    let mut epsilon = RationalFn::from_poly(Poly::from_coeffs(poly_eps));
    let mut branches = Vec::new();
    for (alpha, bs) in &tails {
        // Tail exponents: index i holds the coefficient of x_alpha^(i+1).
        // Shift by one so the reducer sees true exponents.
        let mut exps = vec![Gf::ZERO; bs.len() + 1];
        exps[1..].copy_from_slice(bs);
        let (odd, eps_coeffs, dropped) = reduce_even_powers(&exps, k);
        debug_assert!(dropped.is_zero(), "tails have no constant term");
        for (e, &c) in eps_coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term =
                    RationalFn::new(Poly::constant(c), Poly::linear(*alpha).pow(e, k), k)?;
                epsilon = epsilon.add(&term, k)?;
            }
        }
        let Some(d) = odd.iter().rposition(|c| !c.is_zero()) else {
            continue; // the whole tail was a substitution artifact
        };
        debug_assert!(d % 2 == 1);
        let c = (d - 1) / 2;
        let coeffs: Vec<Gf> = (0..=c).map(|i| odd[2 * i + 1]).collect();
        branches.push(BranchDatum {
            alpha: *alpha,
            coeffs,
        });
    }
    if branches.is_empty() {
        return Err(CurveError::Unramified);
    }
    Ok(NormalizedCurve {
        curve: CurveData::new(*k, branches)?,
        moebius: None,
        epsilon,
        constant,
        f_used: f.clone(),
    })
}

/// Replace c*u^(2m) by sqrt(c)*u^m, largest exponent first, until only odd
/// exponents (and a constant) remain. Input is a coefficient vector indexed
/// by exponent; returns (odd-only vector, epsilon contributions indexed by
/// exponent, dropped constant).
fn reduce_even_powers(coeffs: &[Gf], k: &FieldCtx) -> (Vec<Gf>, Vec<Gf>, Gf) {
    let mut c = coeffs.to_vec();
    let mut eps = vec![Gf::ZERO; c.len()];
    let mut e = c.len().saturating_sub(1);
    while e >= 2 {
        if e.is_multiple_of(2) && !c[e].is_zero() {
            let s = k.sqrt(c[e]);
            c[e] = Gf::ZERO;
            c[e / 2] = k.add(c[e / 2], s);
            eps[e / 2] = k.add(eps[e / 2], s);
        }
        e -= 1;
    }
    let constant = if c.is_empty() { Gf::ZERO } else { c[0] };
    if !c.is_empty() {
        c[0] = Gf::ZERO;
    }
    (c, eps, constant)
}

/// Deterministically sample a curve with the given ramification invariants:
/// distinct poles, uniform coefficients, nonzero top coefficients.
pub fn random_curve(
    ctx: &FieldCtx,
    d_multiset: &[usize],
    seed: u64,
) -> Result<CurveData, CurveError> {
    if d_multiset.is_empty() {
        return Err(CurveError::BadInput("empty d-multiset".into()));
    }
    if d_multiset.iter().any(|&d| d % 2 == 0) {
        return Err(CurveError::BadInput(
            "ramification invariants must be odd".into(),
        ));
    }
    if d_multiset.len() > ctx.order() {
        return Err(CurveError::BadInput(format!(
            "{} branch points cannot be distinct in GF(2^{})",
            d_multiset.len(),
            ctx.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ctx.order() as u32;
    let mut alphas: Vec<Gf> = Vec::with_capacity(d_multiset.len());
    while alphas.len() < d_multiset.len() {
        let a = Gf(rng.gen_range(0..order) as u16);
        if !alphas.contains(&a) {
            alphas.push(a);
        }
    }
    let branches = d_multiset
        .iter()
        .zip(alphas)
        .map(|(&d, alpha)| {
            let c = (d - 1) / 2;
            let coeffs = (0..=c)
                .map(|i| {
                    if i == c {
                        Gf(rng.gen_range(1..order) as u16)
                    } else {
                        Gf(rng.gen_range(0..order) as u16)
                    }
                })
                .collect();
            BranchDatum { alpha, coeffs }
        })
        .collect();
    CurveData::new(*ctx, branches)
}

/// Field block of the curve file; a missing modulus means the default one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldParams {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
}

impl FieldParams {
    pub fn ctx(&self) -> Result<FieldCtx, FieldError> {
        match self.modulus {
            Some(m) => FieldCtx::with_modulus(self.n, m),
            None => FieldCtx::new(self.n),
        }
    }
}

/// Numerator/denominator coefficient lists, ascending, bitmask integers.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalParts {
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchParts {
    pub alpha: u32,
    pub coeffs: Vec<u32>,
}

/// Curve input file: the field plus exactly one of `f` (a rational function
/// to be reduced) or `branches` (already in standard form).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub field: FieldParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<RationalParts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchParts>>,
}

impl CurveFile {
    /// Interpret the file; `moebius` governs the pole-at-infinity pre-pass
    /// when `f` is given.
    pub fn load(&self, moebius: bool) -> Result<CurveData, CurveError> {
        let ctx = self.field.ctx()?;
        match (&self.f, &self.branches) {
            (Some(_), Some(_)) => Err(CurveError::BadInput(
                "give either f or branches, not both".into(),
            )),
            (None, None) => Err(CurveError::BadInput("give one of f or branches".into())),
            (Some(parts), None) => {
                let to_poly = |cs: &[u32]| -> Result<Poly, CurveError> {
                    let mut v = Vec::with_capacity(cs.len());
                    for &b in cs {
                        v.push(ctx.element(b)?);
                    }
                    Ok(Poly::from_coeffs(v))
                };
                let f = RationalFn::new(to_poly(&parts.num)?, to_poly(&parts.den)?, &ctx)?;
                Ok(normalize(&f, &ctx, moebius)?.curve)
            }
            (None, Some(branches)) => {
                let mut out = Vec::with_capacity(branches.len());
                for b in branches {
                    let alpha = ctx.element(b.alpha)?;
                    let mut coeffs = Vec::with_capacity(b.coeffs.len());
                    for &c in &b.coeffs {
                        coeffs.push(ctx.element(c)?);
                    }
                    out.push(BranchDatum { alpha, coeffs });
                }
                CurveData::new(ctx, out)
            }
        }
    }
}
