//! Closed-form decomposition of a curve's 2-torsion module, stratum
//! enumeration by pole-order multisets, and the cross-check that ties the
//! direct construction to the closed form.
//!
//! Every curve's module decomposes as r ordinary blocks plus one local
//! block G_{c} per branch with c >= 1, where r is one less than the number
//! of branch points. The stratum of a curve is its multiset of pole orders
//! d; strata of genus g correspond to partitions of g + 1 via d = 2p - 1.

use serde::Serialize;

use crate::curve::{CurveData, Invariants};
use crate::drham::build_drham;
use crate::field::FieldCtx;
use crate::gc::{gc, ordinary};
use crate::matrix::Mat;
use crate::semilin::SemilinearModule;

/// The isomorphism class of a curve's 2-torsion module: `r` ordinary
/// blocks and one G_c block per entry of `c_multiset` (entries >= 1,
/// descending).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub r: usize,
    pub c_multiset: Vec<usize>,
}

impl Decomposition {
    /// Genus accounted for by this decomposition.
    pub fn g(&self) -> usize {
        self.r + self.c_multiset.iter().sum::<usize>()
    }
}

/// Closed-form class of a curve from its invariants: r = #branches - 1,
/// one c = (d-1)/2 entry per branch with d > 1.
pub fn decompose(inv: &Invariants) -> Decomposition {
    let c_multiset: Vec<usize> = inv
        .d_multiset
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| (d - 1) / 2)
        .collect();
    Decomposition {
        r: inv.two_rank,
        c_multiset,
    }
}

/// Builds the block-diagonal module of a decomposition: r ordinary blocks
/// followed by the G_c blocks in multiset order.
pub fn closed_form_module(k: &FieldCtx, dec: &Decomposition) -> SemilinearModule {
    let ord = ordinary(k);
    let blocks: Vec<SemilinearModule> = dec.c_multiset.iter().map(|&c| gc(k, c)).collect();
    let mut parts: Vec<&SemilinearModule> = Vec::with_capacity(dec.r + blocks.len());
    parts.extend(std::iter::repeat_n(&ord, dec.r));
    parts.extend(blocks.iter());
    if parts.is_empty() {
        return SemilinearModule::new(*k, Mat::zero(0, 0), Mat::zero(0, 0))
            .expect("zero-dimensional module");
    }
    SemilinearModule::direct_sum(&parts).expect("blocks share the field context")
}

/// Outcome of cross-checking one curve: the direct module against the
/// closed form, plus the arithmetic invariant formulas.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub stratum: Vec<usize>,
    pub decomposition: Decomposition,
    pub g: usize,
    pub r: usize,
    pub a: usize,
    pub eo_type: Vec<usize>,
    pub verified: bool,
    pub failures: Vec<String>,
}

/// Runs every cross-check on one curve. A mismatch never panics: it is
/// reported as a failure line so callers can surface it.
pub fn verify_main(cd: &CurveData) -> VerifyReport {
    let k = cd.ctx();
    let inv = cd.invariants();
    let dec = decompose(&inv);
    let mut failures = Vec::new();

    let dr = build_drham(cd);
    let bt1 = dr.module.check_bt1();
    if !bt1.is_valid() {
        failures.push(format!("direct module fails structure checks: {:?}", bt1.failures));
    }

    let closed = closed_form_module(k, &dec);
    let eo_direct = dr.module.eo_type();
    let eo_closed = closed.eo_type();
    let mut eo_out = Vec::new();
    match (&eo_direct, &eo_closed) {
        (Ok(d), Ok(c)) => {
            if d != c {
                failures.push(format!(
                    "type mismatch: direct {:?} vs closed form {:?}",
                    d.as_slice(),
                    c.as_slice()
                ));
            }
            eo_out = d.as_slice().to_vec();
        }
        _ => failures.push("type computation failed on a module".into()),
    }

    match (dr.module.a_number(), closed.a_number()) {
        (Ok(ad), Ok(ac)) => {
            if ad != inv.a_number || ac != inv.a_number {
                failures.push(format!(
                    "a-number mismatch: direct {ad}, closed form {ac}, formula {}",
                    inv.a_number
                ));
            }
        }
        _ => failures.push("a-number computation failed".into()),
    }

    match (dr.module.p_rank(), closed.p_rank()) {
        (Ok(pd), Ok(pc)) => {
            if pd != inv.two_rank || pc != inv.two_rank {
                failures.push(format!(
                    "p-rank mismatch: direct {pd}, closed form {pc}, branch count gives {}",
                    inv.two_rank
                ));
            }
        }
        _ => failures.push("p-rank computation failed".into()),
    }

    VerifyReport {
        stratum: inv.d_multiset.clone(),
        decomposition: dec,
        g: inv.genus,
        r: inv.two_rank,
        a: inv.a_number,
        eo_type: eo_out,
        verified: failures.is_empty(),
        failures,
    }
}

/// One enumerated stratum: the pole-order multiset, its decomposition, and
/// the invariants of its (coefficient-independent) module class.
#[derive(Clone, Debug, Serialize)]
pub struct StratumInfo {
    pub d_multiset: Vec<usize>,
    pub decomposition: Decomposition,
    pub eo_type: Vec<usize>,
    pub a: usize,
    pub p_rank: usize,
}

/// All strata of genus g: pole-order multisets (odd entries, descending)
/// with sum of (d+1)/2 equal to g+1, listed in descending lexicographic
/// order, each with its module class computed over GF(2).
pub fn enumerate_strata(g: usize) -> Vec<StratumInfo> {
    assert!(g >= 1, "strata enumeration needs g >= 1");
    let k = FieldCtx::new(1).expect("GF(2)");
    let mut out = Vec::new();
    let mut parts = Vec::new();
    descend_partitions(g + 1, g + 1, &mut parts, &mut |p| {
        let d_multiset: Vec<usize> = p.iter().map(|&x| 2 * x - 1).collect();
        let r = d_multiset.len() - 1;
        let c_multiset: Vec<usize> = p.iter().filter(|&&x| x > 1).map(|&x| x - 1).collect();
        let dec = Decomposition { r, c_multiset };
        let module = closed_form_module(&k, &dec);
        out.push(StratumInfo {
            d_multiset,
            decomposition: dec,
            eo_type: module.eo_type().expect("even dimension").as_slice().to_vec(),
            a: module.a_number().expect("even dimension"),
            p_rank: module.p_rank().expect("even dimension"),
        });
    });
    out
}

/// Visits every partition of n with parts <= max, largest part first, in
/// descending lexicographic order.
fn descend_partitions(n: usize, max: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        visit(acc);
        return;
    }
    for part in (1..=n.min(max)).rev() {
        acc.push(part);
        descend_partitions(n - part, part, acc, visit);
        acc.pop();
    }
}

/// Number of integer partitions of n, by the pentagonal-number recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i64;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                total += sign * p[m - g2];
            }
            k += 1;
        }
        p[m] = total;
    }
    p[n] as u64
}

/// Whether a genus-g curve with p-rank r can have exactly the given G_c
/// factors: at most r + 1 of them, summing to g - r.
pub fn realizable(g: usize, r: usize, c_multiset: &[usize]) -> bool {
    if r > g {
        return false;
    }
    let positive: Vec<usize> = c_multiset.iter().copied().filter(|&c| c > 0).collect();
    positive.len() <= r + 1 && positive.iter().sum::<usize>() == g - r
}
